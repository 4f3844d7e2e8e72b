#pragma once

#include <boost/rational.hpp>
#include <map>
#include <string>
#include <vector>

#include "elgot/diagnostics.hpp"
#include "elgot/signature.hpp"

namespace elgot {

using Rational = boost::rational<long long>;

/// Affine real function c0 + sum(ci * xi) with exact rational coefficients.
/// The formal arguments are the distinct variables in order of first
/// occurrence in the defining expression.
struct Affine {
    std::vector<std::string> args;
    std::vector<Rational> coeffs; // parallel to args
    Rational constant{0};

    std::size_t arity() const { return args.size(); }
    double eval(const std::vector<double>& values) const;

    /// Lipschitz constant w.r.t. the maximum metric: sum of |coefficients|.
    Rational lipschitz() const;

    /// Exact range over the unit cube [0,1]^n.
    Rational min_on_unit_cube() const;
    Rational max_on_unit_cube() const;
};

/// Parses "(x+y)/4", "x/2 + 1/4", "3*x - 1/2", ... Numbers are integers,
/// finite decimals or fractions; the result must be affine in the variables.
Affine parse_affine(const std::string& expr, const std::string& where);

/// Parses a rational scalar ("1/2", "0.5", "1"); raises if not constant.
Rational parse_rational(const std::string& text, const std::string& where);

/// Real carrier [0,1] with every operation drawn from the affine catalog and
/// contracting by the factor epsilon under the maximum metric. Checked
/// exactly at load time via the coefficients.
struct MetricAlgebra {
    Signature sig; // derived from the operations
    std::map<OpSymbol, Affine> ops;
    Rational epsilon{1, 2};
    double tolerance = 1e-9;

    double apply(const OpSymbol& op, const std::vector<double>& values) const;

    /// Raises InvalidAlgebra unless epsilon < 1, every operation has Lipschitz
    /// constant <= epsilon and maps the unit cube into [0,1].
    void check() const;
};

} // namespace elgot
