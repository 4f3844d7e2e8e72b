#include "elgot/metric_algebra.hpp"

#include <cctype>
#include <cstdlib>

namespace elgot {

double Affine::eval(const std::vector<double>& values) const {
    if (values.size() != args.size())
        raise(Errc::ArityMismatch, "", "affine function applied to the wrong number of arguments");
    double acc = boost::rational_cast<double>(constant);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc += boost::rational_cast<double>(coeffs[i]) * values[i];
    return acc;
}

Rational Affine::lipschitz() const {
    Rational acc{0};
    for (const auto& c : coeffs) acc += boost::abs(c);
    return acc;
}

Rational Affine::min_on_unit_cube() const {
    Rational acc = constant;
    for (const auto& c : coeffs)
        if (c < Rational{0}) acc += c;
    return acc;
}

Rational Affine::max_on_unit_cube() const {
    Rational acc = constant;
    for (const auto& c : coeffs)
        if (c > Rational{0}) acc += c;
    return acc;
}

namespace {

// Parsed value: an affine form over variables seen so far.
struct AffineParser {
    std::string_view text;
    std::size_t pos = 0;
    std::string where;
    std::vector<std::string> args; // first-occurrence order
    std::map<std::string, std::size_t> arg_index;

    struct Value {
        std::map<std::size_t, Rational> coeffs;
        Rational constant{0};
        bool is_constant() const { return coeffs.empty(); }
    };

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { raise(Errc::ParseError, where, msg); }

    Value parse_expr() {
        Value v = parse_term();
        for (;;) {
            if (accept('+')) {
                Value rhs = parse_term();
                v.constant += rhs.constant;
                for (auto& [i, c] : rhs.coeffs) v.coeffs[i] += c;
            } else if (accept('-')) {
                Value rhs = parse_term();
                v.constant -= rhs.constant;
                for (auto& [i, c] : rhs.coeffs) v.coeffs[i] -= c;
            } else {
                break;
            }
            normalize(v);
        }
        return v;
    }

    Value parse_term() {
        Value v = parse_factor();
        for (;;) {
            if (accept('*')) {
                Value rhs = parse_factor();
                if (v.is_constant()) {
                    Rational k = v.constant;
                    v = rhs;
                    scale(v, k);
                } else if (rhs.is_constant()) {
                    scale(v, rhs.constant);
                } else {
                    fail("product of two non-constant expressions is not affine");
                }
            } else if (accept('/')) {
                Value rhs = parse_factor();
                if (!rhs.is_constant()) fail("division by a non-constant expression");
                if (rhs.constant == Rational{0}) fail("division by zero");
                scale(v, Rational{1} / rhs.constant);
            } else {
                break;
            }
            normalize(v);
        }
        return v;
    }

    Value parse_factor() {
        skip_ws();
        if (accept('-')) {
            Value v = parse_factor();
            scale(v, Rational{-1});
            return v;
        }
        if (accept('(')) {
            Value v = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            return number();
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            std::size_t start = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_'))
                ++pos;
            std::string name(text.substr(start, pos - start));
            auto [it, fresh] = arg_index.try_emplace(name, args.size());
            if (fresh) args.push_back(name);
            Value v;
            v.coeffs[it->second] = Rational{1};
            return v;
        }
        fail("expected a number, a variable or '('");
    }

    Value number() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        long long integral = 0;
        if (pos > start) integral = std::strtoll(std::string(text.substr(start, pos - start)).c_str(), nullptr, 10);
        Rational r{integral};
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t fstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == fstart && pos == start + 1) fail("malformed number");
            long long den = 1;
            for (std::size_t i = fstart; i < pos; ++i) {
                if (den > 1000000000000000LL) fail("decimal literal too long");
                den *= 10;
                r = r + Rational{text[i] - '0', den}; // digit / 10^(i-fstart+1)
            }
        }
        Value v;
        v.constant = r;
        return v;
    }

    static void scale(Value& v, const Rational& k) {
        v.constant *= k;
        for (auto& [i, c] : v.coeffs) c *= k;
        normalize(v);
    }

    static void normalize(Value& v) {
        for (auto it = v.coeffs.begin(); it != v.coeffs.end();)
            it = it->second == Rational{0} ? v.coeffs.erase(it) : std::next(it);
    }

    Affine finish(Value v) {
        skip_ws();
        if (pos != text.size()) fail("trailing input after expression");
        Affine out;
        out.args = args;
        out.coeffs.assign(args.size(), Rational{0});
        for (const auto& [i, c] : v.coeffs) out.coeffs[i] = c;
        out.constant = v.constant;
        return out;
    }
};

} // namespace

Affine parse_affine(const std::string& expr, const std::string& where) {
    AffineParser p{expr, 0, where, {}, {}};
    return p.finish(p.parse_expr());
}

Rational parse_rational(const std::string& text, const std::string& where) {
    Affine a = parse_affine(text, where);
    if (a.arity() != 0) raise(Errc::ParseError, where, "expected a constant");
    return a.constant;
}

double MetricAlgebra::apply(const OpSymbol& op, const std::vector<double>& values) const {
    auto it = ops.find(op);
    if (it == ops.end()) raise(Errc::UnknownOp, op, "no function for operation");
    return it->second.eval(values);
}

void MetricAlgebra::check() const {
    if (epsilon < Rational{0} || epsilon >= Rational{1})
        raise(Errc::InvalidAlgebra, "", "contraction factor must satisfy 0 <= epsilon < 1");
    if (!(tolerance > 0)) raise(Errc::InvalidAlgebra, "", "tolerance must be positive");
    for (const auto& [op, fn] : ops) {
        if (fn.lipschitz() > epsilon)
            raise(Errc::InvalidAlgebra, op,
                  "operation is not contracting with the declared factor");
        if (fn.min_on_unit_cube() < Rational{0} || fn.max_on_unit_cube() > Rational{1})
            raise(Errc::InvalidAlgebra, op, "operation leaves the carrier [0,1]");
        auto ar = sig.arity(op);
        if (!ar || *ar != fn.arity())
            raise(Errc::InvalidAlgebra, op, "signature and function arity disagree");
    }
    for (const auto& [op, arity] : sig.ops())
        if (!ops.count(op)) raise(Errc::InvalidAlgebra, op, "no function for operation");
}

} // namespace elgot
