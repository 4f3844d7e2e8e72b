#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "elgot/elgot_algebra.hpp"

namespace elgot {

/// The four algebra kinds expressible in algebra files.
using LoadedAlgebra = std::variant<UnaryAlgebra, KleeneAlgebra, BanachAlgebra, JoinAlgebra>;

// Algebra file format (line-based, # comments):
//   carrier a b c
//   table mul(a,b) = c          one line per cell; arity inferred
//   order a <= b                generators; closure is taken, antisymmetry checked
//   bottom a
//   join a b = c
//   unary fixpoint a0
//   metric epsilon 1/2 tolerance 1e-9
//   fn avg4 (x+y)/4             affine catalog; formal arguments in order of
//                               first occurrence
//
// The dagger kind is inferred: metric lines give the contraction solver; a
// unary fixpoint (or a single unary table with no order) gives the closed
// form; join lines give join-of-leaves; an order gives least solutions.
LoadedAlgebra parse_algebra(std::istream& in, const std::string& filename = "<input>");
LoadedAlgebra parse_algebra_file(const std::string& path);

std::string variant_name(const LoadedAlgebra& alg);
const Signature& algebra_signature(const LoadedAlgebra& alg);

} // namespace elgot
