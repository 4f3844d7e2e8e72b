#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "elgot/flat_system.hpp"
#include "elgot/rational.hpp"
#include "elgot/term.hpp"

namespace elgot {

// Line-based system format:
//   sig NAME ARITY
//   var x = NAME(x1,...,xn)
//   var x = param IDENT
//   # comment
// Whitespace between tokens is insignificant. Serialization is byte-stable:
// operations and variables come back in declaration order.

FlatSystem<std::string> parse_system(std::istream& in, const std::string& filename = "<input>");
FlatSystem<std::string> parse_system_file(const std::string& path);
std::string serialize_system(const FlatSystem<std::string>& sys);

// Tree format: a system file followed by one "root x" line.
RationalTree<std::string> parse_tree(std::istream& in, const std::string& filename = "<input>");
RationalTree<std::string> parse_tree_file(const std::string& path);
std::string serialize_tree(const RationalTree<std::string>& tree);

// Term format:
//   sig NAME ARITY
//   term x = NAME(..., @p, y, ...)
// where @IDENT is a parameter and a bare identifier refers to a term variable.
struct TermFile {
    Signature sig;
    std::vector<std::pair<VarId, Term>> defs;
};

TermFile parse_terms(std::istream& in, const std::string& filename = "<input>");
TermFile parse_terms_file(const std::string& path);

// Truncations print as nested s-expressions: leaves bare, cut as "^",
// operation nodes as "(op child...)".
std::string serialize_truncation(const TreeTruncation<std::string>& t);

} // namespace elgot
