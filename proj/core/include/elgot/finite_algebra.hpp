#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elgot/flat_system.hpp"
#include "elgot/signature.hpp"

namespace elgot {

using Element = std::string;
using OpTable = std::map<std::vector<Element>, Element>;

/// Finite carrier with operation tables and optional order/join structure.
/// Everything is validated by `check()`: tables total and closed, the order a
/// genuine partial order with least element, joins a semilattice with unit.
struct FiniteAlgebra {
    Signature sig;
    std::vector<Element> carrier; // canonical order
    std::map<OpSymbol, OpTable> tables;

    // optional order; stored as its reflexive-transitive closure
    std::set<std::pair<Element, Element>> order;
    std::optional<Element> bottom;

    // optional binary join table (symmetric, total when present)
    std::map<std::pair<Element, Element>, Element> joins;

    std::optional<Element> unary_fixpoint;

    bool has_element(const Element& a) const;
    std::size_t element_index(const Element& a) const;

    const Element& apply(const OpSymbol& op, const std::vector<Element>& args) const;

    bool has_order() const { return !order.empty(); }
    bool leq(const Element& a, const Element& b) const { return order.count({a, b}) != 0; }

    bool has_joins() const { return !joins.empty(); }
    const Element& join(const Element& a, const Element& b) const;

    /// Replaces the stored order by the reflexive-transitive closure of the
    /// given pairs; antisymmetry and the bottom element are verified by check().
    void set_order_generators(const std::vector<std::pair<Element, Element>>& pairs);

    /// Derives the semilattice order a <= b iff a v b = b from the join table.
    void order_from_joins();

    /// Fills every operation's table with "join of the arguments".
    void tables_from_joins();

    /// Raises InvalidAlgebra on the first violated invariant.
    void check() const;

    /// Verifies that every operation table is monotone in every argument
    /// (needed before least solutions are meaningful). Raises on violation.
    void check_monotone_tables() const;
};

/// Enumerates all argument tuples of the given arity over the carrier, in
/// lexicographic order of element indices.
std::vector<std::vector<Element>> all_tuples(const std::vector<Element>& carrier, std::size_t arity);

} // namespace elgot
