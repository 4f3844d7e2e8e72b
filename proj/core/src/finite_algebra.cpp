#include "elgot/finite_algebra.hpp"

#include <algorithm>

namespace elgot {

bool FiniteAlgebra::has_element(const Element& a) const {
    return std::find(carrier.begin(), carrier.end(), a) != carrier.end();
}

std::size_t FiniteAlgebra::element_index(const Element& a) const {
    auto it = std::find(carrier.begin(), carrier.end(), a);
    if (it == carrier.end()) raise(Errc::InvalidAlgebra, a, "not a carrier element");
    return static_cast<std::size_t>(it - carrier.begin());
}

const Element& FiniteAlgebra::apply(const OpSymbol& op, const std::vector<Element>& args) const {
    auto t = tables.find(op);
    if (t == tables.end()) raise(Errc::UnknownOp, op, "no table for operation");
    auto cell = t->second.find(args);
    if (cell == t->second.end()) raise(Errc::InvalidAlgebra, op, "table not total on the given arguments");
    return cell->second;
}

const Element& FiniteAlgebra::join(const Element& a, const Element& b) const {
    auto it = joins.find({a, b});
    if (it == joins.end()) it = joins.find({b, a});
    if (it == joins.end()) raise(Errc::InvalidAlgebra, a + " v " + b, "join table not total");
    return it->second;
}

void FiniteAlgebra::set_order_generators(const std::vector<std::pair<Element, Element>>& pairs) {
    order.clear();
    for (const auto& a : carrier) order.emplace(a, a);
    for (const auto& p : pairs) order.insert(p);
    // transitive closure (carriers are tiny)
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& ab : order)
            for (const auto& cd : order)
                if (ab.second == cd.first && !order.count({ab.first, cd.second})) {
                    order.emplace(ab.first, cd.second);
                    changed = true;
                }
    }
}

void FiniteAlgebra::order_from_joins() {
    std::vector<std::pair<Element, Element>> pairs;
    for (const auto& a : carrier)
        for (const auto& b : carrier)
            if (join(a, b) == b) pairs.emplace_back(a, b);
    set_order_generators(pairs);
}

void FiniteAlgebra::tables_from_joins() {
    if (!bottom) raise(Errc::InvalidAlgebra, "", "joins require a designated bottom element");
    for (const auto& [op, arity] : sig.ops()) {
        OpTable table;
        for (auto& tuple : all_tuples(carrier, arity)) {
            Element acc = *bottom;
            for (const auto& a : tuple) acc = join(acc, a);
            table.emplace(std::move(tuple), std::move(acc));
        }
        tables[op] = std::move(table);
    }
}

void FiniteAlgebra::check() const {
    if (carrier.empty()) raise(Errc::InvalidAlgebra, "", "carrier is empty");
    {
        std::set<Element> seen;
        for (const auto& a : carrier)
            if (!seen.insert(a).second) raise(Errc::InvalidAlgebra, a, "carrier element listed twice");
    }

    for (const auto& [op, arity] : sig.ops()) {
        auto t = tables.find(op);
        if (t == tables.end()) raise(Errc::InvalidAlgebra, op, "no table for operation");
        auto tuples = all_tuples(carrier, arity);
        if (t->second.size() != tuples.size())
            raise(Errc::InvalidAlgebra, op, "table does not match the carrier and arity");
        for (const auto& tuple : tuples) {
            auto cell = t->second.find(tuple);
            if (cell == t->second.end()) raise(Errc::InvalidAlgebra, op, "table not total");
            if (!has_element(cell->second))
                raise(Errc::InvalidAlgebra, op, "table output '" + cell->second + "' not in carrier");
        }
    }
    for (const auto& [op, table] : tables) {
        if (!sig.has(op)) raise(Errc::InvalidAlgebra, op, "table for an operation not in the signature");
        (void)table;
    }

    if (has_order()) {
        if (!bottom) raise(Errc::InvalidAlgebra, "", "order requires a designated bottom element");
        if (!has_element(*bottom)) raise(Errc::InvalidAlgebra, *bottom, "bottom not in carrier");
        for (const auto& [a, b] : order) {
            if (!has_element(a) || !has_element(b))
                raise(Errc::InvalidAlgebra, a + " <= " + b, "order mentions a non-carrier element");
            if (a != b && order.count({b, a}))
                raise(Errc::InvalidAlgebra, a + " <= " + b, "order is not antisymmetric");
        }
        for (const auto& a : carrier)
            if (!leq(*bottom, a))
                raise(Errc::InvalidAlgebra, *bottom, "bottom is not below '" + a + "'");
    }

    if (has_joins()) {
        if (!bottom) raise(Errc::InvalidAlgebra, "", "joins require a designated bottom element");
        for (const auto& a : carrier)
            for (const auto& b : carrier) {
                const auto& j = join(a, b); // totality
                if (!has_element(j))
                    raise(Errc::InvalidAlgebra, a + " v " + b, "join output not in carrier");
                if (join(b, a) != j)
                    raise(Errc::InvalidAlgebra, a + " v " + b, "join is not commutative");
            }
        for (const auto& a : carrier) {
            if (join(a, a) != a) raise(Errc::InvalidAlgebra, a, "join is not idempotent");
            if (join(*bottom, a) != a)
                raise(Errc::InvalidAlgebra, a, "bottom is not a unit for join");
        }
        for (const auto& a : carrier)
            for (const auto& b : carrier)
                for (const auto& c : carrier)
                    if (join(join(a, b), c) != join(a, join(b, c)))
                        raise(Errc::InvalidAlgebra, a + " v " + b + " v " + c, "join is not associative");
    }

    if (unary_fixpoint) {
        if (!has_element(*unary_fixpoint))
            raise(Errc::InvalidAlgebra, *unary_fixpoint, "fixpoint not in carrier");
        if (sig.size() != 1 || sig.ops()[0].second != 1)
            raise(Errc::InvalidAlgebra, "", "a fixpoint needs exactly one unary operation");
        const auto& op = sig.ops()[0].first;
        if (apply(op, {*unary_fixpoint}) != *unary_fixpoint)
            raise(Errc::InvalidAlgebra, *unary_fixpoint, "declared fixpoint is not fixed by the operation");
    }
}

void FiniteAlgebra::check_monotone_tables() const {
    if (!has_order()) raise(Errc::InvalidAlgebra, "", "monotonicity needs an order");
    for (const auto& [op, arity] : sig.ops()) {
        auto tuples = all_tuples(carrier, arity);
        for (const auto& t : tuples)
            for (std::size_t i = 0; i < arity; ++i)
                for (const auto& b : carrier) {
                    if (!leq(t[i], b)) continue;
                    auto raised = t;
                    raised[i] = b;
                    if (!leq(apply(op, t), apply(op, raised)))
                        raise(Errc::InvalidAlgebra, op, "table is not monotone w.r.t. the order");
                }
    }
}

std::vector<std::vector<Element>> all_tuples(const std::vector<Element>& carrier, std::size_t arity) {
    std::vector<std::vector<Element>> out{{}};
    for (std::size_t i = 0; i < arity; ++i) {
        std::vector<std::vector<Element>> next;
        next.reserve(out.size() * carrier.size());
        for (const auto& prefix : out)
            for (const auto& a : carrier) {
                auto t = prefix;
                t.push_back(a);
                next.push_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

} // namespace elgot
