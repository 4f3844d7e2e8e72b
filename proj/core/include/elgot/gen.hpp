#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "elgot/elgot_algebra.hpp"
#include "elgot/flat_system.hpp"
#include "elgot/rng.hpp"

namespace elgot {

// Random instances for the law suites. Sizes follow the desk-scale defaults:
// systems of up to 8 variables over carriers of up to 6 elements with at most
// 3 operations of arity at most 3.

struct GenLimits {
    std::size_t max_vars = 8;
    std::size_t max_ops = 3;
    std::size_t max_arity = 3;
    std::size_t max_carrier = 6;
};

inline Signature random_signature(Rng& rng, const GenLimits& lim = {}) {
    Signature sig;
    std::size_t n = 1 + rng.index(lim.max_ops);
    for (std::size_t i = 0; i < n; ++i)
        sig.add("f" + std::to_string(i), i == 0 ? 1 + rng.index(lim.max_arity)
                                                : rng.index(lim.max_arity + 1));
    return sig;
}

/// Random valid system over the given signature; parameters drawn by `param`.
template <class P, class ParamFn>
FlatSystem<P> random_system(Rng& rng, const Signature& sig, ParamFn&& param,
                            std::size_t max_vars = 8) {
    FlatSystem<P> sys;
    sys.sig = sig;
    std::size_t n = 1 + rng.index(max_vars);
    std::vector<VarId> vars;
    vars.reserve(n);
    for (std::size_t i = 0; i < n; ++i) vars.emplace_back("v" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        if (sig.empty() || rng.coin(0.4)) {
            sys.define(vars[i], param_rhs<P>(param(rng)));
        } else {
            const auto& [op, arity] = sig.ops()[rng.index(sig.size())];
            std::vector<VarId> args;
            args.reserve(arity);
            for (std::size_t j = 0; j < arity; ++j) args.push_back(vars[rng.index(n)]);
            sys.define(vars[i], op_rhs<P>(op, std::move(args)));
        }
    }
    return sys;
}

template <class A>
FlatSystem<typename A::Carrier> random_system_for(Rng& rng, const A& alg, std::size_t max_vars = 8) {
    return random_system<typename A::Carrier>(
        rng, alg.signature(), [&](Rng& r) { return alg.sample(r); }, max_vars);
}

/// A renaming h: X ->> Y together with the pullback of f along it, so that h is
/// an equation morphism from the pulled-back system to f by construction.
template <class P>
struct MorphismTriple {
    std::map<VarId, VarId> h;
    FlatSystem<P> e;
    FlatSystem<P> f;
};

template <class A>
MorphismTriple<typename A::Carrier> random_morphism_triple(Rng& rng, const A& alg,
                                                           std::size_t max_vars = 8) {
    using P = typename A::Carrier;
    MorphismTriple<P> out;
    out.f = random_system_for(rng, alg, std::max<std::size_t>(1, max_vars / 2));
    const auto& yvars = out.f.vars;
    std::size_t nx = yvars.size() + rng.index(std::max<std::size_t>(1, max_vars - yvars.size() + 1));

    std::vector<VarId> xvars;
    xvars.reserve(nx);
    for (std::size_t i = 0; i < nx; ++i) xvars.emplace_back("u" + std::to_string(i));
    // surjective: the first |Y| variables hit Y in order, the rest at random
    for (std::size_t i = 0; i < nx; ++i)
        out.h.emplace(xvars[i], i < yvars.size() ? yvars[i] : yvars[rng.index(yvars.size())]);

    std::map<VarId, std::vector<VarId>> preimages;
    for (const auto& [x, y] : out.h) preimages[y].push_back(x);

    out.e.sig = out.f.sig;
    for (const auto& x : xvars) {
        const auto& r = out.f.rhs_of(out.h.at(x));
        if (const auto* app = std::get_if<OpApp>(&r)) {
            OpApp pulled{app->op, {}};
            pulled.args.reserve(app->args.size());
            for (const auto& y : app->args) {
                const auto& pre = preimages.at(y);
                pulled.args.push_back(pre[rng.index(pre.size())]);
            }
            out.e.define(x, FlatRhs<P>(std::move(pulled)));
        } else {
            out.e.define(x, r);
        }
    }
    return out;
}

/// A pair (e, f) for simultaneous recursion: f lives in the algebra, e's
/// parameters are f's variables.
template <class A>
struct RecursionPair {
    FlatSystem<VarId> e;
    FlatSystem<typename A::Carrier> f;
};

template <class A>
RecursionPair<A> random_recursion_pair(Rng& rng, const A& alg, std::size_t max_vars = 8) {
    RecursionPair<A> out;
    out.f = random_system_for(rng, alg, std::max<std::size_t>(1, max_vars / 2));
    const auto& yvars = out.f.vars;
    out.e = random_system<VarId>(
        rng, alg.signature(), [&](Rng& r) { return yvars[r.index(yvars.size())]; },
        std::max<std::size_t>(1, max_vars / 2));
    // e's variables must be disjoint from f's before tagging ever matters;
    // the "v" naming of random_system collides, so shift them.
    out.e = tag_vars("e", out.e);
    return out;
}

// ---------------------------------------------------------------------------
// Random algebras.

/// Random finite join semilattice: a union-closed family of subsets of a small
/// universe, ordered by inclusion, with bottom the empty set.
inline JoinAlgebra random_join_algebra(Rng& rng, Signature sig = {}, const GenLimits& lim = {}) {
    std::size_t universe = 2 + rng.index(3); // 2..4 generators
    std::set<unsigned> family{0u};
    std::size_t attempts = 2 + rng.index(4);
    for (std::size_t i = 0; i < attempts; ++i) {
        family.insert(static_cast<unsigned>(rng.below(1u << universe)));
        // close under union
        bool grew = true;
        while (grew) {
            grew = false;
            for (auto a : family)
                for (auto b : family)
                    if (family.insert(a | b).second) grew = true;
        }
        if (family.size() >= lim.max_carrier) break;
    }
    while (family.size() > lim.max_carrier) family.erase(std::prev(family.end()));
    // re-close after trimming: drop the largest mask until unions stay inside
    for (;;) {
        bool closed = true;
        for (auto a : family) {
            for (auto b : family)
                if (!family.count(a | b)) {
                    closed = false;
                    break;
                }
            if (!closed) break;
        }
        if (closed) break;
        family.erase(std::prev(family.end()));
    }

    FiniteAlgebra base;
    base.sig = std::move(sig);
    std::map<unsigned, Element> name;
    std::size_t i = 0;
    for (auto mask : family) {
        base.carrier.push_back("e" + std::to_string(i));
        name.emplace(mask, base.carrier.back());
        ++i;
    }
    base.bottom = name.at(0u);
    for (auto a : family)
        for (auto b : family)
            if (a <= b) base.joins.emplace(std::make_pair(name.at(a), name.at(b)), name.at(a | b));
    return JoinAlgebra(std::move(base));
}

/// Random Kleene algebra: the order of a random semilattice plus monotone
/// tables built by choosing, tuple by tuple in a linear extension, any value
/// above the join of the already-fixed smaller tuples.
inline KleeneAlgebra random_kleene_algebra(Rng& rng, const GenLimits& lim = {}) {
    Signature sig = random_signature(rng, lim);
    JoinAlgebra lattice = random_join_algebra(rng, sig, lim);
    FiniteAlgebra base = lattice.base(); // carrier, joins, order, bottom
    base.sig = sig;
    base.tables.clear();

    // linear extension: carrier sorted by rank (number of elements below)
    std::vector<Element> by_rank = base.carrier;
    auto rank = [&](const Element& a) {
        std::size_t r = 0;
        for (const auto& b : base.carrier)
            if (base.leq(b, a)) ++r;
        return r;
    };
    std::stable_sort(by_rank.begin(), by_rank.end(),
                     [&](const Element& a, const Element& b) { return rank(a) < rank(b); });
    std::map<Element, std::size_t> pos;
    for (std::size_t i = 0; i < by_rank.size(); ++i) pos.emplace(by_rank[i], i);

    for (const auto& [op, arity] : sig.ops()) {
        OpTable table;
        // tuples in an order compatible with the componentwise order
        auto tuples = all_tuples(by_rank, arity);
        std::stable_sort(tuples.begin(), tuples.end(), [&](const auto& s, const auto& t) {
            std::size_t rs = 0, rt = 0;
            for (const auto& a : s) rs += pos.at(a);
            for (const auto& a : t) rt += pos.at(a);
            return rs < rt;
        });
        for (const auto& tuple : tuples) {
            Element lower = *base.bottom;
            for (std::size_t k = 0; k < arity; ++k)
                for (const auto& smaller : base.carrier) {
                    if (!(base.leq(smaller, tuple[k]) && smaller != tuple[k])) continue;
                    auto t = tuple;
                    t[k] = smaller;
                    lower = base.join(lower, table.at(t));
                }
            std::vector<Element> candidates;
            for (const auto& c : base.carrier)
                if (base.leq(lower, c)) candidates.push_back(c);
            table.emplace(tuple, candidates[rng.index(candidates.size())]);
        }
        base.tables[op] = std::move(table);
    }
    base.joins.clear(); // plain ordered algebra; joins only seeded the order
    return KleeneAlgebra(std::move(base));
}

/// Random unary algebra: any function table with one forced fixed point.
inline UnaryAlgebra random_unary_algebra(Rng& rng, const GenLimits& lim = {}) {
    FiniteAlgebra base;
    base.sig.add("s", 1);
    std::size_t n = 2 + rng.index(lim.max_carrier - 1);
    for (std::size_t i = 0; i < n; ++i) base.carrier.push_back("a" + std::to_string(i));
    OpTable table;
    for (const auto& a : base.carrier) table[{a}] = base.carrier[rng.index(n)];
    Element a0 = base.carrier[rng.index(n)];
    table[{a0}] = a0;
    base.tables["s"] = std::move(table);
    base.unary_fixpoint = a0;
    return UnaryAlgebra(std::move(base));
}

/// Kleene view of a unary algebra via its flat order (bottom = the fixed
/// point, everything else discrete above it).
inline KleeneAlgebra kleene_from_unary(const UnaryAlgebra& unary) {
    FiniteAlgebra base = unary.base();
    base.unary_fixpoint.reset();
    std::vector<std::pair<Element, Element>> pairs;
    for (const auto& a : base.carrier) pairs.emplace_back(*unary.fixpoint(), a);
    base.bottom = *unary.fixpoint();
    base.set_order_generators(pairs);
    return KleeneAlgebra(std::move(base));
}

/// Random contracting affine algebra on [0,1] with factor 1/2.
inline BanachAlgebra random_banach_algebra(Rng& rng, const GenLimits& lim = {}) {
    MetricAlgebra m;
    m.epsilon = Rational{1, 2};
    m.tolerance = 1e-9;
    std::size_t n_ops = 1 + rng.index(lim.max_ops);
    for (std::size_t i = 0; i < n_ops; ++i) {
        std::size_t arity = i == 0 ? 1 + rng.index(lim.max_arity) : rng.index(lim.max_arity + 1);
        Affine fn;
        Rational budget = m.epsilon;
        for (std::size_t j = 0; j < arity; ++j) {
            fn.args.push_back("x" + std::to_string(j));
            long long den = 2 + static_cast<long long>(rng.below(6)); // 2..7
            Rational c{static_cast<long long>(rng.below(static_cast<std::uint64_t>(den))), den};
            if (c > budget) c = budget;
            fn.coeffs.push_back(c);
            budget -= c;
        }
        Rational slack = Rational{1} - fn.lipschitz();
        long long den = 4 + static_cast<long long>(rng.below(8));
        fn.constant = slack * Rational{static_cast<long long>(rng.below(static_cast<std::uint64_t>(den + 1))), den};
        m.ops.emplace("g" + std::to_string(i), std::move(fn));
        m.sig.add("g" + std::to_string(i), arity);
    }
    return BanachAlgebra(std::move(m));
}

inline ExtendedAlgebra<KleeneAlgebra> random_extended_algebra(Rng& rng, const GenLimits& lim = {}) {
    GenLimits inner_lim = lim;
    inner_lim.max_carrier = std::min<std::size_t>(lim.max_carrier, 4);
    inner_lim.max_ops = 2;
    inner_lim.max_arity = 2;
    KleeneAlgebra inner = random_kleene_algebra(rng, inner_lim);
    std::map<std::string, Element> labels;
    std::size_t n = 1 + rng.index(3);
    auto elems = inner.enumerate_carrier();
    for (std::size_t i = 0; i < n; ++i)
        labels.emplace("l" + std::to_string(i), elems[rng.index(elems.size())]);
    return ExtendedAlgebra<KleeneAlgebra>(std::move(inner), std::move(labels));
}

inline FreeRationalAlgebra random_free_rational_algebra(Rng& rng, const GenLimits& lim = {}) {
    Signature sig = random_signature(rng, lim);
    std::vector<std::string> labels;
    std::size_t n = 1 + rng.index(3);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("y" + std::to_string(i));
    return FreeRationalAlgebra(std::move(sig), std::move(labels));
}

// ---------------------------------------------------------------------------
// Random nested trees (trees of trees) for the monad-law suites.

/// Random rational tree over the given labels, at most `max_states` states.
inline RationalTree<std::string> random_tree(Rng& rng, const Signature& sig,
                                             const std::vector<std::string>& labels,
                                             std::size_t max_states = 5) {
    FlatSystem<std::string> sys;
    sys.sig = sig;
    std::size_t n = 1 + rng.index(max_states);
    std::vector<VarId> vars;
    for (std::size_t i = 0; i < n; ++i) vars.emplace_back("s" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        if (sig.empty() || rng.coin(0.45)) {
            sys.define(vars[i], param_rhs<std::string>(labels[rng.index(labels.size())]));
        } else {
            const auto& [op, arity] = sig.ops()[rng.index(sig.size())];
            std::vector<VarId> args;
            for (std::size_t j = 0; j < arity; ++j) args.push_back(vars[rng.index(n)]);
            sys.define(vars[i], op_rhs<std::string>(op, std::move(args)));
        }
    }
    return RationalTree<std::string>(std::move(sys), vars[0]);
}

/// Random finite tree of trees: depth-bounded outer skeleton whose leaves are
/// random (possibly cyclic) inner trees.
inline RationalTree<RationalTree<std::string>> random_nested_tree(
    Rng& rng, const Signature& sig, const std::vector<std::string>& labels, std::size_t depth = 3,
    std::size_t inner_states = 5) {
    if (depth == 0 || sig.empty() || rng.coin(0.35))
        return eta(random_tree(rng, sig, labels, inner_states));
    const auto& [op, arity] = sig.ops()[rng.index(sig.size())];
    std::vector<RationalTree<RationalTree<std::string>>> children;
    children.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i)
        children.push_back(random_nested_tree(rng, sig, labels, depth - 1, inner_states));
    return apply_layer(op, children);
}

} // namespace elgot
