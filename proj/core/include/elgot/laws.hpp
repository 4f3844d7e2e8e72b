#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "elgot/elgot_algebra.hpp"
#include "elgot/flat_system.hpp"
#include "elgot/gen.hpp"
#include "elgot/rng.hpp"

namespace elgot {

// ---------------------------------------------------------------------------
// Single checks.

/// Does s make every equation of e hold? Operation equations must evaluate to
/// the assigned value (up to the algebra's carrier equality), parameter
/// equations must assign the parameter itself.
template <class A>
bool check_solution(const A& alg, const FlatSystem<typename A::Carrier>& e,
                    const Solution<typename A::Carrier>& s) {
    for (const auto& x : e.vars) {
        const auto& r = e.rhs_of(x);
        if (const auto* p = std::get_if<ParamRhs<typename A::Carrier>>(&r)) {
            if (!alg.equal(s.at(x), p->value)) return false;
        } else {
            const auto& app = std::get<OpApp>(r);
            std::vector<typename A::Carrier> args;
            args.reserve(app.args.size());
            for (const auto& a : app.args) args.push_back(s.at(a));
            if (!alg.equal(s.at(x), alg.apply(app.op, args))) return false;
        }
    }
    return true;
}

/// Solutions must be invariant under renamings of recursion variables:
/// whenever h is an equation morphism from e to f, the solution of e is the
/// solution of f composed with h.
template <class A>
bool check_functoriality(const A& alg, const std::map<VarId, VarId>& h,
                         const FlatSystem<typename A::Carrier>& e,
                         const FlatSystem<typename A::Carrier>& f) {
    if (!is_equation_morphism(h, e, f))
        raise(Errc::NotAMorphism, "", "h is not an equation morphism from e to f");
    auto se = alg.dagger(e);
    auto sf = alg.dagger(f);
    for (const auto& x : e.vars)
        if (!alg.equal_scaled(se.at(x), sf.at(h.at(x)), 2.0)) return false;
    return true;
}

/// Simultaneous recursion must agree with sequential recursion, in both the
/// left-component form and the copairing form.
template <class A>
bool check_compositionality(const A& alg, const FlatSystem<VarId>& e,
                            const FlatSystem<typename A::Carrier>& f) {
    using P = typename A::Carrier;
    auto sf = alg.dagger(f);
    auto seq = rename_params<P>([&](const VarId& y) { return sf.at(y); }, e);
    auto s_seq = alg.dagger(seq);
    auto paired = pair_systems(f, e);
    auto s_pair = alg.dagger(paired);
    const double k = alg.composition_tolerance_factor();
    for (const auto& x : e.vars)
        if (!alg.equal_scaled(s_seq.at(x), s_pair.at(inl_var(x)), k)) return false;
    for (const auto& y : f.vars)
        if (!alg.equal_scaled(sf.at(y), s_pair.at(inr_var(y)), k)) return false;
    return true;
}

/// Does h carry the chosen solutions of algA to those of algB?
template <class A, class B, class Fn>
bool check_solution_preserving(Fn&& h, const A& algA, const B& algB,
                               const FlatSystem<typename A::Carrier>& e) {
    auto sa = algA.dagger(e);
    auto renamed = rename_params<typename B::Carrier>(h, e);
    auto sb = algB.dagger(renamed);
    for (const auto& x : e.vars)
        if (!algB.equal_scaled(h(sa.at(x)), sb.at(x), 2.0)) return false;
    return true;
}

/// Brute-force homomorphism check over finite carriers: h(alpha_A(op, t)) must
/// equal alpha_B(op, h(t)) for every operation and argument tuple.
template <class A, class B, class Fn>
bool check_homomorphism(Fn&& h, const A& algA, const B& algB) {
    auto elems = algA.enumerate_carrier();
    for (const auto& [op, arity] : algA.signature().ops()) {
        std::vector<std::vector<typename A::Carrier>> tuples{{}};
        for (std::size_t i = 0; i < arity; ++i) {
            std::vector<std::vector<typename A::Carrier>> next;
            for (const auto& prefix : tuples)
                for (const auto& a : elems) {
                    auto t = prefix;
                    t.push_back(a);
                    next.push_back(std::move(t));
                }
            tuples = std::move(next);
        }
        for (const auto& t : tuples) {
            std::vector<typename B::Carrier> mapped;
            mapped.reserve(t.size());
            for (const auto& a : t) mapped.push_back(h(a));
            if (!algB.equal(h(algA.apply(op, t)), algB.apply(op, mapped))) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// The canonical system on HA + A: every one-layer term and every element as a
// variable. Its unique/chosen solution is the copairing of alpha and the
// identity, reached by the approximation chain in two steps.

template <class A>
struct CanonicalSystem {
    FlatSystem<typename A::Carrier> system;
    Solution<typename A::Carrier> expected;
};

template <class A>
CanonicalSystem<A> canonical_system(const A& alg) {
    using P = typename A::Carrier;
    CanonicalSystem<A> out;
    out.system.sig = alg.signature();
    auto elems = alg.enumerate_carrier();
    auto elem_var = [&](const P& a) { return VarId(alg.show(a)); };

    for (const auto& [op, arity] : alg.signature().ops()) {
        std::vector<std::vector<P>> tuples{{}};
        for (std::size_t i = 0; i < arity; ++i) {
            std::vector<std::vector<P>> next;
            for (const auto& prefix : tuples)
                for (const auto& a : elems) {
                    auto t = prefix;
                    t.push_back(a);
                    next.push_back(std::move(t));
                }
            tuples = std::move(next);
        }
        for (const auto& t : tuples) {
            std::string name = op + "(";
            std::vector<VarId> args;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) name += ",";
                name += alg.show(t[i]);
                args.push_back(elem_var(t[i]));
            }
            name += ")";
            out.system.define(VarId(name), op_rhs<P>(op, std::move(args)));
            out.expected.set(VarId(name), alg.apply(op, t));
        }
    }
    for (const auto& a : elems) {
        out.system.define(elem_var(a), param_rhs<P>(a));
        out.expected.set(elem_var(a), a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Randomized suites.

struct TrialFailure {
    std::uint64_t seed = 0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::size_t trials = 0;
    std::vector<TrialFailure> failures;

    bool passed() const { return failures.empty(); }
};

template <class A>
std::string describe_system(const A& alg, const FlatSystem<typename A::Carrier>& e) {
    std::string s = "{";
    bool first = true;
    for (const auto& v : e.vars) {
        if (!first) s += "; ";
        first = false;
        s += v.name + "=";
        const auto& r = e.rhs_of(v);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            s += app->op + "(";
            for (std::size_t i = 0; i < app->args.size(); ++i) {
                if (i) s += ",";
                s += app->args[i].name;
            }
            s += ")";
        } else {
            s += "param " + alg.show(std::get<ParamRhs<typename A::Carrier>>(r).value);
        }
    }
    return s + "}";
}

/// check_solution on `trials` random systems.
template <class A>
SuiteReport run_solution_suite(const A& alg, std::uint64_t master_seed, std::size_t trials,
                               std::size_t max_vars = 8) {
    SuiteReport report{"solution", trials, {}};
    for (std::size_t i = 0; i < trials; ++i) {
        std::uint64_t seed = derive_seed(master_seed, i);
        Rng rng(seed);
        auto e = random_system_for(rng, alg, max_vars);
        auto s = alg.dagger(e);
        if (!check_solution(alg, e, s))
            report.failures.push_back({seed, "solution check failed on " + describe_system(alg, e)});
    }
    return report;
}

/// check_functoriality on `trials` random morphism triples.
template <class A>
SuiteReport run_functoriality_suite(const A& alg, std::uint64_t master_seed, std::size_t trials,
                                    std::size_t max_vars = 8) {
    SuiteReport report{"functoriality", trials, {}};
    for (std::size_t i = 0; i < trials; ++i) {
        std::uint64_t seed = derive_seed(master_seed, i);
        Rng rng(seed);
        auto triple = random_morphism_triple(rng, alg, max_vars);
        if (!check_functoriality(alg, triple.h, triple.e, triple.f))
            report.failures.push_back(
                {seed, "functoriality failed: e=" + describe_system(alg, triple.e) +
                           " f=" + describe_system(alg, triple.f)});
    }
    return report;
}

/// check_compositionality on `trials` random recursion pairs.
template <class A>
SuiteReport run_compositionality_suite(const A& alg, std::uint64_t master_seed, std::size_t trials,
                                       std::size_t max_vars = 8) {
    SuiteReport report{"compositionality", trials, {}};
    for (std::size_t i = 0; i < trials; ++i) {
        std::uint64_t seed = derive_seed(master_seed, i);
        Rng rng(seed);
        auto pair = random_recursion_pair(rng, alg, max_vars);
        if (!check_compositionality(alg, pair.e, pair.f))
            report.failures.push_back({seed, "compositionality failed: f=" +
                                                 describe_system(alg, pair.f)});
    }
    return report;
}

} // namespace elgot
