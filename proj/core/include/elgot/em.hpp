#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "elgot/elgot_algebra.hpp"
#include "elgot/gen.hpp"
#include "elgot/rational.hpp"
#include "elgot/rng.hpp"

namespace elgot {

/// Single-line rendering of a pointed system, for reports.
inline std::string describe_tree(const RationalTree<std::string>& t) {
    std::string s = "{";
    bool first = true;
    for (const auto& v : t.system().vars) {
        if (!first) s += "; ";
        first = false;
        s += v.name + "=";
        const auto& r = t.system().rhs_of(v);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            s += app->op + "(";
            for (std::size_t i = 0; i < app->args.size(); ++i) {
                if (i) s += ",";
                s += app->args[i].name;
            }
            s += ")";
        } else {
            s += std::get<ParamRhs<std::string>>(r).value;
        }
    }
    return s + "}@" + t.root().name;
}

/// Finite carrier together with an evaluation of every rational tree over it.
/// The unit law (evaluating a single leaf gives its label) is checked at load.
struct EMAlgebra {
    Signature sig;
    std::vector<std::string> carrier;
    std::function<std::string(const RationalTree<std::string>&)> evaluate;

    void check_unit() const {
        for (const auto& a : carrier)
            if (evaluate(eta(a)) != a)
                raise(Errc::InvalidAlgebra, a, "evaluating the leaf does not give the label back");
    }
};

/// The evaluation induced by a finite Elgot algebra: read the tree's own state
/// system as a flat system in the carrier and solve it.
template <class A>
EMAlgebra elgot_to_em(const A& alg) {
    static_assert(std::is_same_v<typename A::Carrier, std::string>,
                  "tree evaluation needs a finite carrier of named elements");
    EMAlgebra em;
    em.sig = alg.signature();
    em.carrier = alg.enumerate_carrier();
    em.evaluate = [alg](const RationalTree<std::string>& t) {
        return alg.dagger(t.system()).at(t.root());
    };
    em.check_unit();
    return em;
}

/// The Elgot algebra a tree evaluation induces: one operation layer evaluates
/// through leaves, and a system is solved by evaluating its rational solution.
class EmDerivedAlgebra {
public:
    using Carrier = std::string;

    explicit EmDerivedAlgebra(EMAlgebra em) : em_(std::move(em)) { em_.check_unit(); }

    const Signature& signature() const { return em_.sig; }
    const EMAlgebra& em() const { return em_; }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        std::vector<RationalTree<std::string>> leaves;
        leaves.reserve(args.size());
        for (const auto& a : args) leaves.push_back(eta(a));
        return em_.evaluate(apply_layer(op, leaves));
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        stats.iterations = 0;
        auto trees = solve_free(e);
        Solution<Carrier> out;
        for (const auto& x : e.vars) out.set(x, em_.evaluate(trees.at(x)));
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const { return a == b; }
    bool equal_scaled(const Carrier& a, const Carrier& b, double) const { return a == b; }
    double composition_tolerance_factor() const { return 1.0; }
    std::string show(const Carrier& a) const { return a; }
    std::string variant_name() const { return "em-derived"; }

    std::vector<Carrier> enumerate_carrier() const { return em_.carrier; }
    Carrier sample(Rng& rng) const { return em_.carrier[rng.index(em_.carrier.size())]; }

private:
    EMAlgebra em_;
};

inline EmDerivedAlgebra em_to_elgot(EMAlgebra em) { return EmDerivedAlgebra(std::move(em)); }

// ---------------------------------------------------------------------------
// Law checks for the evaluation: unit and multiplication.

struct EmFailure {
    std::uint64_t seed = 0;
    std::string tree;
    std::string lhs;
    std::string rhs;
};

struct EmLawReport {
    std::string law;
    std::size_t trials = 0;
    std::vector<EmFailure> failures;

    bool passed() const { return failures.empty(); }
};

struct EmReport {
    EmLawReport unit;
    EmLawReport multiplication;

    bool passed() const { return unit.passed() && multiplication.passed(); }
};

/// Unit: evaluating a leaf gives its label, exactly, on every carrier element.
/// Multiplication: evaluating a glued tree of trees equals evaluating the
/// outer tree with every leaf tree replaced by its value; checked on `trials`
/// random nested trees.
inline EmReport check_em_laws(const EMAlgebra& em, std::size_t trials, std::uint64_t master_seed) {
    EmReport report;
    report.unit.law = "unit";
    report.unit.trials = em.carrier.size();
    for (const auto& a : em.carrier) {
        auto leaf = eta(a);
        auto got = em.evaluate(leaf);
        if (got != a) report.unit.failures.push_back({0, describe_tree(leaf), got, a});
    }

    report.multiplication.law = "multiplication";
    report.multiplication.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        std::uint64_t seed = derive_seed(master_seed, i);
        Rng rng(seed);
        auto nested = random_nested_tree(rng, em.sig, em.carrier);
        auto glued = substitute(nested);
        std::string lhs = em.evaluate(glued);

        auto collapsed = rename_params<std::string>(
            [&](const RationalTree<std::string>& inner) { return em.evaluate(inner); },
            nested.system());
        std::string rhs =
            em.evaluate(RationalTree<std::string>(std::move(collapsed), nested.root()));

        if (lhs != rhs)
            report.multiplication.failures.push_back({seed, describe_tree(glued), lhs, rhs});
    }
    return report;
}

/// Copy of the evaluation with a single cell flipped: trees in the class of
/// `cell` evaluate to `value` instead. A sensitivity probe for the law checks.
inline EMAlgebra with_flipped_cell(const EMAlgebra& em, RationalTree<std::string> cell,
                                   std::string value) {
    EMAlgebra out = em;
    auto base = em.evaluate;
    out.evaluate = [base, cell = std::move(cell),
                    value = std::move(value)](const RationalTree<std::string>& t) {
        if (bisimilar(t, cell)) return value;
        return base(t);
    };
    return out;
}

} // namespace elgot
