#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "elgot/finite_algebra.hpp"
#include "elgot/flat_system.hpp"
#include "elgot/metric_algebra.hpp"
#include "elgot/rational.hpp"
#include "elgot/rng.hpp"

namespace elgot {

/// Iteration statistics reported by the iterative daggers.
struct DaggerStats {
    std::size_t iterations = 0;
};

// ---------------------------------------------------------------------------
// Unary algebras: single unary operation, solutions in closed form.

/// Carrier with one unary operation. A variable whose equation chain reaches a
/// parameter a after k steps is solved as the k-fold application to a; a cyclic
/// chain is solved by the chosen fixed point (or fails without one).
class UnaryAlgebra {
public:
    using Carrier = Element;

    explicit UnaryAlgebra(FiniteAlgebra base) : base_(std::move(base)) {
        base_.check();
        if (base_.sig.size() != 1 || base_.sig.ops()[0].second != 1)
            raise(Errc::InvalidAlgebra, "", "unary algebras have exactly one unary operation");
        op_ = base_.sig.ops()[0].first;
    }

    const Signature& signature() const { return base_.sig; }
    const FiniteAlgebra& base() const { return base_; }
    const OpSymbol& op() const { return op_; }
    std::optional<Element> fixpoint() const { return base_.unary_fixpoint; }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        return base_.apply(op, args);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        ensure_valid(e);
        for (const auto& [op, n] : e.sig.ops()) {
            auto ar = base_.sig.arity(op);
            if (!ar || *ar != n)
                raise(Errc::SignatureMismatch, op, "system uses an operation the algebra lacks");
        }
        Solution<Carrier> out;
        std::size_t longest = 0;
        for (const auto& x : e.vars) {
            std::size_t k = 0;
            VarId cur = x;
            std::set<VarId> seen;
            const Carrier* endpoint = nullptr;
            while (seen.insert(cur).second) {
                const auto& r = e.rhs_of(cur);
                if (const auto* p = std::get_if<ParamRhs<Carrier>>(&r)) {
                    endpoint = &p->value;
                    break;
                }
                cur = std::get<OpApp>(r).args[0];
                ++k;
            }
            if (endpoint) {
                Carrier v = *endpoint;
                if (!base_.has_element(v))
                    raise(Errc::InvalidAlgebra, v, "parameter is not a carrier element");
                for (std::size_t i = 0; i < k; ++i) v = base_.apply(op_, {v});
                out.set(x, std::move(v));
            } else {
                if (!base_.unary_fixpoint)
                    raise(Errc::NoFixedPoint, x.name,
                          "cyclic equation chain and no fixed point configured");
                out.set(x, *base_.unary_fixpoint);
            }
            longest = std::max(longest, k);
        }
        stats.iterations = longest;
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const { return a == b; }
    bool equal_scaled(const Carrier& a, const Carrier& b, double) const { return a == b; }
    double composition_tolerance_factor() const { return 1.0; }
    std::string show(const Carrier& a) const { return a; }
    std::string variant_name() const { return "unary"; }

    std::vector<Carrier> enumerate_carrier() const { return base_.carrier; }
    Carrier sample(Rng& rng) const { return base_.carrier[rng.index(base_.carrier.size())]; }

private:
    FiniteAlgebra base_;
    OpSymbol op_;
};

// ---------------------------------------------------------------------------
// Kleene algebras: ordered finite carrier, least solutions by iteration.

/// Finite carrier with a partial order, least element and monotone operation
/// tables. Solutions are least fixed points, computed by iterating the
/// approximation chain from the constantly-bottom assignment until it
/// stabilizes.
class KleeneAlgebra {
public:
    using Carrier = Element;

    explicit KleeneAlgebra(FiniteAlgebra base) : base_(std::move(base)) {
        base_.check();
        if (!base_.has_order() || !base_.bottom)
            raise(Errc::InvalidAlgebra, "", "least solutions need an order with a bottom element");
        base_.check_monotone_tables();
    }

    const Signature& signature() const { return base_.sig; }
    const FiniteAlgebra& base() const { return base_; }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        return base_.apply(op, args);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        ensure_valid(e);
        if (!signatures_compatible(e.sig))
            raise(Errc::SignatureMismatch, "", "system uses operations the algebra does not provide");
        std::map<VarId, Carrier> cur;
        for (const auto& x : e.vars) cur.emplace(x, *base_.bottom);
        const std::size_t cap = e.vars.size() * base_.carrier.size() + 2;
        for (std::size_t n = 0;; ++n) {
            if (n > cap)
                raise(Errc::NonConvergence, "", "iteration exceeded the finite-carrier bound");
            std::map<VarId, Carrier> next;
            for (const auto& x : e.vars) {
                const auto& r = e.rhs_of(x);
                if (const auto* p = std::get_if<ParamRhs<Carrier>>(&r)) {
                    if (!base_.has_element(p->value))
                        raise(Errc::InvalidAlgebra, p->value, "parameter is not a carrier element");
                    next.emplace(x, p->value);
                } else {
                    const auto& app = std::get<OpApp>(r);
                    std::vector<Carrier> args;
                    args.reserve(app.args.size());
                    for (const auto& a : app.args) args.push_back(cur.at(a));
                    next.emplace(x, base_.apply(app.op, args));
                }
            }
            for (const auto& x : e.vars)
                if (!base_.leq(cur.at(x), next.at(x)))
                    raise(Errc::InvalidAlgebra, x.name, "approximation chain is not increasing");
            if (next == cur) {
                stats.iterations = n;
                break;
            }
            cur = std::move(next);
        }
        Solution<Carrier> out;
        out.assignment = std::move(cur);
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const { return a == b; }
    bool equal_scaled(const Carrier& a, const Carrier& b, double) const { return a == b; }
    double composition_tolerance_factor() const { return 1.0; }
    std::string show(const Carrier& a) const { return a; }
    std::string variant_name() const { return "kleene"; }

    std::vector<Carrier> enumerate_carrier() const { return base_.carrier; }
    Carrier sample(Rng& rng) const { return base_.carrier[rng.index(base_.carrier.size())]; }

private:
    bool signatures_compatible(const Signature& sys_sig) const {
        for (const auto& [op, n] : sys_sig.ops()) {
            auto ar = base_.sig.arity(op);
            if (!ar || *ar != n) return false;
        }
        return true;
    }

    FiniteAlgebra base_;
};

// ---------------------------------------------------------------------------
// Banach algebras: carrier [0,1], contracting affine operations.

/// Metric carrier with contracting operations. Solutions are the unique fixed
/// points of the induced map on assignments, approximated from the constantly
/// zero start until the step size certifies the requested tolerance.
class BanachAlgebra {
public:
    using Carrier = double;

    explicit BanachAlgebra(MetricAlgebra base) : base_(std::move(base)) { base_.check(); }

    const Signature& signature() const { return base_.sig; }
    const MetricAlgebra& base() const { return base_; }
    double tolerance() const { return base_.tolerance; }
    double epsilon() const { return boost::rational_cast<double>(base_.epsilon); }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        return base_.apply(op, args);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        ensure_valid(e);
        const double eps = epsilon();
        const double tau = base_.tolerance;
        // step < tau*(1-eps)/eps bounds both the distance to the fixed point
        // and the residual of the returned assignment by tau.
        const double threshold = eps > 0 ? tau * (1 - eps) / eps
                                         : std::numeric_limits<double>::infinity();
        const std::size_t cap =
            eps > 0 ? 10 * static_cast<std::size_t>(std::ceil(std::log(tau) / std::log(eps))) : 16;

        for (const auto& x : e.vars)
            if (const auto* p = std::get_if<ParamRhs<Carrier>>(&e.rhs_of(x)))
                if (!(p->value >= 0.0 && p->value <= 1.0))
                    raise(Errc::InvalidAlgebra, x.name, "parameter outside the carrier [0,1]");

        std::map<VarId, Carrier> cur;
        for (const auto& x : e.vars) cur.emplace(x, 0.0);
        for (std::size_t n = 1;; ++n) {
            if (n > cap) raise(Errc::NonConvergence, "", "iteration cap exceeded");
            std::map<VarId, Carrier> next;
            double step = 0.0;
            for (const auto& x : e.vars) {
                const auto& r = e.rhs_of(x);
                double v;
                if (const auto* p = std::get_if<ParamRhs<Carrier>>(&r)) {
                    v = p->value;
                } else {
                    const auto& app = std::get<OpApp>(r);
                    std::vector<double> args;
                    args.reserve(app.args.size());
                    for (const auto& a : app.args) args.push_back(cur.at(a));
                    v = base_.apply(app.op, args);
                }
                step = std::max(step, std::abs(v - cur.at(x)));
                next.insert_or_assign(x, v);
            }
            cur = std::move(next);
            if (step < threshold) {
                stats.iterations = n;
                break;
            }
        }
        Solution<Carrier> out;
        out.assignment = std::move(cur);
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const {
        return std::abs(a - b) <= base_.tolerance;
    }
    bool equal_scaled(const Carrier& a, const Carrier& b, double k) const {
        return std::abs(a - b) <= k * base_.tolerance;
    }
    double composition_tolerance_factor() const { return 2.0 + 1.0 / (1.0 - epsilon()); }
    std::string show(const Carrier& a) const {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", a);
        return buf;
    }
    std::string variant_name() const { return "banach"; }

    Carrier sample(Rng& rng) const { return rng.unit(); }

private:
    MetricAlgebra base_;
};

// ---------------------------------------------------------------------------
// Join-of-leaves algebras: semilattice carrier, solution = join of the leaf
// labels of the rational solution.

/// Finite join semilattice with bottom. Every operation evaluates to the join
/// of its arguments; the solution of a system assigns to each variable the
/// join of all leaf labels reachable in its rational tree (bottom when the
/// tree has no leaves).
class JoinAlgebra {
public:
    using Carrier = Element;

    explicit JoinAlgebra(FiniteAlgebra base) : base_(std::move(base)) {
        if (!base_.has_joins() || !base_.bottom)
            raise(Errc::InvalidAlgebra, "", "join-of-leaves needs a join table and a bottom element");
        if (base_.sig.empty()) base_.sig.add("mul", 2);
        base_.tables_from_joins(); // the operations interpret as join of arguments
        if (!base_.has_order()) base_.order_from_joins();
        base_.check();
    }

    const Signature& signature() const { return base_.sig; }
    const FiniteAlgebra& base() const { return base_; }
    const Element& bottom() const { return *base_.bottom; }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        (void)op;
        Carrier acc = *base_.bottom;
        for (const auto& a : args) acc = base_.join(acc, a);
        return acc;
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        stats.iterations = 0;
        auto trees = solve_free(e); // parameters read as leaf labels
        Solution<Carrier> out;
        for (const auto& x : e.vars) {
            auto reduced = minimize(trees.at(x));
            Carrier acc = *base_.bottom;
            for (const auto& v : reduced.system().vars)
                if (const auto* p = std::get_if<ParamRhs<Carrier>>(&reduced.system().rhs_of(v))) {
                    if (!base_.has_element(p->value))
                        raise(Errc::InvalidAlgebra, p->value, "parameter is not a carrier element");
                    acc = base_.join(acc, p->value);
                }
            out.set(x, std::move(acc));
        }
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const { return a == b; }
    bool equal_scaled(const Carrier& a, const Carrier& b, double) const { return a == b; }
    double composition_tolerance_factor() const { return 1.0; }
    std::string show(const Carrier& a) const { return a; }
    std::string variant_name() const { return "join"; }

    std::vector<Carrier> enumerate_carrier() const { return base_.carrier; }
    Carrier sample(Rng& rng) const { return base_.carrier[rng.index(base_.carrier.size())]; }

private:
    FiniteAlgebra base_;
};

/// Least-solution view of the same semilattice: order derived from the join
/// table, operations tabulated as joins. Used as an independent route to the
/// values the join-of-leaves dagger produces.
inline KleeneAlgebra kleene_from_join(const JoinAlgebra& join, const Signature& sig) {
    FiniteAlgebra base = join.base();
    base.sig = sig;
    base.tables.clear();
    base.tables_from_joins();
    base.order_from_joins();
    return KleeneAlgebra(std::move(base));
}

// ---------------------------------------------------------------------------
// Extended algebras on HA + Y.

/// Element of the extended carrier: either one operation applied to inner
/// carrier elements, or a label from Y.
template <class InnerCarrier>
struct ExtElem {
    struct HPart {
        OpSymbol op;
        std::vector<InnerCarrier> args;
        bool operator==(const HPart&) const = default;
    };
    struct YPart {
        std::string label;
        bool operator==(const YPart&) const = default;
    };

    std::variant<HPart, YPart> value;

    bool operator==(const ExtElem&) const = default;

    static ExtElem h(OpSymbol op, std::vector<InnerCarrier> args) {
        return ExtElem{HPart{std::move(op), std::move(args)}};
    }
    static ExtElem y(std::string label) { return ExtElem{YPart{std::move(label)}}; }
};

/// The extension of an Elgot algebra A along a labelling m: Y -> A to a new
/// algebra on HA + Y. Every equation is collapsed into A, solved there, and
/// the answer re-assembled one operation layer above.
template <class Inner>
class ExtendedAlgebra {
public:
    using InnerCarrier = typename Inner::Carrier;
    using Carrier = ExtElem<InnerCarrier>;

    ExtendedAlgebra(Inner inner, std::map<std::string, InnerCarrier> labels)
        : inner_(std::move(inner)), labels_(std::move(labels)) {}

    const Signature& signature() const { return inner_.signature(); }
    const Inner& inner() const { return inner_; }
    const std::map<std::string, InnerCarrier>& labels() const { return labels_; }

    /// The copairing [alpha, m]: HA + Y -> A.
    InnerCarrier collapse(const Carrier& c) const {
        if (const auto* h = std::get_if<typename Carrier::HPart>(&c.value))
            return inner_.apply(h->op, h->args);
        const auto& y = std::get<typename Carrier::YPart>(c.value);
        auto it = labels_.find(y.label);
        if (it == labels_.end()) raise(Errc::UnknownVar, y.label, "label has no image in the algebra");
        return it->second;
    }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        std::vector<InnerCarrier> inner_args;
        inner_args.reserve(args.size());
        for (const auto& a : args) inner_args.push_back(collapse(a));
        return Carrier::h(op, std::move(inner_args));
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        ensure_valid(e);
        auto collapsed = rename_params<InnerCarrier>([&](const Carrier& c) { return collapse(c); }, e);
        auto sol = inner_.dagger(collapsed, stats);
        Solution<Carrier> out;
        for (const auto& x : e.vars) {
            const auto& r = e.rhs_of(x);
            if (const auto* app = std::get_if<OpApp>(&r)) {
                std::vector<InnerCarrier> args;
                args.reserve(app->args.size());
                for (const auto& a : app->args) args.push_back(sol.at(a));
                out.set(x, Carrier::h(app->op, std::move(args)));
            } else {
                out.set(x, std::get<ParamRhs<Carrier>>(r).value);
            }
        }
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const {
        if (a.value.index() != b.value.index()) return false;
        if (const auto* ha = std::get_if<typename Carrier::HPart>(&a.value)) {
            const auto& hb = std::get<typename Carrier::HPart>(b.value);
            if (ha->op != hb.op || ha->args.size() != hb.args.size()) return false;
            for (std::size_t i = 0; i < ha->args.size(); ++i)
                if (!inner_.equal(ha->args[i], hb.args[i])) return false;
            return true;
        }
        return std::get<typename Carrier::YPart>(a.value).label ==
               std::get<typename Carrier::YPart>(b.value).label;
    }
    bool equal_scaled(const Carrier& a, const Carrier& b, double) const { return equal(a, b); }
    double composition_tolerance_factor() const { return 1.0; }

    std::string show(const Carrier& c) const {
        if (const auto* h = std::get_if<typename Carrier::HPart>(&c.value)) {
            std::string s = h->op + "(";
            for (std::size_t i = 0; i < h->args.size(); ++i) {
                if (i) s += ",";
                s += inner_.show(h->args[i]);
            }
            return s + ")";
        }
        return "y:" + std::get<typename Carrier::YPart>(c.value).label;
    }
    std::string variant_name() const { return "extended-" + inner_.variant_name(); }

    std::vector<Carrier> enumerate_carrier() const {
        std::vector<Carrier> out;
        auto inner_elems = inner_.enumerate_carrier();
        for (const auto& [op, arity] : signature().ops())
            for (auto& tuple : tuples_of(inner_elems, arity)) out.push_back(Carrier::h(op, tuple));
        for (const auto& [label, image] : labels_) out.push_back(Carrier::y(label));
        return out;
    }

    Carrier sample(Rng& rng) const {
        if (!labels_.empty() && rng.coin(0.4)) {
            auto it = labels_.begin();
            std::advance(it, rng.index(labels_.size()));
            return Carrier::y(it->first);
        }
        const auto& ops = signature().ops();
        const auto& [op, arity] = ops[rng.index(ops.size())];
        std::vector<InnerCarrier> args;
        args.reserve(arity);
        for (std::size_t i = 0; i < arity; ++i) args.push_back(inner_.sample(rng));
        return Carrier::h(op, std::move(args));
    }

private:
    static std::vector<std::vector<InnerCarrier>> tuples_of(const std::vector<InnerCarrier>& elems,
                                                            std::size_t arity) {
        std::vector<std::vector<InnerCarrier>> out{{}};
        for (std::size_t i = 0; i < arity; ++i) {
            std::vector<std::vector<InnerCarrier>> next;
            for (const auto& prefix : out)
                for (const auto& e : elems) {
                    auto t = prefix;
                    t.push_back(e);
                    next.push_back(std::move(t));
                }
            out = std::move(next);
        }
        return out;
    }

    Inner inner_;
    std::map<std::string, InnerCarrier> labels_;
};

// ---------------------------------------------------------------------------
// The free algebra of rational trees itself.

/// Rational trees over a fixed label set, with the unique-solution dagger.
/// Equality of carrier elements is bisimilarity.
class FreeRationalAlgebra {
public:
    using Carrier = RationalTree<std::string>;

    FreeRationalAlgebra(Signature sig, std::vector<std::string> labels)
        : sig_(std::move(sig)), labels_(std::move(labels)) {
        if (sig_.empty() && labels_.empty())
            raise(Errc::InvalidAlgebra, "", "need at least one operation or label");
    }

    const Signature& signature() const { return sig_; }
    const std::vector<std::string>& labels() const { return labels_; }

    Carrier apply(const OpSymbol& op, const std::vector<Carrier>& args) const {
        if (auto ar = sig_.arity(op); ar && *ar != args.size())
            raise(Errc::ArityMismatch, op, "argument count does not match the arity");
        return apply_layer(op, args);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e) const {
        DaggerStats stats;
        return dagger(e, stats);
    }

    Solution<Carrier> dagger(const FlatSystem<Carrier>& e, DaggerStats& stats) const {
        stats.iterations = 0;
        auto solved = solve_in_R(e);
        Solution<Carrier> out;
        for (auto& [x, t] : solved) out.set(x, std::move(t));
        return out;
    }

    bool equal(const Carrier& a, const Carrier& b) const { return bisimilar(a, b); }
    bool equal_scaled(const Carrier& a, const Carrier& b, double) const { return equal(a, b); }
    double composition_tolerance_factor() const { return 1.0; }

    std::string show(const Carrier& t) const {
        std::string s = "{";
        for (const auto& v : t.system().vars) {
            const auto& r = t.system().rhs_of(v);
            if (!(s.size() == 1)) s += "; ";
            s += v.name + "=";
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
    std::string variant_name() const { return "free-rational"; }

    Carrier sample(Rng& rng) const {
        // random pointed system with a few states over the labels
        std::size_t n = 1 + rng.index(3);
        FlatSystem<std::string> sys;
        sys.sig = sig_;
        std::vector<VarId> vars;
        for (std::size_t i = 0; i < n; ++i) vars.emplace_back("t" + std::to_string(i));
        for (std::size_t i = 0; i < n; ++i) {
            bool leaf = labels_.empty() ? false : (sig_.empty() || rng.coin(0.5));
            if (leaf) {
                sys.define(vars[i], param_rhs<std::string>(labels_[rng.index(labels_.size())]));
            } else {
                const auto& [op, arity] = sig_.ops()[rng.index(sig_.size())];
                std::vector<VarId> args;
                for (std::size_t j = 0; j < arity; ++j) args.push_back(vars[rng.index(n)]);
                sys.define(vars[i], op_rhs<std::string>(op, std::move(args)));
            }
        }
        return Carrier(std::move(sys), vars[0]);
    }

private:
    Signature sig_;
    std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Eventually periodic parameter streams.

/// Finite system whose solution realizes x_n = op(a_n, x_{n+1}) for the stream
/// prefix . cycle^omega. Each stream element gets one leaf state; the cycle
/// wraps back to its first variable.
template <class P>
FlatSystem<P> build_stream_system(const std::vector<P>& prefix, const std::vector<P>& cycle,
                                  const OpSymbol& op) {
    if (cycle.empty()) raise(Errc::EmptyCycle, op, "stream cycle must be non-empty");
    FlatSystem<P> sys;
    sys.sig.add(op, 2);
    const std::size_t m = prefix.size() + cycle.size();
    auto xvar = [](std::size_t i) { return VarId("x" + std::to_string(i)); };
    auto yvar = [](std::size_t i) { return VarId("y" + std::to_string(i)); };
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t next = i + 1 < m ? i + 1 : prefix.size();
        sys.define(xvar(i), op_rhs<P>(op, {yvar(i), xvar(next)}));
    }
    for (std::size_t i = 0; i < m; ++i) {
        const P& value = i < prefix.size() ? prefix[i] : cycle[i - prefix.size()];
        sys.define(yvar(i), param_rhs<P>(value));
    }
    return sys;
}

} // namespace elgot
