#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "elgot/flat_system.hpp"

namespace elgot {

/// Finite signature term over variables and parameters (used as the non-flat
/// input of flatten; flat systems never store these).
struct Term {
    struct Op {
        OpSymbol op;
        std::vector<Term> args;
        bool operator==(const Op&) const = default;
    };
    struct Var {
        VarId var;
        bool operator==(const Var&) const = default;
    };
    struct Param {
        std::string value;
        bool operator==(const Param&) const = default;
    };

    std::variant<Op, Var, Param> node;

    bool operator==(const Term&) const = default;

    static Term op(OpSymbol o, std::vector<Term> args) {
        return Term{Op{std::move(o), std::move(args)}};
    }
    static Term var(VarId v) { return Term{Var{std::move(v)}}; }
    static Term param(std::string p) { return Term{Param{std::move(p)}}; }
};

struct FlattenResult {
    FlatSystem<std::string> system;
    std::map<VarId, VarId> embedding; // original variable -> its state in the flat system
};

namespace detail {

inline VarId flatten_sub(const Term& t, const std::vector<std::pair<VarId, Term>>& defs,
                         FlatSystem<std::string>& out, FreshCounter& counter);

inline FlatRhs<std::string> flatten_top(const VarId& at, const Term& t,
                                        const std::vector<std::pair<VarId, Term>>& defs,
                                        FlatSystem<std::string>& out, FreshCounter& counter) {
    if (const auto* op = std::get_if<Term::Op>(&t.node)) {
        OpApp app{op->op, {}};
        app.args.reserve(op->args.size());
        for (const auto& a : op->args) app.args.push_back(flatten_sub(a, defs, out, counter));
        return FlatRhs<std::string>(std::move(app));
    }
    if (const auto* p = std::get_if<Term::Param>(&t.node))
        return param_rhs<std::string>(p->value);
    // A bare variable on the right: the flat shape has no alias equations, and
    // x ~ y is not guarded, so it is rejected rather than silently rewritten.
    raise(Errc::UnguardedEquation, at.name,
          "right-hand side is a bare variable; flat systems need an operation or a parameter");
}

inline VarId flatten_sub(const Term& t, const std::vector<std::pair<VarId, Term>>& defs,
                         FlatSystem<std::string>& out, FreshCounter& counter) {
    if (const auto* v = std::get_if<Term::Var>(&t.node)) return v->var;
    VarId z = counter.fresh();
    auto position = out.vars.size(); // declared ahead of the auxiliaries it spawns
    auto r = flatten_top(z, t, defs, out, counter);
    out.vars.insert(out.vars.begin() + static_cast<std::ptrdiff_t>(position), z);
    out.rhs.emplace(z, std::move(r));
    return z;
}

} // namespace detail

/// Lowers a system of arbitrary (non-flat) term equations to a flat system,
/// introducing one fresh auxiliary variable per proper subterm occurrence.
/// Equal subterms are deliberately not shared. Original variables keep their
/// names; the returned embedding records them.
inline FlattenResult flatten(const Signature& sig, const std::vector<std::pair<VarId, Term>>& defs,
                             FreshCounter& counter) {
    FlattenResult res;
    res.system.sig = sig;
    for (const auto& [x, t] : defs) {
        if (x.name.rfind("$k", 0) == 0)
            raise(Errc::DuplicateVar, x.name, "the \"$k\" prefix is reserved for fresh variables");
        if (res.system.has_var(x))
            raise(Errc::DuplicateVar, x.name, "variable defined more than once");
        auto position = res.system.vars.size();
        auto r = detail::flatten_top(x, t, defs, res.system, counter);
        res.system.vars.insert(res.system.vars.begin() + static_cast<std::ptrdiff_t>(position), x);
        res.system.rhs.emplace(x, std::move(r));
        res.embedding.emplace(x, x);
    }
    ensure_valid(res.system);
    return res;
}

inline FlattenResult flatten(const Signature& sig, const std::vector<std::pair<VarId, Term>>& defs) {
    FreshCounter counter;
    return flatten(sig, defs, counter);
}

/// Structurally expands a flat-system variable back into a term, treating every
/// variable listed in `originals` as opaque. Auxiliaries introduced by flatten
/// form a finite dag, so the expansion terminates.
inline Term expand_back(const FlatSystem<std::string>& sys, const VarId& x,
                        const std::set<VarId>& originals) {
    const auto& r = sys.rhs_of(x);
    if (const auto* p = std::get_if<ParamRhs<std::string>>(&r)) return Term::param(p->value);
    const auto& app = std::get<OpApp>(r);
    std::vector<Term> args;
    args.reserve(app.args.size());
    for (const auto& a : app.args) {
        if (originals.count(a))
            args.push_back(Term::var(a));
        else
            args.push_back(expand_back(sys, a, originals));
    }
    return Term::op(app.op, std::move(args));
}

} // namespace elgot
