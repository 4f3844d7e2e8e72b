#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "elgot/diagnostics.hpp"
#include "elgot/signature.hpp"

namespace elgot {

/// Right-hand side "sigma(x1,...,xn)": one operation applied to recursion variables.
struct OpApp {
    OpSymbol op;
    std::vector<VarId> args;

    bool operator==(const OpApp&) const = default;
};

/// Right-hand side that is a bare parameter (an element of the target object).
template <class P>
struct ParamRhs {
    P value;

    bool operator==(const ParamRhs&) const = default;
};

template <class P>
using FlatRhs = std::variant<OpApp, ParamRhs<P>>;

template <class P>
FlatRhs<P> op_rhs(OpSymbol op, std::vector<VarId> args) {
    return FlatRhs<P>(OpApp{std::move(op), std::move(args)});
}

template <class P>
FlatRhs<P> param_rhs(P value) {
    return FlatRhs<P>(ParamRhs<P>{std::move(value)});
}

/// A finite system of flat recursive equations: every variable is bound either
/// to a single operation applied to variables, or to a parameter of type P.
/// Variables keep their declaration order; rhs must be total on vars.
template <class P>
struct FlatSystem {
    using Param = P;

    Signature sig;
    std::vector<VarId> vars;
    std::map<VarId, FlatRhs<P>> rhs;

    void define(VarId x, FlatRhs<P> r) {
        if (!rhs.count(x)) vars.push_back(x);
        rhs.insert_or_assign(std::move(x), std::move(r));
    }

    bool has_var(const VarId& x) const { return rhs.count(x) != 0; }

    const FlatRhs<P>& rhs_of(const VarId& x) const {
        auto it = rhs.find(x);
        if (it == rhs.end()) raise(Errc::UnknownVar, x.name, "variable not bound in system");
        return it->second;
    }

    std::size_t size() const { return vars.size(); }
};

/// Structural equality: same signature, same variable order, identical right-hand
/// sides. (Parameter values compare with P's own equality.)
template <class P>
bool structurally_equal(const FlatSystem<P>& a, const FlatSystem<P>& b) {
    return a.sig == b.sig && a.vars == b.vars && a.rhs == b.rhs;
}

/// Assignment of a carrier element to every variable of a system.
template <class A>
struct Solution {
    std::map<VarId, A> assignment;

    const A& at(const VarId& x) const {
        auto it = assignment.find(x);
        if (it == assignment.end()) raise(Errc::UnknownVar, x.name, "variable not assigned");
        return it->second;
    }

    void set(VarId x, A value) { assignment.insert_or_assign(std::move(x), std::move(value)); }

    bool operator==(const Solution&) const = default;
};

/// Deterministic fresh-name source. Names carry the reserved "$k" prefix so they
/// can never collide with user variables from system files.
class FreshCounter {
public:
    explicit FreshCounter(std::uint64_t start = 1) : next_(start) {}

    VarId fresh() { return VarId("$k" + std::to_string(next_++)); }

    std::uint64_t state() const { return next_; }

private:
    std::uint64_t next_;
};

// ---------------------------------------------------------------------------
// validate

template <class P>
std::vector<Diagnostic> validate(const FlatSystem<P>& sys) {
    std::vector<Diagnostic> out;
    std::set<VarId> seen;
    for (const auto& v : sys.vars) {
        if (!seen.insert(v).second)
            out.push_back({Errc::DuplicateVar, v.name, "variable declared more than once"});
    }
    for (const auto& v : sys.vars) {
        auto it = sys.rhs.find(v);
        if (it == sys.rhs.end()) {
            out.push_back({Errc::MissingRhs, v.name, "variable has no equation"});
            continue;
        }
        if (const auto* app = std::get_if<OpApp>(&it->second)) {
            auto ar = sys.sig.arity(app->op);
            if (!ar) {
                out.push_back({Errc::UnknownOp, v.name, "operation '" + app->op + "' not in signature"});
            } else if (*ar != app->args.size()) {
                out.push_back({Errc::ArityMismatch, v.name,
                               "operation '" + app->op + "' expects " + std::to_string(*ar) +
                                   " arguments, got " + std::to_string(app->args.size())});
            }
            for (const auto& a : app->args) {
                if (!seen.count(a))
                    out.push_back({Errc::UnknownVar, v.name, "argument '" + a.name + "' not declared"});
            }
        }
    }
    return out;
}

template <class P>
bool is_valid(const FlatSystem<P>& sys) {
    return validate(sys).empty();
}

template <class P>
void ensure_valid(const FlatSystem<P>& sys) {
    auto diags = validate(sys);
    if (!diags.empty()) raise(diags.front().code, diags.front().where, diags.front().message);
}

// ---------------------------------------------------------------------------
// rename_params (the parameter-renaming combinator "h after e")

/// Applies h to every parameter; variables and operation nodes are untouched.
/// h may change the parameter type.
template <class Q, class P, class Fn>
FlatSystem<Q> rename_params(Fn&& h, const FlatSystem<P>& e) {
    FlatSystem<Q> out;
    out.sig = e.sig;
    out.vars = e.vars;
    for (const auto& [x, r] : e.rhs) {
        if (const auto* app = std::get_if<OpApp>(&r)) {
            out.rhs.emplace(x, FlatRhs<Q>(*app));
        } else {
            const auto& p = std::get<ParamRhs<P>>(r).value;
            out.rhs.emplace(x, param_rhs<Q>(h(p)));
        }
    }
    return out;
}

/// Map-backed renaming; raises MissingParamImage when the map is not total on
/// the parameters that actually occur in e.
template <class P, class Q>
FlatSystem<Q> rename_params(const std::map<P, Q>& h, const FlatSystem<P>& e) {
    return rename_params<Q>(
        [&](const P& p) -> const Q& {
            auto it = h.find(p);
            if (it == h.end())
                raise(Errc::MissingParamImage, "", "no image for a parameter occurring in the system");
            return it->second;
        },
        e);
}

// ---------------------------------------------------------------------------
// pair (simultaneous-recursion combinator "f boxplus e")

inline VarId inl_var(const VarId& x) { return VarId("L." + x.name); }
inline VarId inr_var(const VarId& y) { return VarId("R." + y.name); }

enum class TagPolicy {
    Tag,     // prefix "L." / "R." onto the two variable sets (always safe)
    Untagged // keep original names; VarClash if the sets intersect
};

/// Combines e (variables X, parameters = f's variables) with f (variables Y,
/// parameters P) into one system on X + Y:
///   - x with e(x) = sigma(args)   becomes sigma(args) with args tagged into X
///   - x with e(x) = param y       takes f's equation for y, args tagged into Y
///   - y                           keeps f's equation, args tagged into Y
template <class P>
FlatSystem<P> pair_systems(const FlatSystem<P>& f, const FlatSystem<VarId>& e,
                           TagPolicy policy = TagPolicy::Tag) {
    if (!(f.sig == e.sig))
        raise(Errc::SignatureMismatch, "", "pairing requires both systems over one signature");

    auto tag_left = [&](const VarId& x) { return policy == TagPolicy::Tag ? inl_var(x) : x; };
    auto tag_right = [&](const VarId& y) { return policy == TagPolicy::Tag ? inr_var(y) : y; };

    if (policy == TagPolicy::Untagged) {
        for (const auto& x : e.vars)
            if (f.has_var(x))
                raise(Errc::VarClash, x.name, "variable bound in both systems and renaming is forbidden");
    }

    auto right_image = [&](const FlatRhs<P>& r) -> FlatRhs<P> {
        if (const auto* app = std::get_if<OpApp>(&r)) {
            OpApp shifted{app->op, {}};
            shifted.args.reserve(app->args.size());
            for (const auto& a : app->args) shifted.args.push_back(tag_right(a));
            return FlatRhs<P>(std::move(shifted));
        }
        return r;
    };

    FlatSystem<P> out;
    out.sig = f.sig;
    for (const auto& x : e.vars) {
        const auto& r = e.rhs_of(x);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            OpApp shifted{app->op, {}};
            shifted.args.reserve(app->args.size());
            for (const auto& a : app->args) shifted.args.push_back(tag_left(a));
            out.define(tag_left(x), FlatRhs<P>(std::move(shifted)));
        } else {
            const VarId& y = std::get<ParamRhs<VarId>>(r).value;
            if (!f.has_var(y))
                raise(Errc::UnknownVar, y.name, "parameter of e is not a variable of f");
            out.define(tag_left(x), right_image(f.rhs_of(y)));
        }
    }
    for (const auto& y : f.vars) out.define(tag_right(y), right_image(f.rhs_of(y)));
    return out;
}

// ---------------------------------------------------------------------------
// is_equation_morphism

/// Decides whether h: X -> Y is a morphism of equations from e (on X) to f (on
/// Y): renaming every variable of e through h must yield exactly the equation
/// f assigns to the image.
template <class P>
bool is_equation_morphism(const std::map<VarId, VarId>& h, const FlatSystem<P>& e,
                          const FlatSystem<P>& f) {
    for (const auto& x : e.vars) {
        auto hi = h.find(x);
        if (hi == h.end()) raise(Errc::UnknownVar, x.name, "renaming not total on the source variables");
        if (!f.has_var(hi->second)) return false;
        const auto& ex = e.rhs_of(x);
        const auto& fy = f.rhs_of(hi->second);
        if (const auto* app = std::get_if<OpApp>(&ex)) {
            const auto* fapp = std::get_if<OpApp>(&fy);
            if (!fapp || fapp->op != app->op || fapp->args.size() != app->args.size()) return false;
            for (std::size_t i = 0; i < app->args.size(); ++i) {
                auto ai = h.find(app->args[i]);
                if (ai == h.end())
                    raise(Errc::UnknownVar, app->args[i].name, "renaming not total on the source variables");
                if (!(ai->second == fapp->args[i])) return false;
            }
        } else {
            const auto* fp = std::get_if<ParamRhs<P>>(&fy);
            if (!fp) return false;
            if (!(std::get<ParamRhs<P>>(ex).value == fp->value)) return false;
        }
    }
    return true;
}

/// Applies a prefix tag to every variable of a system (parameters untouched).
template <class P>
FlatSystem<P> tag_vars(const std::string& prefix, const FlatSystem<P>& sys) {
    auto tag = [&](const VarId& v) { return VarId(prefix + v.name); };
    FlatSystem<P> out;
    out.sig = sys.sig;
    for (const auto& v : sys.vars) {
        const auto& r = sys.rhs_of(v);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            OpApp shifted{app->op, {}};
            shifted.args.reserve(app->args.size());
            for (const auto& a : app->args) shifted.args.push_back(tag(a));
            out.define(tag(v), FlatRhs<P>(std::move(shifted)));
        } else {
            out.define(tag(v), r);
        }
    }
    return out;
}

} // namespace elgot
