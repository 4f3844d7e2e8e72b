#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "elgot/flat_system.hpp"

namespace elgot {

template <class Y>
class RationalTree;

template <class Y>
bool bisimilar(const RationalTree<Y>& s, const RationalTree<Y>& t);

inline Signature merge_signatures(const Signature& a, const Signature& b) {
    Signature out = a;
    for (const auto& [op, n] : b.ops()) {
        if (auto ar = out.arity(op); ar && *ar != n)
            raise(Errc::SignatureMismatch, op, "operation carried with two different arities");
        out.add(op, n);
    }
    return out;
}

/// A rational tree over leaf labels Y, represented as a pointed finite system
/// whose states unfold to the tree. Every state is reachable from the root;
/// equality of trees is bisimilarity, never state-graph identity.
template <class Y>
class RationalTree {
public:
    using Label = Y;

    RationalTree(FlatSystem<Y> sys, VarId root) : sys_(std::move(sys)), root_(std::move(root)) {
        ensure_valid(sys_);
        if (!sys_.has_var(root_)) raise(Errc::UnknownVar, root_.name, "root is not a state of the system");
        prune();
    }

    const FlatSystem<Y>& system() const { return sys_; }
    const VarId& root() const { return root_; }
    std::size_t state_count() const { return sys_.size(); }

    bool operator==(const RationalTree& other) const { return bisimilar(*this, other); }

private:
    void prune() {
        std::set<VarId> reach{root_};
        std::deque<VarId> queue{root_};
        while (!queue.empty()) {
            VarId v = queue.front();
            queue.pop_front();
            if (const auto* app = std::get_if<OpApp>(&sys_.rhs_of(v)))
                for (const auto& a : app->args)
                    if (reach.insert(a).second) queue.push_back(a);
        }
        if (reach.size() == sys_.size()) return;
        FlatSystem<Y> kept;
        kept.sig = sys_.sig;
        for (const auto& v : sys_.vars)
            if (reach.count(v)) kept.define(v, sys_.rhs_of(v));
        sys_ = std::move(kept);
    }

    FlatSystem<Y> sys_;
    VarId root_;
};

namespace detail {

/// Partition refinement on the states of a flat system. Two states land in the
/// same class iff they unfold to the same tree. The initial partition groups by
/// rhs constructor, operation symbol and leaf label; each round refines by the
/// classes of the argument states, until stable.
template <class Y>
std::vector<std::size_t> bisimulation_classes(const FlatSystem<Y>& sys) {
    const std::size_t n = sys.vars.size();
    std::map<VarId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(sys.vars[i], i);

    std::map<OpSymbol, std::size_t> op_ids;
    for (std::size_t i = 0; i < n; ++i)
        if (const auto* app = std::get_if<OpApp>(&sys.rhs_of(sys.vars[i])))
            op_ids.emplace(app->op, op_ids.size());

    // Group leaf labels by equality (pairwise; label types may only offer ==).
    std::vector<std::size_t> label_class(n, 0);
    std::vector<std::size_t> label_reps; // state indices of first occurrences
    for (std::size_t i = 0; i < n; ++i) {
        const auto* p = std::get_if<ParamRhs<Y>>(&sys.rhs_of(sys.vars[i]));
        if (!p) continue;
        bool found = false;
        for (std::size_t c = 0; c < label_reps.size(); ++c) {
            const auto& rep = std::get<ParamRhs<Y>>(sys.rhs_of(sys.vars[label_reps[c]]));
            if (rep.value == p->value) {
                label_class[i] = c;
                found = true;
                break;
            }
        }
        if (!found) {
            label_class[i] = label_reps.size();
            label_reps.push_back(i);
        }
    }

    if (n == 0) return {};

    std::vector<std::size_t> cls(n, 0);
    std::size_t count = 0;
    {
        std::map<std::pair<int, std::size_t>, std::size_t> first;
        for (std::size_t i = 0; i < n; ++i) {
            std::pair<int, std::size_t> key;
            if (const auto* app = std::get_if<OpApp>(&sys.rhs_of(sys.vars[i])))
                key = {0, op_ids.at(app->op)};
            else
                key = {1, label_class[i]};
            cls[i] = first.emplace(key, first.size()).first->second;
        }
        count = first.size();
    }

    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> first;
        std::vector<std::size_t> next(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> key{cls[i]};
            if (const auto* app = std::get_if<OpApp>(&sys.rhs_of(sys.vars[i])))
                for (const auto& a : app->args) key.push_back(cls[index.at(a)]);
            next[i] = first.emplace(std::move(key), first.size()).first->second;
        }
        bool stable = first.size() == count; // the new partition always refines the old one
        count = first.size();
        cls = std::move(next);
        if (stable) break;
    }
    return cls;
}

/// Disjoint union of the two pointed systems, plus the root indices.
template <class Y>
struct UnionSystem {
    FlatSystem<Y> sys;
    VarId left_root;
    VarId right_root;
};

template <class Y>
UnionSystem<Y> union_of(const RationalTree<Y>& s, const RationalTree<Y>& t) {
    UnionSystem<Y> u;
    u.sys.sig = merge_signatures(s.system().sig, t.system().sig);
    auto left = tag_vars("A.", s.system());
    auto right = tag_vars("B.", t.system());
    for (const auto& v : left.vars) u.sys.define(v, left.rhs_of(v));
    for (const auto& v : right.vars) u.sys.define(v, right.rhs_of(v));
    u.left_root = VarId("A." + s.root().name);
    u.right_root = VarId("B." + t.root().name);
    return u;
}

} // namespace detail

template <class Y>
bool bisimilar(const RationalTree<Y>& s, const RationalTree<Y>& t) {
    auto u = detail::union_of(s, t);
    auto cls = detail::bisimulation_classes(u.sys);
    std::map<VarId, std::size_t> index;
    for (std::size_t i = 0; i < u.sys.vars.size(); ++i) index.emplace(u.sys.vars[i], i);
    return cls[index.at(u.left_root)] == cls[index.at(u.right_root)];
}

/// Canonical representative: merges bisimilar states; the result has no two
/// distinct bisimilar states and the minimum state count over all
/// representations of the tree. States keep the first-declared name of their
/// class.
template <class Y>
RationalTree<Y> minimize(const RationalTree<Y>& t) {
    const auto& sys = t.system();
    auto cls = detail::bisimulation_classes(sys);
    std::map<VarId, std::size_t> index;
    for (std::size_t i = 0; i < sys.vars.size(); ++i) index.emplace(sys.vars[i], i);

    std::map<std::size_t, VarId> rep; // class -> first-declared state
    for (std::size_t i = 0; i < sys.vars.size(); ++i) rep.try_emplace(cls[i], sys.vars[i]);

    FlatSystem<Y> out;
    out.sig = sys.sig;
    for (std::size_t i = 0; i < sys.vars.size(); ++i) {
        const VarId& v = sys.vars[i];
        if (!(rep.at(cls[i]) == v)) continue;
        const auto& r = sys.rhs_of(v);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            OpApp q{app->op, {}};
            q.args.reserve(app->args.size());
            for (const auto& a : app->args) q.args.push_back(rep.at(cls[index.at(a)]));
            out.define(v, FlatRhs<Y>(std::move(q)));
        } else {
            out.define(v, r);
        }
    }
    return RationalTree<Y>(std::move(out), rep.at(cls[index.at(t.root())]));
}

/// Number of distinct subtrees of the unfolded tree (leaf subtrees included).
template <class Y>
std::size_t subtree_count(const RationalTree<Y>& t) {
    return minimize(t).state_count();
}

/// Single leaf labelled y (the universal arrow into the rational trees).
template <class Y>
RationalTree<Y> eta(Y y) {
    FlatSystem<Y> sys;
    sys.define(VarId("x0"), param_rhs<Y>(std::move(y)));
    return RationalTree<Y>(std::move(sys), VarId("x0"));
}

/// One application of an operation to trees: a fresh root over the disjoint
/// union of the children. The operation's arity is the number of children.
template <class Y>
RationalTree<Y> apply_layer(const OpSymbol& op, const std::vector<RationalTree<Y>>& children) {
    Signature sig;
    for (const auto& c : children) sig = merge_signatures(sig, c.system().sig);
    sig.add(op, children.size()); // raises ArityMismatch if a child disagrees

    FlatSystem<Y> sys;
    sys.sig = sig;
    OpApp root_rhs{op, {}};
    std::vector<FlatSystem<Y>> tagged;
    tagged.reserve(children.size());
    for (std::size_t i = 0; i < children.size(); ++i) {
        tagged.push_back(tag_vars("c" + std::to_string(i) + ".", children[i].system()));
        root_rhs.args.push_back(VarId("c" + std::to_string(i) + "." + children[i].root().name));
    }
    sys.define(VarId("r"), FlatRhs<Y>(std::move(root_rhs)));
    for (auto& part : tagged)
        for (const auto& v : part.vars) sys.define(v, part.rhs_of(v));
    return RationalTree<Y>(std::move(sys), VarId("r"));
}

/// Unique solution of a flat system in the rational trees over Y: each variable
/// is sent to the tree the system itself unfolds to at that state.
template <class Y>
std::map<VarId, RationalTree<Y>> solve_free(const FlatSystem<Y>& e) {
    ensure_valid(e);
    std::map<VarId, RationalTree<Y>> out;
    for (const auto& x : e.vars) out.emplace(x, RationalTree<Y>(e, x));
    return out;
}

/// Unique solution of a flat system whose parameters are themselves rational
/// trees: the parameters' state systems are united into one system g, the
/// equations are redirected into it, and the combined system is solved freely.
template <class Y>
std::map<VarId, RationalTree<Y>> solve_in_R(const FlatSystem<RationalTree<Y>>& e) {
    ensure_valid(e);

    Signature merged = e.sig;
    std::vector<std::pair<VarId, const RationalTree<Y>*>> params;
    for (const auto& x : e.vars)
        if (const auto* p = std::get_if<ParamRhs<RationalTree<Y>>>(&e.rhs_of(x))) {
            merged = merge_signatures(merged, p->value.system().sig);
            params.emplace_back(x, &p->value);
        }

    FlatSystem<Y> g;
    g.sig = merged;
    std::map<VarId, VarId> entry; // variable of e -> root state of its parameter copy
    for (std::size_t j = 0; j < params.size(); ++j) {
        std::string prefix = "P" + std::to_string(j) + ".";
        auto copy = tag_vars(prefix, params[j].second->system());
        for (const auto& v : copy.vars) g.define(v, copy.rhs_of(v));
        entry.emplace(params[j].first, VarId(prefix + params[j].second->root().name));
    }

    FlatSystem<VarId> redirected;
    redirected.sig = merged;
    for (const auto& x : e.vars) {
        const auto& r = e.rhs_of(x);
        if (const auto* app = std::get_if<OpApp>(&r))
            redirected.define(x, FlatRhs<VarId>(*app));
        else
            redirected.define(x, param_rhs<VarId>(entry.at(x)));
    }

    auto paired = pair_systems(g, redirected);
    std::map<VarId, RationalTree<Y>> out;
    for (const auto& x : e.vars) out.emplace(x, RationalTree<Y>(paired, inl_var(x)));
    return out;
}

/// Glues a tree of trees into one tree: every leaf state labelled with an inner
/// tree is replaced by that tree's root.
template <class Y>
RationalTree<Y> substitute(const RationalTree<RationalTree<Y>>& t) {
    const auto& outer = t.system();
    Signature merged = outer.sig;
    for (const auto& x : outer.vars)
        if (const auto* p = std::get_if<ParamRhs<RationalTree<Y>>>(&outer.rhs_of(x)))
            merged = merge_signatures(merged, p->value.system().sig);

    std::map<VarId, VarId> redirect; // dropped outer state -> inner root state
    FlatSystem<Y> glued;
    glued.sig = merged;
    std::size_t copy_index = 0;
    for (const auto& x : outer.vars) {
        const auto& r = outer.rhs_of(x);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            OpApp kept{app->op, {}};
            kept.args.reserve(app->args.size());
            for (const auto& a : app->args) kept.args.push_back(VarId("o." + a.name));
            glued.define(VarId("o." + x.name), FlatRhs<Y>(std::move(kept)));
        } else {
            const auto& inner = std::get<ParamRhs<RationalTree<Y>>>(r).value;
            std::string prefix = "i" + std::to_string(copy_index++) + ".";
            auto copy = tag_vars(prefix, inner.system());
            for (const auto& v : copy.vars) glued.define(v, copy.rhs_of(v));
            redirect.emplace(VarId("o." + x.name), VarId(prefix + inner.root().name));
        }
    }
    auto resolve = [&](const VarId& v) {
        auto it = redirect.find(v);
        return it == redirect.end() ? v : it->second;
    };
    for (auto& [v, r] : glued.rhs)
        if (auto* app = std::get_if<OpApp>(&r))
            for (auto& a : app->args) a = resolve(a);
    return RationalTree<Y>(std::move(glued), resolve(VarId("o." + t.root().name)));
}

// ---------------------------------------------------------------------------
// depth-bounded unfolding

/// Depth-bounded prefix of the unfolded tree. Inner nodes carry the operation
/// symbol; leaves carry either a label or the cut marker for states truncated
/// at the depth bound.
template <class Y>
struct TreeTruncation {
    struct Cut {};
    struct Leaf {
        Y label;
    };
    struct Node {
        OpSymbol op;
        std::vector<TreeTruncation> children;
    };

    std::variant<Node, Leaf, Cut> content;

    static TreeTruncation cut() { return TreeTruncation{Cut{}}; }
    static TreeTruncation leaf(Y y) { return TreeTruncation{Leaf{std::move(y)}}; }
    static TreeTruncation node(OpSymbol op, std::vector<TreeTruncation> children) {
        return TreeTruncation{Node{std::move(op), std::move(children)}};
    }

    bool operator==(const TreeTruncation& other) const {
        if (content.index() != other.content.index()) return false;
        if (std::holds_alternative<Cut>(content)) return true;
        if (const auto* l = std::get_if<Leaf>(&content))
            return l->label == std::get<Leaf>(other.content).label;
        const auto& a = std::get<Node>(content);
        const auto& b = std::get<Node>(other.content);
        if (a.op != b.op || a.children.size() != b.children.size()) return false;
        for (std::size_t i = 0; i < a.children.size(); ++i)
            if (!(a.children[i] == b.children[i])) return false;
        return true;
    }
};

namespace detail {

template <class Y>
TreeTruncation<Y> unfold_state(const FlatSystem<Y>& sys, const VarId& v, std::size_t depth) {
    const auto& r = sys.rhs_of(v);
    if (const auto* p = std::get_if<ParamRhs<Y>>(&r)) return TreeTruncation<Y>::leaf(p->value);
    if (depth == 0) return TreeTruncation<Y>::cut();
    const auto& app = std::get<OpApp>(r);
    std::vector<TreeTruncation<Y>> children;
    children.reserve(app.args.size());
    for (const auto& a : app.args) children.push_back(unfold_state(sys, a, depth - 1));
    return TreeTruncation<Y>::node(app.op, std::move(children));
}

} // namespace detail

template <class Y>
TreeTruncation<Y> unfold(const RationalTree<Y>& t, std::size_t depth) {
    return detail::unfold_state(t.system(), t.root(), depth);
}

/// Decides unfold(s, depth) == unfold(t, depth) without materializing the
/// prefixes (they grow exponentially in the depth). Memoized on state pairs.
template <class Y>
bool equal_unfoldings(const RationalTree<Y>& s, const RationalTree<Y>& t, std::size_t depth) {
    const auto& a = s.system();
    const auto& b = t.system();
    std::map<std::tuple<VarId, VarId, std::size_t>, bool> memo;

    auto eq = [&](auto&& self, const VarId& u, const VarId& v, std::size_t d) -> bool {
        auto key = std::make_tuple(u, v, d);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const auto& ru = a.rhs_of(u);
        const auto& rv = b.rhs_of(v);
        bool result;
        if (const auto* pu = std::get_if<ParamRhs<Y>>(&ru)) {
            const auto* pv = std::get_if<ParamRhs<Y>>(&rv);
            result = pv && pu->value == pv->value;
        } else if (std::holds_alternative<ParamRhs<Y>>(rv)) {
            result = false;
        } else if (d == 0) {
            result = true; // both truncate to the cut marker
        } else {
            const auto& au = std::get<OpApp>(ru);
            const auto& av = std::get<OpApp>(rv);
            result = au.op == av.op && au.args.size() == av.args.size();
            for (std::size_t i = 0; result && i < au.args.size(); ++i)
                result = self(self, au.args[i], av.args[i], d - 1);
        }
        memo.emplace(std::move(key), result);
        return result;
    };
    return eq(eq, s.root(), t.root(), depth);
}

} // namespace elgot
