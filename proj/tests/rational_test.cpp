#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elgot/gen.hpp"
#include "elgot/rational.hpp"
#include "elgot/text_format.hpp"

using namespace elgot;

namespace {

using Tree = RationalTree<std::string>;

FlatSystem<std::string> idempotent_system() {
    FlatSystem<std::string> e;
    e.sig.add("mul", 2);
    e.define("x", op_rhs<std::string>("mul", {"x", "x"}));
    return e;
}

// a*(b*(a*(b*...))) with two leaf states
Tree comb_tree() {
    FlatSystem<std::string> sys;
    sys.sig.add("mul", 2);
    sys.define("x", op_rhs<std::string>("mul", {"la", "y"}));
    sys.define("y", op_rhs<std::string>("mul", {"lb", "x"}));
    sys.define("la", param_rhs<std::string>("a"));
    sys.define("lb", param_rhs<std::string>("b"));
    return Tree(std::move(sys), VarId("x"));
}

// Independent equality oracle: depth-bounded unfolding comparison at the
// product bound, not partition refinement.
bool unfolding_oracle(const Tree& s, const Tree& t) {
    return equal_unfoldings(s, t, s.state_count() * t.state_count());
}

Signature test_sig() {
    Signature sig;
    sig.add("mul", 2);
    sig.add("s", 1);
    return sig;
}

} // namespace

TEST_CASE("the one-state idempotent system solves to a one-state tree") {
    auto sol = solve_free(idempotent_system());
    CHECK(sol.at(VarId("x")).state_count() == 1);
    CHECK(subtree_count(sol.at(VarId("x"))) == 1);
}

TEST_CASE("a parameter equation solves to its leaf") {
    FlatSystem<std::string> e;
    e.define("x", param_rhs<std::string>("a"));
    auto sol = solve_free(e);
    CHECK(bisimilar(sol.at(VarId("x")), eta<std::string>("a")));
}

TEST_CASE("the flattened two-equation example has five distinct subtrees") {
    FlatSystem<std::string> sys;
    sys.sig.add("mul", 2);
    sys.define("x1", op_rhs<std::string>("mul", {"z1", "z2"}));
    sys.define("z1", op_rhs<std::string>("mul", {"x2", "z3"}));
    sys.define("z2", param_rhs<std::string>("b"));
    sys.define("z3", param_rhs<std::string>("a"));
    sys.define("x2", op_rhs<std::string>("mul", {"x1", "z2"}));

    auto tree = solve_free(sys).at(VarId("x1"));
    auto reduced = minimize(tree);

    // oracle: group the five states by unfolding equality at the product bound
    std::vector<Tree> states;
    for (const auto& v : tree.system().vars) states.emplace_back(tree.system(), v);
    std::vector<int> cls(states.size(), -1);
    int classes = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (cls[j] >= 0 && unfolding_oracle(states[i], states[j])) {
                cls[i] = cls[j];
                break;
            }
        if (cls[i] < 0) cls[i] = classes++;
    }
    CHECK(classes == 5);
    CHECK(reduced.state_count() == 5);

    std::size_t internal = 0, leaves = 0;
    for (const auto& v : reduced.system().vars)
        std::holds_alternative<OpApp>(reduced.system().rhs_of(v)) ? ++internal : ++leaves;
    CHECK(internal == 3);
    CHECK(leaves == 2);
}

TEST_CASE("a tree is bisimilar to its one-step unfolding") {
    auto sys = idempotent_system();
    FlatSystem<std::string> dup;
    dup.sig = sys.sig;
    dup.define("x0", op_rhs<std::string>("mul", {"x", "x"})); // duplicate root state
    dup.define("x", op_rhs<std::string>("mul", {"x", "x"}));
    CHECK(bisimilar(Tree(sys, VarId("x")), Tree(dup, VarId("x0"))));
}

TEST_CASE("distinct leaves are not bisimilar") {
    std::vector<Tree> leaves{eta<std::string>("a"), eta<std::string>("b"), eta<std::string>("c")};
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = 0; j < leaves.size(); ++j)
            CHECK(bisimilar(leaves[i], leaves[j]) == (i == j));
    CHECK(subtree_count(eta<std::string>("a")) == 1);
}

TEST_CASE("refinement merges the two-state duplicate of the idempotent tree") {
    FlatSystem<std::string> two;
    two.sig.add("mul", 2);
    two.define("x", op_rhs<std::string>("mul", {"y", "y"}));
    two.define("y", op_rhs<std::string>("mul", {"x", "x"}));
    auto one = Tree(idempotent_system(), VarId("x"));
    auto dup = Tree(two, VarId("x"));
    CHECK(bisimilar(one, dup));
    CHECK(minimize(dup).state_count() == 1);
}

TEST_CASE("an already-minimal tree minimizes to itself") {
    auto t = Tree(idempotent_system(), VarId("x"));
    auto m = minimize(t);
    CHECK(m.state_count() == 1);
    CHECK(bisimilar(t, m));
}

TEST_CASE("the comb tree has exactly four distinct subtrees") {
    auto comb = comb_tree();
    auto reduced = minimize(comb);
    CHECK(reduced.state_count() == 4);
    CHECK(subtree_count(comb) == 4);
    std::size_t internal = 0;
    for (const auto& v : reduced.system().vars)
        if (std::holds_alternative<OpApp>(reduced.system().rhs_of(v))) ++internal;
    CHECK(internal == 2);
}

TEST_CASE("solving with leaf parameters coincides with the free solution") {
    FlatSystem<RationalTree<std::string>> e;
    e.sig.add("mul", 2);
    e.define("x", op_rhs<RationalTree<std::string>>("mul", {"x", "y"}));
    e.define("y", param_rhs<RationalTree<std::string>>(eta<std::string>("a")));

    FlatSystem<std::string> plain;
    plain.sig.add("mul", 2);
    plain.define("x", op_rhs<std::string>("mul", {"x", "y"}));
    plain.define("y", param_rhs<std::string>("a"));

    auto in_r = solve_in_R(e);
    auto free = solve_free(plain);
    CHECK(bisimilar(in_r.at(VarId("x")), free.at(VarId("x"))));
    CHECK(bisimilar(in_r.at(VarId("y")), free.at(VarId("y"))));
}

TEST_CASE("a parameter tree is returned as-is") {
    auto comb = comb_tree();
    FlatSystem<RationalTree<std::string>> e;
    e.sig.add("mul", 2);
    e.define("x", param_rhs<RationalTree<std::string>>(comb));
    auto sol = solve_in_R(e);
    CHECK(bisimilar(sol.at(VarId("x")), comb));
}

TEST_CASE("solving without parameters matches the free solution") {
    FlatSystem<RationalTree<std::string>> e;
    e.sig.add("mul", 2);
    e.define("x", op_rhs<RationalTree<std::string>>("mul", {"x", "x"}));
    auto sol = solve_in_R(e);
    auto free = solve_free(idempotent_system());
    CHECK(bisimilar(minimize(sol.at(VarId("x"))), minimize(free.at(VarId("x")))));
}

TEST_CASE("one operation layer over leaves") {
    auto t = apply_layer<std::string>("mul", {eta<std::string>("a"), eta<std::string>("b")});
    CHECK(serialize_truncation(unfold(t, 3)) == "(mul a b)");

    auto idem = Tree(idempotent_system(), VarId("x"));
    auto once = apply_layer<std::string>("mul", {idem, idem});
    auto twice = apply_layer<std::string>("mul", {once, once});
    CHECK(bisimilar(once, twice));
    CHECK(bisimilar(once, idem));

    auto constant = apply_layer<std::string>("c", {});
    CHECK(serialize_truncation(unfold(constant, 2)) == "(c)");
}

TEST_CASE("layer application checks arities against the children") {
    auto idem = Tree(idempotent_system(), VarId("x"));
    CHECK_THROWS_AS(apply_layer<std::string>("mul", {idem}), Error);
}

TEST_CASE("substitution satisfies the unit laws") {
    Rng rng(42);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b", "c"};
    for (int i = 0; i < 40; ++i) {
        auto inner = random_tree(rng, sig, labels);
        CHECK(bisimilar(substitute(eta(inner)), inner)); // left unit

        auto outer = random_tree(rng, sig, labels);
        auto wrapped = rename_params<RationalTree<std::string>>(
            [](const std::string& y) { return eta(y); }, outer.system());
        auto unwrapped = substitute(
            RationalTree<RationalTree<std::string>>(std::move(wrapped), outer.root()));
        CHECK(bisimilar(unwrapped, outer)); // right unit
    }
}

TEST_CASE("substituting a depth-two comb equals the direct construction") {
    auto ab = apply_layer<std::string>("mul", {eta<std::string>("a"), eta<std::string>("b")});
    auto nested = apply_layer<RationalTree<std::string>>("mul", {eta(ab), eta(eta<std::string>("c"))});
    auto direct = apply_layer<std::string>("mul", {ab, eta<std::string>("c")});
    CHECK(bisimilar(substitute(nested), direct));
}

TEST_CASE("substitution is associative") {
    Rng rng(77);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b"};
    for (int i = 0; i < 25; ++i) {
        // three-level tree: outer skeleton with doubly-nested leaves
        auto leaf = [&] { return eta(random_nested_tree(rng, sig, labels, 1, 3)); };
        RationalTree<RationalTree<RationalTree<std::string>>> triple =
            rng.coin() ? apply_layer<RationalTree<RationalTree<std::string>>>("mul", {leaf(), leaf()})
                       : apply_layer<RationalTree<RationalTree<std::string>>>("s", {leaf()});

        auto lhs = substitute(substitute(triple));
        auto mapped = rename_params<RationalTree<std::string>>(
            [](const RationalTree<RationalTree<std::string>>& t) { return substitute(t); },
            triple.system());
        auto rhs = substitute(RationalTree<RationalTree<std::string>>(std::move(mapped), triple.root()));
        CHECK(bisimilar(lhs, rhs));
    }
}

TEST_CASE("unfolding a leaf ignores the depth bound") {
    for (std::size_t k : {0u, 1u, 5u})
        CHECK(serialize_truncation(unfold(eta<std::string>("a"), k)) == "a");
}

TEST_CASE("unfolding the idempotent tree at depth one") {
    auto t = Tree(idempotent_system(), VarId("x"));
    CHECK(serialize_truncation(unfold(t, 1)) == "(mul ^ ^)");
    CHECK(serialize_truncation(unfold(t, 0)) == "^");
}

TEST_CASE("unfolding the comb at depth three matches the hand expansion") {
    CHECK(serialize_truncation(unfold(comb_tree(), 3)) == "(mul a (mul b (mul a ^)))");
}

TEST_CASE("bounded unfolding equality is computed faithfully") {
    Rng rng(11);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        auto s = random_tree(rng, sig, labels, 4);
        auto t = random_tree(rng, sig, labels, 4);
        for (std::size_t d : {0u, 1u, 2u, 3u})
            CHECK(equal_unfoldings(s, t, d) == (unfold(s, d) == unfold(t, d)));
    }
}

TEST_CASE("bisimilarity is an equivalence relation") {
    Rng rng(123);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        auto s = random_tree(rng, sig, labels);
        auto t = random_tree(rng, sig, labels);
        auto u = random_tree(rng, sig, labels);
        CHECK(bisimilar(s, s));
        CHECK(bisimilar(s, t) == bisimilar(t, s));
        if (bisimilar(s, t) && bisimilar(t, u)) CHECK(bisimilar(s, u));
    }
}

TEST_CASE("bisimilarity agrees with unfolding equality at the product bound") {
    Rng rng(321);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b"};
    for (int i = 0; i < 200; ++i) {
        auto s = random_tree(rng, sig, labels);
        auto t = random_tree(rng, sig, labels);
        CHECK(bisimilar(s, t) == unfolding_oracle(s, t));
    }
}

TEST_CASE("minimization is idempotent and preserves the subtree count") {
    Rng rng(555);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b", "c"};
    for (int i = 0; i < 60; ++i) {
        auto t = random_tree(rng, sig, labels);
        auto m = minimize(t);
        CHECK(bisimilar(t, m));
        auto mm = minimize(m);
        CHECK(mm.state_count() == m.state_count());
        CHECK(structurally_equal(mm.system(), m.system()));
        CHECK(mm.root() == m.root());
        CHECK(subtree_count(m) == subtree_count(t));
        // no two distinct states of the output are bisimilar
        for (const auto& v : m.system().vars)
            for (const auto& w : m.system().vars)
                if (!(v == w))
                    CHECK_FALSE(bisimilar(Tree(m.system(), v), Tree(m.system(), w)));
    }
}

TEST_CASE("the free solution satisfies every equation up to bisimilarity") {
    Rng rng(777);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        auto e = random_system<std::string>(
            rng, sig, [&](Rng& r) { return labels[r.index(labels.size())]; }, 5);
        auto sol = solve_free(e);
        for (const auto& x : e.vars) {
            const auto& r = e.rhs_of(x);
            if (const auto* app = std::get_if<OpApp>(&r)) {
                std::vector<Tree> children;
                for (const auto& a : app->args) children.push_back(sol.at(a));
                CHECK(bisimilar(sol.at(x), apply_layer(app->op, children)));
            } else {
                CHECK(bisimilar(sol.at(x), eta(std::get<ParamRhs<std::string>>(r).value)));
            }
        }
    }
}

TEST_CASE("solutions are unique: a renamed copy solves to bisimilar trees") {
    Rng rng(888);
    auto sig = test_sig();
    std::vector<std::string> labels{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        auto e = random_system<std::string>(
            rng, sig, [&](Rng& r) { return labels[r.index(labels.size())]; }, 5);
        auto renamed = tag_vars("w.", e);
        auto sol = solve_free(e);
        auto sol2 = solve_free(renamed);
        for (const auto& x : e.vars)
            CHECK(bisimilar(sol.at(x), sol2.at(VarId("w." + x.name))));
    }
}

TEST_CASE("unreachable states are pruned at construction") {
    FlatSystem<std::string> sys;
    sys.sig.add("mul", 2);
    sys.define("x", op_rhs<std::string>("mul", {"x", "x"}));
    sys.define("junk", param_rhs<std::string>("a"));
    Tree t(sys, VarId("x"));
    CHECK(t.state_count() == 1);
    CHECK_FALSE(t.system().has_var(VarId("junk")));
}

TEST_CASE("tree files round-trip") {
    auto comb = comb_tree();
    auto text = serialize_tree(comb);
    std::istringstream in(text);
    auto parsed = parse_tree(in);
    CHECK(bisimilar(parsed, comb));
    CHECK(serialize_tree(parsed) == text);
}
