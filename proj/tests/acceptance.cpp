// Acceptance suite: runs every top-level criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any criterion
// fails. The path of the command-line binary is expected as argv[1] (used by
// the determinism criterion; that criterion fails when the path is missing).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "elgot/em.hpp"
#include "elgot/laws.hpp"
#include "elgot/text_format.hpp"

using namespace elgot;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> check; // fills a detail string
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Split `total` trials across a few independently drawn algebras.
template <class MakeAlg>
std::size_t suite_failures(MakeAlg&& make, std::uint64_t seed_base, std::size_t total,
                           const std::string& which) {
    std::size_t failures = 0;
    const std::size_t blocks = 5;
    for (std::size_t b = 0; b < blocks; ++b) {
        Rng rng(seed_base + b);
        auto alg = make(rng);
        std::size_t trials = total / blocks;
        SuiteReport r;
        if (which == "solution")
            r = run_solution_suite(alg, seed_base * 31 + b, trials);
        else if (which == "functoriality")
            r = run_functoriality_suite(alg, seed_base * 37 + b, trials);
        else
            r = run_compositionality_suite(alg, seed_base * 41 + b, trials);
        failures += r.failures.size();
    }
    return failures;
}

template <class Fn>
std::size_t all_variant_failures(const std::string& which, std::uint64_t seed, Fn&& log) {
    std::size_t total = 0;
    auto note = [&](const char* name, std::size_t f) {
        total += f;
        log(name, f);
    };
    note("unary", suite_failures([](Rng& r) { return random_unary_algebra(r); }, seed + 1, 500, which));
    note("kleene", suite_failures([](Rng& r) { return random_kleene_algebra(r); }, seed + 2, 500, which));
    note("banach", suite_failures([](Rng& r) { return random_banach_algebra(r); }, seed + 3, 500, which));
    note("join",
         suite_failures([](Rng& r) { return random_join_algebra(r, random_signature(r)); }, seed + 4,
                        500, which));
    note("extended",
         suite_failures([](Rng& r) { return random_extended_algebra(r); }, seed + 5, 500, which));
    note("free-rational",
         suite_failures([](Rng& r) { return random_free_rational_algebra(r); }, seed + 6, 500, which));
    return total;
}

JoinAlgebra diamond_lattice() {
    FiniteAlgebra base;
    base.carrier = {"bot", "a", "b", "top"};
    base.bottom = "bot";
    auto put = [&](const char* x, const char* y, const char* z) {
        base.joins[{Element(x), Element(y)}] = z;
    };
    put("bot", "bot", "bot");
    put("bot", "a", "a");
    put("bot", "b", "b");
    put("bot", "top", "top");
    put("a", "a", "a");
    put("a", "b", "top");
    put("a", "top", "top");
    put("b", "b", "b");
    put("b", "top", "top");
    put("top", "top", "top");
    base.sig.add("mul", 2);
    return JoinAlgebra(std::move(base));
}

BanachAlgebra avg4_algebra() {
    MetricAlgebra m;
    m.epsilon = Rational{1, 2};
    m.tolerance = 1e-9;
    m.ops.emplace("avg4", parse_affine("(x+y)/4", "<acceptance>"));
    m.sig.add("avg4", 2);
    return BanachAlgebra(std::move(m));
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

bool criterion_solution_square(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    std::size_t failures = all_variant_failures("solution", 100, [](const char*, std::size_t) {});
    double elapsed = seconds_since(start);
    char buf[128];
    std::snprintf(buf, sizeof buf, "3000 systems (500 per kind), %zu failures, %.2fs", failures,
                  elapsed);
    detail = buf;
    return failures == 0 && elapsed < 10.0;
}

bool criterion_functoriality(std::string& detail) {
    std::size_t failures = all_variant_failures("functoriality", 200, [](const char*, std::size_t) {});
    detail = "500 morphism triples per kind, " + std::to_string(failures) + " counterexamples";
    return failures == 0;
}

bool criterion_compositionality(std::string& detail) {
    std::size_t failures =
        all_variant_failures("compositionality", 300, [](const char*, std::size_t) {});
    detail = "500 pairs per kind, both equalities, " + std::to_string(failures) + " counterexamples";
    return failures == 0;
}

bool criterion_unary_oracle(std::string& detail) {
    Rng rng(4100);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        auto unary = random_unary_algebra(rng);
        auto kleene = kleene_from_unary(unary);
        auto e = random_system_for(rng, unary);
        auto su = unary.dagger(e);
        auto sk = kleene.dagger(e);
        for (const auto& x : e.vars)
            if (su.at(x) != sk.at(x)) ++mismatches;
    }
    detail = "1000 systems, closed form vs least solution, " + std::to_string(mismatches) +
             " mismatches";
    return mismatches == 0;
}

bool criterion_join_oracle(std::string& detail) {
    Rng rng(5100);
    std::size_t mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        auto sig = random_signature(rng);
        auto join = random_join_algebra(rng, sig);
        auto kleene = kleene_from_join(join, sig);
        auto e = random_system_for(rng, join);
        auto s_join = join.dagger(e);
        auto s_kleene = kleene.dagger(e);
        auto trees = solve_free(e);
        for (const auto& x : e.vars) {
            Element acc = join.bottom();
            auto reduced = minimize(trees.at(x));
            for (const auto& v : reduced.system().vars)
                if (const auto* p =
                        std::get_if<ParamRhs<std::string>>(&reduced.system().rhs_of(v)))
                    acc = join.base().join(acc, p->value);
            if (!(s_join.at(x) == s_kleene.at(x) && s_kleene.at(x) == acc)) ++mismatches;
        }
    }
    detail = "500 systems, three routes, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

bool criterion_uniqueness(std::string& detail) {
    Rng rng(6100);
    Signature sig;
    sig.add("mul", 2);
    sig.add("s", 1);
    std::vector<std::string> labels{"a", "b", "c"};
    std::size_t mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        auto e = random_system<std::string>(
            rng, sig, [&](Rng& r) { return labels[r.index(labels.size())]; });
        auto renamed = tag_vars("w.", e);
        auto sol = solve_free(e);
        auto sol2 = solve_free(renamed);
        for (const auto& x : e.vars)
            if (!bisimilar(sol.at(x), sol2.at(VarId("w." + x.name)))) ++mismatches;
    }
    detail = "200 systems vs renamed copies, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

bool criterion_banach_streams(std::string& detail) {
    auto banach = avg4_algebra();
    Rng rng(7100);
    std::size_t bad = 0;
    std::size_t max_iters = 0;
    for (int i = 0; i < 20; ++i) {
        double a = rng.unit();
        double b = rng.unit();
        {
            DaggerStats st;
            auto sol = banach.dagger(build_stream_system<double>({}, {a}, "avg4"), st);
            max_iters = std::max(max_iters, st.iterations);
            if (!(std::abs(sol.at(VarId("x0")) - a / 3.0) < 1e-9 && st.iterations <= 40)) ++bad;
        }
        {
            DaggerStats st;
            auto sol = banach.dagger(build_stream_system<double>({}, {a, b}, "avg4"), st);
            max_iters = std::max(max_iters, st.iterations);
            if (!(std::abs(sol.at(VarId("x0")) - (4 * a + b) / 15.0) < 1e-9 && st.iterations <= 40))
                ++bad;
        }
    }
    detail = "20 draws, both cycle shapes, max " + std::to_string(max_iters) +
             " iterations, " + std::to_string(bad) + " out of tolerance";
    return bad == 0;
}

bool criterion_minimization(std::string& detail) {
    FlatSystem<std::string> comb;
    comb.sig.add("mul", 2);
    comb.define("x", op_rhs<std::string>("mul", {"la", "y"}));
    comb.define("y", op_rhs<std::string>("mul", {"lb", "x"}));
    comb.define("la", param_rhs<std::string>("a"));
    comb.define("lb", param_rhs<std::string>("b"));
    auto comb_states = minimize(RationalTree<std::string>(comb, VarId("x"))).state_count();

    Rng rng(8100);
    Signature sig;
    sig.add("mul", 2);
    sig.add("s", 1);
    std::vector<std::string> labels{"a", "b"};
    std::size_t disagreements = 0;
    for (int i = 0; i < 200; ++i) {
        auto s = random_tree(rng, sig, labels);
        auto t = random_tree(rng, sig, labels);
        bool by_refinement = bisimilar(s, t);
        bool by_unfolding = equal_unfoldings(s, t, s.state_count() * t.state_count());
        if (by_refinement != by_unfolding) ++disagreements;
    }
    detail = "comb minimizes to " + std::to_string(comb_states) + " states; 200 pairs, " +
             std::to_string(disagreements) + " refinement/unfolding disagreements";
    return comb_states == 4 && disagreements == 0;
}

bool criterion_em_laws(std::string& detail) {
    auto em = elgot_to_em(diamond_lattice());
    auto report = check_em_laws(em, 300, 9100);
    bool clean = report.unit.failures.empty() && report.multiplication.failures.empty();

    // sensitivity: one flipped evaluation cell must be caught within 300 trials
    bool caught = false;
    for (std::size_t i = 0; i < 300 && !caught; ++i) {
        Rng rng(derive_seed(9100, i));
        auto nested = random_nested_tree(rng, em.sig, em.carrier);
        if (nested.system().size() < 2) continue;
        for (const auto& v : nested.system().vars) {
            const auto* leaf =
                std::get_if<ParamRhs<RationalTree<std::string>>>(&nested.system().rhs_of(v));
            if (!leaf) continue;
            if (!std::holds_alternative<OpApp>(leaf->value.system().rhs_of(leaf->value.root())))
                continue;
            for (const auto& wrong : em.carrier) {
                if (wrong == em.evaluate(leaf->value)) continue;
                auto candidate = with_flipped_cell(em, leaf->value, wrong);
                if (!check_em_laws(candidate, 300, 9100).multiplication.failures.empty()) {
                    caught = true;
                    break;
                }
            }
            if (caught) break;
        }
    }
    detail = std::string("unit exact, 300 multiplication trials ") +
             (clean ? "clean" : "FAILED") + ", flipped cell " +
             (caught ? "caught" : "NOT caught");
    return clean && caught;
}

bool criterion_counterexample(std::string& detail) {
    FiniteAlgebra base;
    base.sig.add("s", 1);
    base.carrier = {"0", "1"};
    base.tables["s"] = {{{"0"}, "0"}, {{"1"}, "1"}};
    base.unary_fixpoint = "0";
    UnaryAlgebra alg(std::move(base));

    auto const_one = [](const std::string&) { return std::string("1"); };
    bool hom = check_homomorphism(const_one, alg, alg);

    FlatSystem<std::string> e;
    e.sig.add("s", 1);
    e.define("x", op_rhs<std::string>("s", {"x"}));
    bool preserves = check_solution_preserving(const_one, alg, alg, e);

    detail = std::string("constant map: homomorphism=") + (hom ? "yes" : "NO") +
             ", preserves solutions=" + (preserves ? "YES (wrong)" : "no");
    return hom && !preserves;
}

bool criterion_canonical_solution(std::string& detail) {
    bool ok = true;
    std::size_t kleene_iters = 0;

    auto exact = [&](const auto& alg) {
        auto canon = canonical_system(alg);
        auto sol = alg.dagger(canon.system);
        for (const auto& [v, expected] : canon.expected.assignment)
            if (!alg.equal(sol.at(v), expected)) return false;
        return true;
    };

    Rng rng(1111);
    auto unary = random_unary_algebra(rng);
    auto join = diamond_lattice();
    auto kleene = random_kleene_algebra(rng);
    ok = ok && exact(unary) && exact(join) && exact(kleene);

    {
        DaggerStats st;
        auto canon = canonical_system(kleene);
        kleene.dagger(canon.system, st);
        kleene_iters = st.iterations;
        ok = ok && st.iterations <= 2;
    }

    // a small extension: two-element chain below one label
    {
        FiniteAlgebra two;
        two.carrier = {"zero", "one"};
        two.bottom = "zero";
        two.sig.add("mul", 2);
        two.joins[{Element("zero"), Element("zero")}] = "zero";
        two.joins[{Element("zero"), Element("one")}] = "one";
        two.joins[{Element("one"), Element("one")}] = "one";
        JoinAlgebra small(std::move(two));
        ExtendedAlgebra<JoinAlgebra> ext(small, {{"u", "one"}});
        ok = ok && exact(ext);
    }

    detail = "copairing reached exactly; least-solution iterations = " +
             std::to_string(kleene_iters);
    return ok;
}

bool criterion_cli_determinism(const std::string& cli, std::string& detail) {
    if (cli.empty()) {
        detail = "no binary path given";
        return false;
    }
    auto dir = fs::temp_directory_path() /
               ("elgot_acceptance_" + std::to_string(static_cast<unsigned>(::getpid())));
    fs::create_directories(dir);
    auto alg = dir / "lattice.alg";
    {
        std::ofstream out(alg);
        out << "carrier bot a b top\nbottom bot\n"
               "join bot bot = bot\njoin bot a = a\njoin bot b = b\njoin bot top = top\n"
               "join a a = a\njoin a b = top\njoin a top = top\n"
               "join b b = b\njoin b top = top\njoin top top = top\n";
    }
    auto run_once = [&](const fs::path& out_path) {
        std::string cmd = cli + " laws --algebra " + alg.string() +
                          " --suite all --trials 100 --seed 7 --format json > " +
                          out_path.string() + " 2>/dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    bool ok1 = run_once(dir / "a.json");
    bool ok2 = run_once(dir / "b.json");
    std::string a = read_file(dir / "a.json");
    std::string b = read_file(dir / "b.json");
    std::error_code ec;
    fs::remove_all(dir, ec);
    detail = "two runs, " + std::to_string(a.size()) + " bytes each, " +
             ((ok1 && ok2 && !a.empty() && a == b) ? "identical" : "DIFFERENT");
    return ok1 && ok2 && !a.empty() && a == b;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";

    std::vector<Criterion> criteria{
        {1, "solution property, all solver kinds", criterion_solution_square},
        {2, "functoriality suite", criterion_functoriality},
        {3, "compositionality suite", criterion_compositionality},
        {4, "unary closed form vs least solution", criterion_unary_oracle},
        {5, "join-of-leaves triple agreement", criterion_join_oracle},
        {6, "uniqueness of rational solutions", criterion_uniqueness},
        {7, "contraction accuracy on periodic streams", criterion_banach_streams},
        {8, "minimization and unfolding equality", criterion_minimization},
        {9, "tree-evaluation laws and sensitivity", criterion_em_laws},
        {10, "homomorphism that drops solutions", criterion_counterexample},
        {11, "canonical one-layer system", criterion_canonical_solution},
        {12, "command-line determinism", [&](std::string& d) { return criterion_cli_determinism(cli, d); }},
    };

    int failed = 0;
    for (auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failed;
        std::printf("[%s] %2d. %s — %s\n", ok ? "PASS" : "FAIL", c.number, c.name.c_str(),
                    detail.c_str());
        std::fflush(stdout);
    }
    if (failed) std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failed == 0 ? 0 : 1;
}
