#include "elgot/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <ostream>

#include "elgot/algebra_io.hpp"
#include "elgot/em.hpp"
#include "elgot/laws.hpp"
#include "elgot/text_format.hpp"

namespace elgot {

namespace {

using nlohmann::json; // objects keep keys sorted lexicographically

std::string show_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_carrier_double(const std::string& text, const std::string& where) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (!end || *end != '\0')
        raise(Errc::InvalidAlgebra, where, "parameter '" + text + "' is not a real number");
    return v;
}

// Solve a parsed system against any loaded algebra; returns (var, shown value)
// in declaration order plus the raw json value.
struct SolvedLine {
    std::string var;
    std::string shown;
    json value;
};

std::vector<SolvedLine> solve_lines(const LoadedAlgebra& alg, const FlatSystem<std::string>& sys) {
    std::vector<SolvedLine> lines;
    if (const auto* banach = std::get_if<BanachAlgebra>(&alg)) {
        auto converted = rename_params<double>(
            [&](const std::string& p) { return parse_carrier_double(p, "system"); }, sys);
        auto sol = banach->dagger(converted);
        for (const auto& x : sys.vars)
            lines.push_back({x.name, show_double(sol.at(x)), json(sol.at(x))});
        return lines;
    }
    std::visit(
        [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            if constexpr (!std::is_same_v<A, BanachAlgebra>) {
                auto sol = a.dagger(sys);
                for (const auto& x : sys.vars)
                    lines.push_back({x.name, sol.at(x), json(sol.at(x))});
            }
        },
        alg);
    return lines;
}

int emit_solution(const std::string& command, const std::string& system_path,
                  const std::string& algebra_path, const LoadedAlgebra& alg,
                  const std::vector<SolvedLine>& lines, const std::string& format,
                  std::ostream& out) {
    if (format == "json") {
        json doc;
        doc["command"] = command;
        if (!system_path.empty()) doc["system"] = system_path;
        doc["algebra"] = algebra_path;
        doc["variant"] = variant_name(alg);
        json sol = json::object();
        for (const auto& l : lines) sol[l.var] = l.value;
        doc["solution"] = sol;
        out << doc.dump(2) << "\n";
    } else {
        for (const auto& l : lines) out << l.var << " = " << l.shown << "\n";
    }
    return 0;
}

json failures_json(const std::vector<TrialFailure>& failures) {
    json arr = json::array();
    for (const auto& f : failures) arr.push_back(json{{"seed", f.seed}, {"detail", f.detail}});
    return arr;
}

int run_unfold(const UnfoldCmd& cmd, const RationalTree<std::string>& tree, std::ostream& out) {
    auto prefix = serialize_truncation(unfold(tree, cmd.depth));
    if (cmd.format == "json") {
        json doc{{"command", "unfold"},
                 {"tree", cmd.tree},
                 {"depth", cmd.depth},
                 {"truncation", prefix}};
        out << doc.dump(2) << "\n";
    } else {
        out << prefix << "\n";
    }
    return 0;
}

int run_minimize(const MinimizeCmd& cmd, const RationalTree<std::string>& tree, std::ostream& out) {
    auto reduced = minimize(tree);
    if (cmd.format == "json") {
        json doc{{"command", "minimize"},
                 {"tree", cmd.tree},
                 {"states", reduced.state_count()},
                 {"minimized", serialize_tree(reduced)}};
        out << doc.dump(2) << "\n";
    } else {
        out << serialize_tree(reduced);
    }
    return 0;
}

int run_laws(const LawsCmd& cmd, const LoadedAlgebra& alg, std::ostream& out) {
    bool want_solution = cmd.suite == "solution" || cmd.suite == "all";
    bool want_functoriality = cmd.suite == "functoriality" || cmd.suite == "all";
    bool want_compositionality = cmd.suite == "compositionality" || cmd.suite == "all";

    std::vector<SuiteReport> reports;
    std::visit(
        [&](const auto& a) {
            if (want_solution) reports.push_back(run_solution_suite(a, cmd.seed, cmd.trials));
            if (want_functoriality)
                reports.push_back(run_functoriality_suite(a, cmd.seed, cmd.trials));
            if (want_compositionality)
                reports.push_back(run_compositionality_suite(a, cmd.seed, cmd.trials));
        },
        alg);

    std::size_t total = 0;
    for (const auto& r : reports) total += r.failures.size();

    if (cmd.format == "json") {
        json suites = json::object();
        for (const auto& r : reports)
            suites[r.suite] = json{{"trials", r.trials}, {"failures", failures_json(r.failures)}};
        json doc{{"command", "laws"},     {"algebra", cmd.algebra}, {"variant", variant_name(alg)},
                 {"seed", cmd.seed},      {"trials", cmd.trials},   {"suites", suites},
                 {"failures", total}};
        out << doc.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            out << r.suite << ": " << r.trials << " trials, " << r.failures.size()
                << " failures\n";
            for (const auto& f : r.failures) out << "  seed " << f.seed << ": " << f.detail << "\n";
        }
        out << (total == 0 ? "0 failures\n" : std::to_string(total) + " failures\n");
    }
    return total == 0 ? 0 : 1;
}

json em_law_json(const EmLawReport& r) {
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back(
            json{{"seed", f.seed}, {"tree", f.tree}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    return json{{"law", r.law}, {"trials", r.trials}, {"failures", failures}};
}

int run_check_em(const CheckEmCmd& cmd, const LoadedAlgebra& alg, std::ostream& out) {
    EmReport report = std::visit(
        [&](const auto& a) -> EmReport {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, BanachAlgebra>) {
                return EmReport{};
            } else {
                auto em = elgot_to_em(a);
                return check_em_laws(em, cmd.trials, cmd.seed);
            }
        },
        alg);

    std::size_t total = report.unit.failures.size() + report.multiplication.failures.size();
    if (cmd.format == "text") {
        out << "unit: " << report.unit.trials << " checks, " << report.unit.failures.size()
            << " failures\n";
        out << "multiplication: " << report.multiplication.trials << " trials, "
            << report.multiplication.failures.size() << " failures\n";
        out << (total == 0 ? "0 failures\n" : std::to_string(total) + " failures\n");
    } else {
        json laws = json::array({em_law_json(report.unit), em_law_json(report.multiplication)});
        json doc{{"command", "check-em"},
                 {"algebra", cmd.algebra},
                 {"variant", variant_name(alg)},
                 {"seed", cmd.seed},
                 {"laws", laws},
                 {"failures", total}};
        out << doc.dump(2) << "\n";
    }
    return total == 0 ? 0 : 1;
}

int run_flatten(const FlattenCmd& cmd, const TermFile& file, std::ostream& out) {
    auto result = flatten(file.sig, file.defs);
    if (cmd.format == "json") {
        json emb = json::object();
        for (const auto& [from, to] : result.embedding) emb[from.name] = to.name;
        json doc{{"command", "flatten"},
                 {"terms", cmd.terms},
                 {"system", serialize_system(result.system)},
                 {"embedding", emb}};
        out << doc.dump(2) << "\n";
    } else {
        out << serialize_system(result.system);
    }
    return 0;
}

int run_stream(const StreamCmd& cmd, const LoadedAlgebra& alg, std::ostream& out) {
    auto sys = build_stream_system<std::string>(cmd.prefix, cmd.cycle, cmd.op);
    auto lines = solve_lines(alg, sys);
    return emit_solution("stream", "", cmd.algebra, alg, lines, cmd.format, out);
}

void validate_usage(const Command& cmd) {
    if (const auto* laws = std::get_if<LawsCmd>(&cmd)) {
        if (laws->trials < 1) raise(Errc::ParseError, "--trials", "need at least one trial");
        if (laws->suite != "all" && laws->suite != "solution" && laws->suite != "functoriality" &&
            laws->suite != "compositionality")
            raise(Errc::ParseError, "--suite", "unknown suite '" + laws->suite + "'");
    }
    if (const auto* em = std::get_if<CheckEmCmd>(&cmd))
        if (em->trials < 1) raise(Errc::ParseError, "--trials", "need at least one trial");
    std::visit(
        [](const auto& c) {
            if (c.format != "text" && c.format != "json")
                raise(Errc::ParseError, "--format", "expected 'text' or 'json'");
        },
        cmd);
}

} // namespace

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
    // Usage and file-loading failures exit 2; failures while solving or
    // checking exit 1.
    bool loading = true;
    try {
        validate_usage(cmd);
        return std::visit(
            [&](const auto& c) {
                using C = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<C, SolveCmd>) {
                    auto sys = parse_system_file(c.system);
                    auto alg = parse_algebra_file(c.algebra);
                    loading = false;
                    auto lines = solve_lines(alg, sys);
                    return emit_solution("solve", c.system, c.algebra, alg, lines, c.format, out);
                } else if constexpr (std::is_same_v<C, UnfoldCmd>) {
                    auto tree = parse_tree_file(c.tree);
                    loading = false;
                    return run_unfold(c, tree, out);
                } else if constexpr (std::is_same_v<C, MinimizeCmd>) {
                    auto tree = parse_tree_file(c.tree);
                    loading = false;
                    return run_minimize(c, tree, out);
                } else if constexpr (std::is_same_v<C, LawsCmd>) {
                    auto alg = parse_algebra_file(c.algebra);
                    loading = false;
                    return run_laws(c, alg, out);
                } else if constexpr (std::is_same_v<C, CheckEmCmd>) {
                    auto alg = parse_algebra_file(c.algebra);
                    if (std::holds_alternative<BanachAlgebra>(alg))
                        raise(Errc::InvalidAlgebra, c.algebra,
                              "tree evaluation needs a finite carrier; the metric carrier is "
                              "not enumerable");
                    loading = false;
                    return run_check_em(c, alg, out);
                } else if constexpr (std::is_same_v<C, FlattenCmd>) {
                    auto file = parse_terms_file(c.terms);
                    loading = false;
                    return run_flatten(c, file, out);
                } else {
                    auto alg = parse_algebra_file(c.algebra);
                    loading = false;
                    return run_stream(c, alg, out);
                }
            },
            cmd);
    } catch (const Error& e) {
        err << errc_name(e.code()) << ": " << e.what() << "\n";
        if (loading || e.code() == Errc::ParseError) return 2;
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return loading ? 2 : 1;
    }
}

const char* format_reference() {
    return R"(FILE FORMATS

System file (.eq):           Tree file (.rt):
  sig mul 2                    the system lines, then
  var x = mul(x, y)            root x
  var y = param a
  # comment

Term file (.tm):             Algebra file (.alg):
  sig mul 2                    carrier bot a b top     # finite carrier
  term x = mul(mul(y,@p),@q)   table mul(a,b) = top    # one cell per line
  term y = mul(x, @q)          order a <= b            # generators; closed
                               bottom bot
  @IDENT is a parameter,       join a b = top          # join-of-leaves kind
  a bare IDENT a variable.     unary fixpoint a0       # unary closed form
                               metric epsilon 1/2 tolerance 1e-9
                               fn avg4 (x+y)/4         # affine catalog

Kind inference: metric/fn -> contraction iteration on [0,1]; unary fixpoint
(or one unary table alone) -> unary closed form; join lines -> join of leaf
labels (operations read as joins; default signature mul/2); order lines ->
least solutions by iteration (tables must be monotone).

JSON OUTPUT (--format json; keys sorted, stable for fixed seed)

solve/stream: {"algebra", "command", "solution": {var: value}, "system", "variant"}
laws:         {"algebra", "command", "failures", "seed", "suites":
                 {suite: {"trials", "failures": [{"seed", "detail"}]}}, "trials", "variant"}
check-em:     {"algebra", "command", "failures", "laws":
                 [{"law", "trials", "failures": [{"seed", "tree", "lhs", "rhs"}]}],
               "seed", "variant"}
unfold:       {"command", "depth", "tree", "truncation"}
minimize:     {"command", "minimized", "states", "tree"}
flatten:      {"command", "embedding", "system", "terms"}

EXIT CODES    0 success; 1 solver failure or law counterexample; 2 parse/usage error.
)";
}

} // namespace elgot
