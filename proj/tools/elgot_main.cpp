// Command-line front end: parse files describing flat equation systems,
// rational trees and solution algebras, run the solvers and the law suites.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "elgot/cli.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flat recursive-equation systems, rational trees and their solution algebras"};
    app.footer(elgot::format_reference());
    app.require_subcommand(1);

    elgot::SolveCmd solve_cmd;
    auto* solve = app.add_subcommand("solve", "Solve a system in an algebra");
    solve->add_option("--system", solve_cmd.system, "system file (.eq)")->required();
    solve->add_option("--algebra", solve_cmd.algebra, "algebra file (.alg)")->required();
    solve->add_option("--format", solve_cmd.format, "text|json");

    elgot::UnfoldCmd unfold_cmd;
    auto* unfold = app.add_subcommand("unfold", "Print a depth-bounded prefix of a tree");
    unfold->add_option("--tree", unfold_cmd.tree, "tree file (.rt)")->required();
    unfold->add_option("--depth", unfold_cmd.depth, "depth bound (>= 0)")->required();
    unfold->add_option("--format", unfold_cmd.format, "text|json");

    elgot::MinimizeCmd minimize_cmd;
    auto* minimize = app.add_subcommand("minimize", "Merge bisimilar states of a tree");
    minimize->add_option("--tree", minimize_cmd.tree, "tree file (.rt)")->required();
    minimize->add_option("--format", minimize_cmd.format, "text|json");

    elgot::LawsCmd laws_cmd;
    auto* laws = app.add_subcommand("laws", "Run randomized law suites against an algebra");
    laws->add_option("--algebra", laws_cmd.algebra, "algebra file (.alg)")->required();
    laws->add_option("--suite", laws_cmd.suite, "functoriality|compositionality|solution|all");
    laws->add_option("--trials", laws_cmd.trials, "trials per suite (>= 1)");
    laws->add_option("--seed", laws_cmd.seed, "master seed (default fixed, not the clock)");
    laws->add_option("--format", laws_cmd.format, "text|json");

    elgot::CheckEmCmd em_cmd;
    auto* em = app.add_subcommand("check-em", "Check the tree-evaluation laws of an algebra");
    em->add_option("--algebra", em_cmd.algebra, "algebra file (.alg)")->required();
    em->add_option("--trials", em_cmd.trials, "random nested trees (>= 1)");
    em->add_option("--seed", em_cmd.seed, "master seed");
    em->add_option("--format", em_cmd.format, "json|text (default json)");

    elgot::FlattenCmd flatten_cmd;
    auto* flatten = app.add_subcommand("flatten", "Flatten non-flat term equations");
    flatten->add_option("--terms", flatten_cmd.terms, "term file (.tm)")->required();
    flatten->add_option("--format", flatten_cmd.format, "text|json");

    elgot::StreamCmd stream_cmd;
    std::string prefix_csv, cycle_csv;
    auto* stream = app.add_subcommand("stream", "Solve an eventually periodic stream system");
    stream->add_option("--prefix", prefix_csv, "comma-separated stream prefix (may be empty)");
    stream->add_option("--cycle", cycle_csv, "comma-separated cycle (non-empty)")->required();
    stream->add_option("--op", stream_cmd.op, "binary operation symbol")->required();
    stream->add_option("--algebra", stream_cmd.algebra, "algebra file (.alg)")->required();
    stream->add_option("--format", stream_cmd.format, "text|json");

    CLI11_PARSE(app, argc, argv);

    elgot::Command cmd;
    if (solve->parsed()) cmd = solve_cmd;
    if (unfold->parsed()) cmd = unfold_cmd;
    if (minimize->parsed()) cmd = minimize_cmd;
    if (laws->parsed()) cmd = laws_cmd;
    if (em->parsed()) cmd = em_cmd;
    if (flatten->parsed()) cmd = flatten_cmd;
    if (stream->parsed()) {
        stream_cmd.prefix = split_csv(prefix_csv);
        stream_cmd.cycle = split_csv(cycle_csv);
        cmd = stream_cmd;
    }
    return elgot::run(cmd, std::cout, std::cerr);
}
