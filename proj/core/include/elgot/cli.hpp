#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace elgot {

// Exit codes: 0 success, 1 law counterexample or solver failure, 2 parse or
// usage error. Same inputs and seed give byte-identical output.

inline constexpr std::uint64_t kDefaultSeed = 0x5eed0001;

struct SolveCmd {
    std::string system;
    std::string algebra;
    std::string format = "text";
};

struct UnfoldCmd {
    std::string tree;
    std::size_t depth = 0;
    std::string format = "text";
};

struct MinimizeCmd {
    std::string tree;
    std::string format = "text";
};

struct LawsCmd {
    std::string algebra;
    std::string suite = "all"; // functoriality | compositionality | solution | all
    std::size_t trials = 100;
    std::uint64_t seed = kDefaultSeed;
    std::string format = "text";
};

struct CheckEmCmd {
    std::string algebra;
    std::size_t trials = 300;
    std::uint64_t seed = kDefaultSeed;
    std::string format = "json";
};

struct FlattenCmd {
    std::string terms;
    std::string format = "text";
};

struct StreamCmd {
    std::vector<std::string> prefix;
    std::vector<std::string> cycle;
    std::string op;
    std::string algebra;
    std::string format = "text";
};

using Command =
    std::variant<SolveCmd, UnfoldCmd, MinimizeCmd, LawsCmd, CheckEmCmd, FlattenCmd, StreamCmd>;

int run(const Command& cmd, std::ostream& out, std::ostream& err);

/// Reference text for --help: file formats and JSON schemas.
const char* format_reference();

} // namespace elgot
