#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace elgot {

enum class Errc {
    UnknownVar,
    UnknownOp,
    ArityMismatch,
    DuplicateVar,
    MissingRhs,
    MissingParamImage,
    VarClash,
    SignatureMismatch,
    UnguardedEquation,
    NoFixedPoint,
    NonConvergence,
    EmptyCycle,
    NotAMorphism,
    InvalidAlgebra,
    ParseError,
};

const char* errc_name(Errc c);

/// One validation finding; `where` names the offending variable, op or file:line.
struct Diagnostic {
    Errc code;
    std::string where;
    std::string message;

    std::string to_string() const;
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string where, const std::string& message)
        : std::runtime_error(where.empty() ? message : where + ": " + message),
          code_(code),
          where_(std::move(where)) {}

    Errc code() const { return code_; }
    const std::string& where() const { return where_; }

private:
    Errc code_;
    std::string where_;
};

[[noreturn]] inline void raise(Errc code, std::string where, const std::string& message) {
    throw Error(code, std::move(where), message);
}

} // namespace elgot
