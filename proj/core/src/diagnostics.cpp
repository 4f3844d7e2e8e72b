#include "elgot/diagnostics.hpp"

namespace elgot {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::UnknownVar: return "UnknownVar";
        case Errc::UnknownOp: return "UnknownOp";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::DuplicateVar: return "DuplicateVar";
        case Errc::MissingRhs: return "MissingRhs";
        case Errc::MissingParamImage: return "MissingParamImage";
        case Errc::VarClash: return "VarClash";
        case Errc::SignatureMismatch: return "SignatureMismatch";
        case Errc::UnguardedEquation: return "UnguardedEquation";
        case Errc::NoFixedPoint: return "NoFixedPoint";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::EmptyCycle: return "EmptyCycle";
        case Errc::NotAMorphism: return "NotAMorphism";
        case Errc::InvalidAlgebra: return "InvalidAlgebra";
        case Errc::ParseError: return "ParseError";
    }
    return "UnknownError";
}

std::string Diagnostic::to_string() const {
    std::string s = errc_name(code);
    if (!where.empty()) {
        s += " at ";
        s += where;
    }
    if (!message.empty()) {
        s += ": ";
        s += message;
    }
    return s;
}

} // namespace elgot
