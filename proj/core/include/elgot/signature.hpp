#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elgot/diagnostics.hpp"

namespace elgot {

using OpSymbol = std::string;

/// Recursion variable. Distinct names denote distinct variables within a system.
struct VarId {
    std::string name;

    VarId() = default;
    VarId(std::string n) : name(std::move(n)) {}
    VarId(const char* n) : name(n) {}

    auto operator<=>(const VarId&) const = default;
};

/// Finite set of operation symbols with arities, kept in declaration order.
class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<std::pair<OpSymbol, std::size_t>> ops) {
        for (const auto& [op, n] : ops) add(op, n);
    }

    void add(const OpSymbol& op, std::size_t arity) {
        auto it = index_.find(op);
        if (it != index_.end()) {
            if (ops_[it->second].second != arity)
                raise(Errc::ArityMismatch, op, "operation declared twice with different arities");
            return;
        }
        index_.emplace(op, ops_.size());
        ops_.emplace_back(op, arity);
    }

    bool has(const OpSymbol& op) const { return index_.count(op) != 0; }

    std::optional<std::size_t> arity(const OpSymbol& op) const {
        auto it = index_.find(op);
        if (it == index_.end()) return std::nullopt;
        return ops_[it->second].second;
    }

    /// Declaration-ordered (symbol, arity) pairs.
    const std::vector<std::pair<OpSymbol, std::size_t>>& ops() const { return ops_; }

    std::size_t size() const { return ops_.size(); }
    bool empty() const { return ops_.empty(); }

    bool operator==(const Signature& other) const { return ops_ == other.ops_; }

private:
    std::vector<std::pair<OpSymbol, std::size_t>> ops_;
    std::map<OpSymbol, std::size_t> index_;
};

} // namespace elgot
