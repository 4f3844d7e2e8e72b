#include "elgot/algebra_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace elgot {

namespace {

struct RawAlgebra {
    std::vector<Element> carrier;
    Signature table_sig;
    std::map<OpSymbol, OpTable> tables;
    std::vector<std::pair<Element, Element>> order_pairs;
    std::optional<Element> bottom;
    std::map<std::pair<Element, Element>, Element> joins;
    std::optional<Element> unary_fixpoint;
    bool saw_unary_line = false;

    bool saw_metric = false;
    MetricAlgebra metric;
};

bool token_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.' ||
           c == '+' || c == '-' || c == '\'' || c == '/';
}

struct Lex {
    std::string_view text;
    std::size_t pos = 0;
    std::string where;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size() || text[pos] == '#';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) raise(Errc::ParseError, where, std::string("expected '") + c + "'");
    }
    void expect_leq() {
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '<' && text[pos + 1] == '=') {
            pos += 2;
            return;
        }
        raise(Errc::ParseError, where, "expected '<='");
    }
    std::string token(const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && token_char(text[pos])) ++pos;
        if (pos == start) raise(Errc::ParseError, where, std::string("expected ") + what);
        return std::string(text.substr(start, pos - start));
    }
    std::string rest() {
        skip_ws();
        std::size_t end = text.size();
        for (std::size_t i = pos; i < text.size(); ++i)
            if (text[i] == '#') {
                end = i;
                break;
            }
        while (end > pos && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
        std::string out(text.substr(pos, end - pos));
        pos = end;
        return out;
    }
    void finish() {
        if (!at_end()) raise(Errc::ParseError, where, "trailing input after statement");
    }
};

void parse_line(Lex& lex, RawAlgebra& raw) {
    std::string head = lex.token("statement");
    if (head == "carrier") {
        while (!lex.at_end()) raw.carrier.push_back(lex.token("carrier element"));
        return;
    }
    if (head == "table") {
        OpSymbol op = lex.token("operation name");
        std::vector<Element> args;
        lex.expect('(');
        if (!lex.accept(')')) {
            for (;;) {
                args.push_back(lex.token("argument"));
                if (lex.accept(')')) break;
                lex.expect(',');
            }
        }
        lex.expect('=');
        Element out = lex.token("result element");
        raw.table_sig.add(op, args.size());
        auto [cell, fresh] = raw.tables[op].emplace(std::move(args), std::move(out));
        if (!fresh) raise(Errc::InvalidAlgebra, lex.where, "table cell given twice");
        return;
    }
    if (head == "order") {
        Element a = lex.token("element");
        lex.expect_leq();
        Element b = lex.token("element");
        raw.order_pairs.emplace_back(std::move(a), std::move(b));
        return;
    }
    if (head == "bottom") {
        raw.bottom = lex.token("element");
        return;
    }
    if (head == "join") {
        Element a = lex.token("element");
        Element b = lex.token("element");
        lex.expect('=');
        Element c = lex.token("element");
        raw.joins.emplace(std::make_pair(std::move(a), std::move(b)), std::move(c));
        return;
    }
    if (head == "unary") {
        std::string kw = lex.token("'fixpoint'");
        if (kw != "fixpoint") raise(Errc::ParseError, lex.where, "expected 'unary fixpoint A0'");
        raw.unary_fixpoint = lex.token("element");
        raw.saw_unary_line = true;
        return;
    }
    if (head == "metric") {
        raw.saw_metric = true;
        while (!lex.at_end()) {
            std::string key = lex.token("'epsilon' or 'tolerance'");
            std::string value = lex.token("value");
            if (key == "epsilon") {
                raw.metric.epsilon = parse_rational(value, lex.where);
            } else if (key == "tolerance") {
                char* end = nullptr;
                raw.metric.tolerance = std::strtod(value.c_str(), &end);
                if (!end || *end != '\0')
                    raise(Errc::ParseError, lex.where, "tolerance must be a real number");
            } else {
                raise(Errc::ParseError, lex.where, "unknown metric attribute '" + key + "'");
            }
        }
        return;
    }
    if (head == "fn") {
        raw.saw_metric = true;
        OpSymbol name = lex.token("function name");
        Affine fn = parse_affine(lex.rest(), lex.where);
        raw.metric.sig.add(name, fn.arity());
        if (!raw.metric.ops.emplace(name, std::move(fn)).second)
            raise(Errc::InvalidAlgebra, lex.where, "function '" + name + "' defined twice");
        return;
    }
    raise(Errc::ParseError, lex.where, "unknown statement '" + head + "'");
}

LoadedAlgebra build(RawAlgebra raw, const std::string& filename) {
    bool has_finite = !raw.carrier.empty() || !raw.tables.empty() || !raw.joins.empty() ||
                      !raw.order_pairs.empty();
    if (raw.saw_metric) {
        if (has_finite)
            raise(Errc::InvalidAlgebra, filename,
                  "metric algebras take only 'metric' and 'fn' lines");
        return BanachAlgebra(std::move(raw.metric));
    }

    FiniteAlgebra base;
    base.sig = raw.table_sig;
    base.carrier = std::move(raw.carrier);
    base.tables = std::move(raw.tables);
    base.bottom = raw.bottom;
    base.joins = std::move(raw.joins);
    if (!raw.order_pairs.empty()) base.set_order_generators(raw.order_pairs);

    if (raw.saw_unary_line) {
        base.unary_fixpoint = raw.unary_fixpoint;
        return UnaryAlgebra(std::move(base));
    }
    if (base.has_joins()) return JoinAlgebra(std::move(base));
    if (!raw.order_pairs.empty()) return KleeneAlgebra(std::move(base));
    if (base.sig.size() == 1 && base.sig.ops()[0].second == 1) return UnaryAlgebra(std::move(base));
    raise(Errc::InvalidAlgebra, filename,
          "no solution structure: need metric functions, a unary fixpoint, joins or an order");
}

} // namespace

LoadedAlgebra parse_algebra(std::istream& in, const std::string& filename) {
    RawAlgebra raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        Lex lex{line, 0, filename + ":" + std::to_string(lineno)};
        if (lex.at_end()) continue;
        parse_line(lex, raw);
        lex.finish();
    }
    return build(std::move(raw), filename);
}

LoadedAlgebra parse_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, path, "cannot open file");
    return parse_algebra(in, path);
}

std::string variant_name(const LoadedAlgebra& alg) {
    return std::visit([](const auto& a) { return a.variant_name(); }, alg);
}

const Signature& algebra_signature(const LoadedAlgebra& alg) {
    return std::visit([](const auto& a) -> const Signature& { return a.signature(); }, alg);
}

} // namespace elgot
