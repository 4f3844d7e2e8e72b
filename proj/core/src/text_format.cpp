#include "elgot/text_format.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

namespace elgot {

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.' ||
           c == '+' || c == '-' || c == '\'';
}

struct LineLexer {
    std::string_view text;
    std::size_t pos = 0;
    std::string where; // file:line

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size() || text[pos] == '#';
    }

    std::optional<char> peek_punct() {
        skip_ws();
        if (pos < text.size() && (text[pos] == '(' || text[pos] == ')' || text[pos] == ',' ||
                                  text[pos] == '=' || text[pos] == '@' || text[pos] == '<'))
            return text[pos];
        return std::nullopt;
    }

    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            raise(Errc::ParseError, where, std::string("expected '") + c + "'");
        ++pos;
    }

    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident(const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        if (pos == start) raise(Errc::ParseError, where, std::string("expected ") + what);
        return std::string(text.substr(start, pos - start));
    }

    void finish() {
        if (!at_end()) raise(Errc::ParseError, where, "trailing input after statement");
    }
};

std::string location(const std::string& filename, std::size_t line) {
    return filename + ":" + std::to_string(line);
}

template <class OnLine>
void for_each_line(std::istream& in, const std::string& filename, OnLine&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        LineLexer lex{line, 0, location(filename, lineno)};
        if (lex.at_end()) continue;
        fn(lex);
        lex.finish();
    }
}

std::vector<VarId> parse_arg_list(LineLexer& lex) {
    std::vector<VarId> args;
    lex.expect('(');
    if (!lex.accept(')')) {
        for (;;) {
            args.emplace_back(lex.ident("argument variable"));
            if (lex.accept(')')) break;
            lex.expect(',');
        }
    }
    return args;
}

void parse_statement_into(LineLexer& lex, FlatSystem<std::string>& sys, VarId* root,
                          bool* saw_root) {
    std::string head = lex.ident("'sig', 'var' or 'root'");
    if (head == "sig") {
        std::string op = lex.ident("operation name");
        std::string arity = lex.ident("arity");
        std::size_t n = 0;
        try {
            n = static_cast<std::size_t>(std::stoull(arity));
        } catch (...) {
            raise(Errc::ParseError, lex.where, "arity must be a non-negative integer");
        }
        sys.sig.add(op, n);
        return;
    }
    if (head == "var") {
        VarId x(lex.ident("variable name"));
        if (sys.has_var(x)) raise(Errc::DuplicateVar, lex.where, "variable '" + x.name + "' redefined");
        lex.expect('=');
        std::string word = lex.ident("operation or 'param'");
        if (word == "param") {
            sys.define(std::move(x), param_rhs<std::string>(lex.ident("parameter")));
        } else {
            sys.define(std::move(x), op_rhs<std::string>(word, parse_arg_list(lex)));
        }
        return;
    }
    if (head == "root" && root) {
        *root = VarId(lex.ident("root variable"));
        *saw_root = true;
        return;
    }
    raise(Errc::ParseError, lex.where, "unknown statement '" + head + "'");
}

} // namespace

FlatSystem<std::string> parse_system(std::istream& in, const std::string& filename) {
    FlatSystem<std::string> sys;
    for_each_line(in, filename, [&](LineLexer& lex) { parse_statement_into(lex, sys, nullptr, nullptr); });
    auto diags = validate(sys);
    if (!diags.empty()) raise(diags.front().code, filename + ": " + diags.front().where, diags.front().message);
    return sys;
}

FlatSystem<std::string> parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, path, "cannot open file");
    return parse_system(in, path);
}

std::string serialize_system(const FlatSystem<std::string>& sys) {
    std::ostringstream out;
    for (const auto& [op, n] : sys.sig.ops()) out << "sig " << op << " " << n << "\n";
    for (const auto& v : sys.vars) {
        out << "var " << v.name << " = ";
        const auto& r = sys.rhs_of(v);
        if (const auto* app = std::get_if<OpApp>(&r)) {
            out << app->op << "(";
            for (std::size_t i = 0; i < app->args.size(); ++i) {
                if (i) out << ", ";
                out << app->args[i].name;
            }
            out << ")";
        } else {
            out << "param " << std::get<ParamRhs<std::string>>(r).value;
        }
        out << "\n";
    }
    return out.str();
}

RationalTree<std::string> parse_tree(std::istream& in, const std::string& filename) {
    FlatSystem<std::string> sys;
    VarId root;
    bool saw_root = false;
    for_each_line(in, filename, [&](LineLexer& lex) { parse_statement_into(lex, sys, &root, &saw_root); });
    if (!saw_root) raise(Errc::ParseError, filename, "missing 'root' line");
    if (!sys.has_var(root)) raise(Errc::UnknownVar, filename, "root '" + root.name + "' is not declared");
    auto diags = validate(sys);
    if (!diags.empty()) raise(diags.front().code, filename + ": " + diags.front().where, diags.front().message);
    return RationalTree<std::string>(std::move(sys), std::move(root));
}

RationalTree<std::string> parse_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, path, "cannot open file");
    return parse_tree(in, path);
}

std::string serialize_tree(const RationalTree<std::string>& tree) {
    return serialize_system(tree.system()) + "root " + tree.root().name + "\n";
}

namespace {

Term parse_term(LineLexer& lex, const Signature& sig) {
    if (lex.accept('@')) return Term::param(lex.ident("parameter"));
    std::string name = lex.ident("term");
    if (auto p = lex.peek_punct(); p && *p == '(') {
        std::vector<Term> args;
        lex.expect('(');
        if (!lex.accept(')')) {
            for (;;) {
                args.push_back(parse_term(lex, sig));
                if (lex.accept(')')) break;
                lex.expect(',');
            }
        }
        auto ar = sig.arity(name);
        if (!ar) raise(Errc::UnknownOp, lex.where, "operation '" + name + "' not in signature");
        if (*ar != args.size())
            raise(Errc::ArityMismatch, lex.where,
                  "operation '" + name + "' expects " + std::to_string(*ar) + " arguments, got " +
                      std::to_string(args.size()));
        return Term::op(name, std::move(args));
    }
    return Term::var(VarId(name));
}

} // namespace

TermFile parse_terms(std::istream& in, const std::string& filename) {
    TermFile out;
    for_each_line(in, filename, [&](LineLexer& lex) {
        std::string head = lex.ident("'sig' or 'term'");
        if (head == "sig") {
            std::string op = lex.ident("operation name");
            std::string arity = lex.ident("arity");
            std::size_t n = 0;
            try {
                n = static_cast<std::size_t>(std::stoull(arity));
            } catch (...) {
                raise(Errc::ParseError, lex.where, "arity must be a non-negative integer");
            }
            out.sig.add(op, n);
            return;
        }
        if (head == "term") {
            VarId x(lex.ident("variable name"));
            lex.expect('=');
            out.defs.emplace_back(std::move(x), parse_term(lex, out.sig));
            return;
        }
        raise(Errc::ParseError, lex.where, "unknown statement '" + head + "'");
    });
    return out;
}

TermFile parse_terms_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, path, "cannot open file");
    return parse_terms(in, path);
}

std::string serialize_truncation(const TreeTruncation<std::string>& t) {
    using T = TreeTruncation<std::string>;
    if (std::holds_alternative<typename T::Cut>(t.content)) return "^";
    if (const auto* l = std::get_if<typename T::Leaf>(&t.content)) return l->label;
    const auto& node = std::get<typename T::Node>(t.content);
    std::string out = "(" + node.op;
    for (const auto& c : node.children) out += " " + serialize_truncation(c);
    out += ")";
    return out;
}

} // namespace elgot
