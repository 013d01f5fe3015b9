// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "parsers.hpp"
#include "text_util.hpp"

#include "cak/schema.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace cak::detail {
namespace {

struct Tok {
    enum Kind { Ident, Number, Str, CharLit, Punct, End } kind = End;
    std::string_view text;
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;
    int line = 1;
    int col = 0;
};

const std::set<std::string_view> kModifiers = {
    "public", "protected", "private", "static", "final",    "abstract",
    "synchronized", "native", "transient", "volatile", "strictfp", "default",
    "sealed",
};

const std::set<std::string_view> kTypeKeywords = {"class", "interface", "enum", "record"};

// Keywords that precede '(' without being an invocation.
const std::set<std::string_view> kNoCall = {
    "if", "while", "for", "switch", "catch", "synchronized", "return", "assert",
    "throw", "do", "else", "case", "break", "continue", "instanceof", "try",
    "finally", "yield", "new", "this", "super",
};

const std::set<std::string_view> kStatementKeywords = {
    "if", "while", "for", "switch", "catch", "synchronized", "return", "assert",
    "throw", "do", "else", "case", "break", "continue", "instanceof", "try",
    "finally", "yield", "new", "this", "super", "null", "true", "false",
    "class", "interface", "enum", "record", "extends", "implements", "throws",
    "package", "import", "var",
};

bool is_punct_allowed(char c) {
    static const std::string allowed = "()[]{}<>;,.=+-*/%!&|^~?:@";
    return allowed.find(c) != std::string::npos;
}

struct Lexed {
    std::vector<Tok> toks;
    std::vector<ParseDiagnostic> diags;
};

void diag_err(std::vector<ParseDiagnostic>& out, std::string_view file, int line, int col,
              const std::string& what) {
    out.push_back({std::string(file), line, col, "error: " + what});
}

void diag_warn(std::vector<ParseDiagnostic>& out, std::string_view file, int line, int col,
               const std::string& what) {
    out.push_back({std::string(file), line, col, "warning: " + what});
}

Lexed lex(std::string_view src, std::string_view file, int line_base) {
    Lexed out;
    std::size_t i = 0;
    int line = line_base;
    int col = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 0;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Tok::Kind kind, std::size_t start, int tline, int tcol) {
        out.toks.push_back({kind, src.substr(start, i - start), start, i, tline, tcol});
    };
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
            advance(1);
            continue;
        }
        std::size_t start = i;
        int tline = line, tcol = col;
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            advance(2);
            bool closed = false;
            while (i < src.size()) {
                if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) diag_err(out.diags, file, tline, tcol, "unterminated block comment");
            continue;
        }
        if (c == '"') {
            if (i + 2 < src.size() && src[i + 1] == '"' && src[i + 2] == '"') {
                advance(3);
                bool closed = false;
                while (i < src.size()) {
                    if (src[i] == '\\') {
                        advance(2);
                        continue;
                    }
                    if (src[i] == '"' && i + 2 < src.size() && src[i + 1] == '"' &&
                        src[i + 2] == '"') {
                        advance(3);
                        closed = true;
                        break;
                    }
                    advance(1);
                }
                if (!closed) diag_err(out.diags, file, tline, tcol, "unterminated text block");
                push(Tok::Str, start, tline, tcol);
                continue;
            }
            advance(1);
            bool closed = false;
            while (i < src.size() && src[i] != '\n') {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    advance(2);
                    continue;
                }
                if (src[i] == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) diag_err(out.diags, file, tline, tcol, "unterminated string literal");
            push(Tok::Str, start, tline, tcol);
            continue;
        }
        if (c == '\'') {
            advance(1);
            bool closed = false;
            while (i < src.size() && src[i] != '\n') {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    advance(2);
                    continue;
                }
                if (src[i] == '\'') {
                    advance(1);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) diag_err(out.diags, file, tline, tcol, "unterminated character literal");
            push(Tok::CharLit, start, tline, tcol);
            continue;
        }
        if (is_digit(c)) {
            while (i < src.size() &&
                   (is_ident_char(static_cast<unsigned char>(src[i])) || src[i] == '.'))
                advance(1);
            push(Tok::Number, start, tline, tcol);
            continue;
        }
        if (is_ident_start(c)) {
            while (i < src.size() && is_ident_char(static_cast<unsigned char>(src[i]))) advance(1);
            push(Tok::Ident, start, tline, tcol);
            continue;
        }
        if (is_punct_allowed(static_cast<char>(c))) {
            advance(1);
            push(Tok::Punct, start, tline, tcol);
            continue;
        }
        if (c >= 0x20 && c < 0x7f) {
            diag_err(out.diags, file, tline, tcol,
                     std::string("unexpected character '") + static_cast<char>(c) + "'");
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "0x%02x", c);
            diag_err(out.diags, file, tline, tcol, std::string("unexpected byte ") + buf);
        }
        advance(1);
    }
    out.toks.push_back({Tok::End, {}, src.size(), src.size(), line, col});
    return out;
}

void check_balance(const std::vector<Tok>& toks, std::string_view file,
                   std::vector<ParseDiagnostic>& diags) {
    struct Open {
        char c;
        const Tok* tok;
    };
    std::vector<Open> stack;
    auto partner = [](char c) {
        switch (c) {
        case ')': return '(';
        case ']': return '[';
        case '}': return '{';
        }
        return '\0';
    };
    for (const Tok& t : toks) {
        if (t.kind != Tok::Punct || t.text.size() != 1) continue;
        char c = t.text[0];
        if (c == '(' || c == '[' || c == '{') {
            stack.push_back({c, &t});
        } else if (c == ')' || c == ']' || c == '}') {
            if (stack.empty() || stack.back().c != partner(c)) {
                diag_err(diags, file, t.line, t.col,
                         std::string("unbalanced delimiter '") + c + "'");
                if (!stack.empty() && stack.back().c == partner(c)) stack.pop_back();
            } else {
                stack.pop_back();
            }
        }
    }
    if (!stack.empty()) {
        const Tok* t = stack.front().tok;
        diag_err(diags, file, t->line, t->col,
                 std::string("unclosed delimiter '") + stack.front().c + "'");
    }
}

cst::Span span_between(const Tok& a, const Tok& b) {
    cst::Span s;
    s.byte_start = a.byte_start;
    s.byte_end = b.byte_end;
    s.line_start = a.line;
    s.line_end = b.line;
    s.col_start = a.col;
    s.col_end = b.col + static_cast<int>(b.text.size());
    return s;
}

cst::Node leaf(std::string kind, std::string field, const cst::Span& span, std::string text) {
    cst::Node n;
    n.kind = std::move(kind);
    n.field = std::move(field);
    n.span = span;
    n.text = std::move(text);
    return n;
}

/// Token-stream scanner shared by method bodies and free snippets: finds
/// invocations and typed local declarations.
class BodyScanner {
public:
    BodyScanner(const std::vector<Tok>& toks, std::string_view src) : t_(toks), src_(src) {}

    std::vector<cst::Node> scan(std::size_t from, std::size_t to) {
        std::vector<cst::Node> nodes;
        for (std::size_t k = from; k < to && k < t_.size(); ++k) {
            if (is_punct(k, "(") && k > from) {
                maybe_call(from, k, nodes);
            }
            maybe_local(from, to, k, nodes);
        }
        std::stable_sort(nodes.begin(), nodes.end(), [](const cst::Node& a, const cst::Node& b) {
            return a.span.byte_start < b.span.byte_start;
        });
        return nodes;
    }

private:
    const std::vector<Tok>& t_;
    std::string_view src_;

    bool is_punct(std::size_t k, std::string_view p) const {
        return k < t_.size() && t_[k].kind == Tok::Punct && t_[k].text == p;
    }

    std::size_t match_paren(std::size_t open) const {
        int depth = 0;
        for (std::size_t k = open; k < t_.size(); ++k) {
            if (t_[k].kind != Tok::Punct) continue;
            if (t_[k].text == "(")
                ++depth;
            else if (t_[k].text == ")") {
                --depth;
                if (depth == 0) return k;
            }
        }
        return t_.size() - 1;
    }

    // Walks a generic argument list backwards: t_[k] is '>', returns index of
    // its '<' or k when unmatched.
    std::size_t back_over_generics(std::size_t k, std::size_t from) const {
        int depth = 0;
        for (std::size_t j = k + 1; j-- > from;) {
            if (t_[j].kind != Tok::Punct) continue;
            if (t_[j].text == ">")
                ++depth;
            else if (t_[j].text == "<") {
                --depth;
                if (depth == 0) return j;
            }
        }
        return k;
    }

    void maybe_call(std::size_t from, std::size_t open, std::vector<cst::Node>& out) {
        std::size_t name_idx = open - 1;
        bool generic_new = false;
        if (is_punct(name_idx, ">")) {
            // new ArrayList<String>( ... )
            std::size_t lt = back_over_generics(name_idx, from);
            if (lt == name_idx || lt == from) return;
            name_idx = lt - 1;
            generic_new = true;
        }
        if (t_[name_idx].kind != Tok::Ident) return;
        std::string_view name = t_[name_idx].text;
        if (!generic_new && kNoCall.count(name)) return;

        // Walk the dotted receiver chain backwards.
        std::size_t chain_start = name_idx;
        while (chain_start >= from + 2 && is_punct(chain_start - 1, ".") &&
               t_[chain_start - 2].kind == Tok::Ident) {
            chain_start -= 2;
        }
        bool dynamic_receiver =
            chain_start >= from + 1 && is_punct(chain_start - 1, ".");  // foo().bar(

        bool is_new = false;
        std::size_t anchor = chain_start;
        if (chain_start >= from + 1 && t_[chain_start - 1].kind == Tok::Ident &&
            t_[chain_start - 1].text == "new") {
            is_new = true;
            anchor = chain_start - 1;
        }
        if (!is_new && generic_new) return;

        std::string receiver;
        std::string target;
        if (is_new) {
            std::size_t type_end = generic_new ? open : name_idx + 1;
            const Tok& first = t_[chain_start];
            const Tok& last = t_[type_end - 1];
            receiver = std::string(src_.substr(first.byte_start, last.byte_end - first.byte_start));
            receiver.erase(std::remove_if(receiver.begin(), receiver.end(),
                                          [](char c) { return c == ' ' || c == '\t'; }),
                           receiver.end());
            target = "<init>";
        } else {
            target = std::string(name);
            if (!dynamic_receiver) {
                for (std::size_t j = chain_start; j + 1 < name_idx; j += 2) {
                    if (!receiver.empty()) receiver += '.';
                    receiver += std::string(t_[j].text);
                }
            }
            if (dynamic_receiver) anchor = name_idx;
        }

        std::size_t close = match_paren(open);
        cst::Node call;
        call.kind = "call";
        call.span = span_between(t_[anchor], t_[close]);
        if (!receiver.empty() || dynamic_receiver)
            call.children.push_back(leaf("receiver", "receiver", span_between(t_[anchor], t_[anchor]), receiver));
        call.children.push_back(
            leaf("name", "name", span_between(t_[name_idx], t_[name_idx]), target));

        cst::Node args;
        args.kind = "arguments";
        args.field = "arguments";
        args.span = span_between(t_[open], t_[close]);
        std::size_t arg_begin = open + 1;
        int depth = 0;
        for (std::size_t k = open + 1; k <= close && k < t_.size(); ++k) {
            bool at_end = (k == close);
            bool split = false;
            if (t_[k].kind == Tok::Punct) {
                std::string_view p = t_[k].text;
                if (p == "(" || p == "[" || p == "{")
                    ++depth;
                else if (p == ")" || p == "]" || p == "}")
                    --depth;
                else if (p == "," && depth == 0)
                    split = true;
            }
            if ((split || at_end) && k > arg_begin) {
                const Tok& first = t_[arg_begin];
                const Tok& last = t_[k - 1];
                std::string_view text =
                    src_.substr(first.byte_start, last.byte_end - first.byte_start);
                args.children.push_back(
                    leaf("argument", "", span_between(first, last), std::string(trim(text))));
            }
            if (split) arg_begin = k + 1;
        }
        call.children.push_back(std::move(args));
        out.push_back(std::move(call));
    }

    bool at_statement_start(std::size_t from, std::size_t k) const {
        if (k == from) return true;
        const Tok& p = t_[k - 1];
        if (p.kind != Tok::Punct) return false;
        return p.text == "{" || p.text == "}" || p.text == ";" || p.text == "(";
    }

    void maybe_local(std::size_t from, std::size_t to, std::size_t k,
                     std::vector<cst::Node>& out) {
        if (t_[k].kind != Tok::Ident || !at_statement_start(from, k)) return;
        if (kStatementKeywords.count(t_[k].text) && t_[k].text != "var") return;
        std::size_t c = k;
        std::string type_text;
        if (!parse_type_ref(c, to, type_text)) return;
        if (c >= to || t_[c].kind != Tok::Ident) return;
        std::string name(t_[c].text);
        std::size_t after = c + 1;
        if (after >= to || t_[after].kind != Tok::Punct) return;
        std::string_view p = t_[after].text;
        if (p != "=" && p != ";" && p != ":" && p != ")" && p != ",") return;
        cst::Node local;
        local.kind = "local_declaration";
        local.span = span_between(t_[k], t_[c]);
        local.children.push_back(leaf("type", "type", span_between(t_[k], t_[k]), type_text));
        local.children.push_back(leaf("name", "name", span_between(t_[c], t_[c]), name));
        out.push_back(std::move(local));
    }

    bool parse_type_ref(std::size_t& c, std::size_t to, std::string& out_text) {
        if (c >= to || t_[c].kind != Tok::Ident) return false;
        out_text = std::string(t_[c].text);
        ++c;
        while (c + 1 < to && is_punct(c, ".") && t_[c + 1].kind == Tok::Ident) {
            out_text += '.';
            out_text += std::string(t_[c + 1].text);
            c += 2;
        }
        if (c < to && is_punct(c, "<")) {
            int depth = 0;
            std::size_t g = c;
            std::size_t g_end = 0;
            for (; g < to; ++g) {
                if (t_[g].kind != Tok::Punct) continue;
                if (t_[g].text == "<")
                    ++depth;
                else if (t_[g].text == ">") {
                    --depth;
                    if (depth == 0) {
                        g_end = g;
                        break;
                    }
                } else if (t_[g].text == ";" || t_[g].text == "{" || t_[g].text == "}" ||
                           t_[g].text == ")") {
                    break;
                }
            }
            if (g_end != 0) {
                const Tok& first = t_[c];
                const Tok& last = t_[g_end];
                std::string g_text(src_.substr(first.byte_start, last.byte_end - first.byte_start));
                g_text.erase(std::remove_if(g_text.begin(), g_text.end(),
                                            [](char ch) { return ch == ' ' || ch == '\t'; }),
                             g_text.end());
                out_text += g_text;
                c = g_end + 1;
            }
        }
        while (c + 1 < to && is_punct(c, "[") && is_punct(c + 1, "]")) {
            out_text += "[]";
            c += 2;
        }
        return true;
    }
};

/// Recursive-descent structure parser over the token stream.
class Parser {
public:
    Parser(const std::vector<Tok>& toks, std::string_view src, std::string_view file,
           std::vector<ParseDiagnostic>& diags)
        : t_(toks), src_(src), file_(file), diags_(diags) {}

    cst::Node parse_compilation_unit() {
        cst::Node root;
        root.kind = "compilation_unit";
        root.span.byte_end = src_.size();
        root.span.line_end = std::max<std::size_t>(count_lines(src_), 1);
        bool warned_garbage = false;
        while (!at_end()) {
            if (is_ident("package")) {
                root.children.push_back(parse_package());
                warned_garbage = false;
            } else if (is_ident("import")) {
                root.children.push_back(parse_import());
                warned_garbage = false;
            } else if (is_punct(";")) {
                ++i_;
            } else if (looks_like_type_decl()) {
                cst::Node type = parse_type(0);
                if (!type.kind.empty()) root.children.push_back(std::move(type));
                warned_garbage = false;
            } else {
                if (!warned_garbage) {
                    diag_warn(diags_, file_, cur().line, cur().col,
                              "unexpected token at top level");
                    warned_garbage = true;
                }
                ++i_;
            }
        }
        return root;
    }

private:
    const std::vector<Tok>& t_;
    std::string_view src_;
    std::string_view file_;
    std::vector<ParseDiagnostic>& diags_;
    std::size_t i_ = 0;

    const Tok& cur() const { return t_[std::min(i_, t_.size() - 1)]; }
    const Tok& at(std::size_t k) const { return t_[std::min(k, t_.size() - 1)]; }
    bool at_end() const { return cur().kind == Tok::End; }
    bool is_ident(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }
    bool is_punct(std::string_view s) const { return cur().kind == Tok::Punct && cur().text == s; }
    bool punct_at(std::size_t k, std::string_view s) const {
        return at(k).kind == Tok::Punct && at(k).text == s;
    }

    std::size_t match_brace(std::size_t open) const {
        int depth = 0;
        for (std::size_t k = open; k < t_.size(); ++k) {
            if (t_[k].kind != Tok::Punct) continue;
            if (t_[k].text == "{")
                ++depth;
            else if (t_[k].text == "}") {
                --depth;
                if (depth == 0) return k;
            }
        }
        return t_.size() - 1;
    }

    std::size_t match_paren_from(std::size_t open) const {
        int depth = 0;
        for (std::size_t k = open; k < t_.size(); ++k) {
            if (t_[k].kind != Tok::Punct) continue;
            if (t_[k].text == "(")
                ++depth;
            else if (t_[k].text == ")") {
                --depth;
                if (depth == 0) return k;
            }
        }
        return t_.size() - 1;
    }

    std::string parse_dotted() {
        std::string name;
        while (cur().kind == Tok::Ident || (is_punct("*") && !name.empty())) {
            name += std::string(cur().text);
            ++i_;
            if (is_punct(".")) {
                name += '.';
                ++i_;
            } else {
                break;
            }
        }
        return name;
    }

    cst::Node parse_package() {
        const Tok& first = cur();
        ++i_;
        std::string name = parse_dotted();
        const Tok& last = is_punct(";") ? cur() : at(i_ - 1);
        if (is_punct(";")) ++i_;
        return leaf("package_declaration", "", span_between(first, last), name);
    }

    cst::Node parse_import() {
        const Tok& first = cur();
        ++i_;
        bool is_static = false;
        if (is_ident("static")) {
            is_static = true;
            ++i_;
        }
        std::string spec = parse_dotted();
        const Tok& last = is_punct(";") ? cur() : at(i_ - 1);
        if (is_punct(";")) ++i_;
        cst::Node node = leaf("import_declaration", "", span_between(first, last), spec);
        if (is_static)
            node.children.push_back(leaf("static", "static", span_between(first, first), "static"));
        return node;
    }

    bool looks_like_type_decl() const {
        // Scan past modifiers/annotations for a type keyword.
        std::size_t k = i_;
        int guard = 0;
        while (k < t_.size() && guard++ < 64) {
            const Tok& tok = t_[k];
            if (tok.kind == Tok::Punct && tok.text == "@") {
                if (at(k + 1).kind == Tok::Ident && at(k + 1).text == "interface") return true;
                k += 2;
                if (punct_at(k, "(")) {
                    std::size_t close = match_paren_from(k);
                    k = close + 1;
                }
                continue;
            }
            if (tok.kind == Tok::Ident && kModifiers.count(tok.text)) {
                ++k;
                continue;
            }
            return tok.kind == Tok::Ident && kTypeKeywords.count(tok.text) > 0;
        }
        return false;
    }

    std::vector<std::string> parse_modifiers() {
        std::vector<std::string> mods;
        int guard = 0;
        while (!at_end() && guard++ < 64) {
            if (is_punct("@")) {
                if (at(i_ + 1).kind == Tok::Ident && at(i_ + 1).text == "interface") break;
                ++i_;
                if (cur().kind == Tok::Ident) {
                    mods.push_back("@" + std::string(cur().text));
                    ++i_;
                    if (is_punct("(")) i_ = match_paren_from(i_) + 1;
                }
                continue;
            }
            if (cur().kind == Tok::Ident && kModifiers.count(cur().text)) {
                mods.push_back(std::string(cur().text));
                ++i_;
                continue;
            }
            break;
        }
        return mods;
    }

    void skip_generics_if_any() {
        if (!is_punct("<")) return;
        int depth = 0;
        while (!at_end()) {
            if (cur().kind == Tok::Punct) {
                if (cur().text == "<")
                    ++depth;
                else if (cur().text == ">") {
                    --depth;
                    if (depth == 0) {
                        ++i_;
                        return;
                    }
                } else if (cur().text == "{" || cur().text == ";") {
                    return;
                }
            }
            ++i_;
        }
    }

    std::string parse_type_text() {
        std::string text;
        if (cur().kind != Tok::Ident) return text;
        text = std::string(cur().text);
        ++i_;
        while (is_punct(".") && at(i_ + 1).kind == Tok::Ident) {
            text += '.';
            text += std::string(at(i_ + 1).text);
            i_ += 2;
        }
        if (is_punct("<")) {
            std::size_t g_start = i_;
            int depth = 0;
            std::size_t g_end = 0;
            for (std::size_t g = i_; g < t_.size(); ++g) {
                if (t_[g].kind != Tok::Punct) continue;
                if (t_[g].text == "<")
                    ++depth;
                else if (t_[g].text == ">") {
                    --depth;
                    if (depth == 0) {
                        g_end = g;
                        break;
                    }
                } else if (t_[g].text == ";" || t_[g].text == "{" || t_[g].text == "}") {
                    break;
                }
            }
            if (g_end != 0) {
                std::string g_text(src_.substr(t_[g_start].byte_start,
                                               t_[g_end].byte_end - t_[g_start].byte_start));
                g_text.erase(std::remove_if(g_text.begin(), g_text.end(),
                                            [](char ch) { return ch == ' ' || ch == '\t'; }),
                             g_text.end());
                text += g_text;
                i_ = g_end + 1;
            }
        }
        while (is_punct("[") && punct_at(i_ + 1, "]")) {
            text += "[]";
            i_ += 2;
        }
        return text;
    }

    std::vector<std::string> parse_type_list(const std::set<std::string_view>& stop_words) {
        std::vector<std::string> names;
        int guard = 0;
        while (!at_end() && guard++ < 256) {
            if (cur().kind == Tok::Ident && stop_words.count(cur().text)) break;
            if (is_punct("{") || is_punct(";")) break;
            if (cur().kind != Tok::Ident) {
                ++i_;
                continue;
            }
            std::string name = parse_type_text();
            if (!name.empty()) names.push_back(std::move(name));
            if (is_punct(",")) {
                ++i_;
                continue;
            }
        }
        return names;
    }

    cst::Node parse_type(int depth) {
        const std::size_t first_idx = i_;
        std::vector<std::string> mods = parse_modifiers();

        std::string decl_kind;
        if (is_punct("@") && at(i_ + 1).kind == Tok::Ident && at(i_ + 1).text == "interface") {
            decl_kind = "annotation_type_declaration";
            i_ += 2;
        } else if (cur().kind == Tok::Ident && kTypeKeywords.count(cur().text)) {
            std::string_view kw = cur().text;
            if (kw == "class")
                decl_kind = "class_declaration";
            else if (kw == "interface")
                decl_kind = "interface_declaration";
            else if (kw == "enum")
                decl_kind = "enum_declaration";
            else
                decl_kind = "record_declaration";
            ++i_;
        } else {
            diag_warn(diags_, file_, cur().line, cur().col, "expected type declaration");
            ++i_;
            return {};
        }

        if (cur().kind != Tok::Ident) {
            diag_warn(diags_, file_, cur().line, cur().col, "type declaration without a name");
            return {};
        }
        const Tok& name_tok = cur();
        std::string name(cur().text);
        ++i_;
        skip_generics_if_any();

        // Record header: Point(int x, int y)
        if (decl_kind == "record_declaration" && is_punct("(")) {
            std::size_t close = match_paren_from(i_);
            i_ = close + 1;
        }

        std::vector<std::string> supers;
        std::vector<std::string> ifaces;
        if (is_ident("extends")) {
            ++i_;
            supers = parse_type_list({"implements", "permits"});
        }
        if (is_ident("implements")) {
            ++i_;
            ifaces = parse_type_list({"permits"});
        }
        if (is_ident("permits")) {
            ++i_;
            parse_type_list({});
        }

        cst::Node node;
        node.kind = decl_kind;
        cst::Node mods_node;
        mods_node.kind = "modifiers";
        mods_node.field = "modifiers";
        mods_node.span = span_between(t_[first_idx], t_[first_idx]);
        for (const std::string& m : mods)
            mods_node.children.push_back(leaf("modifier", "", mods_node.span, m));
        node.children.push_back(std::move(mods_node));
        node.children.push_back(leaf("name", "name", span_between(name_tok, name_tok), name));
        if (!supers.empty()) {
            cst::Node sup;
            sup.kind = "super_list";
            sup.field = "superclass";
            sup.span = span_between(name_tok, name_tok);
            for (const std::string& s : supers)
                sup.children.push_back(leaf("type", "", sup.span, s));
            node.children.push_back(std::move(sup));
        }
        if (!ifaces.empty()) {
            cst::Node ifs;
            ifs.kind = "interface_list";
            ifs.field = "interfaces";
            ifs.span = span_between(name_tok, name_tok);
            for (const std::string& s : ifaces)
                ifs.children.push_back(leaf("type", "", ifs.span, s));
            node.children.push_back(std::move(ifs));
        }

        if (!is_punct("{")) {
            diag_warn(diags_, file_, cur().line, cur().col, "type declaration without a body");
            node.span = span_between(t_[first_idx], at(i_ > 0 ? i_ - 1 : 0));
            return node;
        }
        std::size_t open = i_;
        std::size_t close = match_brace(open);
        cst::Node body;
        body.kind = "type_body";
        body.field = "body";
        body.span = span_between(t_[open], t_[close]);
        i_ = open + 1;
        if (decl_kind == "enum_declaration") parse_enum_constants(close, name, body);
        while (i_ < close) {
            parse_member(close, depth, body);
        }
        i_ = close + 1;
        node.children.push_back(std::move(body));
        node.span = span_between(t_[first_idx], t_[close]);
        return node;
    }

    void parse_enum_constants(std::size_t close, const std::string& enum_name, cst::Node& body) {
        while (i_ < close) {
            if (is_punct(";")) {
                ++i_;
                return;
            }
            if (is_punct("@")) {
                parse_modifiers();
                continue;
            }
            if (cur().kind != Tok::Ident) {
                ++i_;
                continue;
            }
            const Tok& name_tok = cur();
            cst::Node field;
            field.kind = "field_declaration";
            field.span = span_between(name_tok, name_tok);
            field.children.push_back(leaf("type", "type", field.span, enum_name));
            field.children.push_back(leaf("name", "name", field.span, std::string(cur().text)));
            body.children.push_back(std::move(field));
            ++i_;
            if (is_punct("(")) i_ = match_paren_from(i_) + 1;
            if (is_punct("{")) i_ = match_brace(i_) + 1;
            if (is_punct(",")) ++i_;
        }
    }

    void parse_member(std::size_t close, int depth, cst::Node& body) {
        if (i_ >= close) return;
        if (is_punct(";")) {
            ++i_;
            return;
        }
        std::size_t member_start = i_;
        std::vector<std::string> mods = parse_modifiers();

        if ((cur().kind == Tok::Ident && kTypeKeywords.count(cur().text)) ||
            (is_punct("@") && at(i_ + 1).kind == Tok::Ident && at(i_ + 1).text == "interface")) {
            if (depth < 64) {
                i_ = member_start;
                cst::Node nested = parse_type(depth + 1);
                if (!nested.kind.empty()) body.children.push_back(std::move(nested));
            } else {
                if (is_punct("{"))
                    i_ = match_brace(i_) + 1;
                else
                    ++i_;
            }
            return;
        }

        // Static or instance initializer block.
        if (is_punct("{")) {
            i_ = match_brace(i_) + 1;
            return;
        }

        // Generic method: <T> T id(T x)
        skip_generics_if_any();

        if (cur().kind != Tok::Ident) {
            diag_warn(diags_, file_, cur().line, cur().col, "unexpected token in type body");
            ++i_;
            return;
        }

        std::string first_text = parse_type_text();
        if (first_text.empty()) {
            ++i_;
            return;
        }

        if (is_punct("(")) {
            // Constructor: name directly followed by the parameter list.
            emit_callable(member_start, "constructor_declaration", first_text, "", mods, body);
            return;
        }

        if (cur().kind != Tok::Ident) {
            diag_warn(diags_, file_, cur().line, cur().col, "unexpected member declaration");
            skip_to_member_end(close);
            return;
        }

        std::string name(cur().text);
        ++i_;
        if (is_punct("(")) {
            emit_callable(member_start, "method_declaration", name, first_text, mods, body);
            return;
        }

        // Field declaration: type name [= init] (, name)* ;
        std::vector<std::pair<std::string, const Tok*>> names;
        names.emplace_back(name, &at(i_ - 1));
        int guard = 0;
        while (i_ < close && guard++ < 4096) {
            if (is_punct(";")) break;
            if (is_punct(",")) {
                ++i_;
                if (cur().kind == Tok::Ident) {
                    names.emplace_back(std::string(cur().text), &cur());
                    ++i_;
                }
                continue;
            }
            if (is_punct("=")) {
                ++i_;
                skip_initializer(close);
                continue;
            }
            ++i_;
        }
        const Tok& last = i_ < close && is_punct(";") ? cur() : at(i_ - 1);
        if (is_punct(";")) ++i_;
        for (auto& [n, tok] : names) {
            cst::Node field;
            field.kind = "field_declaration";
            field.span = span_between(t_[member_start], last);
            field.children.push_back(leaf("type", "type", field.span, first_text));
            field.children.push_back(leaf("name", "name", span_between(*tok, *tok), n));
            body.children.push_back(std::move(field));
        }
    }

    void skip_initializer(std::size_t close) {
        int depth = 0;
        while (i_ < close) {
            if (cur().kind == Tok::Punct) {
                std::string_view p = cur().text;
                if (p == "(" || p == "[" || p == "{")
                    ++depth;
                else if (p == ")" || p == "]" || p == "}")
                    --depth;
                else if ((p == "," || p == ";") && depth == 0)
                    return;
            }
            ++i_;
        }
    }

    void skip_to_member_end(std::size_t close) {
        while (i_ < close && !is_punct(";") && !is_punct("{")) ++i_;
        if (i_ < close && is_punct("{"))
            i_ = match_brace(i_) + 1;
        else if (i_ < close)
            ++i_;
    }

    void emit_callable(std::size_t member_start, const std::string& kind, const std::string& name,
                       const std::string& return_type, const std::vector<std::string>& mods,
                       cst::Node& body_out) {
        std::size_t open = i_;
        std::size_t close_paren = match_paren_from(open);

        cst::Node node;
        node.kind = kind;
        cst::Node mods_node;
        mods_node.kind = "modifiers";
        mods_node.field = "modifiers";
        mods_node.span = span_between(t_[member_start], t_[member_start]);
        for (const std::string& m : mods)
            mods_node.children.push_back(leaf("modifier", "", mods_node.span, m));
        node.children.push_back(std::move(mods_node));
        node.children.push_back(
            leaf("name", "name", span_between(t_[member_start], t_[member_start]), name));

        cst::Node params;
        params.kind = "parameters";
        params.field = "parameters";
        params.span = span_between(t_[open], t_[close_paren]);
        parse_params(open, close_paren, params);
        node.children.push_back(std::move(params));
        if (!return_type.empty())
            node.children.push_back(leaf("return_type", "return_type",
                                         span_between(t_[member_start], t_[member_start]),
                                         return_type));

        i_ = close_paren + 1;
        // throws clause
        if (is_ident("throws")) {
            ++i_;
            parse_type_list({});
        }

        std::size_t end_idx = close_paren;
        if (is_punct("{")) {
            std::size_t body_open = i_;
            std::size_t body_close = match_brace(body_open);
            cst::Node body;
            body.kind = "block";
            body.field = "body";
            body.span = span_between(t_[body_open], t_[body_close]);
            BodyScanner scanner(t_, src_);
            body.children = scanner.scan(body_open + 1, body_close);
            node.children.push_back(std::move(body));
            end_idx = body_close;
            i_ = body_close + 1;
        } else if (is_punct(";")) {
            end_idx = i_;
            ++i_;
        } else if (is_punct("=")) {
            // Annotation member default: int value() default 1; handled loosely.
            skip_initializer(t_.size() - 1);
            if (is_punct(";")) {
                end_idx = i_;
                ++i_;
            }
        } else if (is_ident("default")) {
            while (!at_end() && !is_punct(";")) ++i_;
            if (is_punct(";")) {
                end_idx = i_;
                ++i_;
            }
        }
        node.span = span_between(t_[member_start], t_[end_idx]);
        body_out.children.push_back(std::move(node));
    }

    void parse_params(std::size_t open, std::size_t close, cst::Node& params) {
        std::size_t k = open + 1;
        while (k < close) {
            // One parameter: tokens until a top-level comma.
            std::size_t end = k;
            int depth = 0;
            while (end < close) {
                if (t_[end].kind == Tok::Punct) {
                    std::string_view p = t_[end].text;
                    if (p == "(" || p == "[" || p == "<")
                        ++depth;
                    else if (p == ")" || p == "]" || p == ">")
                        --depth;
                    else if (p == "," && depth == 0)
                        break;
                }
                ++end;
            }
            parse_one_param(k, end, params);
            k = end + 1;
        }
    }

    void parse_one_param(std::size_t from, std::size_t to, cst::Node& params) {
        // Strip leading annotations and 'final'.
        std::size_t c = from;
        while (c < to) {
            if (punct_at(c, "@")) {
                c += 2;
                if (punct_at(c, "(")) {
                    int depth = 0;
                    while (c < to) {
                        if (punct_at(c, "("))
                            ++depth;
                        else if (punct_at(c, ")")) {
                            --depth;
                            if (depth == 0) {
                                ++c;
                                break;
                            }
                        }
                        ++c;
                    }
                }
                continue;
            }
            if (at(c).kind == Tok::Ident && at(c).text == "final") {
                ++c;
                continue;
            }
            break;
        }
        if (c >= to) return;

        // Find the last identifier: that's the name; everything before is type.
        std::size_t name_idx = to;
        for (std::size_t k = to; k-- > c;) {
            if (t_[k].kind == Tok::Ident) {
                name_idx = k;
                break;
            }
        }
        if (name_idx == to) return;

        std::string type_text;
        if (name_idx > c) {
            std::string_view slice =
                src_.substr(t_[c].byte_start, t_[name_idx - 1].byte_end - t_[c].byte_start);
            type_text = std::string(slice);
            type_text.erase(std::remove_if(type_text.begin(), type_text.end(),
                                           [](char ch) { return ch == ' ' || ch == '\t'; }),
                            type_text.end());
        }

        cst::Node param;
        param.kind = "parameter";
        param.span = span_between(t_[c], t_[name_idx]);
        param.children.push_back(leaf("type", "type", param.span, type_text));
        param.children.push_back(leaf("name", "name", span_between(t_[name_idx], t_[name_idx]),
                                      std::string(t_[name_idx].text)));
        params.children.push_back(std::move(param));
    }
};

} // namespace

cst::Tree parse_java(std::string_view source, std::string_view file) {
    cst::Tree tree;
    Lexed lexed = lex(source, file, 1);
    tree.diagnostics = std::move(lexed.diags);
    check_balance(lexed.toks, file, tree.diagnostics);
    Parser parser(lexed.toks, source, file, tree.diagnostics);
    tree.root = parser.parse_compilation_unit();
    return tree;
}

std::vector<cst::Node> scan_java_snippet(std::string_view text, int start_line) {
    Lexed lexed = lex(text, "<snippet>", start_line);
    const std::vector<Tok>& toks = lexed.toks;
    std::size_t from = 0;
    std::size_t to = toks.empty() ? 0 : toks.size() - 1;

    // Skip a leading declaration header ("... name(params) ... {"): when the
    // first top-level '{' is preceded by a ')' that closes a parameter list
    // opened right after an identifier, scan only between the outer braces.
    int depth = 0;
    std::size_t first_brace = toks.size();
    for (std::size_t k = 0; k < to; ++k) {
        if (toks[k].kind != Tok::Punct) continue;
        if (toks[k].text == "(")
            ++depth;
        else if (toks[k].text == ")")
            --depth;
        else if (toks[k].text == "{" && depth == 0) {
            first_brace = k;
            break;
        }
    }
    if (first_brace == toks.size() && to >= 4) {
        // Body-less declaration ("double area();"): type, name, parameter
        // list, and nothing but ';' after it — contains no invocations.
        auto is_p = [&](std::size_t k, std::string_view p) {
            return k < to && toks[k].kind == Tok::Punct && toks[k].text == p;
        };
        auto is_plain_ident = [&](std::size_t k) {
            return k < to && toks[k].kind == Tok::Ident &&
                   !kStatementKeywords.count(toks[k].text);
        };
        auto skip_type_ref = [&](std::size_t& c) -> bool {
            if (!is_plain_ident(c)) return false;
            ++c;
            while (is_p(c, ".") && is_plain_ident(c + 1)) c += 2;
            if (is_p(c, "<")) {
                int d = 0;
                while (c < to) {
                    if (is_p(c, "<")) ++d;
                    if (is_p(c, ">")) --d;
                    ++c;
                    if (d == 0) break;
                }
            }
            while (is_p(c, "[") && is_p(c + 1, "]")) c += 2;
            return true;
        };
        std::size_t c = 0;
        while (c < to) {
            if (toks[c].kind == Tok::Ident && kModifiers.count(toks[c].text)) {
                ++c;
            } else if (is_p(c, "@") && c + 1 < to && toks[c + 1].kind == Tok::Ident) {
                c += 2;
            } else {
                break;
            }
        }
        if (skip_type_ref(c) && is_plain_ident(c)) {
            ++c;
            if (is_p(c, "(")) {
                int d = 0;
                while (c < to) {
                    if (is_p(c, "(")) ++d;
                    if (is_p(c, ")")) {
                        --d;
                        ++c;
                        if (d == 0) break;
                    } else {
                        ++c;
                    }
                }
                if (c < to && toks[c].kind == Tok::Ident && toks[c].text == "throws") {
                    ++c;
                    while (c < to && !is_p(c, ";")) ++c;
                }
                if (c >= to || (is_p(c, ";") && c + 1 >= to)) return {};
            }
        }
    }
    if (first_brace != toks.size() && first_brace >= 2) {
        bool header = false;
        for (std::size_t k = 0; k < first_brace; ++k) {
            if (toks[k].kind == Tok::Punct && toks[k].text == "(" && k >= 1 &&
                toks[k - 1].kind == Tok::Ident && !kNoCall.count(toks[k - 1].text)) {
                header = true;
                break;
            }
            if (toks[k].kind == Tok::Punct && toks[k].text == ";") break;
        }
        if (header) {
            int brace_depth = 0;
            std::size_t close = to;
            for (std::size_t k = first_brace; k < to; ++k) {
                if (toks[k].kind != Tok::Punct) continue;
                if (toks[k].text == "{")
                    ++brace_depth;
                else if (toks[k].text == "}") {
                    --brace_depth;
                    if (brace_depth == 0) {
                        close = k;
                        break;
                    }
                }
            }
            from = first_brace + 1;
            to = close;
        }
    }

    BodyScanner scanner(toks, text);
    return scanner.scan(from, to);
}

} // namespace cak::detail
