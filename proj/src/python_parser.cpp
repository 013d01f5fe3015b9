// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "parsers.hpp"
#include "text_util.hpp"

#include "cak/schema.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

namespace cak::detail {
namespace {

struct Tok {
    enum Kind { Ident, Number, Str, Punct, Newline, End } kind = End;
    std::string_view text;
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;
    int line = 1;
    int col = 0;       // 0-based byte column
    int indent = -1;   // set on the first token of a logical line
};

const std::set<std::string_view> kKeywordsNoCall = {
    "if", "elif", "while", "for", "return", "yield", "assert", "del", "not", "and",
    "or", "in", "is", "lambda", "with", "except", "raise", "def", "class", "global",
    "nonlocal", "pass", "break", "continue", "import", "from", "as", "try",
    "finally", "else", "True", "False", "None", "async", "await",
};

bool is_punct_allowed(char c) {
    static const std::string allowed = "()[]{}<>:;,.=+-*/%!&|^~@";
    return allowed.find(c) != std::string::npos;
}

bool is_string_prefix(std::string_view s) {
    if (s.empty() || s.size() > 3) return false;
    for (char c : s) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
    }
    return true;
}

struct Lexed {
    std::vector<Tok> toks;
    std::vector<ParseDiagnostic> diags;
    std::vector<int> line_indents;  // expanded indent per physical line, 1-based index
};

void diag_err(std::vector<ParseDiagnostic>& out, std::string_view file, int line, int col,
              const std::string& what) {
    out.push_back({std::string(file), line, col, "error: " + what});
}

void diag_warn(std::vector<ParseDiagnostic>& out, std::string_view file, int line, int col,
               const std::string& what) {
    out.push_back({std::string(file), line, col, "warning: " + what});
}

// table[line] is the expanded indent of physical line `line` (line_base-based).
std::vector<int> compute_indents(std::string_view src, int line_base) {
    std::vector<int> table(static_cast<std::size_t>(line_base), 0);
    int width = 0;
    bool measuring = true;
    for (char c : src) {
        if (c == '\n') {
            table.push_back(width);
            width = 0;
            measuring = true;
            continue;
        }
        if (!measuring) continue;
        if (c == ' ')
            ++width;
        else if (c == '\t')
            width = (width / 8 + 1) * 8;
        else
            measuring = false;
    }
    table.push_back(width);
    return table;
}

Lexed lex(std::string_view src, std::string_view file, int line_base) {
    Lexed out;
    out.line_indents = compute_indents(src, line_base);
    auto indent_of = [&](int line) -> int {
        std::size_t idx = static_cast<std::size_t>(line);
        return idx < out.line_indents.size() ? out.line_indents[idx] : 0;
    };

    std::size_t i = 0;
    int line = line_base;
    int col = 0;
    int bracket_depth = 0;
    bool line_has_token = false;

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
        Tok t{kind, src.substr(start, i - start), start, i, tline, tcol, -1};
        if (kind != Tok::Newline && !line_has_token &&
            (out.toks.empty() || out.toks.back().kind == Tok::Newline)) {
            t.indent = indent_of(tline);
        }
        if (kind != Tok::Newline) line_has_token = true;
        out.toks.push_back(t);
    };

    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == '\n') {
            if (bracket_depth == 0 && line_has_token) {
                out.toks.push_back({Tok::Newline, src.substr(i, 1), i, i + 1, line, col, -1});
                line_has_token = false;
            }
            advance(1);
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
            advance(1);
            continue;
        }
        if (c == '\\' && i + 1 < src.size() && (src[i + 1] == '\n' || src[i + 1] == '\r')) {
            advance(src[i + 1] == '\r' && i + 2 < src.size() && src[i + 2] == '\n' ? 3 : 2);
            continue;
        }
        std::size_t start = i;
        int tline = line, tcol = col;
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '"' || c == '\'') {
            char quote = static_cast<char>(c);
            bool triple = i + 2 < src.size() && src[i + 1] == quote && src[i + 2] == quote;
            bool closed = false;
            if (triple) {
                advance(3);
                while (i < src.size()) {
                    if (src[i] == '\\') {
                        advance(2);
                        continue;
                    }
                    if (src[i] == quote && i + 2 < src.size() && src[i + 1] == quote &&
                        src[i + 2] == quote) {
                        advance(3);
                        closed = true;
                        break;
                    }
                    if (src[i] == quote && i + 2 >= src.size()) {
                        // Tail shorter than a full triple quote.
                        advance(1);
                        continue;
                    }
                    advance(1);
                }
            } else {
                advance(1);
                while (i < src.size() && src[i] != '\n') {
                    if (src[i] == '\\' && i + 1 < src.size()) {
                        advance(2);
                        continue;
                    }
                    if (src[i] == quote) {
                        advance(1);
                        closed = true;
                        break;
                    }
                    advance(1);
                }
            }
            if (!closed) diag_err(out.diags, file, tline, tcol, "unterminated string literal");
            push(Tok::Str, start, tline, tcol);
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
            std::string_view word = src.substr(start, i - start);
            if (is_string_prefix(word) && i < src.size() && (src[i] == '"' || src[i] == '\'')) {
                // String prefix: continue lexing as a string literal.
                char quote = src[i];
                bool triple = i + 2 < src.size() && src[i + 1] == quote && src[i + 2] == quote;
                bool closed = false;
                if (triple) {
                    advance(3);
                    while (i < src.size()) {
                        if (src[i] == '\\') {
                            advance(2);
                            continue;
                        }
                        if (src[i] == quote && i + 2 < src.size() && src[i + 1] == quote &&
                            src[i + 2] == quote) {
                            advance(3);
                            closed = true;
                            break;
                        }
                        if (src[i] == quote && i + 2 >= src.size()) {
                            advance(1);
                            continue;
                        }
                        advance(1);
                    }
                } else {
                    advance(1);
                    while (i < src.size() && src[i] != '\n') {
                        if (src[i] == '\\' && i + 1 < src.size()) {
                            advance(2);
                            continue;
                        }
                        if (src[i] == quote) {
                            advance(1);
                            closed = true;
                            break;
                        }
                        advance(1);
                    }
                }
                if (!closed)
                    diag_err(out.diags, file, tline, tcol, "unterminated string literal");
                push(Tok::Str, start, tline, tcol);
                continue;
            }
            push(Tok::Ident, start, tline, tcol);
            continue;
        }
        if (is_punct_allowed(static_cast<char>(c))) {
            if (c == '(' || c == '[' || c == '{') ++bracket_depth;
            if (c == ')' || c == ']' || c == '}') bracket_depth = std::max(0, bracket_depth - 1);
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
    if (line_has_token)
        out.toks.push_back({Tok::Newline, {}, src.size(), src.size(), line, col, -1});
    out.toks.push_back({Tok::End, {}, src.size(), src.size(), line, col, -1});
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

/// One logical line: token index range [from, to) excluding the Newline.
struct Line {
    std::size_t from = 0;
    std::size_t to = 0;
    int indent = 0;
};

std::vector<Line> logical_lines(const std::vector<Tok>& toks) {
    std::vector<Line> lines;
    std::size_t begin = toks.size();
    for (std::size_t k = 0; k < toks.size(); ++k) {
        if (toks[k].kind == Tok::Newline || toks[k].kind == Tok::End) {
            if (begin != toks.size() && k > begin) {
                Line l;
                l.from = begin;
                l.to = k;
                l.indent = toks[begin].indent >= 0 ? toks[begin].indent : 0;
                lines.push_back(l);
            }
            begin = toks.size();
            continue;
        }
        if (begin == toks.size()) begin = k;
    }
    return lines;
}

/// Call scanner over a token range (python flavor: no `new`, no locals).
std::vector<cst::Node> scan_calls(const std::vector<Tok>& t, std::string_view src,
                                  std::size_t from, std::size_t to) {
    std::vector<cst::Node> nodes;
    auto is_punct = [&](std::size_t k, std::string_view p) {
        return k < t.size() && t[k].kind == Tok::Punct && t[k].text == p;
    };
    auto match_paren = [&](std::size_t open) {
        int depth = 0;
        for (std::size_t k = open; k < t.size() && k <= to; ++k) {
            if (t[k].kind != Tok::Punct) continue;
            if (t[k].text == "(")
                ++depth;
            else if (t[k].text == ")") {
                --depth;
                if (depth == 0) return k;
            }
        }
        return std::min(to, t.size() - 1);
    };
    for (std::size_t k = from; k < to && k < t.size(); ++k) {
        if (!is_punct(k, "(") || k == from) continue;
        std::size_t name_idx = k - 1;
        if (t[name_idx].kind != Tok::Ident || kKeywordsNoCall.count(t[name_idx].text)) continue;

        std::size_t chain_start = name_idx;
        while (chain_start >= from + 2 && is_punct(chain_start - 1, ".") &&
               t[chain_start - 2].kind == Tok::Ident) {
            chain_start -= 2;
        }
        bool dynamic_receiver = chain_start >= from + 1 && is_punct(chain_start - 1, ".");

        std::string receiver;
        if (!dynamic_receiver) {
            for (std::size_t j = chain_start; j + 1 < name_idx; j += 2) {
                if (!receiver.empty()) receiver += '.';
                receiver += std::string(t[j].text);
            }
        }
        std::size_t anchor = dynamic_receiver ? name_idx : chain_start;

        std::size_t close = match_paren(k);
        cst::Node call;
        call.kind = "call";
        call.span = span_between(t[anchor], t[close]);
        if (!receiver.empty() || dynamic_receiver)
            call.children.push_back(
                leaf("receiver", "receiver", span_between(t[anchor], t[anchor]), receiver));
        call.children.push_back(
            leaf("name", "name", span_between(t[name_idx], t[name_idx]),
                 std::string(t[name_idx].text)));

        cst::Node args;
        args.kind = "arguments";
        args.field = "arguments";
        args.span = span_between(t[k], t[close]);
        std::size_t arg_begin = k + 1;
        int depth = 0;
        for (std::size_t a = k + 1; a <= close && a < t.size(); ++a) {
            bool at_close = (a == close);
            bool split = false;
            if (t[a].kind == Tok::Punct) {
                std::string_view p = t[a].text;
                if (p == "(" || p == "[" || p == "{")
                    ++depth;
                else if (p == ")" || p == "]" || p == "}")
                    --depth;
                else if (p == "," && depth == 0)
                    split = true;
            }
            if ((split || at_close) && a > arg_begin) {
                const Tok& first = t[arg_begin];
                const Tok& last = t[a - 1];
                std::string_view text =
                    src.substr(first.byte_start, last.byte_end - first.byte_start);
                args.children.push_back(
                    leaf("argument", "", span_between(first, last), std::string(trim(text))));
            }
            if (split) arg_begin = a + 1;
        }
        call.children.push_back(std::move(args));
        nodes.push_back(std::move(call));
    }
    std::stable_sort(nodes.begin(), nodes.end(), [](const cst::Node& a, const cst::Node& b) {
        return a.span.byte_start < b.span.byte_start;
    });
    return nodes;
}

class Parser {
public:
    Parser(const Lexed& lexed, std::string_view src, std::string_view file,
           std::vector<ParseDiagnostic>& diags)
        : t_(lexed.toks), src_(src), file_(file), diags_(diags) {
        lines_ = logical_lines(t_);
    }

    cst::Node parse_module() {
        cst::Node root;
        root.kind = "module";
        root.span.byte_end = src_.size();
        root.span.line_end = std::max<std::size_t>(count_lines(src_), 1);
        std::size_t li = 0;
        parse_toplevel(li, root);
        return root;
    }

private:
    const std::vector<Tok>& t_;
    std::string_view src_;
    std::string_view file_;
    std::vector<ParseDiagnostic>& diags_;
    std::vector<Line> lines_;

    const Tok& tok(std::size_t k) const { return t_[std::min(k, t_.size() - 1)]; }
    bool punct_at(std::size_t k, std::string_view p) const {
        return tok(k).kind == Tok::Punct && tok(k).text == p;
    }
    bool ident_at(std::size_t k, std::string_view s) const {
        return tok(k).kind == Tok::Ident && tok(k).text == s;
    }

    // Module-level statements: defs, classes, imports; plain statements and
    // their compound suites are skipped.
    void parse_toplevel(std::size_t& li, cst::Node& parent) {
        std::vector<std::string> pending_decorators;
        std::size_t decorator_first_line = 0;
        bool have_decorators = false;
        bool prev_opened_suite = false;

        while (li < lines_.size()) {
            const Line& line = lines_[li];
            if (line.indent > 0) {
                // Continuation of a preceding compound statement; indentation
                // with no such statement before it is stray.
                if (!prev_opened_suite) {
                    diag_warn(diags_, file_, t_[line.from].line, t_[line.from].col,
                              "unexpected indent");
                }
                while (li < lines_.size() && lines_[li].indent > 0) ++li;
                prev_opened_suite = false;
                continue;
            }

            std::size_t from = line.from;
            if (punct_at(from, "@")) {
                std::string name = "@";
                std::size_t c = from + 1;
                while (tok(c).kind == Tok::Ident) {
                    name += std::string(tok(c).text);
                    ++c;
                    if (punct_at(c, ".")) {
                        name += '.';
                        ++c;
                    } else {
                        break;
                    }
                }
                if (!have_decorators) {
                    decorator_first_line = li;
                    have_decorators = true;
                }
                pending_decorators.push_back(name);
                ++li;
                prev_opened_suite = false;
                continue;
            }

            bool is_async = ident_at(from, "async");
            std::size_t head = is_async ? from + 1 : from;

            if (ident_at(head, "def")) {
                parse_def(li, pending_decorators,
                          have_decorators ? decorator_first_line : li, parent);
                pending_decorators.clear();
                have_decorators = false;
                prev_opened_suite = false;
                continue;
            }
            if (ident_at(head, "class")) {
                parse_class(li, 0, pending_decorators,
                            have_decorators ? decorator_first_line : li, parent);
                pending_decorators.clear();
                have_decorators = false;
                prev_opened_suite = false;
                continue;
            }
            pending_decorators.clear();
            have_decorators = false;

            if (ident_at(from, "import") || ident_at(from, "from")) {
                parent.children.push_back(parse_import(line));
                ++li;
                prev_opened_suite = false;
                continue;
            }

            prev_opened_suite = punct_at(line.to - 1, ":");
            ++li;
        }
    }

    cst::Node parse_import(const Line& line) {
        bool from_form = ident_at(line.from, "from");
        cst::Node node;
        node.kind = from_form ? "import_from_statement" : "import_statement";
        node.span = span_between(t_[line.from], t_[line.to - 1]);
        std::size_t c = line.from + 1;
        auto read_dotted = [&]() {
            std::string name;
            while (c < line.to && punct_at(c, ".")) {
                name += '.';
                ++c;
            }
            if (c < line.to && tok(c).kind == Tok::Ident && !ident_at(c, "import") &&
                !ident_at(c, "as")) {
                name += std::string(tok(c).text);
                ++c;
                while (c + 1 < line.to && punct_at(c, ".") && tok(c + 1).kind == Tok::Ident &&
                       !ident_at(c + 1, "import")) {
                    name += '.';
                    name += std::string(tok(c + 1).text);
                    c += 2;
                }
            }
            return name;
        };
        if (from_form) {
            std::string mod = read_dotted();
            node.children.push_back(leaf("module", "module", node.span, mod));
            if (c < line.to && ident_at(c, "import")) ++c;
            while (c < line.to) {
                if (punct_at(c, "*")) {
                    node.children.push_back(leaf("name", "", node.span, "*"));
                    ++c;
                    continue;
                }
                if (tok(c).kind == Tok::Ident && !ident_at(c, "as")) {
                    node.children.push_back(
                        leaf("name", "", node.span, std::string(tok(c).text)));
                    ++c;
                    if (c < line.to && ident_at(c, "as")) c += 2;
                    continue;
                }
                ++c;
            }
        } else {
            while (c < line.to) {
                std::string name = read_dotted();
                if (!name.empty())
                    node.children.push_back(leaf("name", "", node.span, name));
                if (c < line.to && ident_at(c, "as")) c += 2;
                if (c < line.to && punct_at(c, ",")) ++c;
                if (c < line.to && name.empty()) ++c;
            }
        }
        return node;
    }

    void maybe_field(const Line& line, cst::Node& parent) {
        // name [: annotation] = value   |   name: annotation
        std::size_t c = line.from;
        if (tok(c).kind != Tok::Ident || kKeywordsNoCall.count(tok(c).text)) return;
        std::string name(tok(c).text);
        ++c;
        std::string anno;
        if (punct_at(c, ":")) {
            ++c;
            std::size_t anno_start = c;
            while (c < line.to && !punct_at(c, "=")) ++c;
            if (c > anno_start) {
                std::string_view slice = src_.substr(
                    t_[anno_start].byte_start, t_[c - 1].byte_end - t_[anno_start].byte_start);
                anno = std::string(trim(slice));
            }
        }
        if (!(c < line.to && punct_at(c, "=")) && anno.empty()) return;
        cst::Node field;
        field.kind = "field_definition";
        field.span = span_between(t_[line.from], t_[line.to - 1]);
        field.children.push_back(leaf("name", "name", field.span, name));
        if (!anno.empty()) field.children.push_back(leaf("type", "type", field.span, anno));
        parent.children.push_back(std::move(field));
    }

    // Token range covered by the suite of the construct whose header is at
    // lines_[li]: every following line with indent > header indent.
    std::size_t suite_end_line(std::size_t li) const {
        int header_indent = lines_[li].indent;
        std::size_t last = li;
        for (std::size_t k = li + 1; k < lines_.size(); ++k) {
            if (lines_[k].indent <= header_indent) break;
            last = k;
        }
        return last;
    }

    void parse_def(std::size_t& li, const std::vector<std::string>& decorators,
                   std::size_t span_start_line, cst::Node& parent) {
        const Line& line = lines_[li];
        std::size_t c = line.from;
        if (ident_at(c, "async")) ++c;
        const std::size_t def_idx = c;
        ++c;  // def

        bool ok = true;
        std::string name;
        if (tok(c).kind == Tok::Ident && !kKeywordsNoCall.count(tok(c).text)) {
            name = std::string(tok(c).text);
            ++c;
        } else {
            ok = false;
        }
        std::size_t open = c;
        if (!punct_at(open, "(")) ok = false;

        std::size_t close = open;
        if (ok) {
            int d = 0;
            for (std::size_t k = open; k < line.to; ++k) {
                if (punct_at(k, "(")) ++d;
                if (punct_at(k, ")")) {
                    --d;
                    if (d == 0) {
                        close = k;
                        break;
                    }
                }
            }
            if (close == open) ok = false;
        }

        // Return annotation and the terminating colon.
        std::string ret;
        std::size_t colon = line.to;
        if (ok) {
            std::size_t c2 = close + 1;
            if (punct_at(c2, "-") && punct_at(c2 + 1, ">")) {
                std::size_t anno_start = c2 + 2;
                std::size_t k = anno_start;
                int d = 0;
                while (k < line.to) {
                    if (punct_at(k, "(") || punct_at(k, "[") || punct_at(k, "{")) ++d;
                    if (punct_at(k, ")") || punct_at(k, "]") || punct_at(k, "}")) --d;
                    if (punct_at(k, ":") && d == 0) break;
                    ++k;
                }
                if (k > anno_start && k < line.to) {
                    std::string_view slice = src_.substr(
                        t_[anno_start].byte_start, t_[k - 1].byte_end - t_[anno_start].byte_start);
                    ret = std::string(trim(slice));
                }
                colon = k;
            } else if (punct_at(c2, ":")) {
                colon = c2;
            } else {
                colon = line.to;
            }
            if (colon >= line.to || !punct_at(colon, ":")) ok = false;
        }

        if (!ok) {
            diag_err(diags_, file_, t_[def_idx].line, t_[def_idx].col, "malformed def header");
            ++li;
            return;
        }

        cst::Node node;
        node.kind = "function_definition";
        cst::Node mods;
        mods.kind = "modifiers";
        mods.field = "modifiers";
        mods.span = span_between(t_[lines_[span_start_line].from], t_[lines_[span_start_line].from]);
        for (const std::string& d : decorators)
            mods.children.push_back(leaf("modifier", "", mods.span, d));
        node.children.push_back(std::move(mods));
        node.children.push_back(
            leaf("name", "name", span_between(t_[def_idx + 1], t_[def_idx + 1]), name));

        cst::Node params;
        params.kind = "parameters";
        params.field = "parameters";
        params.span = span_between(t_[open], t_[close]);
        parse_params(open, close, params);
        node.children.push_back(std::move(params));
        if (!ret.empty())
            node.children.push_back(
                leaf("return_type", "return_type", span_between(t_[close], t_[close]), ret));

        // Body: inline statements after the colon, else the indented suite.
        std::size_t last_line = li;
        std::size_t body_from = 0, body_to = 0;
        if (colon + 1 < line.to) {
            body_from = colon + 1;
            body_to = line.to;
        } else {
            last_line = suite_end_line(li);
            if (last_line == li) {
                diag_warn(diags_, file_, t_[def_idx].line, t_[def_idx].col,
                          "expected an indented block");
            } else {
                body_from = lines_[li + 1].from;
                body_to = lines_[last_line].to;
            }
        }
        if (body_to > body_from) {
            cst::Node body;
            body.kind = "block";
            body.field = "body";
            body.span = span_between(t_[body_from], t_[body_to - 1]);
            body.children = scan_calls(t_, src_, body_from, body_to);
            node.children.push_back(std::move(body));
        }

        const Line& first = lines_[span_start_line];
        const Line& last = lines_[last_line];
        node.span = span_between(t_[first.from], t_[last.to - 1]);
        parent.children.push_back(std::move(node));
        li = last_line + 1;
    }

    void parse_params(std::size_t open, std::size_t close, cst::Node& params) {
        std::size_t k = open + 1;
        while (k < close) {
            std::size_t end = k;
            int d = 0;
            while (end < close) {
                if (punct_at(end, "(") || punct_at(end, "[") || punct_at(end, "{")) ++d;
                if (punct_at(end, ")") || punct_at(end, "]") || punct_at(end, "}")) --d;
                if (punct_at(end, ",") && d == 0) break;
                ++end;
            }
            parse_one_param(k, end, params);
            k = end + 1;
        }
    }

    void parse_one_param(std::size_t from, std::size_t to, cst::Node& params) {
        std::size_t c = from;
        std::string stars;
        while (c < to && (punct_at(c, "*") || punct_at(c, "/"))) {
            if (punct_at(c, "*")) stars += '*';
            ++c;
        }
        if (c >= to || tok(c).kind != Tok::Ident) return;
        std::string name = stars + std::string(tok(c).text);
        std::size_t name_idx = c;
        ++c;
        std::string anno;
        if (c < to && punct_at(c, ":")) {
            ++c;
            std::size_t anno_start = c;
            int d = 0;
            while (c < to) {
                if (punct_at(c, "(") || punct_at(c, "[") || punct_at(c, "{")) ++d;
                if (punct_at(c, ")") || punct_at(c, "]") || punct_at(c, "}")) --d;
                if (punct_at(c, "=") && d == 0) break;
                ++c;
            }
            if (c > anno_start) {
                std::string_view slice = src_.substr(
                    t_[anno_start].byte_start, t_[c - 1].byte_end - t_[anno_start].byte_start);
                anno = std::string(trim(slice));
            }
        }
        cst::Node param;
        param.kind = "parameter";
        param.span = span_between(t_[from], t_[name_idx]);
        param.children.push_back(leaf("type", "type", param.span, anno));
        param.children.push_back(
            leaf("name", "name", span_between(t_[name_idx], t_[name_idx]), name));
        params.children.push_back(std::move(param));
    }

    void parse_class(std::size_t& li, int depth, const std::vector<std::string>& decorators,
                     std::size_t span_start_line, cst::Node& parent) {
        const Line& line = lines_[li];
        std::size_t c = line.from;
        const std::size_t class_idx = c;
        ++c;  // class

        bool ok = true;
        std::string name;
        if (tok(c).kind == Tok::Ident && !kKeywordsNoCall.count(tok(c).text)) {
            name = std::string(tok(c).text);
            ++c;
        } else {
            ok = false;
        }

        std::vector<std::string> bases;
        if (ok && punct_at(c, "(")) {
            std::size_t open = c;
            std::size_t close = open;
            int d = 0;
            for (std::size_t k = open; k < line.to; ++k) {
                if (punct_at(k, "(")) ++d;
                if (punct_at(k, ")")) {
                    --d;
                    if (d == 0) {
                        close = k;
                        break;
                    }
                }
            }
            if (close == open) {
                ok = false;
            } else {
                std::size_t b = open + 1;
                while (b < close) {
                    std::size_t end = b;
                    int dd = 0;
                    bool has_eq = false;
                    while (end < close) {
                        if (punct_at(end, "(") || punct_at(end, "[")) ++dd;
                        if (punct_at(end, ")") || punct_at(end, "]")) --dd;
                        if (punct_at(end, ",") && dd == 0) break;
                        if (punct_at(end, "=") && dd == 0) has_eq = true;
                        ++end;
                    }
                    if (end > b && !has_eq) {
                        std::string_view slice =
                            src_.substr(t_[b].byte_start, t_[end - 1].byte_end - t_[b].byte_start);
                        std::string base(trim(slice));
                        if (!base.empty()) bases.push_back(base);
                    }
                    b = end + 1;
                }
                c = close + 1;
            }
        }
        if (ok && !(c < line.to && punct_at(c, ":"))) ok = false;

        if (!ok) {
            diag_err(diags_, file_, t_[class_idx].line, t_[class_idx].col,
                     "malformed class header");
            ++li;
            return;
        }

        cst::Node node;
        node.kind = "class_definition";
        cst::Node mods;
        mods.kind = "modifiers";
        mods.field = "modifiers";
        mods.span = span_between(t_[lines_[span_start_line].from], t_[lines_[span_start_line].from]);
        for (const std::string& d : decorators)
            mods.children.push_back(leaf("modifier", "", mods.span, d));
        node.children.push_back(std::move(mods));
        node.children.push_back(
            leaf("name", "name", span_between(t_[class_idx + 1], t_[class_idx + 1]), name));
        if (!bases.empty()) {
            cst::Node sup;
            sup.kind = "super_list";
            sup.field = "superclass";
            sup.span = span_between(t_[class_idx], t_[class_idx]);
            for (const std::string& b : bases)
                sup.children.push_back(leaf("type", "", sup.span, b));
            node.children.push_back(std::move(sup));
        }

        std::size_t last_line = suite_end_line(li);
        cst::Node body;
        body.kind = "type_body";
        body.field = "body";
        if (last_line > li) {
            body.span = span_between(t_[lines_[li + 1].from], t_[lines_[last_line].to - 1]);
            std::size_t member_li = li + 1;
            int member_indent = lines_[li + 1].indent;
            std::size_t stop = last_line + 1;
            parse_members(member_indent, member_li, stop, depth, body);
        } else {
            diag_warn(diags_, file_, t_[class_idx].line, t_[class_idx].col,
                      "expected an indented block");
            body.span = span_between(t_[line.from], t_[line.to - 1]);
        }
        node.children.push_back(std::move(body));

        const Line& first = lines_[span_start_line];
        const Line& last = lines_[last_line];
        node.span = span_between(t_[first.from], t_[last.to - 1]);
        parent.children.push_back(std::move(node));
        li = last_line + 1;
    }

    // Class-suite members between lines [li, stop): defs, nested classes,
    // fields; anything deeper belongs to a member's own suite.
    void parse_members(int indent, std::size_t& li, std::size_t stop, int depth,
                       cst::Node& body) {
        std::vector<std::string> pending_decorators;
        std::size_t decorator_first_line = 0;
        bool have_decorators = false;

        while (li < stop && li < lines_.size()) {
            const Line& line = lines_[li];
            if (line.indent > indent) {
                ++li;
                continue;
            }
            if (line.indent < indent) break;

            std::size_t from = line.from;
            if (punct_at(from, "@")) {
                std::string name = "@";
                std::size_t c = from + 1;
                while (tok(c).kind == Tok::Ident) {
                    name += std::string(tok(c).text);
                    ++c;
                    if (punct_at(c, ".")) {
                        name += '.';
                        ++c;
                    } else {
                        break;
                    }
                }
                if (!have_decorators) {
                    decorator_first_line = li;
                    have_decorators = true;
                }
                pending_decorators.push_back(name);
                ++li;
                continue;
            }

            bool is_async = ident_at(from, "async");
            std::size_t head = is_async ? from + 1 : from;
            if (ident_at(head, "def")) {
                parse_def(li, pending_decorators,
                          have_decorators ? decorator_first_line : li, body);
                pending_decorators.clear();
                have_decorators = false;
                continue;
            }
            if (ident_at(head, "class") && depth < 64) {
                parse_class(li, depth + 1, pending_decorators,
                            have_decorators ? decorator_first_line : li, body);
                pending_decorators.clear();
                have_decorators = false;
                continue;
            }
            pending_decorators.clear();
            have_decorators = false;
            maybe_field(line, body);
            ++li;
        }
    }
};

} // namespace

cst::Tree parse_python(std::string_view source, std::string_view file) {
    cst::Tree tree;
    Lexed lexed = lex(source, file, 1);
    tree.diagnostics = std::move(lexed.diags);
    check_balance(lexed.toks, file, tree.diagnostics);
    Parser parser(lexed, source, file, tree.diagnostics);
    tree.root = parser.parse_module();
    return tree;
}

std::vector<cst::Node> scan_python_snippet(std::string_view text, int start_line) {
    Lexed lexed = lex(text, "<snippet>", start_line);
    std::vector<Line> lines = logical_lines(lexed.toks);
    const std::vector<Tok>& t = lexed.toks;
    std::size_t from = 0;
    std::size_t to = t.empty() ? 0 : t.size() - 1;
    auto ident_is = [&](std::size_t k, std::string_view s) {
        return k < t.size() && t[k].kind == Tok::Ident && t[k].text == s;
    };
    auto punct_is = [&](std::size_t k, std::string_view s) {
        return k < t.size() && t[k].kind == Tok::Punct && t[k].text == s;
    };
    // Skip any leading decorator lines, then a def header line; the suite
    // (or the inline body after the colon) is what gets scanned.
    std::size_t first = 0;
    while (first < lines.size() && punct_is(lines[first].from, "@")) ++first;
    if (first < lines.size()) {
        std::size_t h = lines[first].from;
        if (ident_is(h, "async")) ++h;
        if (ident_is(h, "def")) {
            std::size_t colon = lines[first].to;
            int d = 0;
            for (std::size_t k = lines[first].from; k < lines[first].to; ++k) {
                if (t[k].kind != Tok::Punct) continue;
                if (t[k].text == "(" || t[k].text == "[" || t[k].text == "{") ++d;
                if (t[k].text == ")" || t[k].text == "]" || t[k].text == "}") --d;
                if (t[k].text == ":" && d == 0) {
                    colon = k;
                    break;
                }
            }
            from = colon + 1 < lines[first].to ? colon + 1 : lines[first].to;
        } else if (first > 0) {
            from = lines[first].from;
        }
    }
    return scan_calls(lexed.toks, text, from, to);
}

} // namespace cak::detail
