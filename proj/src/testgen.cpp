// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/testgen.hpp"

#include "cak/analysis.hpp"
#include "cak/callgraph.hpp"
#include "cak/errors.hpp"
#include "cak/parse.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace cak {
namespace {

std::string simple_name(std::string_view name) {
    auto dot = name.rfind('.');
    return std::string(dot == std::string_view::npos ? name : name.substr(dot + 1));
}

bool receiver_matches(const std::string& receiver, const std::set<std::string>& mockable_types) {
    if (receiver.empty()) return false;
    if (mockable_types.count(receiver) != 0) return true;
    std::string receiver_simple = simple_name(receiver);
    for (const auto& entry : mockable_types) {
        if (simple_name(entry) == receiver || entry == receiver_simple) return true;
    }
    return false;
}

bool is_private(const Callable& callable) {
    return std::find(callable.modifiers.begin(), callable.modifiers.end(), "private") !=
           callable.modifiers.end();
}

const Callable& callable_in_type(const AnalysisSession& session,
                                 std::string_view qualified_class,
                                 std::string_view signature) {
    const CodeType* type = session.find_type(qualified_class);
    if (type == nullptr) {
        throw Error(ErrorCode::TypeNotFound,
                    "type '" + std::string(qualified_class) + "' not found");
    }
    for (const auto& callable : type->callables) {
        if (callable.full_signature == signature) return callable;
    }
    throw Error(ErrorCode::MethodNotFound,
                "method '" + std::string(signature) + "' not found in '" +
                    std::string(qualified_class) + "'");
}

bool is_fence_line(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.compare(i, 3, "```") == 0;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(pos));
            break;
        }
        lines.emplace_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i != 0) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string trimmed(const std::string& line) {
    auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    auto end = line.find_last_not_of(" \t");
    return line.substr(begin, end - begin + 1);
}

bool is_import_line(Language language, const std::string& line) {
    std::string t = trimmed(line);
    if (language == Language::JAVA) return t.rfind("import ", 0) == 0;
    return t.rfind("import ", 0) == 0 || t.rfind("from ", 0) == 0;
}

// Matches `[modifiers] void testX...(` on one line; returns the name or "".
std::string test_method_name(const std::string& line) {
    static const std::set<std::string> kModifiers = {
        "public", "protected", "private", "static", "final", "synchronized"};
    std::istringstream in(trimmed(line));
    std::string word;
    while (in >> word) {
        if (kModifiers.count(word) != 0) continue;
        if (word != "void") return "";
        break;
    }
    std::string rest;
    std::getline(in, rest);
    rest = trimmed(rest);
    auto open = rest.find('(');
    if (open == std::string::npos) return "";
    std::string name = trimmed(rest.substr(0, open));
    if (name.rfind("test", 0) != 0 || name.size() < 5) return "";
    char next = name[4];
    if (next != '_' && !(next >= 'A' && next <= 'Z')) return "";
    for (char c : name) {
        if (!detail::is_ident_char(static_cast<unsigned char>(c))) return "";
    }
    return name;
}

bool has_test_annotation_above(const std::vector<std::string>& lines, std::size_t index) {
    while (index > 0) {
        const std::string t = trimmed(lines[index - 1]);
        if (t.empty()) {
            --index;
            continue;
        }
        if (t[0] != '@') return false;
        if (t == "@Test" || t.rfind("@Test(", 0) == 0 || t.rfind("@org.junit.", 0) == 0) {
            return true;
        }
        --index;
    }
    return false;
}

void push_fix(std::vector<SanitizationFix>& fixes, SanitizationFix fix) {
    if (std::find(fixes.begin(), fixes.end(), fix) == fixes.end()) fixes.push_back(fix);
}

} // namespace

std::string_view sanitization_fix_name(SanitizationFix fix) {
    switch (fix) {
    case SanitizationFix::ADDED_TEST_ANNOTATION: return "added_test_annotation";
    case SanitizationFix::BALANCED_DELIMITERS_FLAGGED: return "balanced_delimiters_flagged";
    case SanitizationFix::ADDED_PACKAGE: return "added_package";
    case SanitizationFix::MERGED_IMPORTS: return "merged_imports";
    }
    return "unknown";
}

std::vector<std::string> identify_focal_methods(const AnalysisSession& session,
                                                std::string_view qualified_class) {
    const CodeType& type = get_class(session, qualified_class);
    std::vector<const Callable*> focal;
    for (const auto& callable : type.callables) {
        if (callable.is_constructor || is_private(callable)) continue;
        focal.push_back(&callable);
    }
    std::stable_sort(focal.begin(), focal.end(), [](const Callable* a, const Callable* b) {
        return a->line_offset.start < b->line_offset.start;
    });
    std::vector<std::string> signatures;
    signatures.reserve(focal.size());
    for (const Callable* callable : focal) signatures.push_back(callable->full_signature);
    return signatures;
}

bool is_mocking_type(const AnalysisSession& session,
                     std::string_view qualified_class,
                     std::string_view signature,
                     const std::set<std::string>& mockable_types) {
    const Callable& callable = callable_in_type(session, qualified_class, signature);
    for (const auto& site : callable.call_sites) {
        if (receiver_matches(site.receiver_type, mockable_types)) return true;
    }
    return false;
}

TestGenContext build_testgen_context(const AnalysisSession& session,
                                     std::string_view qualified_class,
                                     std::string_view signature,
                                     const std::set<std::string>& mockable_types) {
    const CodeType* type = session.find_type(qualified_class);
    if (type == nullptr) {
        throw Error(ErrorCode::TypeNotFound,
                    "type '" + std::string(qualified_class) + "' not found");
    }
    const Callable& focal = callable_in_type(session, qualified_class, signature);
    if (focal.is_constructor || is_private(focal)) {
        throw Error(ErrorCode::NotAFocalMethod,
                    "'" + std::string(signature) + "' in '" + std::string(qualified_class) +
                        "' is not a focal method");
    }

    TestGenContext context;
    context.focal_class = std::string(qualified_class);
    context.focal_method = std::string(signature);
    context.focal_body = focal.code_body;
    context.inheritance_chain = get_inheritance_chain(session, qualified_class).types;
    context.private_chain = get_private_call_chain(session, qualified_class, signature);
    for (const auto& chain_signature : context.private_chain) {
        context.private_chain_bodies.push_back(
            callable_in_type(session, qualified_class, chain_signature).code_body);
    }
    for (const auto& site : focal.call_sites) {
        if (receiver_matches(site.receiver_type, mockable_types)) {
            context.mockable_hits.push_back(site);
        }
    }
    for (const auto& callable : type->callables) {
        if (callable.is_constructor) context.constructors.push_back(callable.full_signature);
    }
    return context;
}

PromptSkeleton build_testgen_prompt(const TestGenContext& context, Language language) {
    const char* framework = language == Language::JAVA ? "JUnit" : "pytest";
    const std::string tag(language_name(language));

    PromptSkeleton skeleton;
    skeleton.add_line("Generate a " + std::string(framework) + " unit test for the method " +
                      context.focal_method + " in " + context.focal_class + ".");
    skeleton.add_code_block(context.focal_body, tag);
    for (const auto& body : context.private_chain_bodies) {
        skeleton.add_code_block(body, tag);
    }
    if (!context.inheritance_chain.empty()) {
        std::string line = "The focal class inherits from:";
        for (const auto& name : context.inheritance_chain) line += " " + name + ",";
        line.back() = '.';
        skeleton.add_line(line);
    }
    if (!context.mockable_hits.empty()) {
        std::set<std::string> receivers;
        for (const auto& site : context.mockable_hits) receivers.insert(site.receiver_type);
        std::string line = "Mock the following receiver types:";
        for (const auto& receiver : receivers) line += " " + receiver + ",";
        line.back() = '.';
        skeleton.add_line(line);
    }
    return skeleton;
}

SanitizationReport sanitize_generated_output(Language language,
                                             std::string_view raw_llm_text,
                                             std::string_view target_package,
                                             const std::vector<std::string>& required_imports) {
    SanitizationReport report;

    // (a) extract the first fenced code block, else keep the whole text
    std::vector<std::string> lines = split_lines(raw_llm_text);
    std::size_t fence_open = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_fence_line(lines[i])) {
            fence_open = i;
            break;
        }
    }
    std::vector<std::string> code;
    if (fence_open < lines.size()) {
        report.extracted = true;
        for (std::size_t i = fence_open + 1; i < lines.size(); ++i) {
            if (is_fence_line(lines[i])) break;
            code.push_back(lines[i]);
        }
    } else {
        code = std::move(lines);
    }

    // (b) insert missing @Test annotations on test methods
    if (language == Language::JAVA) {
        std::vector<std::string> patched;
        patched.reserve(code.size());
        bool added = false;
        for (std::size_t i = 0; i < code.size(); ++i) {
            if (!test_method_name(code[i]).empty() && !has_test_annotation_above(code, i)) {
                std::string indent = code[i].substr(0, code[i].find_first_not_of(" \t"));
                patched.push_back(indent + "@Test");
                added = true;
            }
            patched.push_back(code[i]);
        }
        if (added) {
            code = std::move(patched);
            push_fix(report.fixes_applied, SanitizationFix::ADDED_TEST_ANNOTATION);
        }
    }

    // (c) package declaration and import merging
    if (language == Language::JAVA && !target_package.empty()) {
        bool has_package = false;
        for (const auto& line : code) {
            if (trimmed(line).rfind("package ", 0) == 0) {
                has_package = true;
                break;
            }
        }
        if (!has_package) {
            std::vector<std::string> patched;
            patched.push_back("package " + std::string(target_package) + ";");
            patched.push_back("");
            patched.insert(patched.end(), code.begin(), code.end());
            code = std::move(patched);
            push_fix(report.fixes_applied, SanitizationFix::ADDED_PACKAGE);
        }
    }

    std::vector<std::size_t> import_rows;
    std::set<std::string> existing;
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (is_import_line(language, code[i])) {
            import_rows.push_back(i);
            existing.insert(trimmed(code[i]));
        }
    }
    std::set<std::string> merged = existing;
    for (const auto& raw : required_imports) {
        std::string line = trimmed(raw);
        if (line.empty()) continue;
        if (language == Language::JAVA && line.back() != ';') line += ';';
        merged.insert(line);
    }
    if (merged.size() != existing.size() || import_rows.size() != existing.size()) {
        std::vector<std::string> patched;
        std::size_t insert_at = 0;
        if (!import_rows.empty()) {
            insert_at = import_rows.front();
        } else {
            for (std::size_t i = 0; i < code.size(); ++i) {
                if (trimmed(code[i]).rfind("package ", 0) == 0) {
                    insert_at = i + 1;
                    while (insert_at < code.size() && trimmed(code[insert_at]).empty()) {
                        ++insert_at;
                    }
                    break;
                }
            }
        }
        std::set<std::size_t> drop(import_rows.begin(), import_rows.end());
        for (std::size_t i = 0; i < code.size(); ++i) {
            if (i == insert_at) {
                for (const auto& line : merged) patched.push_back(line);
                if (import_rows.empty() && !trimmed(code[i]).empty()) patched.push_back("");
            }
            if (drop.count(i) == 0) patched.push_back(code[i]);
        }
        if (insert_at == code.size()) {
            for (const auto& line : merged) patched.push_back(line);
        }
        code = std::move(patched);
        push_fix(report.fixes_applied, SanitizationFix::MERGED_IMPORTS);
    }

    report.final_code = join_lines(code);

    // parse once: record parsability and flag (never repair) delimiter imbalance
    ParseResult parsed = parse_source(language, report.final_code);
    report.parsable = parsed.ok;
    for (const auto& diagnostic : parsed.diagnostics) {
        if (diagnostic.is_error() && diagnostic.message.find("delimiter '") != std::string::npos) {
            push_fix(report.fixes_applied, SanitizationFix::BALANCED_DELIMITERS_FLAGGED);
            break;
        }
    }
    return report;
}

PromptSkeleton feedback_prompt(const PromptSkeleton& previous_prompt,
                               const SanitizationReport& report,
                               std::string_view error_text) {
    if (report.parsable && error_text.empty()) {
        throw Error(ErrorCode::InvalidFeedback,
                    "nothing failed: report is parsable and no error text given");
    }
    std::string detail(error_text);
    if (detail.empty()) {
        detail = "generated code failed to parse";
        if (std::find(report.fixes_applied.begin(), report.fixes_applied.end(),
                      SanitizationFix::BALANCED_DELIMITERS_FLAGGED) !=
            report.fixes_applied.end()) {
            detail += "\nunbalanced delimiters detected";
        }
    }
    PromptSkeleton skeleton = previous_prompt;
    skeleton.add_line("The previous attempt failed:");
    skeleton.add_code_block(detail, "");
    return skeleton;
}

} // namespace cak
