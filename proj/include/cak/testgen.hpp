// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/prompt.hpp"
#include "cak/session.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cak {

/// Static-analysis context gathered around one focal method before prompting.
struct TestGenContext {
    std::string focal_class;               // qualified name
    std::string focal_method;              // signature
    std::string focal_body;
    std::vector<std::string> inheritance_chain;
    std::vector<std::string> private_chain;        // signatures, chain order
    std::vector<std::string> private_chain_bodies; // parallel to private_chain
    std::vector<CallSite> mockable_hits;
    std::vector<std::string> constructors;         // signatures
};

enum class SanitizationFix {
    ADDED_TEST_ANNOTATION,
    BALANCED_DELIMITERS_FLAGGED,
    ADDED_PACKAGE,
    MERGED_IMPORTS,
};

std::string_view sanitization_fix_name(SanitizationFix fix);

struct SanitizationReport {
    bool extracted = false;  // a fenced block was found (vs. whole-text fallback)
    std::vector<SanitizationFix> fixes_applied;
    std::string final_code;
    bool parsable = false;
};

/// Non-private, non-constructor methods of the class, sorted by source
/// position. TypeNotFound.
std::vector<std::string> identify_focal_methods(const AnalysisSession& session,
                                                std::string_view qualified_class);

/// True iff any call site of the method has a receiver type in mockable_types
/// (matched against the declared simple or qualified type text). TypeNotFound /
/// MethodNotFound.
bool is_mocking_type(const AnalysisSession& session,
                     std::string_view qualified_class,
                     std::string_view signature,
                     const std::set<std::string>& mockable_types);

/// Aggregate inheritance chain, private call chain with bodies, mockable call
/// sites, and the focal class's constructors. NotAFocalMethod for private or
/// constructor inputs; TypeNotFound / MethodNotFound otherwise.
TestGenContext build_testgen_context(const AnalysisSession& session,
                                     std::string_view qualified_class,
                                     std::string_view signature,
                                     const std::set<std::string>& mockable_types);

/// Deterministic skeleton: instruction line, focal-method code block, one code
/// block per private-chain entry, inheritance line when the chain is
/// non-empty, mocking hint when mockable_hits is non-empty.
PromptSkeleton build_testgen_prompt(const TestGenContext& context, Language language);

/// Post-process raw LLM output: extract the first fenced code block (whole
/// text otherwise), insert missing @Test annotations on test methods, flag
/// delimiter imbalance, prepend the package declaration, merge the required
/// imports, and record final parsability. Idempotent on its own output.
SanitizationReport sanitize_generated_output(Language language,
                                             std::string_view raw_llm_text,
                                             std::string_view target_package,
                                             const std::vector<std::string>& required_imports);

/// Previous prompt + "The previous attempt failed:" line + an error code block
/// carrying error_text or a parse-failure summary derived from the report.
/// InvalidFeedback when the report is parsable and error_text is empty.
PromptSkeleton feedback_prompt(const PromptSkeleton& previous_prompt,
                               const SanitizationReport& report,
                               std::string_view error_text);

} // namespace cak
