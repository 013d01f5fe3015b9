// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/callgraph.hpp"
#include "cak/schema.hpp"

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cak {

/// One prompt segment. TextLine and CodeBlock keep `{dotted.path}`
/// placeholders for render-time substitution; CodeBlock code is stored
/// verbatim and fenced at render time; GraphBlock captures the graph by
/// value.
struct TextLine {
    std::string text;
    friend bool operator==(const TextLine&, const TextLine&) = default;
};

struct CodeBlock {
    std::string language_tag;
    std::string code;
    friend bool operator==(const CodeBlock&, const CodeBlock&) = default;
};

struct GraphBlock {
    CallGraph graph;
    friend bool operator==(const GraphBlock&, const GraphBlock&) = default;
};

using PromptBlock = std::variant<TextLine, CodeBlock, GraphBlock>;

struct PromptSkeleton {
    std::vector<PromptBlock> blocks;

    PromptSkeleton& add_line(std::string text);
    PromptSkeleton& add_code_block(std::string code, std::string language_tag);
    PromptSkeleton& add_graph(CallGraph graph);

    friend bool operator==(const PromptSkeleton&, const PromptSkeleton&) = default;
};

struct RenderedPrompt {
    std::string text;
    bool placeholders_resolved = false;
};

/// Values a placeholder path may start from.
using PromptValue = std::variant<std::string, const Callable*, const CodeType*, const CodeModule*>;
using PromptContext = std::map<std::string, PromptValue>;

/// Substitute every `{dotted.path}` placeholder — a brace pair wrapping a
/// dotted identifier path with no spaces — in TextLines and CodeBlock code
/// against the context; braces that do not form a placeholder stay literal,
/// so embedded code is safe. `{{` and `}}` escape literal braces in
/// TextLines only. Blocks joined with LF; CodeBlocks fenced with triple
/// backticks plus the language tag; GraphBlocks rendered as a "Call graph:"
/// header over sorted edge lines. UnresolvedPlaceholder on any placeholder
/// path that does not resolve.
RenderedPrompt render(const PromptSkeleton& skeleton, const PromptContext& context);

struct LLMEndpointConfig {
    std::string base_url;
    std::string model_id;
    double timeout_seconds = 30.0;
    int max_tokens = 1024;
    double temperature = 0.2;
};

/// Config with CAK_LLM_ENDPOINT / CAK_LLM_MODEL applied over the defaults.
LLMEndpointConfig endpoint_config_from_env(LLMEndpointConfig base = {});

/// One blocking HTTP POST of {model, prompt, max_tokens, temperature};
/// returns the "completion" field. No retries. Errors: EndpointUnreachable,
/// HttpStatus(status), MalformedResponse, Timeout.
std::string execute_prompt(const LLMEndpointConfig& config, const RenderedPrompt& prompt);

} // namespace cak
