// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/prompt.hpp"

#include "cak/errors.hpp"
#include "cak/schema.hpp"

#include <json.hpp>
#include <httplib.h>

#include <cstdlib>
#include <sstream>

namespace cak {
namespace {

using nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0) out += sep;
        out += parts[i];
    }
    return out;
}

[[noreturn]] void unresolved(const std::string& path) {
    throw Error(ErrorCode::UnresolvedPlaceholder,
                "unresolved placeholder '" + path + "'");
}

std::string field_of(const Callable& c, const std::string& field, const std::string& path) {
    if (field == "method_name") return c.method_name;
    if (field == "full_signature") return c.full_signature;
    if (field == "code_body") return c.code_body;
    if (field == "return_type") return c.return_type;
    if (field == "is_static") return c.is_static ? "true" : "false";
    if (field == "is_constructor") return c.is_constructor ? "true" : "false";
    if (field == "modifiers") return join(c.modifiers, " ");
    unresolved(path);
}

std::string field_of(const CodeType& t, const std::string& field, const std::string& path) {
    if (field == "type_name") return t.type_name;
    if (field == "qualified_name") return t.qualified_name;
    if (field == "kind") return std::string(type_kind_name(t.kind));
    if (field == "code_body") return t.code_body;
    if (field == "file_name") return t.file_name;
    if (field == "modifiers") return join(t.modifiers, " ");
    unresolved(path);
}

std::string field_of(const CodeModule& m, const std::string& field, const std::string& path) {
    if (field == "file_name") return m.file_name;
    if (field == "qualified_name") return m.qualified_name;
    unresolved(path);
}

std::string resolve_path(const std::string& path, const PromptContext& context) {
    std::vector<std::string> segs;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        auto dot = path.find('.', pos);
        if (dot == std::string::npos) {
            segs.push_back(path.substr(pos));
            break;
        }
        segs.push_back(path.substr(pos, dot - pos));
        pos = dot + 1;
    }
    if (segs.empty() || segs.front().empty()) unresolved(path);
    auto it = context.find(segs.front());
    if (it == context.end()) unresolved(path);
    const PromptValue& value = it->second;
    if (const auto* s = std::get_if<std::string>(&value)) {
        if (segs.size() != 1) unresolved(path);
        return *s;
    }
    if (segs.size() != 2 || segs[1].empty()) unresolved(path);
    if (const auto* c = std::get_if<const Callable*>(&value)) {
        if (*c == nullptr) unresolved(path);
        return field_of(**c, segs[1], path);
    }
    if (const auto* t = std::get_if<const CodeType*>(&value)) {
        if (*t == nullptr) unresolved(path);
        return field_of(**t, segs[1], path);
    }
    const auto* m = std::get_if<const CodeModule*>(&value);
    if (m == nullptr || *m == nullptr) unresolved(path);
    return field_of(**m, segs[1], path);
}

bool is_path_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_path_char(char c) {
    return is_path_start(c) || (c >= '0' && c <= '9');
}

// `{ident(.ident)*}` starting at `open`; returns the index past '}' or npos.
std::size_t match_placeholder(const std::string& text, std::size_t open) {
    std::size_t i = open + 1;
    while (true) {
        if (i >= text.size() || !is_path_start(text[i])) return std::string::npos;
        ++i;
        while (i < text.size() && is_path_char(text[i])) ++i;
        if (i < text.size() && text[i] == '}') return i + 1;
        if (i < text.size() && text[i] == '.') {
            ++i;
            continue;
        }
        return std::string::npos;
    }
}

std::string substitute(const std::string& text, const PromptContext& context,
                       bool process_escapes) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '{') {
            if (process_escapes && i + 1 < text.size() && text[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            auto end = match_placeholder(text, i);
            if (end != std::string::npos) {
                out += resolve_path(text.substr(i + 1, end - i - 2), context);
                i = end - 1;
                continue;
            }
            out += '{';
        } else if (c == '}') {
            if (process_escapes && i + 1 < text.size() && text[i + 1] == '}') ++i;
            out += '}';
        } else {
            out += c;
        }
    }
    return out;
}

std::string render_code_block(const CodeBlock& block, const PromptContext& context) {
    std::string code = substitute(block.code, context, /*process_escapes=*/false);
    std::string out = "```" + block.language_tag + "\n";
    out += code;
    if (!code.empty() && code.back() != '\n') out += '\n';
    out += "```";
    return out;
}

std::string render_graph_block(const GraphBlock& block) {
    std::string out = "Call graph:";
    for (const auto& line : to_edge_list(block.graph)) {
        out += '\n';
        out += line;
    }
    return out;
}

} // namespace

PromptSkeleton& PromptSkeleton::add_line(std::string text) {
    blocks.push_back(TextLine{std::move(text)});
    return *this;
}

PromptSkeleton& PromptSkeleton::add_code_block(std::string code, std::string language_tag) {
    blocks.push_back(CodeBlock{std::move(language_tag), std::move(code)});
    return *this;
}

PromptSkeleton& PromptSkeleton::add_graph(CallGraph graph) {
    blocks.push_back(GraphBlock{std::move(graph)});
    return *this;
}

RenderedPrompt render(const PromptSkeleton& skeleton, const PromptContext& context) {
    std::vector<std::string> chunks;
    chunks.reserve(skeleton.blocks.size());
    for (const auto& block : skeleton.blocks) {
        if (const auto* line = std::get_if<TextLine>(&block)) {
            chunks.push_back(substitute(line->text, context, /*process_escapes=*/true));
        } else if (const auto* code = std::get_if<CodeBlock>(&block)) {
            chunks.push_back(render_code_block(*code, context));
        } else {
            chunks.push_back(render_graph_block(std::get<GraphBlock>(block)));
        }
    }
    RenderedPrompt prompt;
    prompt.text = join(chunks, "\n");
    prompt.placeholders_resolved = true;
    return prompt;
}

LLMEndpointConfig endpoint_config_from_env(LLMEndpointConfig base) {
    if (const char* url = std::getenv("CAK_LLM_ENDPOINT")) base.base_url = url;
    if (const char* model = std::getenv("CAK_LLM_MODEL")) base.model_id = model;
    return base;
}

std::string execute_prompt(const LLMEndpointConfig& config, const RenderedPrompt& prompt) {
    if (!prompt.placeholders_resolved) {
        throw Error(ErrorCode::UnresolvedPlaceholder,
                    "prompt has unresolved placeholders");
    }
    // Split an optional path suffix off the scheme://host:port base.
    std::string base = config.base_url;
    std::string path = "/";
    auto scheme = base.find("://");
    auto slash = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        path = base.substr(slash);
        base = base.substr(0, slash);
    }

    httplib::Client client(base);
    auto sec = static_cast<time_t>(config.timeout_seconds);
    auto usec = static_cast<time_t>((config.timeout_seconds - static_cast<double>(sec)) * 1e6);
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);

    ordered_json body{
        {"model", config.model_id},
        {"prompt", prompt.text},
        {"max_tokens", config.max_tokens},
        {"temperature", config.temperature},
    };
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) {
        switch (res.error()) {
        case httplib::Error::ConnectionTimeout:
        case httplib::Error::Read:
        case httplib::Error::Write:
            throw Error(ErrorCode::Timeout, "request to '" + config.base_url + "' timed out");
        default:
            throw Error(ErrorCode::EndpointUnreachable,
                        "endpoint '" + config.base_url + "' unreachable: " +
                            httplib::to_string(res.error()));
        }
    }
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::HttpStatus,
                    "endpoint returned HTTP " + std::to_string(res->status), res->status);
    }
    ordered_json parsed = ordered_json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("completion") ||
        !parsed["completion"].is_string()) {
        throw Error(ErrorCode::MalformedResponse,
                    "response body lacks a string \"completion\" field");
    }
    return parsed["completion"].get<std::string>();
}

} // namespace cak
