// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/analysis.hpp"
#include "cak/callgraph.hpp"
#include "cak/errors.hpp"
#include "cak/parse.hpp"
#include "cak/prompt.hpp"
#include "cak/schema_json.hpp"
#include "cak/session.hpp"
#include "cak/testgen.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitEndpoint = 4;

struct CommonOptions {
    std::string input;
    std::string snapshot;
    std::string language = "java";
};

void add_common(CLI::App* cmd, CommonOptions& options) {
    auto* input = cmd->add_option("--input", options.input, "Project directory to analyze");
    auto* snapshot = cmd->add_option("--snapshot", options.snapshot,
                                     "Snapshot file written by 'analyze'");
    input->excludes(snapshot);
    cmd->add_option("--language", options.language, "Source language (java|python)")
        ->check(CLI::IsMember({"java", "python"}));
}

cak::AnalysisSession open_session(const CommonOptions& options, cak::AnalysisLevel level) {
    if (!options.snapshot.empty()) return cak::load_session(options.snapshot);
    if (options.input.empty()) {
        throw CLI::ValidationError("--input or --snapshot is required");
    }
    cak::ToolkitConfig config;
    config.language = cak::language_from_name(options.language);
    config.project_path = options.input;
    config.analysis_level = level;
    return cak::create_session(config);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw cak::Error(cak::ErrorCode::IoFailure, "cannot read '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Static analysis toolkit for Java and Python codebases"};
    app.require_subcommand(1);

    // analyze
    CommonOptions analyze_options;
    std::string analyze_level = "symbol_table";
    std::string analyze_output;
    auto* analyze = app.add_subcommand("analyze", "Analyze a project and write a JSON snapshot");
    analyze->add_option("--input", analyze_options.input, "Project directory to analyze")
        ->required();
    analyze->add_option("--language", analyze_options.language, "Source language (java|python)")
        ->check(CLI::IsMember({"java", "python"}));
    analyze->add_option("--level", analyze_level, "Analysis depth")
        ->check(CLI::IsMember({"symbol_table", "call_graph"}));
    analyze->add_option("--output", analyze_output, "Snapshot path (stdout when omitted)");

    // classes
    CommonOptions classes_options;
    auto* classes = app.add_subcommand("classes", "List qualified type names");
    add_common(classes, classes_options);

    // methods
    CommonOptions methods_options;
    std::string methods_class;
    auto* methods = app.add_subcommand("methods", "List method signatures of a class");
    add_common(methods, methods_options);
    methods->add_option("--class", methods_class, "Qualified type name")->required();

    // callgraph
    CommonOptions callgraph_options;
    std::string callgraph_format = "json";
    auto* callgraph = app.add_subcommand("callgraph", "Print the project call graph");
    add_common(callgraph, callgraph_options);
    callgraph->add_option("--format", callgraph_format, "Output format")
        ->check(CLI::IsMember({"json", "dot"}));

    // chain
    CommonOptions chain_options;
    std::string chain_class;
    std::string chain_method;
    std::string chain_kind;
    auto* chain = app.add_subcommand("chain", "Print an inheritance or private call chain");
    add_common(chain, chain_options);
    chain->add_option("--class", chain_class, "Qualified type name")->required();
    chain->add_option("--method", chain_method, "Method signature (private chains)");
    chain->add_option("--kind", chain_kind, "Chain kind")
        ->required()
        ->check(CLI::IsMember({"inheritance", "private"}));

    // validate
    std::string validate_language = "java";
    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "Parse one file and report diagnostics");
    validate->add_option("--language", validate_language, "Source language (java|python)")
        ->check(CLI::IsMember({"java", "python"}));
    validate->add_option("file", validate_file, "Source file to check")->required();

    // prompt
    CommonOptions prompt_options;
    std::string prompt_class;
    std::string prompt_method;
    std::string prompt_task = "testgen";
    std::vector<std::string> prompt_mockable;
    std::string prompt_mockable_file;
    bool prompt_execute = false;
    auto* prompt = app.add_subcommand("prompt", "Compose an analysis-enriched prompt");
    add_common(prompt, prompt_options);
    prompt->add_option("--class", prompt_class, "Qualified type name")->required();
    prompt->add_option("--method", prompt_method, "Focal method signature")->required();
    prompt->add_option("--task", prompt_task, "Prompt task")
        ->check(CLI::IsMember({"testgen"}));
    prompt->add_option("--mockable", prompt_mockable, "Mockable receiver type (repeatable)");
    prompt->add_option("--mockable-file", prompt_mockable_file,
                       "File with one mockable type per line");
    prompt->add_flag("--execute", prompt_execute,
                     "POST the prompt to the configured endpoint and print the completion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) {
            cak::ToolkitConfig config;
            config.language = cak::language_from_name(analyze_options.language);
            config.project_path = analyze_options.input;
            config.analysis_level = analyze_level == "call_graph"
                                        ? cak::AnalysisLevel::CALL_GRAPH
                                        : cak::AnalysisLevel::SYMBOL_TABLE;
            cak::AnalysisSession session = cak::create_session(config);
            if (analyze_output.empty()) {
                std::cout << cak::schema_to_json(session) << "\n";
            } else {
                cak::save_session(session, analyze_output);
            }
            return kExitOk;
        }
        if (classes->parsed()) {
            cak::AnalysisSession session =
                open_session(classes_options, cak::AnalysisLevel::SYMBOL_TABLE);
            cak::json names = cak::json::array();
            for (const auto& [qualified_name, type] : cak::get_classes(session)) {
                (void)type;
                names.push_back(qualified_name);
            }
            std::cout << names.dump() << "\n";
            return kExitOk;
        }
        if (methods->parsed()) {
            cak::AnalysisSession session =
                open_session(methods_options, cak::AnalysisLevel::SYMBOL_TABLE);
            cak::json signatures = cak::json::array();
            for (const auto& [signature, callable] :
                 cak::get_methods_in_class(session, methods_class)) {
                (void)callable;
                signatures.push_back(signature);
            }
            std::cout << signatures.dump() << "\n";
            return kExitOk;
        }
        if (callgraph->parsed()) {
            cak::AnalysisSession session =
                open_session(callgraph_options, cak::AnalysisLevel::CALL_GRAPH);
            cak::CallGraph built;
            const cak::CallGraph* graph = nullptr;
            if (session.call_graph().has_value()) {
                graph = &*session.call_graph();
            } else {
                built = cak::build_call_graph(session);
                graph = &built;
            }
            if (callgraph_format == "dot") {
                std::cout << cak::to_dot(*graph);
            } else {
                std::cout << cak::to_json(*graph).dump() << "\n";
            }
            return kExitOk;
        }
        if (chain->parsed()) {
            cak::AnalysisSession session =
                open_session(chain_options, cak::AnalysisLevel::SYMBOL_TABLE);
            cak::json names = cak::json::array();
            if (chain_kind == "inheritance") {
                for (const auto& name : cak::get_inheritance_chain(session, chain_class).types) {
                    names.push_back(name);
                }
            } else {
                if (chain_method.empty()) {
                    throw CLI::ValidationError("--method is required for --kind private");
                }
                for (const auto& signature :
                     cak::get_private_call_chain(session, chain_class, chain_method)) {
                    names.push_back(signature);
                }
            }
            std::cout << names.dump() << "\n";
            return kExitOk;
        }
        if (validate->parsed()) {
            cak::Language language = cak::language_from_name(validate_language);
            std::string source = read_text_file(validate_file);
            cak::ParseResult result = cak::parse_source(language, source);
            cak::json diagnostics = cak::json::array();
            for (auto diagnostic : result.diagnostics) {
                diagnostic.file = validate_file;
                diagnostics.push_back(cak::to_json(diagnostic));
            }
            std::cout << diagnostics.dump() << "\n";
            return result.ok ? kExitOk : kExitInternal;
        }
        if (prompt->parsed()) {
            cak::AnalysisSession session =
                open_session(prompt_options, cak::AnalysisLevel::CALL_GRAPH);
            std::set<std::string> mockable(prompt_mockable.begin(), prompt_mockable.end());
            if (!prompt_mockable_file.empty()) {
                std::istringstream lines(read_text_file(prompt_mockable_file));
                std::string line;
                while (std::getline(lines, line)) {
                    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
                        line.pop_back();
                    }
                    if (!line.empty()) mockable.insert(line);
                }
            }
            cak::TestGenContext context =
                cak::build_testgen_context(session, prompt_class, prompt_method, mockable);
            cak::PromptSkeleton skeleton =
                cak::build_testgen_prompt(context, session.config().language);
            cak::RenderedPrompt rendered = cak::render(skeleton, {});
            if (prompt_execute) {
                cak::LLMEndpointConfig endpoint = cak::endpoint_config_from_env();
                std::cout << cak::execute_prompt(endpoint, rendered) << "\n";
            } else {
                std::cout << rendered.text << "\n";
            }
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cak::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case cak::ErrorCode::TypeNotFound:
        case cak::ErrorCode::MethodNotFound:
        case cak::ErrorCode::FileNotInSession:
            return kExitNotFound;
        case cak::ErrorCode::EndpointUnreachable:
        case cak::ErrorCode::HttpStatus:
        case cak::ErrorCode::MalformedResponse:
        case cak::ErrorCode::Timeout:
            return kExitEndpoint;
        case cak::ErrorCode::UnsupportedLanguage:
        case cak::ErrorCode::ProjectPathNotFound:
        case cak::ErrorCode::IoFailure:
        case cak::ErrorCode::SchemaVersionMismatch:
        case cak::ErrorCode::MalformedSnapshot:
        case cak::ErrorCode::NotAFocalMethod:
        case cak::ErrorCode::InvalidFeedback:
            return kExitConfig;
        default:
            return kExitInternal;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
