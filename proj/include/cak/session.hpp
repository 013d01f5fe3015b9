// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/callgraph.hpp"
#include "cak/language.hpp"
#include "cak/schema.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cak {

enum class AnalysisLevel {
    SYMBOL_TABLE,
    CALL_GRAPH,
};

enum class AnalysisEngine {
    BUILTIN_SYNTAX,
};

std::string_view analysis_level_name(AnalysisLevel level);

struct ToolkitConfig {
    Language language = Language::JAVA;
    std::filesystem::path project_path;
    AnalysisLevel analysis_level = AnalysisLevel::SYMBOL_TABLE;
    AnalysisEngine engine = AnalysisEngine::BUILTIN_SYNTAX;
    std::optional<std::filesystem::path> cache_dir;
    // Directory-name globs skipped during discovery, besides hidden directories.
    std::vector<std::string> ignore_globs = {"target", "build", ".git", "__pycache__"};
};

inline constexpr std::string_view kSchemaVersion = "1.0";

/// Key of the session-wide callable index: (qualified type name, signature).
/// Module-level functions are keyed by their module's qualified name.
using CallableKey = std::pair<std::string, std::string>;

/// Immutable snapshot of a fully analyzed project. Queries are read-only and
/// safe to run concurrently.
class AnalysisSession {
public:
    struct Data {
        ToolkitConfig config;
        std::string schema_version{kSchemaVersion};
        std::vector<CodeModule> modules;  // ordered lexicographically by path
        std::vector<BuildAttributes> build_attributes;
        std::vector<ConfigArtifact> config_artifacts;
        std::optional<CallGraph> call_graph;
    };

    explicit AnalysisSession(Data data, bool compute_call_graph = false);

    AnalysisSession(const AnalysisSession&) = delete;
    AnalysisSession& operator=(const AnalysisSession&) = delete;
    AnalysisSession(AnalysisSession&&) = default;
    AnalysisSession& operator=(AnalysisSession&&) = default;

    const ToolkitConfig& config() const { return data_.config; }
    const std::string& schema_version() const { return data_.schema_version; }
    const std::vector<CodeModule>& modules() const { return data_.modules; }
    const std::vector<BuildAttributes>& build_attributes() const { return data_.build_attributes; }
    const std::vector<ConfigArtifact>& config_artifacts() const { return data_.config_artifacts; }
    const std::optional<CallGraph>& call_graph() const { return data_.call_graph; }

    /// Every reachable CodeType, keyed by qualified name (nested types hoisted).
    const std::map<std::string, const CodeType*>& type_index() const { return type_index_; }
    const std::map<CallableKey, const Callable*>& callable_index() const { return callable_index_; }

    const CodeModule* find_module(std::string_view file_name) const;
    const CodeType* find_type(std::string_view qualified_name) const;
    const Callable* find_callable(std::string_view qualified_type_name,
                                  std::string_view signature) const;

    /// Module that declares the given type, or nullptr.
    const CodeModule* module_of_type(std::string_view qualified_name) const;

private:
    Data data_;
    std::map<std::string, const CodeType*> type_index_;
    std::map<CallableKey, const Callable*> callable_index_;
    std::map<std::string, const CodeModule*> module_of_type_;

    void build_indices();
};

/// How create_session runs the per-file parse loop. Parallel uses OpenMP
/// worker threads; Serial is the reference path and produces a field-for-field
/// identical session.
enum class ExecutionPolicy {
    Parallel,
    Serial,
};

/// Analyze every source file of the configured language under
/// config.project_path. Unparsable files degrade to diagnostics-only modules.
/// Deterministic: module order is lexicographic by relative path.
AnalysisSession create_session(const ToolkitConfig& config,
                               ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Write the JSON snapshot of a session; byte-identical across repeated saves.
void save_session(const AnalysisSession& session, const std::filesystem::path& path);

/// Read a snapshot written by save_session. The call graph, when present, is
/// reconstructed from the serialized edges rather than recomputed.
AnalysisSession load_session(const std::filesystem::path& path);

} // namespace cak
