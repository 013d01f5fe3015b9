// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/session.hpp"

#include "cak/callgraph.hpp"
#include "cak/errors.hpp"
#include "cak/parse.hpp"
#include "cak/schema_json.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;

namespace cak {
namespace {

/// Glob match supporting '*' and '?' only, against a single path component.
bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

bool skip_directory(const fs::path& dir, const std::vector<std::string>& ignore_globs) {
    std::string name = dir.filename().string();
    if (name.size() > 1 && name[0] == '.') return true;
    for (const std::string& pattern : ignore_globs)
        if (glob_match(pattern, name)) return true;
    return false;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> discover_sources(const ToolkitConfig& config) {
    std::string extension(language_extension(config.language));
    std::vector<std::string> files;
    std::function<void(const fs::path&)> walk = [&](const fs::path& dir) {
        std::vector<fs::path> entries;
        for (const auto& entry : fs::directory_iterator(dir)) entries.push_back(entry.path());
        std::sort(entries.begin(), entries.end());
        for (const fs::path& path : entries) {
            if (fs::is_directory(path)) {
                if (!skip_directory(path, config.ignore_globs)) walk(path);
            } else if (path.extension() == extension) {
                files.push_back(fs::relative(path, config.project_path).generic_string());
            }
        }
    };
    walk(config.project_path);
    std::sort(files.begin(), files.end());
    return files;
}

std::string text_of_element(const std::string& xml, const std::string& tag, std::size_t from = 0) {
    std::string open = "<" + tag + ">";
    std::string close = "</" + tag + ">";
    std::size_t begin = xml.find(open, from);
    if (begin == std::string::npos) return "";
    begin += open.size();
    std::size_t end = xml.find(close, begin);
    if (end == std::string::npos) return "";
    std::string value = xml.substr(begin, end - begin);
    std::size_t first = value.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    std::size_t last = value.find_last_not_of(" \t\r\n");
    return value.substr(first, last - first + 1);
}

BuildAttributes parse_pom(const std::string& text) {
    BuildAttributes build;
    build.build_file_type = "pom.xml";
    build.build_tool = "maven";
    std::string group = text_of_element(text, "groupId");
    std::string artifact = text_of_element(text, "artifactId");
    if (!group.empty() || !artifact.empty())
        build.package_name = group.empty() ? artifact : group + ":" + artifact;
    std::string version = text_of_element(text, "version");
    if (!version.empty()) build.version = version;
    std::size_t pos = 0;
    while ((pos = text.find("<dependency>", pos)) != std::string::npos) {
        std::size_t end = text.find("</dependency>", pos);
        if (end == std::string::npos) break;
        std::string dep = text.substr(pos, end - pos);
        std::string dep_group = text_of_element(dep, "groupId");
        std::string dep_artifact = text_of_element(dep, "artifactId");
        std::string dep_version = text_of_element(dep, "version");
        std::string entry = dep_group.empty() ? dep_artifact : dep_group + ":" + dep_artifact;
        if (!dep_version.empty()) entry += ":" + dep_version;
        if (!entry.empty()) build.dependencies.push_back(entry);
        pos = end;
    }
    return build;
}

BuildAttributes parse_gradle(const std::string& text) {
    BuildAttributes build;
    build.build_file_type = "build.gradle";
    build.build_tool = "gradle";
    std::istringstream lines(text);
    std::string line;
    auto unquote = [](std::string value) {
        std::size_t first = value.find_first_of("'\"");
        std::size_t last = value.find_last_of("'\"");
        if (first == std::string::npos || last <= first) return std::string();
        return value.substr(first + 1, last - first - 1);
    };
    while (std::getline(lines, line)) {
        std::size_t at = line.find_first_not_of(" \t");
        if (at == std::string::npos) continue;
        std::string trimmed = line.substr(at);
        if (trimmed.rfind("group", 0) == 0 && !build.package_name)
            build.package_name = unquote(trimmed);
        else if (trimmed.rfind("version", 0) == 0 && !build.version)
            build.version = unquote(trimmed);
        else if (trimmed.rfind("implementation", 0) == 0 || trimmed.rfind("api", 0) == 0 ||
                 trimmed.rfind("testImplementation", 0) == 0) {
            std::string dep = unquote(trimmed);
            if (!dep.empty()) build.dependencies.push_back(dep);
        }
    }
    return build;
}

std::string toml_unquote(const std::string& value) {
    std::size_t first = value.find_first_of("'\"");
    std::size_t last = value.find_last_of("'\"");
    if (first == std::string::npos || last <= first) return "";
    return value.substr(first + 1, last - first - 1);
}

BuildAttributes parse_pyproject(const std::string& text) {
    BuildAttributes build;
    build.build_file_type = "pyproject.toml";
    build.build_tool = "pip";
    std::istringstream lines(text);
    std::string line;
    bool in_dependencies = false;
    while (std::getline(lines, line)) {
        std::size_t at = line.find_first_not_of(" \t");
        if (at == std::string::npos) continue;
        std::string trimmed = line.substr(at);
        if (trimmed[0] == '#') continue;
        if (in_dependencies) {
            if (trimmed[0] == ']') {
                in_dependencies = false;
                continue;
            }
            std::string dep = toml_unquote(trimmed);
            if (!dep.empty()) build.dependencies.push_back(dep);
            continue;
        }
        if (trimmed.rfind("name", 0) == 0 && !build.package_name) {
            std::string value = toml_unquote(trimmed);
            if (!value.empty()) build.package_name = value;
        } else if (trimmed.rfind("version", 0) == 0 && !build.version) {
            std::string value = toml_unquote(trimmed);
            if (!value.empty()) build.version = value;
        } else if (trimmed.rfind("dependencies", 0) == 0) {
            in_dependencies = trimmed.find(']') == std::string::npos;
        }
    }
    return build;
}

BuildAttributes parse_requirements(const std::string& text) {
    BuildAttributes build;
    build.build_file_type = "requirements.txt";
    build.build_tool = "pip";
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::size_t at = line.find_first_not_of(" \t\r");
        if (at == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        std::string trimmed = line.substr(at, end - at + 1);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        build.dependencies.push_back(trimmed);
    }
    return build;
}

ConfigArtifact config_artifact_for(const std::string& file_name, const std::string& text,
                                   const BuildAttributes& build) {
    ConfigArtifact artifact;
    artifact.config_file_name = file_name;
    artifact.code_body = text;
    artifact.config_type = build.build_tool;
    if (build.package_name) artifact.settings["name"] = *build.package_name;
    if (build.version) artifact.settings["version"] = *build.version;
    if (!build.dependencies.empty())
        artifact.settings["dependency_count"] = std::to_string(build.dependencies.size());
    return artifact;
}

void collect_build_files(const ToolkitConfig& config, AnalysisSession::Data& data) {
    struct Recognized {
        const char* file_name;
        BuildAttributes (*parse)(const std::string&);
    };
    static const Recognized recognized[] = {
        {"pom.xml", parse_pom},
        {"build.gradle", parse_gradle},
        {"pyproject.toml", parse_pyproject},
        {"requirements.txt", parse_requirements},
    };
    for (const Recognized& r : recognized) {
        fs::path path = config.project_path / r.file_name;
        if (!fs::exists(path)) continue;
        std::string text = read_file(path);
        BuildAttributes build = r.parse(text);
        data.config_artifacts.push_back(config_artifact_for(r.file_name, text, build));
        data.build_attributes.push_back(std::move(build));
    }
}

/// Rewrite bare Python calls that name a class declared elsewhere in the
/// session into constructor calls, unless a same-module callable shadows the
/// name. Same-module classes were already rewritten during extraction.
void rewrite_python_constructor_calls(AnalysisSession::Data& data) {
    std::set<std::string> class_names;
    for (const CodeModule& module : data.modules)
        for (const CodeType& type : module.types) {
            std::string simple = type.type_name;
            std::size_t dot = simple.rfind('.');
            if (dot != std::string::npos) simple = simple.substr(dot + 1);
            class_names.insert(simple);
        }
    if (class_names.empty()) return;

    for (CodeModule& module : data.modules) {
        std::set<std::string> shadowed;
        for (const Callable& fn : module.callables) shadowed.insert(fn.method_name);
        for (const CodeType& type : module.types)
            for (const Callable& fn : type.callables) shadowed.insert(fn.method_name);
        auto rewrite = [&](Callable& fn) {
            for (CallSite& site : fn.call_sites) {
                if (site.target_method == "<init>" || !site.receiver_type.empty()) continue;
                if (!class_names.count(site.target_method) || shadowed.count(site.target_method))
                    continue;
                site.receiver_type = site.target_method;
                site.target_method = "<init>";
            }
        };
        for (CodeType& type : module.types)
            for (Callable& fn : type.callables) rewrite(fn);
        for (Callable& fn : module.callables) rewrite(fn);
    }
}

std::uint64_t fnv1a(std::uint64_t hash, std::string_view text) {
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

/// Content hash over everything that determines a session: schema version,
/// configuration, and each file's path and bytes.
std::string project_content_hash(const ToolkitConfig& config,
                                 const std::vector<std::string>& files) {
    std::uint64_t hash = 1469598103934665603ull;
    hash = fnv1a(hash, kSchemaVersion);
    hash = fnv1a(hash, language_name(config.language));
    hash = fnv1a(hash, analysis_level_name(config.analysis_level));
    for (const std::string& file : files) {
        hash = fnv1a(hash, file);
        hash = fnv1a(hash, read_file(config.project_path / file));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace

std::string_view analysis_level_name(AnalysisLevel level) {
    return level == AnalysisLevel::CALL_GRAPH ? "call_graph" : "symbol_table";
}

AnalysisSession::AnalysisSession(Data data, bool compute_call_graph) : data_(std::move(data)) {
    build_indices();
    if (compute_call_graph && !data_.call_graph) {
        data_.call_graph = build_call_graph(*this);
    }
}

void AnalysisSession::build_indices() {
    type_index_.clear();
    callable_index_.clear();
    module_of_type_.clear();
    for (const CodeModule& module : data_.modules) {
        for (const CodeType& type : module.types) {
            type_index_[type.qualified_name] = &type;
            module_of_type_[type.qualified_name] = &module;
            for (const Callable& fn : type.callables)
                callable_index_[{type.qualified_name, fn.full_signature}] = &fn;
        }
        for (const Callable& fn : module.callables)
            callable_index_[{module.qualified_name, fn.full_signature}] = &fn;
    }
}

const CodeModule* AnalysisSession::find_module(std::string_view file_name) const {
    for (const CodeModule& module : data_.modules)
        if (module.file_name == file_name) return &module;
    return nullptr;
}

const CodeType* AnalysisSession::find_type(std::string_view qualified_name) const {
    auto it = type_index_.find(std::string(qualified_name));
    return it == type_index_.end() ? nullptr : it->second;
}

const Callable* AnalysisSession::find_callable(std::string_view qualified_type_name,
                                               std::string_view signature) const {
    auto it = callable_index_.find({std::string(qualified_type_name), std::string(signature)});
    return it == callable_index_.end() ? nullptr : it->second;
}

const CodeModule* AnalysisSession::module_of_type(std::string_view qualified_name) const {
    auto it = module_of_type_.find(std::string(qualified_name));
    return it == module_of_type_.end() ? nullptr : it->second;
}

AnalysisSession create_session(const ToolkitConfig& config, ExecutionPolicy policy) {
    if (!fs::exists(config.project_path) || !fs::is_directory(config.project_path))
        throw Error(ErrorCode::ProjectPathNotFound,
                    "project path " + config.project_path.string() + " does not exist");

    std::vector<std::string> files = discover_sources(config);

    if (config.cache_dir) {
        fs::path cached =
            *config.cache_dir / ("cak-" + project_content_hash(config, files) + ".json");
        if (fs::exists(cached)) {
            AnalysisSession session = load_session(cached);
            AnalysisSession::Data data;
            data.config = config;
            data.schema_version = session.schema_version();
            data.modules = session.modules();
            data.build_attributes = session.build_attributes();
            data.config_artifacts = session.config_artifacts();
            data.call_graph = session.call_graph();
            return AnalysisSession(std::move(data),
                                   config.analysis_level == AnalysisLevel::CALL_GRAPH);
        }
    }

    std::vector<std::string> sources(files.size());
    for (std::size_t i = 0; i < files.size(); ++i)
        sources[i] = read_file(config.project_path / files[i]);

    std::vector<CodeModule> modules(files.size());
    if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < files.size(); ++i)
            modules[i] = extract_module(config.language, files[i], sources[i]);
    } else {
        for (std::size_t i = 0; i < files.size(); ++i)
            modules[i] = extract_module(config.language, files[i], sources[i]);
    }

    AnalysisSession::Data data;
    data.config = config;
    data.modules = std::move(modules);
    collect_build_files(config, data);
    if (config.language == Language::PYTHON) rewrite_python_constructor_calls(data);

    AnalysisSession session(std::move(data),
                            config.analysis_level == AnalysisLevel::CALL_GRAPH);

    if (config.cache_dir) {
        fs::create_directories(*config.cache_dir);
        fs::path cached =
            *config.cache_dir / ("cak-" + project_content_hash(config, files) + ".json");
        save_session(session, cached);
    }
    return session;
}

void save_session(const AnalysisSession& session, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << schema_to_json(session) << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

AnalysisSession load_session(const std::filesystem::path& path) {
    if (!fs::exists(path))
        throw Error(ErrorCode::IoFailure, "snapshot " + path.string() + " does not exist");
    return schema_from_json(read_file(path));
}

} // namespace cak
