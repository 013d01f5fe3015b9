// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/session.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace cak::testing {

inline std::filesystem::path source_dir() { return CAK_SOURCE_DIR; }
inline std::filesystem::path java_fixture() {
    return source_dir() / "tests" / "fixtures" / "fixture-java";
}
inline std::filesystem::path python_fixture() {
    return source_dir() / "tests" / "fixtures" / "fixture-python";
}
inline std::filesystem::path golden(const std::string& name) {
    return source_dir() / "goldens" / name;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Self-deleting scratch directory for tests that synthesize projects.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("cak-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(++counter));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& file, const std::string& text) {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    out << text;
}

inline AnalysisSession make_session(Language language, const std::filesystem::path& root,
                                    AnalysisLevel level = AnalysisLevel::CALL_GRAPH) {
    ToolkitConfig config;
    config.language = language;
    config.project_path = root;
    config.analysis_level = level;
    return create_session(config);
}

/// Shared read-only sessions; built once per test binary.
inline const AnalysisSession& java_session() {
    static AnalysisSession session = make_session(Language::JAVA, java_fixture());
    return session;
}

inline const AnalysisSession& python_session() {
    static AnalysisSession session = make_session(Language::PYTHON, python_fixture());
    return session;
}

} // namespace cak::testing
