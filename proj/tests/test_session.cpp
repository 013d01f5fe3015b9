// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/errors.hpp"
#include "cak/schema_json.hpp"
#include "cak/session.hpp"

#include <doctest.h>

#include "support.hpp"

#include <filesystem>

using namespace cak;
using namespace cak::testing;

namespace fs = std::filesystem;

TEST_SUITE("session") {
    TEST_CASE("java fixture discovers modules in sorted order") {
        const AnalysisSession& session = java_session();
        REQUIRE(session.modules().size() == 4);
        CHECK(session.modules()[0].file_name == "com/acme/AbstractShape.java");
        CHECK(session.modules()[1].file_name == "com/acme/Circle.java");
        CHECK(session.modules()[2].file_name == "com/acme/Shape.java");
        CHECK(session.modules()[3].file_name == "com/acme/util/Calc.java");
        CHECK(session.type_index().size() == 4);
        CHECK(session.callable_index().size() == 9);
        CHECK(session.schema_version() == kSchemaVersion);
    }

    TEST_CASE("java build attributes come from the pom") {
        const AnalysisSession& session = java_session();
        REQUIRE(session.build_attributes().size() == 1);
        const BuildAttributes& build = session.build_attributes()[0];
        CHECK(build.build_file_type == "pom.xml");
        CHECK(build.build_tool == "maven");
        REQUIRE(build.package_name.has_value());
        CHECK(*build.package_name == "com.acme:shapes");
        REQUIRE(build.version.has_value());
        CHECK(*build.version == "1.2.0");
        CHECK(build.dependencies ==
              std::vector<std::string>{"org.apache.commons:commons-lang3:3.12.0"});

        REQUIRE(session.config_artifacts().size() == 1);
        const ConfigArtifact& artifact = session.config_artifacts()[0];
        CHECK(artifact.config_file_name == "pom.xml");
        CHECK(artifact.config_type == "maven");
        CHECK(artifact.settings.at("name") == "com.acme:shapes");
        CHECK(artifact.settings.at("version") == "1.2.0");
        CHECK(artifact.settings.at("dependency_count") == "1");
    }

    TEST_CASE("python build attributes come from pyproject") {
        const AnalysisSession& session = python_session();
        REQUIRE(session.build_attributes().size() == 1);
        const BuildAttributes& build = session.build_attributes()[0];
        CHECK(build.build_file_type == "pyproject.toml");
        CHECK(build.build_tool == "pip");
        CHECK(*build.package_name == "fixture-calc");
        CHECK(*build.version == "0.3.1");
        CHECK(build.dependencies == std::vector<std::string>{"requests>=2.28"});
    }

    TEST_CASE("missing project path is a config error") {
        ToolkitConfig config;
        config.language = Language::JAVA;
        config.project_path = "/does/not/exist-anywhere";
        try {
            create_session(config);
            FAIL("expected ProjectPathNotFound");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ProjectPathNotFound);
        }
    }

    TEST_CASE("empty project yields an empty session") {
        TempDir dir("empty");
        AnalysisSession session = make_session(Language::JAVA, dir.path,
                                               AnalysisLevel::SYMBOL_TABLE);
        CHECK(session.modules().empty());
        CHECK(schema_to_json(session) ==
              "{\"schema_version\":\"1.0\",\"language\":\"java\",\"modules\":[]}");
    }

    TEST_CASE("ignore globs skip build output and hidden directories") {
        TempDir dir("globs");
        write_file(dir.path / "Keep.java", "public class Keep {}\n");
        write_file(dir.path / "target" / "Skip.java", "public class Skip {}\n");
        write_file(dir.path / "build" / "Skip2.java", "public class Skip2 {}\n");
        write_file(dir.path / ".git" / "Skip3.java", "public class Skip3 {}\n");
        AnalysisSession session = make_session(Language::JAVA, dir.path);
        REQUIRE(session.modules().size() == 1);
        CHECK(session.modules()[0].file_name == "Keep.java");
    }

    TEST_CASE("serial and parallel sessions are byte-identical") {
        ToolkitConfig config;
        config.language = Language::JAVA;
        config.project_path = java_fixture();
        config.analysis_level = AnalysisLevel::CALL_GRAPH;
        AnalysisSession parallel = create_session(config, ExecutionPolicy::Parallel);
        AnalysisSession serial = create_session(config, ExecutionPolicy::Serial);
        CHECK(schema_to_json(parallel) == schema_to_json(serial));

        config.language = Language::PYTHON;
        config.project_path = python_fixture();
        AnalysisSession py_parallel = create_session(config, ExecutionPolicy::Parallel);
        AnalysisSession py_serial = create_session(config, ExecutionPolicy::Serial);
        CHECK(schema_to_json(py_parallel) == schema_to_json(py_serial));
    }

    TEST_CASE("save and load round-trip the session") {
        TempDir dir("roundtrip");
        fs::path snapshot = dir.path / "session.json";
        save_session(java_session(), snapshot);
        AnalysisSession loaded = load_session(snapshot);
        CHECK(schema_to_json(loaded) == schema_to_json(java_session()));
        CHECK(loaded.call_graph().has_value());
        CHECK(loaded.config().analysis_level == AnalysisLevel::CALL_GRAPH);
    }

    TEST_CASE("cache directory is populated and reused") {
        TempDir project("cached-src");
        TempDir cache("cached");
        write_file(project.path / "A.java",
              "public class A {\n    void f() {\n        g();\n    }\n    void g() {}\n}\n");
        ToolkitConfig config;
        config.language = Language::JAVA;
        config.project_path = project.path;
        config.analysis_level = AnalysisLevel::CALL_GRAPH;
        config.cache_dir = cache.path;

        AnalysisSession first = create_session(config);
        int cache_files = 0;
        for (const auto& entry : fs::directory_iterator(cache.path)) {
            ++cache_files;
            CHECK(entry.path().filename().string().rfind("cak-", 0) == 0);
        }
        CHECK(cache_files == 1);

        AnalysisSession second = create_session(config);
        CHECK(schema_to_json(first) == schema_to_json(second));

        // a content change must miss the old entry
        write_file(project.path / "A.java",
              "public class A {\n    void f() {}\n    void g() {}\n}\n");
        AnalysisSession third = create_session(config);
        CHECK(schema_to_json(third) != schema_to_json(first));
        cache_files = 0;
        for (const auto& entry : fs::directory_iterator(cache.path)) {
            (void)entry;
            ++cache_files;
        }
        CHECK(cache_files == 2);
    }

    TEST_CASE("bare constructor calls rewrite to init sites across modules") {
        TempDir dir("ctor");
        write_file(dir.path / "a.py",
              "class Calc:\n    def __init__(self, base):\n        self.base = base\n");
        write_file(dir.path / "b.py",
              "from a import Calc\n\ndef make():\n    return Calc(5)\n");
        AnalysisSession session = make_session(Language::PYTHON, dir.path);
        const CodeModule* b = session.find_module("b.py");
        REQUIRE(b != nullptr);
        REQUIRE(b->callables.size() == 1);
        REQUIRE(b->callables[0].call_sites.size() == 1);
        CHECK(b->callables[0].call_sites[0].target_method == "<init>");
        CHECK(b->callables[0].call_sites[0].receiver_type == "Calc");

        REQUIRE(session.call_graph().has_value());
        REQUIRE(session.call_graph()->edges.size() == 1);
        const CallEdge& edge = session.call_graph()->edges[0];
        CHECK(edge.caller.qualified_type_name == "b");
        CHECK(edge.callee.qualified_type_name == "a.Calc");
        CHECK(edge.callee.signature == "__init__(base)");
        CHECK(edge.callee.kind == CallNodeKind::PROJECT);
    }

    TEST_CASE("shadowed class names stay plain calls") {
        TempDir dir("shadow");
        write_file(dir.path / "a.py", "class Calc:\n    def __init__(self):\n        pass\n");
        write_file(dir.path / "c.py",
              "def Calc():\n    return 1\n\ndef use():\n    return Calc()\n");
        AnalysisSession session = make_session(Language::PYTHON, dir.path);
        const CodeModule* c = session.find_module("c.py");
        REQUIRE(c != nullptr);
        const Callable& use = c->callables[1];
        REQUIRE(use.call_sites.size() == 1);
        // same-module function shadows the class; the call is not a constructor
        CHECK(use.call_sites[0].target_method == "Calc");
        CHECK(use.call_sites[0].receiver_type == "");
    }

    TEST_CASE("session move keeps indices valid") {
        AnalysisSession session = make_session(Language::JAVA, java_fixture());
        AnalysisSession moved = std::move(session);
        CHECK(moved.find_type("com.acme.Circle") != nullptr);
        CHECK(moved.find_callable("com.acme.Circle", "area()") != nullptr);
        CHECK(moved.module_of_type("com.acme.Circle") ==
              moved.find_module("com/acme/Circle.java"));
    }
}
