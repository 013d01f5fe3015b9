// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/cst.hpp"
#include "cak/parse.hpp"

#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"

#include <random>

using namespace cak;
using namespace cak::testing;

namespace {

const char* kEdgeSource = R"(package com.edge;

import java.util.List;
import java.util.*;
import static java.util.Objects.requireNonNull;

public enum Color { RED, GREEN }

record Point(int x, int y) {
    int sum() {
        return x + y;
    }
}

@interface Marker {}

public class Outer {
    static class Inner {
        void ping() {}
    }

    private List<String> items;

    static <T> Outer of(T seed) {
        requireNonNull(seed);
        return new Outer();
    }

    void run() {
        Inner helper = new Inner();
        helper.ping();
        of("x").toString();
    }
}
)";

int count_kind(const cst::Node& root, const std::string& kind) {
    int count = 0;
    cst::walk(root, [&](const cst::Node& node) {
        if (node.kind == kind) ++count;
    });
    return count;
}

} // namespace

TEST_SUITE("parse-java") {
    TEST_CASE("fixture files parse cleanly") {
        for (const char* name : {"com/acme/Shape.java", "com/acme/AbstractShape.java",
                                 "com/acme/Circle.java", "com/acme/util/Calc.java"}) {
            std::string source = read_file(java_fixture() / name);
            ParseResult result = parse_source(Language::JAVA, source);
            CAPTURE(name);
            CHECK(result.ok);
            CHECK(is_parsable(Language::JAVA, source));
        }
    }

    TEST_CASE("root span covers the whole file") {
        std::string source = read_file(java_fixture() / "com/acme/Circle.java");
        ParseResult result = parse_source(Language::JAVA, source);
        CHECK(result.root_span.first == 19);            // lines in Circle.java
        CHECK(result.root_span.second == source.size());
    }

    TEST_CASE("query table names the java grammar") {
        const cst::QueryTable& table = cst::query_table(Language::JAVA);
        CHECK(table.type_kinds.size() == 5);
        CHECK(table.callable_kinds.size() == 2);
        CHECK(table.import_kinds.size() == 1);
        CHECK(table.call_kind == "call");
    }

    TEST_CASE("declaration counts match a hand count") {
        cst::Tree tree = cst::parse(Language::JAVA, kEdgeSource);
        REQUIRE(tree.ok());
        // hand count over kEdgeSource: enum Color, record Point, @interface
        // Marker, class Outer, class Inner
        CHECK(count_kind(tree.root, "class_declaration") == 2);
        CHECK(count_kind(tree.root, "enum_declaration") == 1);
        CHECK(count_kind(tree.root, "record_declaration") == 1);
        CHECK(count_kind(tree.root, "annotation_type_declaration") == 1);
        CHECK(count_kind(tree.root, "import_declaration") == 3);
        CHECK(count_kind(tree.root, "package_declaration") == 1);
        // methods: Point.sum, Inner.ping, Outer.of, Outer.run
        CHECK(count_kind(tree.root, "method_declaration") == 4);
        CHECK(count_kind(tree.root, "constructor_declaration") == 0);
    }

    TEST_CASE("edge module extraction") {
        CodeModule module = extract_module(Language::JAVA, "com/edge/Edge.java", kEdgeSource);

        SUBCASE("types are hoisted with dotted nested names") {
            std::vector<std::string> names;
            for (const auto& type : module.types) names.push_back(type.qualified_name);
            CHECK(std::count(names.begin(), names.end(), "com.edge.Outer") == 1);
            CHECK(std::count(names.begin(), names.end(), "com.edge.Outer.Inner") == 1);
            CHECK(std::count(names.begin(), names.end(), "com.edge.Color") == 1);
            CHECK(std::count(names.begin(), names.end(), "com.edge.Point") == 1);
            CHECK(std::count(names.begin(), names.end(), "com.edge.Marker") == 1);
        }

        SUBCASE("kinds normalize with warnings for lossy ones") {
            for (const auto& type : module.types) {
                if (type.type_name == "Color") CHECK(type.kind == TypeKind::ENUM);
                if (type.type_name == "Point") CHECK(type.kind == TypeKind::CLASS);
                if (type.type_name == "Marker") CHECK(type.kind == TypeKind::CLASS);
                if (type.type_name == "Outer") CHECK(type.kind == TypeKind::CLASS);
            }
            int notes = 0;
            for (const auto& diagnostic : module.diagnostics) {
                if (!diagnostic.is_error() &&
                    diagnostic.message.find("normalized to class") != std::string::npos) {
                    ++notes;
                }
            }
            CHECK(notes == 2);  // record_declaration and annotation_type_declaration
        }

        SUBCASE("imports distinguish static and star forms") {
            REQUIRE(module.imports.size() == 3);
            CHECK(module.imports[0].from_module == "java.util");
            CHECK(module.imports[0].imports == std::vector<std::string>{"List"});
            CHECK(module.imports[1].imports == std::vector<std::string>{"*"});
            CHECK(module.imports[2].raw_text ==
                  "import static java.util.Objects.requireNonNull;");
        }

        SUBCASE("generic method survives with its calls") {
            const CodeType* outer = nullptr;
            for (const auto& type : module.types) {
                if (type.type_name == "Outer") outer = &type;
            }
            REQUIRE(outer != nullptr);
            const Callable* of = nullptr;
            const Callable* run = nullptr;
            for (const auto& callable : outer->callables) {
                if (callable.method_name == "of") of = &callable;
                if (callable.method_name == "run") run = &callable;
            }
            REQUIRE(of != nullptr);
            CHECK(of->is_static);
            REQUIRE(of->call_sites.size() == 2);
            // static import must not register a type named requireNonNull
            CHECK(of->call_sites[0].target_method == "requireNonNull");
            CHECK(of->call_sites[0].receiver_type == "");
            CHECK(of->call_sites[1].target_method == "<init>");
            CHECK(of->call_sites[1].receiver_type == "Outer");

            REQUIRE(run != nullptr);
            REQUIRE(run->call_sites.size() == 3);
            CHECK(run->call_sites[0].target_method == "<init>");
            CHECK(run->call_sites[0].receiver_type == "Inner");
            // local declaration types the receiver
            CHECK(run->call_sites[1].target_method == "ping");
            CHECK(run->call_sites[1].receiver_type == "Inner");
            // dynamic receiver of(...).toString() resolves to no type
            CHECK(run->call_sites[2].target_method == "toString");
            CHECK(run->call_sites[2].receiver_type == "");
        }
    }

    TEST_CASE("unparsable input yields a diagnostics-only module") {
        CodeModule module =
            extract_module(Language::JAVA, "Bad.java", "class Bad { void f( {} }");
        CHECK(module.types.empty());
        bool has_error = false;
        for (const auto& diagnostic : module.diagnostics) has_error |= diagnostic.is_error();
        CHECK(has_error);
    }

    TEST_CASE("lenient issues warn without failing the parse") {
        ParseResult result =
            parse_source(Language::JAVA, "package p;\nclass A {\n  42\n  void f() {}\n}\n");
        CHECK(result.ok);
        REQUIRE(result.diagnostics.size() == 1);
        CHECK_FALSE(result.diagnostics[0].is_error());
        CHECK(result.diagnostics[0].line == 3);

        // the stray token must not cost us the following method
        CodeModule module = extract_module(Language::JAVA, "A.java",
                                           "package p;\nclass A {\n  42\n  void f() {}\n}\n");
        REQUIRE(module.types.size() == 1);
        REQUIRE(module.types[0].callables.size() == 1);
        CHECK(module.types[0].callables[0].full_signature == "f()");
    }

    TEST_CASE("parameter receivers resolve through the provided context") {
        CallSiteContext context;
        context.enclosing_type = "Caller";
        context.locals["c"] = "Calc";
        context.known_types.insert("Calc");
        auto sites = extract_call_sites(Language::JAVA, "c.add(1, 2);", 1, context);
        REQUIRE(sites.size() == 1);
        CHECK(sites[0].receiver_type == "Calc");
        CHECK(sites[0].target_method == "add");

        // same snippet with no context: unknown receiver
        auto bare = extract_call_sites(Language::JAVA, "c.add(1, 2);", 1, {});
        REQUIRE(bare.size() == 1);
        CHECK(bare[0].receiver_type == "");
    }

    TEST_CASE("snippet scanning agrees with in-tree extraction") {
        int checked = 0;
        for (const char* name : {"com/acme/Shape.java", "com/acme/AbstractShape.java",
                                 "com/acme/Circle.java", "com/acme/util/Calc.java"}) {
            std::string source = read_file(java_fixture() / name);
            CodeModule module = extract_module(Language::JAVA, name, source);
            for (const auto& type : module.types) {
                CallSiteContext context;
                context.enclosing_type = type.type_name;
                for (const auto& field : type.fields) {
                    context.fields[field.field_name] = field.field_type;
                }
                for (const auto& other : module.types) {
                    context.known_types.insert(other.type_name);
                }
                for (const auto& import_decl : module.imports) {
                    if (import_decl.raw_text.rfind("import static ", 0) == 0) continue;
                    if (import_decl.imports.empty() || import_decl.imports[0] == "*") continue;
                    context.known_types.insert(import_decl.imports[0]);
                }
                for (const auto& callable : type.callables) {
                    auto sites = extract_call_sites(Language::JAVA, callable.code_body,
                                                    callable.line_offset.start, context);
                    CAPTURE(callable.full_signature);
                    CHECK(sites == callable.call_sites);
                    ++checked;
                }
            }
        }
        CHECK(checked == 9);
    }

    TEST_CASE("delimiter-deletion mutants are rejected") {
        std::mt19937 rng(20260822);
        for (const char* name : {"com/acme/Shape.java", "com/acme/AbstractShape.java",
                                 "com/acme/Circle.java", "com/acme/util/Calc.java"}) {
            std::string source = read_file(java_fixture() / name);
            REQUIRE(delimiters_balanced(Language::JAVA, source));
            REQUIRE(is_parsable(Language::JAVA, source));
            auto positions = delimiter_positions(Language::JAVA, source);
            REQUIRE_FALSE(positions.empty());
            std::uniform_int_distribution<std::size_t> pick(0, positions.size() - 1);
            for (int i = 0; i < 10; ++i) {
                std::string mutant = source;
                mutant.erase(positions[pick(rng)], 1);
                CAPTURE(name);
                CAPTURE(i);
                if (!delimiters_balanced(Language::JAVA, mutant)) {
                    CHECK_FALSE(is_parsable(Language::JAVA, mutant));
                }
            }
        }
    }

    TEST_CASE("is_parsable never throws on junk") {
        CHECK_NOTHROW(is_parsable(Language::JAVA, ""));
        CHECK_NOTHROW(is_parsable(Language::JAVA, "\0\x01\xff"));
        CHECK_NOTHROW(is_parsable(Language::JAVA, "}}}}{{{{"));
        CHECK_NOTHROW(is_parsable(Language::JAVA, std::string(10000, '(')));
    }
}
