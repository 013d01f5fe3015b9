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

const char* kEdgeSource =
    "import os.path\n"
    "from os import (path, sep)\n"
    "import json as j\n"
    "from . import sibling\n"
    "\n"
    "def weird(a, *args, **kw):\n"
    "    return a\n"
    "\n"
    "class Outer:\n"
    "    tag = 'x'\n"
    "\n"
    "    class Inner:\n"
    "        def ping(self):\n"
    "            pass\n"
    "\n"
    "    def use(self):\n"
    "        return self.helper(1)\n"
    "\n"
    "    def helper(self, n):\n"
    "        return n\n";

int count_kind(const cst::Node& root, const std::string& kind) {
    int count = 0;
    cst::walk(root, [&](const cst::Node& node) {
        if (node.kind == kind) ++count;
    });
    return count;
}

} // namespace

TEST_SUITE("parse-python") {
    TEST_CASE("fixture files parse cleanly") {
        for (const char* name : {"calc.py", "greeting.py"}) {
            std::string source = read_file(python_fixture() / name);
            ParseResult result = parse_source(Language::PYTHON, source);
            CAPTURE(name);
            CHECK(result.ok);
            CHECK(is_parsable(Language::PYTHON, source));
        }
    }

    TEST_CASE("query table names the python grammar") {
        const cst::QueryTable& table = cst::query_table(Language::PYTHON);
        CHECK(table.type_kinds == std::vector<std::string_view>{"class_definition"});
        CHECK(table.callable_kinds == std::vector<std::string_view>{"function_definition"});
        CHECK(table.import_kinds ==
              std::vector<std::string_view>{"import_statement", "import_from_statement"});
        CHECK(table.call_kind == "call");
    }

    TEST_CASE("declaration counts match a hand count") {
        cst::Tree tree = cst::parse(Language::PYTHON, kEdgeSource);
        REQUIRE(tree.ok());
        CHECK(count_kind(tree.root, "class_definition") == 2);          // Outer, Inner
        CHECK(count_kind(tree.root, "function_definition") == 4);       // weird ping use helper
        CHECK(count_kind(tree.root, "import_statement") == 2);
        CHECK(count_kind(tree.root, "import_from_statement") == 2);
    }

    TEST_CASE("edge module extraction") {
        CodeModule module = extract_module(Language::PYTHON, "pkg/edge.py", kEdgeSource);
        CHECK(module.qualified_name == "pkg.edge");
        CHECK(module.diagnostics.empty());

        SUBCASE("import forms") {
            REQUIRE(module.imports.size() == 4);
            CHECK(module.imports[0].from_module == "");
            CHECK(module.imports[0].imports == std::vector<std::string>{"os.path"});
            CHECK(module.imports[1].from_module == "os");
            CHECK(module.imports[1].imports == std::vector<std::string>{"path", "sep"});
            CHECK(module.imports[2].imports == std::vector<std::string>{"json"});
            CHECK(module.imports[3].from_module == ".");
            CHECK(module.imports[3].raw_text == "from . import sibling");
        }

        SUBCASE("star and keyword parameters keep their markers") {
            REQUIRE(module.callables.size() == 1);
            const Callable& weird = module.callables[0];
            CHECK(weird.full_signature == "weird(a,*args,**kw)");
            CHECK(weird.formal_params.size() == 3);
        }

        SUBCASE("nested classes hoist with dotted names") {
            REQUIRE(module.types.size() == 2);
            CHECK(module.types[0].type_name == "Outer");
            CHECK(module.types[0].qualified_name == "pkg.edge.Outer");
            CHECK(module.types[1].type_name == "Outer.Inner");
            CHECK(module.types[1].qualified_name == "pkg.edge.Outer.Inner");
        }

        SUBCASE("class fields come from suite-level assignments") {
            REQUIRE(module.types[0].fields.size() == 1);
            CHECK(module.types[0].fields[0].field_name == "tag");
        }

        SUBCASE("unannotated parameters fall back to their names") {
            const CodeType& outer = module.types[0];
            REQUIRE(outer.callables.size() == 2);
            CHECK(outer.callables[0].full_signature == "use()");
            CHECK(outer.callables[1].full_signature == "helper(n)");
        }

        SUBCASE("self receivers type to the enclosing class") {
            const Callable& use = module.types[0].callables[0];
            REQUIRE(use.call_sites.size() == 1);
            CHECK(use.call_sites[0].target_method == "helper");
            CHECK(use.call_sites[0].receiver_type == "Outer");
        }
    }

    TEST_CASE("fixture signatures use annotations and drop self") {
        CodeModule module = extract_module(Language::PYTHON, "calc.py",
                                           read_file(python_fixture() / "calc.py"));
        REQUIRE(module.types.size() == 1);
        const CodeType& calc = module.types[0];
        REQUIRE(calc.callables.size() == 3);
        CHECK(calc.callables[0].full_signature == "__init__(int)");
        CHECK(calc.callables[0].is_constructor);
        CHECK(calc.callables[0].formal_params.size() == 2);   // self stays a formal param
        CHECK(calc.callables[0].formal_params[0].arg_name == "self");
        CHECK(calc.callables[1].full_signature == "add(int,int)");
        CHECK(calc.callables[2].full_signature == "bump(int)");
        CHECK(calc.callables[2].return_type == "int");
    }

    TEST_CASE("decorators mark static methods") {
        CodeModule module = extract_module(Language::PYTHON, "greeting.py",
                                           read_file(python_fixture() / "greeting.py"));
        REQUIRE(module.types.size() == 1);
        const Callable& greet = module.types[0].callables[0];
        CHECK(greet.full_signature == "greet(str)");
        CHECK(greet.is_static);
        CHECK(greet.modifiers == std::vector<std::string>{"@staticmethod"});
        // no self to drop on a staticmethod
        REQUIRE(greet.formal_params.size() == 1);
        CHECK(greet.formal_params[0].arg_name == "name");
    }

    TEST_CASE("malformed headers are errors") {
        CHECK_FALSE(is_parsable(Language::PYTHON, "def broken(:\n    pass\n"));
        CHECK_FALSE(is_parsable(Language::PYTHON, "class :\n    pass\n"));
        ParseResult result = parse_source(Language::PYTHON, "def broken(:\n    pass\n");
        CHECK_FALSE(result.ok);
        bool saw_error = false;
        for (const auto& diagnostic : result.diagnostics) saw_error |= diagnostic.is_error();
        CHECK(saw_error);
    }

    TEST_CASE("module-level compound statements stay quiet") {
        ParseResult result = parse_source(Language::PYTHON,
                                          "X = 1\n"
                                          "if X:\n"
                                          "    Y = 2\n"
                                          "    Z = 3\n"
                                          "\n"
                                          "def f():\n"
                                          "    return X\n");
        CHECK(result.ok);
        CHECK(result.diagnostics.empty());
    }

    TEST_CASE("snippet scanning agrees with in-tree extraction") {
        int checked = 0;
        for (const char* name : {"calc.py", "greeting.py"}) {
            std::string source = read_file(python_fixture() / name);
            CodeModule module = extract_module(Language::PYTHON, name, source);
            for (const auto& type : module.types) {
                CallSiteContext context;
                context.enclosing_type = type.type_name;
                for (const auto& field : type.fields) {
                    context.fields[field.field_name] = field.field_type;
                }
                for (const auto& other : module.types) {
                    context.known_types.insert(other.type_name);
                }
                for (const auto& callable : type.callables) {
                    auto sites = extract_call_sites(Language::PYTHON, callable.code_body,
                                                    callable.line_offset.start, context);
                    CAPTURE(callable.full_signature);
                    CHECK(sites == callable.call_sites);
                    ++checked;
                }
            }
            for (const auto& callable : module.callables) {
                CallSiteContext context;
                for (const auto& other : module.types) {
                    context.known_types.insert(other.type_name);
                }
                auto sites = extract_call_sites(Language::PYTHON, callable.code_body,
                                                callable.line_offset.start, context);
                CAPTURE(callable.full_signature);
                CHECK(sites == callable.call_sites);
                ++checked;
            }
        }
        CHECK(checked == 5);
    }

    TEST_CASE("delimiter-deletion mutants are rejected") {
        std::mt19937 rng(20260823);
        for (const char* name : {"calc.py", "greeting.py"}) {
            std::string source = read_file(python_fixture() / name);
            REQUIRE(delimiters_balanced(Language::PYTHON, source));
            REQUIRE(is_parsable(Language::PYTHON, source));
            auto positions = delimiter_positions(Language::PYTHON, source);
            REQUIRE_FALSE(positions.empty());
            std::uniform_int_distribution<std::size_t> pick(0, positions.size() - 1);
            for (int i = 0; i < 10; ++i) {
                std::string mutant = source;
                mutant.erase(positions[pick(rng)], 1);
                CAPTURE(name);
                CAPTURE(i);
                if (!delimiters_balanced(Language::PYTHON, mutant)) {
                    CHECK_FALSE(is_parsable(Language::PYTHON, mutant));
                }
            }
        }
    }

    TEST_CASE("is_parsable never throws on junk") {
        CHECK_NOTHROW(is_parsable(Language::PYTHON, ""));
        CHECK_NOTHROW(is_parsable(Language::PYTHON, "\t\t\t::::"));
        CHECK_NOTHROW(is_parsable(Language::PYTHON, std::string(10000, ')')));
        CHECK_NOTHROW(is_parsable(Language::PYTHON, "def f(\n\n\n"));
    }
}
