// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/analysis.hpp"
#include "cak/callgraph.hpp"
#include "cak/errors.hpp"
#include "cak/prompt.hpp"
#include "cak/session.hpp"

#include <doctest.h>

#include "support.hpp"

#include <cstdlib>
#include <random>

using namespace cak;
using namespace cak::testing;

TEST_SUITE("prompt") {
    TEST_CASE("builder appends blocks in call order") {
        PromptSkeleton skeleton;
        skeleton.add_line("first").add_code_block("x = 1", "python").add_line("last");
        REQUIRE(skeleton.blocks.size() == 3);
        CHECK(std::holds_alternative<TextLine>(skeleton.blocks[0]));
        CHECK(std::holds_alternative<CodeBlock>(skeleton.blocks[1]));
        CHECK(std::holds_alternative<TextLine>(skeleton.blocks[2]));
        CHECK(std::get<CodeBlock>(skeleton.blocks[1]).language_tag == "python");
    }

    TEST_CASE("render joins blocks and fences code") {
        PromptSkeleton skeleton;
        skeleton.add_line("Review this:").add_code_block("print(1)", "python").add_line("Done.");
        RenderedPrompt out = render(skeleton, {});
        CHECK(out.text == "Review this:\n```python\nprint(1)\n```\nDone.");
        CHECK(out.placeholders_resolved);
    }

    TEST_CASE("string placeholders substitute in text and code") {
        PromptContext context;
        context["name"] = std::string("Widget");
        PromptSkeleton skeleton;
        skeleton.add_line("Class {name} follows.").add_code_block("class {name}: pass", "");
        RenderedPrompt out = render(skeleton, context);
        CHECK(out.text == "Class Widget follows.\n```\nclass Widget: pass\n```");
    }

    TEST_CASE("callable paths expose declaration fields") {
        const Callable& area = get_method(java_session(), "com.acme.Circle", "area()");
        PromptContext context;
        context["callable"] = &area;
        PromptSkeleton skeleton;
        skeleton.add_line("{callable.method_name} / {callable.full_signature} / "
                          "{callable.return_type} / static={callable.is_static}");
        RenderedPrompt out = render(skeleton, context);
        CHECK(out.text == "area / area() / double / static=false");
    }

    TEST_CASE("type and module paths expose their fields") {
        const CodeType& circle = get_class(java_session(), "com.acme.Circle");
        const CodeModule* module = java_session().find_module("com/acme/Circle.java");
        REQUIRE(module != nullptr);
        PromptContext context;
        context["type"] = &circle;
        context["module"] = module;
        PromptSkeleton skeleton;
        skeleton.add_line("{type.type_name} is a {type.kind} in {module.file_name} "
                          "({module.qualified_name})");
        RenderedPrompt out = render(skeleton, context);
        CHECK(out.text == "Circle is a class in com/acme/Circle.java (com.acme.Circle)");
    }

    TEST_CASE("braces that are not placeholders stay literal") {
        PromptContext context;
        context["x"] = std::string("V");
        PromptSkeleton skeleton;
        skeleton.add_code_block("if (a) { f({1, 2}); } // {x}", "java");
        RenderedPrompt out = render(skeleton, context);
        CHECK(out.text == "```java\nif (a) { f({1, 2}); } // V\n```");
    }

    TEST_CASE("doubled braces escape literals in text lines") {
        PromptContext context;
        context["x"] = std::string("V");
        PromptSkeleton skeleton;
        skeleton.add_line("{{x}} is literal, {x} is not");
        RenderedPrompt out = render(skeleton, context);
        CHECK(out.text == "{x} is literal, V is not");
    }

    TEST_CASE("unresolved placeholders raise a typed error") {
        PromptSkeleton skeleton;
        skeleton.add_line("{missing.path}");
        try {
            render(skeleton, {});
            FAIL("expected UnresolvedPlaceholder");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnresolvedPlaceholder);
            CHECK(std::string(e.what()).find("missing.path") != std::string::npos);
        }

        // a known root with an unknown field also fails
        PromptContext context;
        context["callable"] =
            java_session().find_callable("com.acme.Circle", "area()");
        PromptSkeleton bad_field;
        bad_field.add_line("{callable.no_such_field}");
        try {
            render(bad_field, context);
            FAIL("expected UnresolvedPlaceholder");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnresolvedPlaceholder);
        }
    }

    TEST_CASE("graph blocks render sorted edge lines") {
        CallGraph closure = get_method_call_graph(java_session(), "com.acme.Circle", "area()");
        PromptSkeleton skeleton;
        skeleton.add_line("Context:").add_graph(closure);
        RenderedPrompt out = render(skeleton, {});
        CHECK(out.text ==
              "Context:\n"
              "Call graph:\n"
              "com.acme.Circle.area() -> com.acme.Circle.calcArea(double)\n"
              "com.acme.Circle.calcArea(double) -> com.acme.Circle.square(double)");
    }

    TEST_CASE("composed prompt matches the golden rendering") {
        const AnalysisSession& session = python_session();
        const Callable& add = get_method(session, "calc.Calc", "add(int,int)");
        const CodeModule* module = session.find_module("calc.py");
        REQUIRE(module != nullptr);

        PromptContext context;
        context["callable"] = &add;
        context["module"] = module;

        PromptSkeleton skeleton;
        skeleton.add_line("Generate a pytest unit test for the method")
            .add_line("{callable.method_name} in {module.qualified_name}.")
            .add_code_block("{callable.code_body}", "python")
            .add_line("Given the following contextual information:")
            .add_graph(get_method_call_graph(session, "calc.Calc", "add(int,int)"));

        RenderedPrompt out = render(skeleton, context);
        CHECK(out.text + "\n" == read_file(golden("rendered_prompt_python.txt")));
    }

    TEST_CASE("rendering is deterministic") {
        const Callable& add = get_method(python_session(), "calc.Calc", "add(int,int)");
        PromptContext context;
        context["callable"] = &add;
        PromptSkeleton skeleton;
        skeleton.add_line("Test {callable.method_name}")
            .add_code_block("{callable.code_body}", "python")
            .add_graph(*python_session().call_graph());
        std::string reference = render(skeleton, context).text;
        for (int run = 0; run < 5; ++run) CHECK(render(skeleton, context).text == reference);
    }

    TEST_CASE("block order is preserved for arbitrary sequences") {
        std::mt19937 rng(20260822);
        for (int round = 0; round < 50; ++round) {
            PromptSkeleton skeleton;
            std::vector<int> kinds;
            int blocks = 1 + static_cast<int>(rng() % 6);
            for (int i = 0; i < blocks; ++i) {
                int kind = static_cast<int>(rng() % 2);
                kinds.push_back(kind);
                if (kind == 0)
                    skeleton.add_line("line " + std::to_string(i));
                else
                    skeleton.add_code_block("code " + std::to_string(i), "");
            }
            std::string text = render(skeleton, {}).text;
            // rebuild the expected rendering directly
            std::string expect;
            for (int i = 0; i < blocks; ++i) {
                if (!expect.empty()) expect += "\n";
                if (kinds[i] == 0)
                    expect += "line " + std::to_string(i);
                else
                    expect += "```\ncode " + std::to_string(i) + "\n```";
            }
            CHECK(text == expect);
        }
    }

    TEST_CASE("endpoint config reads the environment") {
        ::setenv("CAK_LLM_ENDPOINT", "http://localhost:9/v1/complete", 1);
        ::setenv("CAK_LLM_MODEL", "test-model", 1);
        LLMEndpointConfig config = endpoint_config_from_env();
        CHECK(config.base_url == "http://localhost:9/v1/complete");
        CHECK(config.model_id == "test-model");
        CHECK(config.timeout_seconds == 30.0);
        CHECK(config.max_tokens == 1024);

        ::unsetenv("CAK_LLM_ENDPOINT");
        ::unsetenv("CAK_LLM_MODEL");
        LLMEndpointConfig defaults = endpoint_config_from_env();
        CHECK(defaults.base_url.empty());
        CHECK(defaults.model_id.empty());

        LLMEndpointConfig seeded;
        seeded.base_url = "http://example.invalid";
        seeded.model_id = "seed";
        LLMEndpointConfig kept = endpoint_config_from_env(seeded);
        CHECK(kept.base_url == "http://example.invalid");
        CHECK(kept.model_id == "seed");
    }

    TEST_CASE("executing an unrendered prompt is refused") {
        LLMEndpointConfig config;
        config.base_url = "http://localhost:9";
        RenderedPrompt prompt;
        prompt.text = "hello";
        prompt.placeholders_resolved = false;
        try {
            execute_prompt(config, prompt);
            FAIL("expected UnresolvedPlaceholder");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnresolvedPlaceholder);
        }
    }
}
