// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/callgraph.hpp"
#include "cak/errors.hpp"
#include "cak/session.hpp"

#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"

#include <algorithm>
#include <set>

using namespace cak;
using namespace cak::testing;

namespace {

std::string ref_name(const CallableRef& ref) {
    return ref.qualified_type_name + "." + ref.signature;
}

/// Rebuild callers/callees of every project node from the raw edge list and
/// check the dedicated accessors agree.
void check_duality(const AnalysisSession& session, const CallGraph& graph) {
    for (const CallableRef& node : graph.nodes) {
        if (node.kind != CallNodeKind::PROJECT) continue;
        std::set<CallableRef> expect_callers;
        std::set<CallableRef> expect_callees;
        for (const CallEdge& edge : graph.edges) {
            if (edge.callee == node && edge.caller.kind == CallNodeKind::PROJECT)
                expect_callers.insert(edge.caller);
            if (edge.caller == node) expect_callees.insert(edge.callee);
        }
        std::vector<CallableRef> callers =
            get_callers(session, node.qualified_type_name, node.signature);
        std::vector<CallableRef> callees =
            get_callees(session, node.qualified_type_name, node.signature);
        CHECK(callers == std::vector<CallableRef>(expect_callers.begin(), expect_callers.end()));
        CHECK(callees == std::vector<CallableRef>(expect_callees.begin(), expect_callees.end()));
    }
}

} // namespace

TEST_SUITE("callgraph") {
    TEST_CASE("java fixture graph has the expected shape") {
        const AnalysisSession& session = java_session();
        REQUIRE(session.call_graph().has_value());
        const CallGraph& graph = *session.call_graph();
        CHECK(graph.nodes.size() == 11);
        CHECK(graph.edges.size() == 5);

        CHECK(std::is_sorted(graph.nodes.begin(), graph.nodes.end()));
        CHECK(std::is_sorted(graph.edges.begin(), graph.edges.end(), edge_less));

        std::vector<std::string> edges = to_edge_list(graph);
        CHECK(edges == std::vector<std::string>{
                  "com.acme.AbstractShape.describe() -> <external>.println(arity=1)",
                  "com.acme.AbstractShape.describe() -> com.acme.AbstractShape.label()",
                  "com.acme.Circle.area() -> com.acme.Circle.calcArea(double)",
                  "com.acme.Circle.calcArea(double) -> com.acme.Circle.square(double)",
                  "com.acme.util.Calc.sub(int,int) -> <external>.prepare(arity=1)",
              });
    }

    TEST_CASE("python fixture graph has the expected shape") {
        const AnalysisSession& session = python_session();
        REQUIRE(session.call_graph().has_value());
        const CallGraph& graph = *session.call_graph();
        CHECK(graph.nodes.size() == 7);
        CHECK(graph.edges.size() == 4);
        std::vector<std::string> edges = to_edge_list(graph);
        CHECK(edges == std::vector<std::string>{
                  "calc.Calc.add(int,int) -> calc.Calc.bump(int)",
                  "calc.Calc.bump(int) -> <external>.max(arity=2)",
                  "greeting.Greeter.greet(str) -> greeting.banner(str)",
                  "greeting.banner(str) -> <external>.join(arity=2)",
              });
    }

    TEST_CASE("graph matches an independent brute-force resolution") {
        const CallGraph& java_graph = *java_session().call_graph();
        std::vector<CallEdge> oracle = brute_force_edges(java_session());
        CHECK(java_graph.edges == oracle);

        const CallGraph& python_graph = *python_session().call_graph();
        std::vector<CallEdge> python_oracle = brute_force_edges(python_session());
        CHECK(python_graph.edges == python_oracle);
    }

    TEST_CASE("build_call_graph equals the session graph") {
        CallGraph rebuilt = build_call_graph(java_session());
        CHECK(rebuilt == *java_session().call_graph());
    }

    TEST_CASE("callers and callees are dual views of the edge list") {
        check_duality(java_session(), *java_session().call_graph());
        check_duality(python_session(), *python_session().call_graph());
    }

    TEST_CASE("specific caller and callee queries") {
        std::vector<CallableRef> callers =
            get_callers(java_session(), "com.acme.Circle", "calcArea(double)");
        REQUIRE(callers.size() == 1);
        CHECK(ref_name(callers[0]) == "com.acme.Circle.area()");

        std::vector<CallableRef> callees =
            get_callees(java_session(), "com.acme.util.Calc", "sub(int,int)");
        REQUIRE(callees.size() == 1);
        CHECK(callees[0].qualified_type_name == "<external>");
        CHECK(callees[0].signature == "prepare(arity=1)");
        CHECK(callees[0].kind == CallNodeKind::EXTERNAL);

        CHECK(get_callers(java_session(), "com.acme.Circle", "area()").empty());
        CHECK(get_callees(java_session(), "com.acme.Shape", "area()").empty());
    }

    TEST_CASE("method call graph is the forward closure") {
        CallGraph closure = get_method_call_graph(java_session(), "com.acme.Circle", "area()");
        REQUIRE(closure.nodes.size() == 3);
        CHECK(ref_name(closure.nodes[0]) == "com.acme.Circle.area()");
        CHECK(ref_name(closure.nodes[1]) == "com.acme.Circle.calcArea(double)");
        CHECK(ref_name(closure.nodes[2]) == "com.acme.Circle.square(double)");
        CHECK(closure.edges.size() == 2);

        CallGraph leaf = get_method_call_graph(java_session(), "com.acme.Circle",
                                               "square(double)");
        CHECK(leaf.nodes.size() == 1);
        CHECK(leaf.edges.empty());

        CallGraph python_closure = get_method_call_graph(python_session(), "calc.Calc",
                                                         "add(int,int)");
        CHECK(python_closure.nodes.size() == 3);
        CHECK(python_closure.edges.size() == 2);
    }

    TEST_CASE("class call graph carries declaration payloads") {
        std::vector<CallEdgePayload> payloads =
            get_class_call_graph(java_session(), "com.acme.Circle", "area()");
        REQUIRE(payloads.size() == 1);
        CHECK(ref_name(payloads[0].caller) == "com.acme.Circle.area()");
        CHECK(ref_name(payloads[0].callee) == "com.acme.Circle.calcArea(double)");
        REQUIRE(payloads[0].caller_decl != nullptr);
        CHECK(payloads[0].caller_decl->method_name == "area");
        REQUIRE(payloads[0].callee_decl != nullptr);
        CHECK(payloads[0].callee_decl->method_name == "calcArea");
        CHECK(payloads[0].site.line_offset.start == 9);

        std::vector<CallEdgePayload> external =
            get_class_call_graph(java_session(), "com.acme.util.Calc", "sub(int,int)");
        REQUIRE(external.size() == 1);
        CHECK(external[0].callee.kind == CallNodeKind::EXTERNAL);
        CHECK(external[0].callee_decl == nullptr);
    }

    TEST_CASE("unknown targets raise typed errors") {
        try {
            get_method_call_graph(java_session(), "com.acme.Circle", "nope()");
            FAIL("expected MethodNotFound");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MethodNotFound);
        }
        try {
            get_callers(java_session(), "com.acme.Missing", "area()");
            FAIL("expected TypeNotFound");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::TypeNotFound);
        }
    }

    TEST_CASE("inheritance chains walk superclasses before interfaces") {
        InheritanceChain circle = get_inheritance_chain(java_session(), "com.acme.Circle");
        CHECK(circle.types == std::vector<std::string>{"com.acme.AbstractShape",
                                                       "com.acme.Shape"});
        CHECK(circle.diagnostics.empty());

        InheritanceChain base = get_inheritance_chain(java_session(), "com.acme.AbstractShape");
        CHECK(base.types == std::vector<std::string>{"com.acme.Shape"});

        CHECK(get_inheritance_chain(java_session(), "com.acme.Shape").types.empty());
        CHECK(get_inheritance_chain(python_session(), "greeting.Greeter").types.empty());
    }

    TEST_CASE("inheritance cycle truncates with a diagnostic") {
        TempDir dir("cycle");
        write_file(dir.path / "A.java",
                   "public class A extends B {\n}\n");
        write_file(dir.path / "B.java",
                   "public class B extends A {\n}\n");
        AnalysisSession session = make_session(Language::JAVA, dir.path);
        InheritanceChain chain = get_inheritance_chain(session, "A");
        CHECK(chain.types == std::vector<std::string>{"B"});
        REQUIRE(chain.diagnostics.size() == 1);
        CHECK_FALSE(chain.diagnostics[0].is_error());
        CHECK(chain.diagnostics[0].message.find("cycle") != std::string::npos);
    }

    TEST_CASE("unresolvable supertypes stay raw and unexpanded") {
        TempDir dir("raw-super");
        write_file(dir.path / "C.java",
                   "import java.io.Serializable;\n"
                   "public class C extends D implements Serializable {\n}\n");
        AnalysisSession session = make_session(Language::JAVA, dir.path);
        InheritanceChain chain = get_inheritance_chain(session, "C");
        CHECK(chain.types == std::vector<std::string>{"D", "Serializable"});
    }

    TEST_CASE("private call chains follow same-class private callees") {
        std::vector<std::string> chain =
            get_private_call_chain(java_session(), "com.acme.Circle", "area()");
        CHECK(chain == std::vector<std::string>{"calcArea(double)", "square(double)"});

        CHECK(get_private_call_chain(java_session(), "com.acme.Circle", "square(double)")
                  .empty());
        CHECK(get_private_call_chain(java_session(), "com.acme.util.Calc", "sub(int,int)")
                  .empty());
        CHECK(get_private_call_chain(python_session(), "calc.Calc", "add(int,int)").empty());
    }

    TEST_CASE("dot rendering matches the golden file") {
        std::string dot = to_dot(*java_session().call_graph());
        CHECK(dot == read_file(golden("fixture_java_callgraph.dot")));
    }

    TEST_CASE("edge list is sorted and de-duplicated") {
        CallGraph graph;
        CallableRef a{"m.A", "f()", CallNodeKind::PROJECT};
        CallableRef b{"m.B", "g()", CallNodeKind::PROJECT};
        CallSite site_one;
        site_one.line_offset.start = 1;
        CallSite site_two;
        site_two.line_offset.start = 2;
        graph.nodes = {a, b};
        graph.edges = {{a, b, site_one, false}, {a, b, site_two, false}};
        std::vector<std::string> lines = to_edge_list(graph);
        CHECK(lines == std::vector<std::string>{"m.A.f() -> m.B.g()"});
    }
}
