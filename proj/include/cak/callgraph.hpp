// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/schema.hpp"

#include <compare>
#include <string>
#include <vector>

namespace cak {

class AnalysisSession;

enum class CallNodeKind {
    PROJECT,
    EXTERNAL,
};

std::string_view call_node_kind_name(CallNodeKind kind);

/// Node identity in the call graph. PROJECT nodes name a callable declared in
/// the session (module-level functions use their module's qualified name);
/// an EXTERNAL node has qualified_type_name "<external>" and a signature of
/// the form "name(arity=n)".
struct CallableRef {
    std::string qualified_type_name;
    std::string signature;
    CallNodeKind kind = CallNodeKind::PROJECT;

    auto operator<=>(const CallableRef&) const = default;
};

struct CallEdge {
    CallableRef caller;
    CallableRef callee;
    CallSite site;           // the call site that produced this edge
    bool ambiguous = false;  // several same-arity overloads matched

    friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

/// Deterministic edge order: caller, then site line, then callee, then site
/// column.
bool edge_less(const CallEdge& a, const CallEdge& b);

struct CallGraph {
    std::vector<CallableRef> nodes;  // sorted, unique; isolated callables included
    std::vector<CallEdge> edges;     // sorted by edge_less

    std::vector<const CallEdge*> outgoing(const CallableRef& node) const;
    std::vector<const CallEdge*> incoming(const CallableRef& node) const;

    friend bool operator==(const CallGraph&, const CallGraph&) = default;
};

/// Resolve every extracted call site of the session against its declared
/// callables. Name+arity matching searches the enclosing class, then its
/// inheritance chain, then the class named by the receiver type (and, for
/// receiver-less calls in Python, the enclosing module's functions); anything
/// left becomes an EXTERNAL edge. Equal-arity overloads at the winning tier
/// all become edges, marked ambiguous.
CallGraph build_call_graph(const AnalysisSession& session);

/// Forward closure of the focal callable: every node reachable over call
/// edges, the focal node included, with the edges between them.
CallGraph get_method_call_graph(const AnalysisSession& session,
                                std::string_view qualified_type_name,
                                std::string_view signature);

/// One direct outgoing edge of the focal method, with the declaration payload
/// attached for PROJECT endpoints (null for EXTERNAL callees).
struct CallEdgePayload {
    CallableRef caller;
    const Callable* caller_decl = nullptr;
    CallableRef callee;
    const Callable* callee_decl = nullptr;
    CallSite site;
};

std::vector<CallEdgePayload> get_class_call_graph(const AnalysisSession& session,
                                                  std::string_view qualified_type_name,
                                                  std::string_view signature);

/// PROJECT callables with an edge into the target, sorted.
std::vector<CallableRef> get_callers(const AnalysisSession& session,
                                     std::string_view qualified_type_name,
                                     std::string_view signature);

/// Direct callees of the target (EXTERNAL refs included), sorted.
std::vector<CallableRef> get_callees(const AnalysisSession& session,
                                     std::string_view qualified_type_name,
                                     std::string_view signature);

struct InheritanceChain {
    std::vector<std::string> types;  // qualified where resolvable, raw otherwise
    std::vector<ParseDiagnostic> diagnostics;
};

/// Supertypes of qualified_name, depth-first, superclasses before interfaces,
/// each name once; unresolvable names are kept raw and not expanded. A cycle
/// truncates the walk and leaves a diagnostic.
InheritanceChain get_inheritance_chain(const AnalysisSession& session,
                                       std::string_view qualified_name);

/// Signatures of private callables reachable from the focal method through
/// same-class calls, in first-visit order; the focal method is excluded.
std::vector<std::string> get_private_call_chain(const AnalysisSession& session,
                                                std::string_view qualified_type_name,
                                                std::string_view signature);

/// GraphViz rendering: one quoted "type.signature" line per node, one edge per
/// call site annotated with its line; both sections sorted.
std::string to_dot(const CallGraph& graph);

/// Plain "caller -> callee" lines, sorted and de-duplicated.
std::vector<std::string> to_edge_list(const CallGraph& graph);

} // namespace cak
