// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/callgraph.hpp"

#include "cak/errors.hpp"
#include "cak/session.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cak {
namespace {

std::string strip_generics(std::string name) {
    std::size_t lt = name.find('<');
    if (lt != std::string::npos) name.resize(lt);
    return name;
}

/// Package (Java) or module (Python) prefix that qualifies a type's simple
/// name: "com.acme.Outer.Inner" with type_name "Outer.Inner" -> "com.acme".
std::string package_prefix_of(const CodeType& type) {
    if (type.qualified_name.size() > type.type_name.size() &&
        type.qualified_name.compare(type.qualified_name.size() - type.type_name.size(),
                                    type.type_name.size(), type.type_name) == 0 &&
        type.qualified_name[type.qualified_name.size() - type.type_name.size() - 1] == '.')
        return type.qualified_name.substr(
            0, type.qualified_name.size() - type.type_name.size() - 1);
    return "";
}

std::string last_segment(const std::string& name) {
    std::size_t dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

/// Resolve a type name as written in `module` against the session: imports
/// first, then the package/module prefix, then the bare name.
const CodeType* resolve_type_name(const AnalysisSession& session, const CodeModule* module,
                                  const std::string& package_prefix, const std::string& raw) {
    std::string name = strip_generics(raw);
    if (name.empty()) return nullptr;
    const auto& index = session.type_index();
    if (name.find('.') != std::string::npos) {
        auto it = index.find(name);
        return it == index.end() ? nullptr : it->second;
    }
    if (module) {
        for (const ImportDecl& imp : module->imports) {
            if (imp.raw_text.find("import static ") == 0) continue;
            for (const std::string& imported : imp.imports) {
                if (imported == "*" || last_segment(imported) != name) continue;
                std::string qualified =
                    imp.from_module.empty() ? imported : imp.from_module + "." + imported;
                auto it = index.find(qualified);
                if (it != index.end()) return it->second;
            }
        }
    }
    if (!package_prefix.empty()) {
        auto it = index.find(package_prefix + "." + name);
        if (it != index.end()) return it->second;
    }
    auto it = index.find(name);
    return it == index.end() ? nullptr : it->second;
}

std::size_t effective_arity(Language lang, const Callable& fn, bool in_class) {
    std::size_t arity = fn.formal_params.size();
    if (lang == Language::PYTHON && in_class && arity > 0 &&
        (fn.formal_params[0].arg_name == "self" || fn.formal_params[0].arg_name == "cls"))
        --arity;
    return arity;
}

std::vector<const Callable*> match_in_type(Language lang, const CodeType& type,
                                           const std::string& name, std::size_t arity) {
    std::vector<const Callable*> hits;
    for (const Callable& fn : type.callables) {
        bool name_ok = name == "<init>" ? fn.is_constructor
                                        : (!fn.is_constructor && fn.method_name == name);
        if (name_ok && effective_arity(lang, fn, true) == arity) hits.push_back(&fn);
    }
    return hits;
}

std::vector<const Callable*> match_in_module(const CodeModule& module, const std::string& name,
                                             std::size_t arity) {
    std::vector<const Callable*> hits;
    for (const Callable& fn : module.callables)
        if (!fn.is_constructor && fn.method_name == name && fn.formal_params.size() == arity)
            hits.push_back(&fn);
    return hits;
}

struct Resolution {
    std::vector<std::pair<CallableRef, const Callable*>> targets;
    bool ambiguous = false;
};

CallableRef external_ref(const std::string& name, std::size_t arity) {
    CallableRef ref;
    ref.qualified_type_name = "<external>";
    ref.signature = name + "(arity=" + std::to_string(arity) + ")";
    ref.kind = CallNodeKind::EXTERNAL;
    return ref;
}

CallableRef project_ref(const std::string& qualified_type_name, const Callable& fn) {
    return {qualified_type_name, fn.full_signature, CallNodeKind::PROJECT};
}

Resolution from_hits(const std::string& owner, const std::vector<const Callable*>& hits) {
    Resolution r;
    for (const Callable* fn : hits) r.targets.emplace_back(project_ref(owner, *fn), fn);
    std::sort(r.targets.begin(), r.targets.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    r.ambiguous = r.targets.size() > 1;
    return r;
}

/// The tiered name+arity search described on build_call_graph.
Resolution resolve_site(const AnalysisSession& session, const CodeModule& module,
                        const CodeType* enclosing, const CallSite& site) {
    Language lang = session.config().language;
    const std::string& name = site.target_method;
    std::size_t arity = site.arguments.size();

    if (name == "<init>") {
        std::string prefix = enclosing ? package_prefix_of(*enclosing) : module.qualified_name;
        const CodeType* target =
            resolve_type_name(session, &module, prefix, site.receiver_type);
        if (target) {
            auto hits = match_in_type(lang, *target, name, arity);
            if (!hits.empty()) return from_hits(target->qualified_name, hits);
        }
        Resolution r;
        r.targets.emplace_back(external_ref("<init>", arity), nullptr);
        return r;
    }

    if (enclosing) {
        auto hits = match_in_type(lang, *enclosing, name, arity);
        if (!hits.empty()) return from_hits(enclosing->qualified_name, hits);

        InheritanceChain chain = get_inheritance_chain(session, enclosing->qualified_name);
        for (const std::string& ancestor : chain.types) {
            const CodeType* type = session.find_type(ancestor);
            if (!type) continue;
            hits = match_in_type(lang, *type, name, arity);
            if (!hits.empty()) return from_hits(type->qualified_name, hits);
        }
    }

    if (!site.receiver_type.empty()) {
        std::string prefix = enclosing ? package_prefix_of(*enclosing) : module.qualified_name;
        const CodeType* target =
            resolve_type_name(session, &module, prefix, site.receiver_type);
        if (target) {
            auto hits = match_in_type(lang, *target, name, arity);
            if (!hits.empty()) return from_hits(target->qualified_name, hits);
        }
    }

    if (lang == Language::PYTHON && site.receiver_type.empty()) {
        auto hits = match_in_module(module, name, arity);
        if (!hits.empty()) return from_hits(module.qualified_name, hits);
    }

    Resolution r;
    r.targets.emplace_back(external_ref(name, arity), nullptr);
    return r;
}

std::string node_label(const CallableRef& ref) {
    return ref.qualified_type_name + "." + ref.signature;
}

const CallGraph& graph_of(const AnalysisSession& session, std::optional<CallGraph>& storage) {
    if (session.call_graph()) return *session.call_graph();
    storage = build_call_graph(session);
    return *storage;
}

const Callable* require_callable(const AnalysisSession& session,
                                 std::string_view qualified_type_name,
                                 std::string_view signature) {
    const Callable* fn = session.find_callable(qualified_type_name, signature);
    if (!fn)
        throw Error(ErrorCode::MethodNotFound, std::string(qualified_type_name) + "." +
                                                   std::string(signature) + " is not declared");
    return fn;
}

} // namespace

std::string_view call_node_kind_name(CallNodeKind kind) {
    return kind == CallNodeKind::PROJECT ? "project" : "external";
}

bool edge_less(const CallEdge& a, const CallEdge& b) {
    if (a.caller != b.caller) return a.caller < b.caller;
    if (a.site.line_offset.start != b.site.line_offset.start)
        return a.site.line_offset.start < b.site.line_offset.start;
    if (a.callee != b.callee) return a.callee < b.callee;
    return a.site.col_offset.start < b.site.col_offset.start;
}

std::vector<const CallEdge*> CallGraph::outgoing(const CallableRef& node) const {
    std::vector<const CallEdge*> out;
    for (const CallEdge& e : edges)
        if (e.caller == node) out.push_back(&e);
    return out;
}

std::vector<const CallEdge*> CallGraph::incoming(const CallableRef& node) const {
    std::vector<const CallEdge*> out;
    for (const CallEdge& e : edges)
        if (e.callee == node) out.push_back(&e);
    return out;
}

CallGraph build_call_graph(const AnalysisSession& session) {
    CallGraph graph;
    std::set<CallableRef> nodes;
    Language lang = session.config().language;
    (void)lang;

    for (const CodeModule& module : session.modules()) {
        for (const CodeType& type : module.types) {
            for (const Callable& fn : type.callables) {
                CallableRef caller = project_ref(type.qualified_name, fn);
                nodes.insert(caller);
                for (const CallSite& site : fn.call_sites) {
                    Resolution r = resolve_site(session, module, &type, site);
                    for (auto& [callee, decl] : r.targets) {
                        nodes.insert(callee);
                        graph.edges.push_back({caller, callee, site, r.ambiguous});
                    }
                }
            }
        }
        for (const Callable& fn : module.callables) {
            CallableRef caller = project_ref(module.qualified_name, fn);
            nodes.insert(caller);
            for (const CallSite& site : fn.call_sites) {
                Resolution r = resolve_site(session, module, nullptr, site);
                for (auto& [callee, decl] : r.targets) {
                    nodes.insert(callee);
                    graph.edges.push_back({caller, callee, site, r.ambiguous});
                }
            }
        }
    }
    graph.nodes.assign(nodes.begin(), nodes.end());
    std::sort(graph.edges.begin(), graph.edges.end(), edge_less);
    return graph;
}

CallGraph get_method_call_graph(const AnalysisSession& session,
                                std::string_view qualified_type_name,
                                std::string_view signature) {
    require_callable(session, qualified_type_name, signature);
    std::optional<CallGraph> storage;
    const CallGraph& full = graph_of(session, storage);

    CallableRef focal{std::string(qualified_type_name), std::string(signature),
                      CallNodeKind::PROJECT};
    std::set<CallableRef> reachable{focal};
    std::deque<CallableRef> queue{focal};
    while (!queue.empty()) {
        CallableRef node = queue.front();
        queue.pop_front();
        for (const CallEdge* e : full.outgoing(node))
            if (reachable.insert(e->callee).second) queue.push_back(e->callee);
    }

    CallGraph sub;
    sub.nodes.assign(reachable.begin(), reachable.end());
    for (const CallEdge& e : full.edges)
        if (reachable.count(e.caller)) sub.edges.push_back(e);
    return sub;
}

std::vector<CallEdgePayload> get_class_call_graph(const AnalysisSession& session,
                                                  std::string_view qualified_type_name,
                                                  std::string_view signature) {
    const Callable* focal_decl = require_callable(session, qualified_type_name, signature);
    std::optional<CallGraph> storage;
    const CallGraph& full = graph_of(session, storage);

    CallableRef focal{std::string(qualified_type_name), std::string(signature),
                      CallNodeKind::PROJECT};
    std::vector<CallEdgePayload> out;
    for (const CallEdge* e : full.outgoing(focal)) {
        CallEdgePayload payload;
        payload.caller = e->caller;
        payload.caller_decl = focal_decl;
        payload.callee = e->callee;
        payload.callee_decl =
            e->callee.kind == CallNodeKind::PROJECT
                ? session.find_callable(e->callee.qualified_type_name, e->callee.signature)
                : nullptr;
        payload.site = e->site;
        out.push_back(std::move(payload));
    }
    return out;
}

std::vector<CallableRef> get_callers(const AnalysisSession& session,
                                     std::string_view qualified_type_name,
                                     std::string_view signature) {
    require_callable(session, qualified_type_name, signature);
    std::optional<CallGraph> storage;
    const CallGraph& full = graph_of(session, storage);
    CallableRef target{std::string(qualified_type_name), std::string(signature),
                       CallNodeKind::PROJECT};
    std::set<CallableRef> callers;
    for (const CallEdge* e : full.incoming(target)) callers.insert(e->caller);
    return {callers.begin(), callers.end()};
}

std::vector<CallableRef> get_callees(const AnalysisSession& session,
                                     std::string_view qualified_type_name,
                                     std::string_view signature) {
    require_callable(session, qualified_type_name, signature);
    std::optional<CallGraph> storage;
    const CallGraph& full = graph_of(session, storage);
    CallableRef source{std::string(qualified_type_name), std::string(signature),
                       CallNodeKind::PROJECT};
    std::set<CallableRef> callees;
    for (const CallEdge* e : full.outgoing(source)) callees.insert(e->callee);
    return {callees.begin(), callees.end()};
}

InheritanceChain get_inheritance_chain(const AnalysisSession& session,
                                       std::string_view qualified_name) {
    const CodeType* root = session.find_type(qualified_name);
    if (!root)
        throw Error(ErrorCode::TypeNotFound,
                    "type " + std::string(qualified_name) + " is not in the session");

    InheritanceChain chain;
    std::set<std::string> seen{root->qualified_name};
    std::set<std::string> path{root->qualified_name};

    std::function<void(const CodeType&)> visit = [&](const CodeType& type) {
        const CodeModule* module = session.module_of_type(type.qualified_name);
        std::string prefix = package_prefix_of(type);
        auto walk_names = [&](const std::vector<std::string>& names) {
            for (const std::string& raw : names) {
                const CodeType* super = resolve_type_name(session, module, prefix, raw);
                if (!super) {
                    if (seen.insert(raw).second) chain.types.push_back(raw);
                    continue;
                }
                if (path.count(super->qualified_name)) {
                    chain.diagnostics.push_back(
                        {type.file_name, type.line_offset.start, 0,
                         "warning: inheritance cycle through '" + super->qualified_name + "'"});
                    continue;
                }
                if (!seen.insert(super->qualified_name).second) continue;
                chain.types.push_back(super->qualified_name);
                path.insert(super->qualified_name);
                visit(*super);
                path.erase(super->qualified_name);
            }
        };
        walk_names(type.super_classes);
        walk_names(type.interfaces);
    };
    visit(*root);
    return chain;
}

std::vector<std::string> get_private_call_chain(const AnalysisSession& session,
                                                std::string_view qualified_type_name,
                                                std::string_view signature) {
    const Callable* focal = require_callable(session, qualified_type_name, signature);
    const CodeType* type = session.find_type(qualified_type_name);
    if (!type) return {};  // module-level function: no private members to chain

    Language lang = session.config().language;
    std::vector<std::string> chain;
    std::set<std::string> visited{focal->full_signature};

    std::function<void(const Callable&)> visit = [&](const Callable& fn) {
        for (const CallSite& site : fn.call_sites) {
            if (site.target_method == "<init>") continue;
            auto hits =
                match_in_type(lang, *type, site.target_method, site.arguments.size());
            for (const Callable* callee : hits) {
                bool is_private = std::find(callee->modifiers.begin(), callee->modifiers.end(),
                                            "private") != callee->modifiers.end();
                if (!is_private || !visited.insert(callee->full_signature).second) continue;
                chain.push_back(callee->full_signature);
                visit(*callee);
            }
        }
    };
    visit(*focal);
    return chain;
}

std::string to_dot(const CallGraph& graph) {
    std::ostringstream out;
    out << "digraph cg {\n";
    for (const CallableRef& node : graph.nodes) out << "  \"" << node_label(node) << "\";\n";
    for (const CallEdge& e : graph.edges)
        out << "  \"" << node_label(e.caller) << "\" -> \"" << node_label(e.callee)
            << "\" [label=\"line " << e.site.line_offset.start << "\"];\n";
    out << "}\n";
    return out.str();
}

std::vector<std::string> to_edge_list(const CallGraph& graph) {
    std::set<std::string> lines;
    for (const CallEdge& e : graph.edges)
        lines.insert(node_label(e.caller) + " -> " + node_label(e.callee));
    return {lines.begin(), lines.end()};
}

} // namespace cak
