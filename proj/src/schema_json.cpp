// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/schema_json.hpp"

#include "cak/errors.hpp"

#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace cak {
namespace {

json span_to_json(const LineSpan& s) { return json{{"start", s.start}, {"end", s.end}}; }
json span_to_json(const ColSpan& s) { return json{{"start", s.start}, {"end", s.end}}; }

const json& req(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorCode::MalformedSnapshot, std::string("missing key '") + key + "'");
    return j.at(key);
}

std::string req_string(const json& j, const char* key) {
    const json& v = req(j, key);
    if (!v.is_string())
        throw Error(ErrorCode::MalformedSnapshot, std::string("key '") + key + "' is not a string");
    return v.get<std::string>();
}

int req_int(const json& j, const char* key) {
    const json& v = req(j, key);
    if (!v.is_number_integer())
        throw Error(ErrorCode::MalformedSnapshot,
                    std::string("key '") + key + "' is not an integer");
    return v.get<int>();
}

bool req_bool(const json& j, const char* key) {
    const json& v = req(j, key);
    if (!v.is_boolean())
        throw Error(ErrorCode::MalformedSnapshot,
                    std::string("key '") + key + "' is not a boolean");
    return v.get<bool>();
}

const json& req_array(const json& j, const char* key) {
    const json& v = req(j, key);
    if (!v.is_array())
        throw Error(ErrorCode::MalformedSnapshot, std::string("key '") + key + "' is not an array");
    return v;
}

std::vector<std::string> req_string_vec(const json& j, const char* key) {
    std::vector<std::string> out;
    for (const json& v : req_array(j, key)) {
        if (!v.is_string())
            throw Error(ErrorCode::MalformedSnapshot,
                        std::string("key '") + key + "' holds a non-string");
        out.push_back(v.get<std::string>());
    }
    return out;
}

LineSpan line_span_from_json(const json& j) {
    return {req_int(j, "start"), req_int(j, "end")};
}

ColSpan col_span_from_json(const json& j) {
    return {req_int(j, "start"), req_int(j, "end")};
}

} // namespace

json to_json(const Parameter& p) {
    return json{{"arg_name", p.arg_name}, {"arg_type", p.arg_type}};
}

json to_json(const CallSite& s) {
    return json{{"target_method", s.target_method},
                {"receiver_type", s.receiver_type},
                {"arguments", s.arguments},
                {"line_offset", span_to_json(s.line_offset)},
                {"col_offset", span_to_json(s.col_offset)}};
}

json to_json(const Callable& c) {
    json params = json::array();
    for (const Parameter& p : c.formal_params) params.push_back(to_json(p));
    json sites = json::array();
    for (const CallSite& s : c.call_sites) sites.push_back(to_json(s));
    return json{{"method_name", c.method_name},
                {"full_signature", c.full_signature},
                {"code_body", c.code_body},
                {"is_static", c.is_static},
                {"is_constructor", c.is_constructor},
                {"modifiers", c.modifiers},
                {"formal_params", params},
                {"return_type", c.return_type},
                {"call_sites", sites},
                {"line_offset", span_to_json(c.line_offset)}};
}

json to_json(const FieldDecl& f) {
    return json{{"field_name", f.field_name},
                {"field_type", f.field_type},
                {"line_offset", span_to_json(f.line_offset)}};
}

json to_json(const CodeType& t) {
    json fields = json::array();
    for (const FieldDecl& f : t.fields) fields.push_back(to_json(f));
    json callables = json::array();
    for (const Callable& c : t.callables) callables.push_back(to_json(c));
    return json{{"type_name", t.type_name},
                {"qualified_name", t.qualified_name},
                {"kind", std::string(type_kind_name(t.kind))},
                {"code_body", t.code_body},
                {"file_name", t.file_name},
                {"modifiers", t.modifiers},
                {"super_classes", t.super_classes},
                {"interfaces", t.interfaces},
                {"fields", fields},
                {"callables", callables},
                {"line_offset", span_to_json(t.line_offset)}};
}

json to_json(const ImportDecl& i) {
    return json{{"from_module", i.from_module}, {"imports", i.imports}, {"raw_text", i.raw_text}};
}

json to_json(const ParseDiagnostic& d) {
    return json{{"file", d.file}, {"line", d.line}, {"column", d.column}, {"message", d.message}};
}

json to_json(const CodeModule& m) {
    json types = json::array();
    for (const CodeType& t : m.types) types.push_back(t.qualified_name);
    json imports = json::array();
    for (const ImportDecl& i : m.imports) imports.push_back(to_json(i));
    json callables = json::array();
    for (const Callable& c : m.callables) callables.push_back(to_json(c));
    json diagnostics = json::array();
    for (const ParseDiagnostic& d : m.diagnostics) diagnostics.push_back(to_json(d));
    return json{{"file_name", m.file_name},
                {"qualified_name", m.qualified_name},
                {"types", types},
                {"imports", imports},
                {"callables", callables},
                {"diagnostics", diagnostics}};
}

json to_json(const BuildAttributes& b) {
    json j{{"build_file_type", b.build_file_type}, {"build_tool", b.build_tool}};
    if (b.package_name) j["package_name"] = *b.package_name;
    if (b.version) j["version"] = *b.version;
    j["dependencies"] = b.dependencies;
    j["scripts"] = b.scripts;
    return j;
}

json to_json(const ConfigArtifact& c) {
    return json{{"config_file_name", c.config_file_name},
                {"code_body", c.code_body},
                {"config_type", c.config_type},
                {"settings", c.settings}};
}

json to_json(const CallableRef& r) {
    return json{{"qualified_type_name", r.qualified_type_name},
                {"signature", r.signature},
                {"kind", std::string(call_node_kind_name(r.kind))}};
}

json to_json(const CallEdge& e) {
    return json{{"caller", to_json(e.caller)},
                {"callee", to_json(e.callee)},
                {"site", to_json(e.site)},
                {"ambiguous", e.ambiguous}};
}

json to_json(const CallGraph& g) {
    json nodes = json::array();
    for (const CallableRef& n : g.nodes) nodes.push_back(to_json(n));
    json edges = json::array();
    for (const CallEdge& e : g.edges) edges.push_back(to_json(e));
    return json{{"nodes", nodes}, {"edges", edges}};
}

Parameter parameter_from_json(const json& j) {
    return {req_string(j, "arg_name"), req_string(j, "arg_type")};
}

CallSite call_site_from_json(const json& j) {
    CallSite s;
    s.target_method = req_string(j, "target_method");
    s.receiver_type = req_string(j, "receiver_type");
    s.arguments = req_string_vec(j, "arguments");
    s.line_offset = line_span_from_json(req(j, "line_offset"));
    s.col_offset = col_span_from_json(req(j, "col_offset"));
    return s;
}

Callable callable_from_json(const json& j) {
    Callable c;
    c.method_name = req_string(j, "method_name");
    c.full_signature = req_string(j, "full_signature");
    c.code_body = req_string(j, "code_body");
    c.is_static = req_bool(j, "is_static");
    c.is_constructor = req_bool(j, "is_constructor");
    c.modifiers = req_string_vec(j, "modifiers");
    for (const json& p : req_array(j, "formal_params"))
        c.formal_params.push_back(parameter_from_json(p));
    c.return_type = req_string(j, "return_type");
    for (const json& s : req_array(j, "call_sites"))
        c.call_sites.push_back(call_site_from_json(s));
    c.line_offset = line_span_from_json(req(j, "line_offset"));
    return c;
}

FieldDecl field_from_json(const json& j) {
    FieldDecl f;
    f.field_name = req_string(j, "field_name");
    f.field_type = req_string(j, "field_type");
    f.line_offset = line_span_from_json(req(j, "line_offset"));
    return f;
}

CodeType type_from_json(const json& j) {
    CodeType t;
    t.type_name = req_string(j, "type_name");
    t.qualified_name = req_string(j, "qualified_name");
    t.kind = type_kind_from_name(req_string(j, "kind"));
    t.code_body = req_string(j, "code_body");
    t.file_name = req_string(j, "file_name");
    t.modifiers = req_string_vec(j, "modifiers");
    t.super_classes = req_string_vec(j, "super_classes");
    t.interfaces = req_string_vec(j, "interfaces");
    for (const json& f : req_array(j, "fields")) t.fields.push_back(field_from_json(f));
    for (const json& c : req_array(j, "callables")) t.callables.push_back(callable_from_json(c));
    t.line_offset = line_span_from_json(req(j, "line_offset"));
    return t;
}

ImportDecl import_from_json(const json& j) {
    ImportDecl i;
    i.from_module = req_string(j, "from_module");
    i.imports = req_string_vec(j, "imports");
    i.raw_text = req_string(j, "raw_text");
    return i;
}

ParseDiagnostic diagnostic_from_json(const json& j) {
    ParseDiagnostic d;
    d.file = req_string(j, "file");
    d.line = req_int(j, "line");
    d.column = req_int(j, "column");
    d.message = req_string(j, "message");
    return d;
}

BuildAttributes build_attributes_from_json(const json& j) {
    BuildAttributes b;
    b.build_file_type = req_string(j, "build_file_type");
    b.build_tool = req_string(j, "build_tool");
    if (j.contains("package_name")) b.package_name = req_string(j, "package_name");
    if (j.contains("version")) b.version = req_string(j, "version");
    b.dependencies = req_string_vec(j, "dependencies");
    b.scripts = req_string_vec(j, "scripts");
    return b;
}

ConfigArtifact config_artifact_from_json(const json& j) {
    ConfigArtifact c;
    c.config_file_name = req_string(j, "config_file_name");
    c.code_body = req_string(j, "code_body");
    c.config_type = req_string(j, "config_type");
    const json& settings = req(j, "settings");
    if (!settings.is_object())
        throw Error(ErrorCode::MalformedSnapshot, "key 'settings' is not an object");
    for (const auto& [key, value] : settings.items()) {
        if (!value.is_string())
            throw Error(ErrorCode::MalformedSnapshot, "setting '" + key + "' is not a string");
        c.settings[key] = value.get<std::string>();
    }
    return c;
}

CallableRef callable_ref_from_json(const json& j) {
    CallableRef r;
    r.qualified_type_name = req_string(j, "qualified_type_name");
    r.signature = req_string(j, "signature");
    std::string kind = req_string(j, "kind");
    if (kind == "project")
        r.kind = CallNodeKind::PROJECT;
    else if (kind == "external")
        r.kind = CallNodeKind::EXTERNAL;
    else
        throw Error(ErrorCode::MalformedSnapshot, "unknown node kind: " + kind);
    return r;
}

CallEdge call_edge_from_json(const json& j) {
    CallEdge e;
    e.caller = callable_ref_from_json(req(j, "caller"));
    e.callee = callable_ref_from_json(req(j, "callee"));
    e.site = call_site_from_json(req(j, "site"));
    e.ambiguous = req_bool(j, "ambiguous");
    return e;
}

CallGraph call_graph_from_json(const json& j) {
    CallGraph g;
    for (const json& n : req_array(j, "nodes")) g.nodes.push_back(callable_ref_from_json(n));
    for (const json& e : req_array(j, "edges")) g.edges.push_back(call_edge_from_json(e));
    return g;
}

json session_to_json(const AnalysisSession& session) {
    json j;
    j["schema_version"] = session.schema_version();
    j["language"] = std::string(language_name(session.config().language));
    json modules = json::array();
    for (const CodeModule& m : session.modules()) modules.push_back(to_json(m));
    j["modules"] = modules;
    if (!session.type_index().empty()) {
        json types;
        for (const auto& [qualified_name, type] : session.type_index())
            types[qualified_name] = to_json(*type);
        j["types"] = types;
    }
    if (!session.build_attributes().empty()) {
        json build = json::array();
        for (const BuildAttributes& b : session.build_attributes()) build.push_back(to_json(b));
        j["build_attributes"] = build;
    }
    if (!session.config_artifacts().empty()) {
        json configs = json::array();
        for (const ConfigArtifact& c : session.config_artifacts()) configs.push_back(to_json(c));
        j["config_artifacts"] = configs;
    }
    if (session.call_graph()) j["call_graph"] = to_json(*session.call_graph());
    return j;
}

std::string schema_to_json(const AnalysisSession& session) {
    return session_to_json(session).dump();
}

AnalysisSession::Data session_data_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedSnapshot, "snapshot is not an object");
    std::string version = req_string(j, "schema_version");
    if (version != kSchemaVersion)
        throw Error(ErrorCode::SchemaVersionMismatch,
                    "snapshot has schema_version " + version + ", expected " +
                        std::string(kSchemaVersion));

    static const std::set<std::string> known_keys = {
        "schema_version", "language",         "modules",   "types",
        "build_attributes", "config_artifacts", "call_graph"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known_keys.count(key))
            std::cerr << "warning: ignoring unknown snapshot key '" << key << "'\n";
    }

    AnalysisSession::Data data;
    data.schema_version = version;
    data.config.language = language_from_name(req_string(j, "language"));

    // Full type objects live under the top-level index; module entries carry
    // the qualified names only.
    std::map<std::string, CodeType> types;
    if (j.contains("types")) {
        const json& index = j.at("types");
        if (!index.is_object())
            throw Error(ErrorCode::MalformedSnapshot, "key 'types' is not an object");
        for (const auto& [qualified_name, value] : index.items())
            types[qualified_name] = type_from_json(value);
    }

    for (const json& mj : req_array(j, "modules")) {
        CodeModule m;
        m.file_name = req_string(mj, "file_name");
        m.qualified_name = req_string(mj, "qualified_name");
        for (const std::string& type_name : req_string_vec(mj, "types")) {
            auto it = types.find(type_name);
            if (it == types.end())
                throw Error(ErrorCode::MalformedSnapshot,
                            "module references unknown type '" + type_name + "'");
            m.types.push_back(it->second);
        }
        for (const json& ij : req_array(mj, "imports")) m.imports.push_back(import_from_json(ij));
        for (const json& cj : req_array(mj, "callables"))
            m.callables.push_back(callable_from_json(cj));
        for (const json& dj : req_array(mj, "diagnostics"))
            m.diagnostics.push_back(diagnostic_from_json(dj));
        data.modules.push_back(std::move(m));
    }

    if (j.contains("build_attributes"))
        for (const json& bj : req_array(j, "build_attributes"))
            data.build_attributes.push_back(build_attributes_from_json(bj));
    if (j.contains("config_artifacts"))
        for (const json& cj : req_array(j, "config_artifacts"))
            data.config_artifacts.push_back(config_artifact_from_json(cj));
    if (j.contains("call_graph")) {
        data.call_graph = call_graph_from_json(j.at("call_graph"));
        data.config.analysis_level = AnalysisLevel::CALL_GRAPH;
    }
    return data;
}

AnalysisSession schema_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw Error(ErrorCode::MalformedSnapshot, "snapshot is not valid JSON");
    return AnalysisSession(session_data_from_json(j));
}

} // namespace cak
