// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/session.hpp"

#include <json.hpp>

#include <string>

namespace cak {

using json = nlohmann::ordered_json;

json to_json(const Parameter& p);
json to_json(const CallSite& s);
json to_json(const Callable& c);
json to_json(const FieldDecl& f);
json to_json(const CodeType& t);
json to_json(const ImportDecl& i);
json to_json(const ParseDiagnostic& d);
json to_json(const CodeModule& m);
json to_json(const BuildAttributes& b);
json to_json(const ConfigArtifact& c);
json to_json(const CallableRef& r);
json to_json(const CallEdge& e);
json to_json(const CallGraph& g);

Parameter parameter_from_json(const json& j);
CallSite call_site_from_json(const json& j);
Callable callable_from_json(const json& j);
FieldDecl field_from_json(const json& j);
CodeType type_from_json(const json& j);
ImportDecl import_from_json(const json& j);
ParseDiagnostic diagnostic_from_json(const json& j);
BuildAttributes build_attributes_from_json(const json& j);
ConfigArtifact config_artifact_from_json(const json& j);
CallableRef callable_ref_from_json(const json& j);
CallEdge call_edge_from_json(const json& j);
CallGraph call_graph_from_json(const json& j);

/// Full snapshot object: schema_version, language, modules, then (only when
/// non-empty) types, build_attributes, config_artifacts, call_graph.
json session_to_json(const AnalysisSession& session);

/// Compact single-line dump of session_to_json; keys keep declaration order,
/// so equal sessions serialize to equal bytes.
std::string schema_to_json(const AnalysisSession& session);

/// Inverse of schema_to_json on its image. Throws SchemaVersionMismatch or
/// MalformedSnapshot; the stored call graph is adopted, never recomputed.
AnalysisSession schema_from_json(const std::string& text);

/// Rebuild session data from a snapshot object.
AnalysisSession::Data session_data_from_json(const json& j);

} // namespace cak
