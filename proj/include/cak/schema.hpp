// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/language.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cak {

/// Inclusive 1-based line range of a construct in its source file.
struct LineSpan {
    int start = 0;
    int end = 0;

    auto operator<=>(const LineSpan&) const = default;
};

/// Half-open 0-based column range: [start, end).
struct ColSpan {
    int start = 0;
    int end = 0;

    auto operator<=>(const ColSpan&) const = default;
};

/// Parser/extraction diagnostic. Severity is encoded as a message prefix
/// ("error: " or "warning: "); only error-severity entries make a file
/// unparsable.
struct ParseDiagnostic {
    std::string file;
    int line = 1;    // 1-based
    int column = 0;  // 0-based
    std::string message;

    bool is_error() const { return message.rfind("error:", 0) == 0; }

    auto operator<=>(const ParseDiagnostic&) const = default;
};

struct Parameter {
    std::string arg_name;
    std::string arg_type;  // declared-type text, "" when undeclared

    auto operator<=>(const Parameter&) const = default;
};

/// One syntactic invocation inside a callable body.
struct CallSite {
    std::string target_method;            // invoked simple name; "<init>" for constructor calls
    std::string receiver_type;            // declared static type when lexically resolvable, else ""
    std::vector<std::string> arguments;   // argument source texts
    LineSpan line_offset;
    ColSpan col_offset;

    auto operator<=>(const CallSite&) const = default;
};

struct Callable {
    std::string method_name;
    std::string full_signature;           // name(type1,type2,...), no spaces
    std::string code_body;                // exact source slice spanned by line_offset
    bool is_static = false;
    bool is_constructor = false;
    std::vector<std::string> modifiers;   // Java: access modifiers etc.; Python: "@decorator" entries
    std::vector<Parameter> formal_params;
    std::string return_type;              // declared-type text, "" when undeclared
    std::vector<CallSite> call_sites;
    LineSpan line_offset;

    auto operator<=>(const Callable&) const = default;
};

struct FieldDecl {
    std::string field_name;
    std::string field_type;
    LineSpan line_offset;

    auto operator<=>(const FieldDecl&) const = default;
};

enum class TypeKind {
    CLASS,
    INTERFACE,
    STRUCT,
    ENUM,
    ABSTRACT_CLASS,
};

std::string_view type_kind_name(TypeKind kind);
TypeKind type_kind_from_name(std::string_view name);

/// Normalized class/interface/struct/enum declaration.
struct CodeType {
    std::string type_name;       // simple name; "Outer.Inner" for hoisted nested types
    std::string qualified_name;
    TypeKind kind = TypeKind::CLASS;
    std::string code_body;
    std::string file_name;       // path relative to project root
    std::vector<std::string> modifiers;
    std::vector<std::string> super_classes;  // raw names as written
    std::vector<std::string> interfaces;
    std::vector<FieldDecl> fields;
    std::vector<Callable> callables;
    LineSpan line_offset;

    auto operator<=>(const CodeType&) const = default;
};

struct ImportDecl {
    std::string from_module;           // Python `from` clause; Java package prefix
    std::vector<std::string> imports;  // imported names, never empty
    std::string raw_text;              // exact statement text

    auto operator<=>(const ImportDecl&) const = default;
};

/// One analyzed source file.
struct CodeModule {
    std::string file_name;       // path relative to project root
    std::string qualified_name;  // dot-separated, derived from the path
    std::vector<CodeType> types;
    std::vector<ImportDecl> imports;
    std::vector<Callable> callables;  // module-level functions; empty for Java
    std::vector<ParseDiagnostic> diagnostics;

    auto operator<=>(const CodeModule&) const = default;
};

/// Per-file view: package/module declaration, imports, declared type names.
struct CompilationUnit {
    std::string file_path;
    std::string package_name;   // Java package; Python module qualified name
    std::vector<ImportDecl> imports;
    std::vector<std::string> types;  // qualified names declared in the file

    auto operator<=>(const CompilationUnit&) const = default;
};

/// Shallow facts from a recognized build file at the project root.
struct BuildAttributes {
    std::string build_file_type;
    std::string build_tool;
    std::optional<std::string> package_name;
    std::optional<std::string> version;
    std::vector<std::string> dependencies;
    std::vector<std::string> scripts;

    auto operator<=>(const BuildAttributes&) const = default;
};

/// Shallow key-value view of a recognized configuration file.
struct ConfigArtifact {
    std::string config_file_name;
    std::string code_body;
    std::string config_type;
    std::map<std::string, std::string> settings;

    auto operator<=>(const ConfigArtifact&) const = default;
};

/// Result of mapping a backend grammar kind onto the schema's TypeKind.
struct NormalizedKind {
    TypeKind kind = TypeKind::CLASS;
    bool exact = true;
    std::string note;  // set when an unknown kind fell back to CLASS
};

/// Total mapping from grammar node kinds ("class_declaration", ...) to
/// schema kinds. Unknown kinds fall back to CLASS with a note.
NormalizedKind normalize_kind(Language lang, std::string_view raw_kind);

} // namespace cak
