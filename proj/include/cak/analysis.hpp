// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/session.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cak {

/// Language-independent query surface over an AnalysisSession. All lookups use
/// qualified type names; see resolve_simple_name for the disambiguation
/// helper. Returned pointers stay valid for the session's lifetime.

/// Every type of the session keyed by qualified name, lexicographic order.
std::map<std::string, const CodeType*> get_classes(const AnalysisSession& session);

/// The unique type, or TypeNotFound.
const CodeType& get_class(const AnalysisSession& session, std::string_view qualified_name);

/// All callables declared in the class (constructors and private methods
/// included), keyed by full signature. TypeNotFound for unknown classes.
std::map<std::string, const Callable*> get_methods_in_class(const AnalysisSession& session,
                                                            std::string_view qualified_name);

/// TypeNotFound / MethodNotFound.
const Callable& get_method(const AnalysisSession& session,
                           std::string_view qualified_name,
                           std::string_view signature);

/// All modules, lexicographic by file path.
const std::vector<CodeModule>& get_all_modules(const AnalysisSession& session);

/// Module-level callables plus every contained type's callables, constructors
/// excluded, in source order.
std::vector<const Callable*> get_all_methods(const CodeModule& module);

/// Source-ordered import declarations.
const std::vector<ImportDecl>& get_imports(const CodeModule& module);

/// Package, imports, and declared type names of one analyzed file.
/// FileNotInSession for unknown paths.
CompilationUnit get_compilation_unit(const AnalysisSession& session,
                                     std::string_view file_path);

/// Path of the file declaring the type (nested types report their outer
/// type's file). TypeNotFound.
std::string get_source_file(const AnalysisSession& session,
                            std::string_view qualified_type_name);

/// All qualified names whose final segment equals simple_name, sorted.
std::vector<std::string> resolve_simple_name(const AnalysisSession& session,
                                             std::string_view simple_name);

} // namespace cak
