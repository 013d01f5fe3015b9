// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/language.hpp"
#include "cak/schema.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cak {

struct ParseResult {
    bool ok = true;
    std::vector<ParseDiagnostic> diagnostics;
    std::pair<std::size_t, std::size_t> root_span;  // (total lines, total bytes)
};

/// Syntactic validation of arbitrary bytes. Never throws except for an
/// unsupported language; error nodes become diagnostics carrying the
/// 1-based line and 0-based column of the first offending token.
ParseResult parse_source(Language lang, std::string_view source);

/// parse_source(...).ok
bool is_parsable(Language lang, std::string_view source);

/// Turn one source file into a schema module. Unparsable input yields a
/// module holding only diagnostics. file_path is the project-relative path
/// and determines the module's qualified name.
CodeModule extract_module(Language lang, std::string_view file_path, std::string_view source);

/// Lexical facts about the surroundings of a callable body, used to fill
/// CallSite::receiver_type. The receiver rules need the enclosing type and
/// visible declared types, which the body text alone cannot supply.
struct CallSiteContext {
    std::string enclosing_type;                      // simple name, "" at module level
    std::map<std::string, std::string> locals;       // name -> declared type (params included)
    std::map<std::string, std::string> fields;       // enclosing-type field name -> declared type
    std::set<std::string> known_types;               // visible type simple names
};

/// One CallSite per syntactic invocation in source order. body is the exact
/// code_body slice of a callable and start_line its first 1-based line.
std::vector<CallSite> extract_call_sites(Language lang, std::string_view body, int start_line,
                                         const CallSiteContext& ctx = {});

} // namespace cak
