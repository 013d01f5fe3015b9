// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/language.hpp"
#include "cak/schema.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace cak::cst {

/// Byte and line/column extent of a node in the original source.
struct Span {
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;  // exclusive
    int line_start = 1;        // 1-based
    int line_end = 1;          // inclusive
    int col_start = 0;         // 0-based
    int col_end = 0;           // exclusive on the end line
};

/// One concrete-syntax-tree node. Kinds follow the usual grammar naming
/// ("class_declaration", "function_definition", "call", ...). Method and
/// function bodies are kept flat apart from the call nodes discovered in
/// them; declarations nested inside a body are not modeled.
struct Node {
    std::string kind;
    std::string field;  // role relative to the parent ("name", "body", ...), may be empty
    Span span;
    std::string text;   // meaningful token text for leaf-ish nodes (names, type refs)
    std::vector<Node> children;
};

struct Tree {
    Node root;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.is_error()) return false;
        return true;
    }
};

/// Parse source text into a concrete syntax tree. Total: any byte string
/// yields a tree, possibly with error diagnostics. The file argument only
/// labels diagnostics.
Tree parse(Language lang, std::string_view source, std::string_view file = "<source>");

/// Pre-order walk over every node of the tree.
void walk(const Node& node, const std::function<void(const Node&)>& visit);

/// Per-language mapping between grammar node kinds and schema concepts.
/// The variance between language grammars is confined to this table.
struct QueryTable {
    std::vector<std::string_view> type_kinds;      // nodes that declare a type
    std::vector<std::string_view> callable_kinds;  // nodes that declare a callable
    std::vector<std::string_view> import_kinds;
    std::vector<std::string_view> field_kinds;
    std::string_view call_kind;
};

const QueryTable& query_table(Language lang);

} // namespace cak::cst
