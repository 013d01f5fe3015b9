// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/cst.hpp"

#include "cak/errors.hpp"
#include "parsers.hpp"

namespace cak::cst {

Tree parse(Language lang, std::string_view source, std::string_view file) {
    switch (lang) {
    case Language::JAVA: return detail::parse_java(source, file);
    case Language::PYTHON: return detail::parse_python(source, file);
    }
    throw Error(ErrorCode::UnsupportedLanguage, "unknown language");
}

void walk(const Node& node, const std::function<void(const Node&)>& visit) {
    visit(node);
    for (const Node& child : node.children) walk(child, visit);
}

const QueryTable& query_table(Language language) {
    static const QueryTable java{
        {"class_declaration", "interface_declaration", "enum_declaration",
         "record_declaration", "annotation_type_declaration"},
        {"method_declaration", "constructor_declaration"},
        {"import_declaration"},
        {"field_declaration"},
        "call",
    };
    static const QueryTable python{
        {"class_definition"},
        {"function_definition"},
        {"import_statement", "import_from_statement"},
        {"field_definition"},
        "call",
    };
    return language == Language::JAVA ? java : python;
}

} // namespace cak::cst
