// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/schema.hpp"

#include "cak/errors.hpp"

#include <string>

namespace cak {

std::string_view type_kind_name(TypeKind kind) {
    switch (kind) {
    case TypeKind::CLASS: return "class";
    case TypeKind::INTERFACE: return "interface";
    case TypeKind::STRUCT: return "struct";
    case TypeKind::ENUM: return "enum";
    case TypeKind::ABSTRACT_CLASS: return "abstract_class";
    }
    return "class";
}

TypeKind type_kind_from_name(std::string_view name) {
    if (name == "class") return TypeKind::CLASS;
    if (name == "interface") return TypeKind::INTERFACE;
    if (name == "struct") return TypeKind::STRUCT;
    if (name == "enum") return TypeKind::ENUM;
    if (name == "abstract_class") return TypeKind::ABSTRACT_CLASS;
    throw Error(ErrorCode::MalformedSnapshot, "unknown type kind: " + std::string(name));
}

NormalizedKind normalize_kind(Language lang, std::string_view raw_kind) {
    if (lang == Language::JAVA) {
        if (raw_kind == "class_declaration") return {TypeKind::CLASS, true, ""};
        if (raw_kind == "interface_declaration") return {TypeKind::INTERFACE, true, ""};
        if (raw_kind == "enum_declaration") return {TypeKind::ENUM, true, ""};
        if (raw_kind == "record_declaration" || raw_kind == "annotation_type_declaration")
            return {TypeKind::CLASS, false,
                    "kind '" + std::string(raw_kind) + "' normalized to class"};
    } else {
        if (raw_kind == "class_definition") return {TypeKind::CLASS, true, ""};
    }
    return {TypeKind::CLASS, false,
            "unknown kind '" + std::string(raw_kind) + "' normalized to class"};
}

} // namespace cak
