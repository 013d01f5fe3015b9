// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/analysis.hpp"

#include "cak/errors.hpp"

#include <algorithm>
#include <string>

namespace cak {

std::map<std::string, const CodeType*> get_classes(const AnalysisSession& session) {
    return session.type_index();
}

const CodeType& get_class(const AnalysisSession& session, std::string_view qualified_name) {
    const CodeType* type = session.find_type(qualified_name);
    if (!type)
        throw Error(ErrorCode::TypeNotFound,
                    "type " + std::string(qualified_name) + " is not in the session");
    return *type;
}

std::map<std::string, const Callable*> get_methods_in_class(const AnalysisSession& session,
                                                            std::string_view qualified_name) {
    const CodeType& type = get_class(session, qualified_name);
    std::map<std::string, const Callable*> methods;
    for (const Callable& fn : type.callables) methods[fn.full_signature] = &fn;
    return methods;
}

const Callable& get_method(const AnalysisSession& session, std::string_view qualified_name,
                           std::string_view signature) {
    const CodeType& type = get_class(session, qualified_name);
    for (const Callable& fn : type.callables)
        if (fn.full_signature == signature) return fn;
    throw Error(ErrorCode::MethodNotFound, std::string(qualified_name) + "." +
                                               std::string(signature) + " is not declared");
}

const std::vector<CodeModule>& get_all_modules(const AnalysisSession& session) {
    return session.modules();
}

std::vector<const Callable*> get_all_methods(const CodeModule& module) {
    std::vector<const Callable*> methods;
    for (const Callable& fn : module.callables)
        if (!fn.is_constructor) methods.push_back(&fn);
    for (const CodeType& type : module.types)
        for (const Callable& fn : type.callables)
            if (!fn.is_constructor) methods.push_back(&fn);
    return methods;
}

const std::vector<ImportDecl>& get_imports(const CodeModule& module) {
    return module.imports;
}

CompilationUnit get_compilation_unit(const AnalysisSession& session, std::string_view file_path) {
    const CodeModule* module = session.find_module(file_path);
    if (!module)
        throw Error(ErrorCode::FileNotInSession,
                    std::string(file_path) + " is not part of the session");
    CompilationUnit unit;
    unit.file_path = module->file_name;
    unit.imports = module->imports;
    for (const CodeType& type : module->types) unit.types.push_back(type.qualified_name);
    if (session.config().language == Language::JAVA) {
        // Package = the common qualifying prefix of the declared types.
        if (!module->types.empty()) {
            const CodeType& type = module->types.front();
            const std::string& qualified = type.qualified_name;
            if (qualified.size() > type.type_name.size() + 1)
                unit.package_name =
                    qualified.substr(0, qualified.size() - type.type_name.size() - 1);
        }
    } else {
        unit.package_name = module->qualified_name;
    }
    return unit;
}

std::string get_source_file(const AnalysisSession& session,
                            std::string_view qualified_type_name) {
    return get_class(session, qualified_type_name).file_name;
}

std::vector<std::string> resolve_simple_name(const AnalysisSession& session,
                                             std::string_view simple_name) {
    std::vector<std::string> matches;
    for (const auto& [qualified_name, type] : session.type_index()) {
        std::size_t dot = qualified_name.rfind('.');
        std::string_view last = dot == std::string::npos
                                    ? std::string_view(qualified_name)
                                    : std::string_view(qualified_name).substr(dot + 1);
        if (last == simple_name) matches.push_back(qualified_name);
    }
    return matches;
}

} // namespace cak
