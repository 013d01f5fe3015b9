// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Extracts the key facts about one class — body, method names and bodies,
// imports, and the files declaring its supertypes — in nine public API calls,
// replacing a page of hand-rolled syntax-tree queries.

#include "cak/analysis.hpp"
#include "cak/errors.hpp"
#include "cak/schema_json.hpp"
#include "cak/session.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Single-class information extraction"};
    std::string input;
    std::string language = "java";
    std::string class_name;
    app.add_option("--input", input, "Project directory")->required();
    app.add_option("--language", language, "Source language (java|python)")
        ->check(CLI::IsMember({"java", "python"}));
    app.add_option("--class", class_name, "Qualified type name")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        cak::ToolkitConfig config;
        config.language = cak::language_from_name(language);
        config.project_path = input;

        cak::AnalysisSession session = cak::create_session(config);          // 1
        const cak::CodeType& details = cak::get_class(session, class_name);  // 2
        std::string file = cak::get_source_file(session, class_name);        // 3
        auto methods = cak::get_methods_in_class(session, class_name);       // 4
        cak::CompilationUnit unit = cak::get_compilation_unit(session, file);  // 5

        cak::json info;
        info["class_name"] = details.qualified_name;
        info["class_body"] = details.code_body;
        info["file"] = file;
        info["method_names"] = cak::json::array();
        info["method_bodies"] = cak::json::array();
        for (const auto& [signature, method] : methods) {
            info["method_names"].push_back(signature);
            info["method_bodies"].push_back(method->code_body);
        }
        info["imports"] = cak::json::array();
        for (const auto& import_decl : unit.imports) {
            info["imports"].push_back(import_decl.raw_text);
        }
        info["supertype_files"] = cak::json::array();
        std::vector<std::string> supertypes = details.super_classes;
        supertypes.insert(supertypes.end(), details.interfaces.begin(),
                          details.interfaces.end());
        for (const auto& supertype : supertypes) {
            // two calls per supertype: 6/7 and 8/9 for a two-supertype class
            for (const auto& qualified : cak::resolve_simple_name(session, supertype)) {
                info["supertype_files"].push_back(cak::get_source_file(session, qualified));
            }
        }
        std::cout << info.dump() << "\n";
        return 0;
    } catch (const cak::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
