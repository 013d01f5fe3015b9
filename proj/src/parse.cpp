// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/parse.hpp"

#include "cak/cst.hpp"
#include "parsers.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace cak {
namespace {

using detail::slice_lines;

bool contains(const std::vector<std::string_view>& kinds, const std::string& kind) {
    return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

const cst::Node* child(const cst::Node& node, std::string_view field) {
    for (const cst::Node& c : node.children)
        if (c.field == field) return &c;
    return nullptr;
}

std::vector<std::string> split_dots(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t dot = text.find('.', begin);
        if (dot == std::string::npos) {
            parts.push_back(text.substr(begin));
            break;
        }
        parts.push_back(text.substr(begin, dot - begin));
        begin = dot + 1;
    }
    return parts;
}

std::string strip_spaces(std::string text) {
    text.erase(std::remove_if(text.begin(), text.end(),
                              [](char c) { return c == ' ' || c == '\t'; }),
               text.end());
    return text;
}

/// Path -> dotted module name: "com/acme/Circle.java" -> "com.acme.Circle",
/// "pkg/__init__.py" -> "pkg".
std::string module_qualified_name(std::string_view file_path) {
    std::string path(file_path);
    std::size_t dot = path.rfind('.');
    if (dot != std::string::npos && path.find('/', dot) == std::string::npos)
        path.resize(dot);
    for (char& c : path)
        if (c == '/' || c == '\\') c = '.';
    const std::string init_suffix = ".__init__";
    if (path == "__init__")
        path.clear();
    else if (path.size() > init_suffix.size() &&
             path.compare(path.size() - init_suffix.size(), init_suffix.size(), init_suffix) == 0)
        path.resize(path.size() - init_suffix.size());
    return path;
}

std::vector<std::string> modifier_texts(const cst::Node& decl) {
    std::vector<std::string> mods;
    if (const cst::Node* m = child(decl, "modifiers"))
        for (const cst::Node& c : m->children) mods.push_back(c.text);
    return mods;
}

CallSite make_site(Language lang, const cst::Node& call, const CallSiteContext& ctx) {
    CallSite site;
    if (const cst::Node* name = child(call, "name")) site.target_method = name->text;
    if (const cst::Node* args = child(call, "arguments"))
        for (const cst::Node& a : args->children) site.arguments.push_back(a.text);
    site.line_offset = {call.span.line_start, call.span.line_end};
    site.col_offset = {call.span.col_start, call.span.col_end};

    const cst::Node* receiver = child(call, "receiver");
    if (site.target_method == "<init>") {
        site.receiver_type = receiver ? receiver->text : "";
        return site;
    }
    if (!receiver) {
        // Unqualified call. A visible type name means a constructor
        // invocation; otherwise Java implies `this`.
        if (ctx.known_types.count(site.target_method)) {
            site.receiver_type = site.target_method;
            site.target_method = "<init>";
        } else if (lang == Language::JAVA) {
            site.receiver_type = ctx.enclosing_type;
        }
        return site;
    }
    if (receiver->text.empty()) return site;  // dynamic receiver: foo().bar()

    std::vector<std::string> segs = split_dots(receiver->text);
    if (segs[0] == "this" || segs[0] == "self") {
        if (segs.size() == 1) {
            site.receiver_type = ctx.enclosing_type;
        } else if (segs.size() == 2) {
            auto it = ctx.fields.find(segs[1]);
            if (it != ctx.fields.end()) site.receiver_type = it->second;
        }
        return site;
    }
    if (segs[0] == "super") return site;
    if (segs.size() == 1) {
        if (auto it = ctx.locals.find(segs[0]); it != ctx.locals.end())
            site.receiver_type = it->second;
        else if (auto f = ctx.fields.find(segs[0]); f != ctx.fields.end())
            site.receiver_type = f->second;
        else if (ctx.known_types.count(segs[0]))
            site.receiver_type = segs[0];
    }
    return site;
}

/// Shared by the in-tree path and the snippet path: pick up local
/// declarations first (visibility is flow-insensitive), then convert calls.
std::vector<CallSite> sites_from_nodes(Language lang, const std::vector<cst::Node>& nodes,
                                       const CallSiteContext& base_ctx) {
    CallSiteContext ctx = base_ctx;
    for (const cst::Node& n : nodes) {
        if (n.kind != "local_declaration") continue;
        const cst::Node* name = child(n, "name");
        const cst::Node* type = child(n, "type");
        if (name && type) ctx.locals[name->text] = type->text;
    }
    std::vector<CallSite> sites;
    for (const cst::Node& n : nodes)
        if (n.kind == "call") sites.push_back(make_site(lang, n, ctx));
    return sites;
}

Callable extract_callable(Language lang, const cst::Node& decl, std::string_view source,
                          const CallSiteContext& base_ctx) {
    Callable fn;
    if (const cst::Node* name = child(decl, "name")) fn.method_name = name->text;
    fn.modifiers = modifier_texts(decl);
    fn.is_constructor = decl.kind == "constructor_declaration" ||
                        (lang == Language::PYTHON && fn.method_name == "__init__");
    fn.is_static = std::find(fn.modifiers.begin(), fn.modifiers.end(), "static") !=
                       fn.modifiers.end() ||
                   std::find(fn.modifiers.begin(), fn.modifiers.end(), "@staticmethod") !=
                       fn.modifiers.end();

    if (const cst::Node* params = child(decl, "parameters")) {
        for (const cst::Node& p : params->children) {
            Parameter param;
            if (const cst::Node* n = child(p, "name")) param.arg_name = n->text;
            if (const cst::Node* t = child(p, "type")) param.arg_type = t->text;
            fn.formal_params.push_back(std::move(param));
        }
    }
    if (!fn.is_constructor) {
        if (const cst::Node* ret = child(decl, "return_type")) fn.return_type = ret->text;
    }

    std::string sig = fn.method_name + "(";
    bool first = true;
    for (std::size_t i = 0; i < fn.formal_params.size(); ++i) {
        const Parameter& p = fn.formal_params[i];
        if (lang == Language::PYTHON && i == 0 && !base_ctx.enclosing_type.empty() &&
            (p.arg_name == "self" || p.arg_name == "cls"))
            continue;
        if (!first) sig += ',';
        sig += strip_spaces(p.arg_type.empty() ? p.arg_name : p.arg_type);
        first = false;
    }
    sig += ')';
    fn.full_signature = std::move(sig);

    fn.line_offset = {decl.span.line_start, decl.span.line_end};
    fn.code_body = slice_lines(source, decl.span.line_start, decl.span.line_end);

    if (const cst::Node* block = child(decl, "body"); block && block->kind == "block") {
        CallSiteContext ctx = base_ctx;
        for (const Parameter& p : fn.formal_params) ctx.locals[p.arg_name] = p.arg_type;
        fn.call_sites = sites_from_nodes(lang, block->children, ctx);
    }
    return fn;
}

ImportDecl extract_import(const cst::Node& node, std::string_view source) {
    ImportDecl decl;
    decl.raw_text = std::string(source.substr(node.span.byte_start,
                                              node.span.byte_end - node.span.byte_start));
    if (node.kind == "import_from_statement") {
        if (const cst::Node* mod = child(node, "module")) decl.from_module = mod->text;
        for (const cst::Node& c : node.children)
            if (c.kind == "name") decl.imports.push_back(c.text);
        return decl;
    }
    if (node.kind == "import_statement") {
        for (const cst::Node& c : node.children)
            if (c.kind == "name") decl.imports.push_back(c.text);
        return decl;
    }
    // Java: the node text is the dotted spec, "*" included.
    std::vector<std::string> segs = split_dots(node.text);
    if (segs.size() == 1) {
        decl.imports.push_back(segs[0]);
    } else {
        std::string prefix;
        for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
            if (!prefix.empty()) prefix += '.';
            prefix += segs[i];
        }
        decl.from_module = prefix;
        decl.imports.push_back(segs.back());
    }
    return decl;
}

struct TypeScope {
    std::string package_prefix;   // package (Java) or module qualified name (Python)
    std::set<std::string> known_types;
};

void extract_type(Language lang, const cst::Node& decl, std::string_view source,
                  std::string_view file_path, const std::string& enclosing_path,
                  const TypeScope& scope, CodeModule& module,
                  std::vector<ParseDiagnostic>& extra) {
    CodeType type;
    std::string simple;
    if (const cst::Node* name = child(decl, "name")) simple = name->text;
    type.type_name = enclosing_path.empty() ? simple : enclosing_path + "." + simple;
    type.qualified_name = scope.package_prefix.empty()
                              ? type.type_name
                              : scope.package_prefix + "." + type.type_name;
    NormalizedKind normalized = normalize_kind(lang, decl.kind);
    type.kind = normalized.kind;
    if (!normalized.exact)
        extra.push_back({std::string(file_path), decl.span.line_start, decl.span.col_start,
                         "warning: " + normalized.note});
    type.file_name = std::string(file_path);
    type.modifiers = modifier_texts(decl);
    if (lang == Language::JAVA && type.kind == TypeKind::CLASS &&
        std::find(type.modifiers.begin(), type.modifiers.end(), "abstract") !=
            type.modifiers.end())
        type.kind = TypeKind::ABSTRACT_CLASS;
    if (const cst::Node* sup = child(decl, "superclass"))
        for (const cst::Node& c : sup->children) type.super_classes.push_back(c.text);
    if (const cst::Node* ifaces = child(decl, "interfaces"))
        for (const cst::Node& c : ifaces->children) type.interfaces.push_back(c.text);
    type.line_offset = {decl.span.line_start, decl.span.line_end};
    type.code_body = slice_lines(source, decl.span.line_start, decl.span.line_end);

    const cst::QueryTable& table = cst::query_table(lang);
    const cst::Node* body = child(decl, "body");
    std::vector<const cst::Node*> nested;
    if (body) {
        for (const cst::Node& member : body->children) {
            if (contains(table.field_kinds, member.kind)) {
                FieldDecl field;
                if (const cst::Node* n = child(member, "name")) field.field_name = n->text;
                if (const cst::Node* t = child(member, "type")) field.field_type = t->text;
                field.line_offset = {member.span.line_start, member.span.line_end};
                type.fields.push_back(std::move(field));
            } else if (contains(table.type_kinds, member.kind)) {
                nested.push_back(&member);
            }
        }
        CallSiteContext ctx;
        ctx.enclosing_type = simple;
        ctx.known_types = scope.known_types;
        for (const FieldDecl& f : type.fields) ctx.fields[f.field_name] = f.field_type;
        for (const cst::Node& member : body->children)
            if (contains(table.callable_kinds, member.kind))
                type.callables.push_back(extract_callable(lang, member, source, ctx));
    }

    std::string own_path = type.type_name;
    module.types.push_back(std::move(type));
    for (const cst::Node* n : nested)
        extract_type(lang, *n, source, file_path, own_path, scope, module, extra);
}

} // namespace

ParseResult parse_source(Language lang, std::string_view source) {
    cst::Tree tree = cst::parse(lang, source);
    ParseResult result;
    result.ok = tree.ok();
    result.diagnostics = std::move(tree.diagnostics);
    result.root_span = {detail::count_lines(source), source.size()};
    return result;
}

bool is_parsable(Language lang, std::string_view source) {
    return parse_source(lang, source).ok;
}

CodeModule extract_module(Language lang, std::string_view file_path, std::string_view source) {
    CodeModule module;
    module.file_name = std::string(file_path);
    module.qualified_name = module_qualified_name(file_path);

    cst::Tree tree = cst::parse(lang, source, file_path);
    module.diagnostics = tree.diagnostics;
    if (!tree.ok()) return module;

    const cst::QueryTable& table = cst::query_table(lang);

    TypeScope scope;
    scope.package_prefix = module.qualified_name;
    if (lang == Language::JAVA) {
        scope.package_prefix.clear();
        for (const cst::Node& c : tree.root.children)
            if (c.kind == "package_declaration") scope.package_prefix = c.text;
    }

    // Visible type simple names: every type declared in this file plus, for
    // Java, non-static imported names.
    std::function<void(const cst::Node&)> collect = [&](const cst::Node& node) {
        if (contains(table.type_kinds, node.kind))
            if (const cst::Node* name = child(node, "name"))
                scope.known_types.insert(name->text);
        for (const cst::Node& c : node.children) collect(c);
    };
    collect(tree.root);
    if (lang == Language::JAVA) {
        for (const cst::Node& c : tree.root.children) {
            if (!contains(table.import_kinds, c.kind) || child(c, "static")) continue;
            std::vector<std::string> segs = split_dots(c.text);
            if (!segs.empty() && segs.back() != "*") scope.known_types.insert(segs.back());
        }
    }

    std::vector<ParseDiagnostic> extra;
    for (const cst::Node& node : tree.root.children) {
        if (contains(table.import_kinds, node.kind)) {
            module.imports.push_back(extract_import(node, source));
        } else if (contains(table.type_kinds, node.kind)) {
            extract_type(lang, node, source, file_path, "", scope, module, extra);
        } else if (contains(table.callable_kinds, node.kind)) {
            CallSiteContext ctx;
            ctx.known_types = scope.known_types;
            module.callables.push_back(extract_callable(lang, node, source, ctx));
        }
    }
    for (ParseDiagnostic& d : extra) module.diagnostics.push_back(std::move(d));
    return module;
}

std::vector<CallSite> extract_call_sites(Language lang, std::string_view body, int start_line,
                                         const CallSiteContext& ctx) {
    std::vector<cst::Node> nodes = lang == Language::JAVA
                                       ? detail::scan_java_snippet(body, start_line)
                                       : detail::scan_python_snippet(body, start_line);
    return sites_from_nodes(lang, nodes, ctx);
}

} // namespace cak
