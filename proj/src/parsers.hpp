// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cak/cst.hpp"

#include <string_view>
#include <vector>

namespace cak::detail {

cst::Tree parse_java(std::string_view source, std::string_view file);
cst::Tree parse_python(std::string_view source, std::string_view file);

/// Scan a free-standing callable-body snippet for call and local-declaration
/// nodes. A leading method/def header, when present, is skipped so that the
/// declaration itself is not mistaken for an invocation. start_line numbers
/// the snippet's first line.
std::vector<cst::Node> scan_java_snippet(std::string_view text, int start_line);
std::vector<cst::Node> scan_python_snippet(std::string_view text, int start_line);

} // namespace cak::detail
