// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cak::detail {

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

inline bool is_ident_char(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

/// Byte offsets of each line start, for byte→line/col conversion.
inline std::vector<std::size_t> line_starts(std::string_view source) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < source.size(); ++i)
        if (source[i] == '\n') starts.push_back(i + 1);
    return starts;
}

inline std::size_t count_lines(std::string_view source) {
    if (source.empty()) return 0;
    std::size_t n = 1;
    for (char c : source)
        if (c == '\n') ++n;
    if (source.back() == '\n') --n;
    return n;
}

/// Text of lines [start, end] (1-based, inclusive), without the trailing
/// newline of the last line.
inline std::string slice_lines(std::string_view source, int start, int end) {
    if (start < 1 || end < start) return "";
    std::vector<std::size_t> starts = line_starts(source);
    if (static_cast<std::size_t>(start) > starts.size()) return "";
    std::size_t from = starts[static_cast<std::size_t>(start) - 1];
    std::size_t to = source.size();
    if (static_cast<std::size_t>(end) < starts.size()) to = starts[static_cast<std::size_t>(end)];
    std::string_view slice = source.substr(from, to - from);
    while (!slice.empty() && (slice.back() == '\n' || slice.back() == '\r'))
        slice.remove_suffix(1);
    return std::string(slice);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

} // namespace cak::detail
