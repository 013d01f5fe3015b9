// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cak {

enum class Language {
    JAVA,
    PYTHON,
};

/// Languages with a built-in syntax backend, in fixed declaration order.
std::vector<Language> supported_languages();

std::string_view language_name(Language lang);

/// Parses "java"/"python" (case-insensitive). Throws UnsupportedLanguage otherwise.
Language language_from_name(std::string_view name);

/// File extension (with dot) for source files of the language.
std::string_view language_extension(Language lang);

} // namespace cak
