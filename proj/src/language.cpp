// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cak/language.hpp"

#include "cak/errors.hpp"

#include <algorithm>
#include <cctype>

namespace cak {

std::vector<Language> supported_languages() {
    return {Language::JAVA, Language::PYTHON};
}

std::string_view language_name(Language lang) {
    switch (lang) {
    case Language::JAVA: return "java";
    case Language::PYTHON: return "python";
    }
    return "java";
}

Language language_from_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "java") return Language::JAVA;
    if (lower == "python") return Language::PYTHON;
    throw Error(ErrorCode::UnsupportedLanguage, "unsupported language: " + std::string(name));
}

std::string_view language_extension(Language lang) {
    switch (lang) {
    case Language::JAVA: return ".java";
    case Language::PYTHON: return ".py";
    }
    return ".java";
}

} // namespace cak
