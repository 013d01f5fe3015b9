// Part of the cak project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cak {

enum class ErrorCode {
    UnsupportedLanguage,
    ProjectPathNotFound,
    IoFailure,
    SchemaVersionMismatch,
    MalformedSnapshot,
    TypeNotFound,
    MethodNotFound,
    FileNotInSession,
    UnresolvedPlaceholder,
    EndpointUnreachable,
    HttpStatus,
    MalformedResponse,
    Timeout,
    NotAFocalMethod,
    InvalidFeedback,
};

/// Single exception type for all toolkit failures; the code tells callers
/// (and the CLI's exit-code mapping) what went wrong.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, int detail = 0)
        : std::runtime_error(std::move(message)), code_(code), detail_(detail) {}

    ErrorCode code() const noexcept { return code_; }

    /// Extra numeric payload; HTTP status for ErrorCode::HttpStatus, else 0.
    int detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    int detail_;
};

} // namespace cak
