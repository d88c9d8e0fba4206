// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    std::string_view trim(std::string_view text);

    /// Trims trailing whitespace and any leading blank lines, but keeps the
    /// indentation of the first non-blank line.
    std::string_view trim_block(std::string_view text);

    /// Collapses every run of whitespace into a single space and trims the ends.
    std::string collapse_whitespace(std::string_view text);

    std::vector<std::string_view> split_lines(std::string_view text);

    std::string replace_all(std::string text, std::string_view from, std::string_view to);

    std::string to_lower(std::string_view text);

    /// Keeps the first `cap` bytes; appends a marker when something was cut.
    std::string truncate_head(std::string_view text, std::size_t cap);

    /// Keeps the last `cap` bytes; prepends a marker when something was cut.
    std::string truncate_tail(std::string_view text, std::size_t cap);

    /// Directory-safe form of an identifier: anything outside [A-Za-z0-9._-] becomes '_'.
    std::string sanitize_path_component(std::string_view text);

}  // namespace fixturegen
