// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/text.hpp"

#include <algorithm>
#include <cctype>

namespace fixturegen {

    namespace {
        bool is_space(char c) {
            return std::isspace(static_cast<unsigned char>(c)) != 0;
        }

        constexpr std::string_view cut_marker = "...[truncated]";
    }  // namespace

    std::string_view trim(std::string_view text) {
        while (!text.empty() && is_space(text.front())) {
            text.remove_prefix(1);
        }
        while (!text.empty() && is_space(text.back())) {
            text.remove_suffix(1);
        }
        return text;
    }

    std::string_view trim_block(std::string_view text) {
        while (!text.empty() && is_space(text.back())) {
            text.remove_suffix(1);
        }
        for (;;) {
            auto eol = text.find('\n');
            if (eol == std::string_view::npos) {
                break;
            }
            auto line = text.substr(0, eol);
            if (!trim(line).empty()) {
                break;
            }
            text.remove_prefix(eol + 1);
        }
        if (trim(text).empty()) {
            return {};
        }
        return text;
    }

    std::string collapse_whitespace(std::string_view text) {
        std::string out{};
        out.reserve(text.size());
        bool pending_space = false;
        for (char c : trim(text)) {
            if (is_space(c)) {
                pending_space = true;
                continue;
            }
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            out.push_back(c);
        }
        return out;
    }

    std::vector<std::string_view> split_lines(std::string_view text) {
        std::vector<std::string_view> lines{};
        while (!text.empty()) {
            auto eol = text.find('\n');
            if (eol == std::string_view::npos) {
                lines.push_back(text);
                break;
            }
            auto line = text.substr(0, eol);
            if (!line.empty() && line.back() == '\r') {
                line.remove_suffix(1);
            }
            lines.push_back(line);
            text.remove_prefix(eol + 1);
        }
        return lines;
    }

    std::string replace_all(std::string text, std::string_view from, std::string_view to) {
        if (from.empty()) {
            return text;
        }
        std::size_t pos = 0;
        while ((pos = text.find(from, pos)) != std::string::npos) {
            text.replace(pos, from.size(), to);
            pos += to.size();
        }
        return text;
    }

    std::string to_lower(std::string_view text) {
        std::string out{text};
        std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    std::string truncate_head(std::string_view text, std::size_t cap) {
        if (text.size() <= cap) {
            return std::string{text};
        }
        std::string out{text.substr(0, cap)};
        out += cut_marker;
        return out;
    }

    std::string truncate_tail(std::string_view text, std::size_t cap) {
        if (text.size() <= cap) {
            return std::string{text};
        }
        std::string out{cut_marker};
        out += text.substr(text.size() - cap);
        return out;
    }

    std::string sanitize_path_component(std::string_view text) {
        std::string out{};
        out.reserve(text.size());
        for (unsigned char c : text) {
            bool ok = std::isalnum(c) != 0 || c == '.' || c == '_' || c == '-';
            out.push_back(ok ? static_cast<char>(c) : '_');
        }
        if (out.empty() || out == "." || out == "..") {
            out.insert(out.begin(), '_');
        }
        return out;
    }

}  // namespace fixturegen
