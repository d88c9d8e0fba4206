// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fixturegen {

    using json = nlohmann::json;

    class JsonlError : public std::runtime_error {
      public:
        JsonlError(std::filesystem::path path, std::size_t line, const std::string& what);

        const std::filesystem::path& path() const noexcept { return path_; }
        std::size_t line() const noexcept { return line_; }

      private:
        std::filesystem::path path_;
        std::size_t line_;
    };

    /// Calls `visit(line_number, record)` for every non-blank line. Lines that
    /// fail to parse, or that `visit` rejects by throwing, become a JsonlError
    /// naming the line.
    void read_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const json&)>& visit);

    /// Append-only record sink; one object per line, flushed per record.
    /// Safe to share between worker threads.
    class JsonlAppender {
      public:
        explicit JsonlAppender(const std::filesystem::path& path);

        void append(const json& record);
        const std::filesystem::path& path() const noexcept { return path_; }

      private:
        std::filesystem::path path_;
        std::mutex mutex_;
        std::ofstream out_;
    };

}  // namespace fixturegen
