// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/jsonl.hpp"

#include "fixturegen/text.hpp"

#include <fmt/format.h>

namespace fixturegen {

    JsonlError::JsonlError(std::filesystem::path path, std::size_t line, const std::string& what)
        : std::runtime_error(fmt::format("{}:{}: {}", path.string(), line, what)),
          path_(std::move(path)),
          line_(line) {}

    void read_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const json&)>& visit) {
        std::ifstream in{path};
        if (!in) {
            throw std::runtime_error(fmt::format("cannot open {}", path.string()));
        }
        std::string line{};
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) {
                continue;
            }
            json record{};
            try {
                record = json::parse(line);
            }
            catch (const json::parse_error& e) {
                throw JsonlError(path, line_no, fmt::format("malformed record: {}", e.what()));
            }
            if (!record.is_object()) {
                throw JsonlError(path, line_no, "record is not an object");
            }
            try {
                visit(line_no, record);
            }
            catch (const JsonlError&) {
                throw;
            }
            catch (const std::exception& e) {
                throw JsonlError(path, line_no, e.what());
            }
        }
    }

    JsonlAppender::JsonlAppender(const std::filesystem::path& path) : path_(path) {
        if (path.has_parent_path()) {
            std::filesystem::create_directories(path.parent_path());
        }
        out_.open(path, std::ios::app | std::ios::binary);
        if (!out_) {
            throw std::runtime_error(fmt::format("cannot open {} for append", path.string()));
        }
    }

    void JsonlAppender::append(const json& record) {
        auto line = record.dump(-1, ' ', false, json::error_handler_t::replace);
        std::lock_guard lock{mutex_};
        out_ << line << '\n';
        out_.flush();
    }

}  // namespace fixturegen
