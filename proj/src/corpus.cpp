// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/corpus.hpp"

#include "fixturegen/jsonl.hpp"
#include "fixturegen/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <unordered_map>

namespace fixturegen {

    namespace {
        constexpr std::array known_fields{"id", "base_name", "code", "label", "category", "language"};

        std::string require_string(const json& record, std::size_t line, const char* field, bool required) {
            auto it = record.find(field);
            if (it == record.end() || it->is_null()) {
                if (required) {
                    throw CorpusError(line, field, "missing required field");
                }
                return {};
            }
            if (!it->is_string()) {
                throw CorpusError(line, field, "expected a string");
            }
            return it->get<std::string>();
        }

        FocalSample parse_record(const json& record, std::size_t line) {
            if (!record.is_object()) {
                throw CorpusError(line, "", "record is not an object");
            }
            for (const auto& [key, _] : record.items()) {
                if (std::ranges::find(known_fields, key) == known_fields.end()) {
                    throw CorpusError(line, key, "unknown field");
                }
            }

            FocalSample sample{};
            sample.id = require_string(record, line, "id", true);
            if (trim(sample.id).empty()) {
                throw CorpusError(line, "id", "must be non-empty");
            }
            sample.base_name = require_string(record, line, "base_name", true);
            if (!is_identifier(sample.base_name)) {
                throw CorpusError(line, "base_name", fmt::format("'{}' is not a valid module name", sample.base_name));
            }
            sample.code = require_string(record, line, "code", true);
            if (trim(sample.code).empty()) {
                throw CorpusError(line, "code", "must be non-empty");
            }
            auto label_text = require_string(record, line, "label", false);
            if (!label_text.empty()) {
                auto label = parse_label(label_text);
                if (!label) {
                    throw CorpusError(line, "label", fmt::format("unknown label '{}'", label_text));
                }
                sample.label = *label;
            }
            sample.category = require_string(record, line, "category", false);
            auto language = require_string(record, line, "language", false);
            if (!language.empty()) {
                sample.language = language;
            }
            return sample;
        }
    }  // namespace

    std::string_view to_string(Label label) {
        switch (label) {
            case Label::dependent:
                return "dependent";
            case Label::independent:
                return "independent";
            case Label::unlabeled:
                return "unlabeled";
        }
        return "unlabeled";
    }

    std::optional<Label> parse_label(std::string_view text) {
        if (text == "dependent") {
            return Label::dependent;
        }
        if (text == "independent") {
            return Label::independent;
        }
        if (text == "unlabeled") {
            return Label::unlabeled;
        }
        return std::nullopt;
    }

    bool is_executable_language(std::string_view language) {
        return language == default_language;
    }

    bool is_identifier(std::string_view text) {
        if (text.empty()) {
            return false;
        }
        auto head = static_cast<unsigned char>(text.front());
        if (!(std::isalpha(head) || head == '_')) {
            return false;
        }
        return std::ranges::all_of(text.substr(1), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
    }

    CorpusError::CorpusError(std::size_t line, std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? fmt::format("line {}: {}", line, message)
                                           : fmt::format("line {}, field \"{}\": {}", line, field, message)),
          line_(line),
          field_(std::move(field)) {}

    Corpus parse_corpus(std::istream& in) {
        Corpus corpus{};
        std::unordered_map<std::string, std::size_t> first_seen{};
        std::string line{};
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto content = trim(line);
            if (content.empty() || content.starts_with('#')) {
                continue;
            }
            json record{};
            try {
                record = json::parse(content);
            }
            catch (const json::parse_error& e) {
                throw CorpusError(line_no, "", fmt::format("malformed record: {}", e.what()));
            }
            auto sample = parse_record(record, line_no);
            auto [it, inserted] = first_seen.emplace(sample.id, line_no);
            if (!inserted) {
                throw CorpusError(line_no,
                                  "id",
                                  fmt::format("duplicate id '{}' (first seen at line {}, again at line {})",
                                              sample.id,
                                              it->second,
                                              line_no));
            }
            corpus.push_back(std::move(sample));
        }
        return corpus;
    }

    Corpus load_corpus(const std::filesystem::path& path) {
        std::ifstream in{path};
        if (!in) {
            throw std::runtime_error(fmt::format("cannot read corpus file {}", path.string()));
        }
        return parse_corpus(in);
    }

    std::size_t count_loc(std::string_view code) {
        std::size_t count = 0;
        for (auto line : split_lines(code)) {
            auto content = trim(line);
            if (!content.empty() && !content.starts_with('#')) {
                ++count;
            }
        }
        return count;
    }

    std::size_t count_imports(std::string_view code) {
        std::size_t count = 0;
        for (auto line : split_lines(code)) {
            if (line.starts_with("import ")) {
                ++count;
            }
            else if (line.starts_with("from ") && line.find(" import ") != std::string_view::npos) {
                ++count;
            }
        }
        return count;
    }

    CorpusStats summarize(std::span<const FocalSample> corpus) {
        CorpusStats stats{};
        stats.total = corpus.size();
        for (auto label : {Label::dependent, Label::independent, Label::unlabeled}) {
            stats.per_label[label] = 0;
        }
        std::size_t loc_sum = 0;
        std::size_t import_sum = 0;
        for (const auto& sample : corpus) {
            ++stats.per_label[sample.label];
            ++stats.per_category[sample.category.empty() ? std::string{"(none)"} : sample.category];
            loc_sum += count_loc(sample.code);
            import_sum += count_imports(sample.code);
        }
        if (!corpus.empty()) {
            stats.mean_loc = static_cast<double>(loc_sum) / static_cast<double>(corpus.size());
            stats.mean_imports = static_cast<double>(import_sum) / static_cast<double>(corpus.size());
        }
        return stats;
    }

}  // namespace fixturegen
