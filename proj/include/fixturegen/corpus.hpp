// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    /// Ground-truth fixture label carried by a corpus record.
    enum class Label { dependent, independent, unlabeled };

    std::string_view to_string(Label label);
    std::optional<Label> parse_label(std::string_view text);

    inline constexpr std::string_view default_language = "python";

    struct FocalSample {
        std::string id{};
        std::string base_name{};
        std::string code{};
        Label label{Label::unlabeled};
        std::string category{};
        std::string language{default_language};
    };

    using Corpus = std::vector<FocalSample>;

    /// Samples in this language can be written to disk and run by the sandbox.
    bool is_executable_language(std::string_view language);

    bool is_identifier(std::string_view text);

    /// Load or validation failure, tied to a 1-based line and the offending field.
    class CorpusError : public std::runtime_error {
      public:
        CorpusError(std::size_t line, std::string field, const std::string& message);

        std::size_t line() const noexcept { return line_; }
        const std::string& field() const noexcept { return field_; }

      private:
        std::size_t line_;
        std::string field_;
    };

    /// One JSON object per line with the FocalSample field names. Blank lines
    /// and lines starting with '#' are skipped.
    Corpus parse_corpus(std::istream& in);
    Corpus load_corpus(const std::filesystem::path& path);

    struct CorpusStats {
        std::size_t total{};
        std::map<Label, std::size_t> per_label{};
        std::map<std::string, std::size_t> per_category{};
        double mean_loc{};
        double mean_imports{};
    };

    /// Non-blank lines that are not comment-only.
    std::size_t count_loc(std::string_view code);

    /// `import x` / `from x import y` statements starting at column 0.
    std::size_t count_imports(std::string_view code);

    CorpusStats summarize(std::span<const FocalSample> corpus);

}  // namespace fixturegen
