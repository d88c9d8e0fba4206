// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/jsonl.hpp"
#include "fixturegen/sandbox.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    // Wire format of the in-interpreter runner shim: every structured line on
    // stdout is `@@REC@@ {"kind": "case"|"summary"|"coverage"|"error", ...}`.
    // Anything else on stdout is output from the code under test.

    inline constexpr std::string_view record_sentinel = "@@REC@@ ";
    inline constexpr std::string_view suite_load_record_name = "<suite>";
    inline constexpr std::string_view coverage_unavailable_code = "coverage_unavailable";

    enum class CaseStatus { pass, fail, error };

    std::string_view to_string(CaseStatus status);
    CaseStatus parse_case_status(std::string_view text);

    struct CaseRecord {
        std::string name{};
        CaseStatus status{CaseStatus::error};
        std::string message{};

        friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
    };

    struct SuiteSummary {
        int cases{};
        int passed{};
        int failed{};
        int errored{};

        friend bool operator==(const SuiteSummary&, const SuiteSummary&) = default;
    };

    struct CoverageRecord {
        double line_pct{};
        double branch_pct{};
        int lines_total{};
        int branches_total{};
        /// branches_total == 0; branch_pct is then reported as 100.
        bool zero_branch_denominator{false};
    };

    struct ShimError {
        std::string code{};
        std::string message{};
    };

    struct ShimOutput {
        std::vector<CaseRecord> cases{};
        /// Suite failed to import or parse (the `<suite>` record).
        std::optional<std::string> load_error{};
        std::optional<SuiteSummary> summary{};
        std::optional<CoverageRecord> coverage{};
        std::vector<ShimError> errors{};
    };

    class ShimProtocolError : public std::runtime_error {
      public:
        using std::runtime_error::runtime_error;
    };

    /// Extracts structured records from shim stdout. Malformed record lines
    /// and summaries that disagree with their own counts are protocol errors.
    ShimOutput parse_shim_output(std::string_view stdout_text);

    json to_json(const CaseRecord& record);
    CaseRecord case_record_from_json(const json& record);
    json to_json(const CoverageRecord& record);
    CoverageRecord coverage_record_from_json(const json& record);

    struct SuiteRunResult {
        std::vector<CaseRecord> cases{};
        std::optional<std::string> load_error{};
        ExecutionOutcome outcome{};
    };

    struct CoverageRunResult {
        std::optional<CoverageRecord> coverage{};
        /// Set when the interpreter has no coverage tooling; callers degrade to "no coverage".
        bool unavailable{false};
        std::string message{};
    };

    struct ParseCheck {
        bool ok{false};
        std::string message{};
    };

    /// Drives the runner shim and the syntax check inside the sandbox. The
    /// focal module and suite are written side by side as `<base>.py` and
    /// `test_<base>.py`.
    class SuiteRunner {
      public:
        SuiteRunner(const Sandbox& sandbox, const std::filesystem::path& shim_script);

        /// Syntax-only check of a suite (an AST parse, no imports executed).
        ParseCheck check_parse(std::string_view suite_code) const;

        SuiteRunResult run_suite(std::string_view base_name, std::string_view focal_code,
                                 std::string_view suite_code) const;

        CoverageRunResult run_coverage(std::string_view base_name, std::string_view focal_code,
                                       std::string_view suite_code) const;

      private:
        ExecutionRequest make_request(std::string_view command, std::string_view base_name,
                                      std::string_view focal_code, std::string_view suite_code) const;

        const Sandbox& sandbox_;
        std::string shim_source_;
    };

    std::string suite_file_name(std::string_view base_name);
    std::string focal_file_name(std::string_view base_name);

}  // namespace fixturegen
