// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/testgen.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    struct MetricFraction {
        std::uint64_t numerator{};
        std::uint64_t denominator{};

        /// Absent when the denominator is zero.
        std::optional<double> percent() const;

        friend bool operator==(const MetricFraction&, const MetricFraction&) = default;
    };

    /// Cases a suite is charged for: the discovered count, or the requested
    /// count when nothing was discovered (unparseable, import failure, empty).
    std::uint64_t charged_cases(const TestSuiteArtifact& artifact);

    MetricFraction parse_rate(std::span<const TestSuiteArtifact> artifacts);
    /// Cases that ran to completion (pass or fail) over charged cases.
    MetricFraction execution_rate(std::span<const TestSuiteArtifact> artifacts);
    MetricFraction case_pass_rate(std::span<const TestSuiteArtifact> artifacts);
    /// Suites that parse, discover at least one case, and pass every case.
    MetricFraction suite_pass_rate(std::span<const TestSuiteArtifact> artifacts);

    struct CoverageAggregate {
        std::optional<double> line_pct{};
        std::optional<double> branch_pct{};
        std::size_t samples{};
        std::size_t zero_branch_samples{};
    };

    /// Unweighted mean over samples. A sample whose suite produced no coverage
    /// record (broken or fully discarded) counts as 0; samples whose
    /// interpreter lacks coverage tooling are left out. Absent when no sample
    /// has a coverage record at all.
    CoverageAggregate aggregate_coverage(std::span<const TestSuiteArtifact> artifacts);

    enum class ReportScope { overall, dependent_only, independent_only };

    std::string_view to_string(ReportScope scope);
    ReportScope parse_report_scope(std::string_view text);

    bool in_scope(const TestSuiteArtifact& artifact, ReportScope scope);

    struct AggregateReport {
        ReportScope scope{ReportScope::overall};
        MetricFraction pr{};
        MetricFraction ex{};
        MetricFraction caseps{};
        MetricFraction suiteps{};
        CoverageAggregate coverage{};
        std::size_t n_suites{};
        std::uint64_t n_cases{};
    };

    AggregateReport aggregate(std::span<const TestSuiteArtifact> artifacts, ReportScope scope);

    /// Overall, dependent-only, and independent-only, in that order.
    std::vector<AggregateReport> build_reports(std::span<const TestSuiteArtifact> artifacts);

    /// Two decimals, half-up, computed exactly from the fraction.
    std::string format_percent(const MetricFraction& fraction);
    /// Two decimals, half-up; "n/a" when absent.
    std::string format_percent(std::optional<double> value);

    enum class ReportFormat { json, csv, markdown };

    ReportFormat parse_report_format(std::string_view text);

    struct ReportDocument {
        std::vector<AggregateReport> reports{};
        std::size_t samples_total{};
        std::size_t samples_skipped{};
        /// Row label in the markdown table.
        std::string approach{"fixturegen"};
    };

    /// json is key-sorted and stable; csv has one row per scope and metric;
    /// markdown shows each overall value with the dependent-only value in
    /// parentheses.
    std::string emit_report(const ReportDocument& document, ReportFormat format);

}  // namespace fixturegen
