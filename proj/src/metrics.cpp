// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace fixturegen {

    namespace {
        bool all_pass(const TestSuiteArtifact& artifact) {
            return std::all_of(artifact.cases.begin(), artifact.cases.end(),
                               [](const CaseRecord& c) { return c.status == CaseStatus::pass; });
        }

        json fraction_json(const MetricFraction& fraction) {
            auto pct = fraction.percent();
            return json{
                    {"numerator", fraction.numerator},
                    {"denominator", fraction.denominator},
                    {"pct", pct ? json(*pct) : json(nullptr)},
                    {"display", format_percent(fraction)},
            };
        }

        json optional_json(std::optional<double> value) {
            return value ? json(*value) : json(nullptr);
        }

        const AggregateReport* find_scope(const ReportDocument& document, ReportScope scope) {
            for (const auto& report : document.reports) {
                if (report.scope == scope) {
                    return &report;
                }
            }
            return nullptr;
        }

        struct metric_row {
            std::string_view key;
            std::string_view heading;
        };

        constexpr std::array<metric_row, 6> metric_rows{{
                {"pr", "PR"},
                {"ex", "EX"},
                {"caseps", "CasePS"},
                {"suiteps", "SuitePS"},
                {"lcov", "Line Cov."},
                {"bcov", "Branch Cov."},
        }};

        const MetricFraction* fraction_of(const AggregateReport& report, std::string_view key) {
            if (key == "pr") {
                return &report.pr;
            }
            if (key == "ex") {
                return &report.ex;
            }
            if (key == "caseps") {
                return &report.caseps;
            }
            if (key == "suiteps") {
                return &report.suiteps;
            }
            return nullptr;
        }

        std::optional<double> coverage_of(const AggregateReport& report, std::string_view key) {
            return key == "lcov" ? report.coverage.line_pct : report.coverage.branch_pct;
        }

        std::string cell(const AggregateReport* report, std::string_view key) {
            if (report == nullptr) {
                return "n/a";
            }
            if (const auto* fraction = fraction_of(*report, key)) {
                return format_percent(*fraction);
            }
            return format_percent(coverage_of(*report, key));
        }

        std::string with_percent_sign(std::string value) {
            return value == "n/a" ? value : value + "%";
        }
    }  // namespace

    std::optional<double> MetricFraction::percent() const {
        if (denominator == 0) {
            return std::nullopt;
        }
        return static_cast<double>(numerator) * 100.0 / static_cast<double>(denominator);
    }

    std::uint64_t charged_cases(const TestSuiteArtifact& artifact) {
        if (!artifact.parse_ok || artifact.cases.empty()) {
            return static_cast<std::uint64_t>(std::max(artifact.cases_requested, 1));
        }
        return artifact.cases.size();
    }

    MetricFraction parse_rate(std::span<const TestSuiteArtifact> artifacts) {
        MetricFraction fraction{};
        fraction.denominator = artifacts.size();
        fraction.numerator = static_cast<std::uint64_t>(
                std::count_if(artifacts.begin(), artifacts.end(), [](const auto& a) { return a.parse_ok; }));
        return fraction;
    }

    MetricFraction execution_rate(std::span<const TestSuiteArtifact> artifacts) {
        MetricFraction fraction{};
        for (const auto& artifact : artifacts) {
            fraction.denominator += charged_cases(artifact);
            for (const auto& c : artifact.cases) {
                if (c.status != CaseStatus::error) {
                    ++fraction.numerator;
                }
            }
        }
        return fraction;
    }

    MetricFraction case_pass_rate(std::span<const TestSuiteArtifact> artifacts) {
        MetricFraction fraction{};
        for (const auto& artifact : artifacts) {
            fraction.denominator += charged_cases(artifact);
            for (const auto& c : artifact.cases) {
                if (c.status == CaseStatus::pass) {
                    ++fraction.numerator;
                }
            }
        }
        return fraction;
    }

    MetricFraction suite_pass_rate(std::span<const TestSuiteArtifact> artifacts) {
        MetricFraction fraction{};
        fraction.denominator = artifacts.size();
        for (const auto& artifact : artifacts) {
            if (artifact.parse_ok && !artifact.cases.empty() && all_pass(artifact)) {
                ++fraction.numerator;
            }
        }
        return fraction;
    }

    CoverageAggregate aggregate_coverage(std::span<const TestSuiteArtifact> artifacts) {
        CoverageAggregate aggregate{};
        bool any_record = false;
        std::vector<double> lines{};
        std::vector<double> branches{};
        for (const auto& artifact : artifacts) {
            if (artifact.coverage_unavailable) {
                continue;
            }
            if (artifact.coverage) {
                any_record = true;
                lines.push_back(artifact.coverage->line_pct);
                branches.push_back(artifact.coverage->branch_pct);
                if (artifact.coverage->zero_branch_denominator) {
                    ++aggregate.zero_branch_samples;
                }
            }
            else {
                lines.push_back(0.0);
                branches.push_back(0.0);
            }
        }
        if (!any_record) {
            aggregate.zero_branch_samples = 0;
            return aggregate;
        }
        // Summing in sorted order keeps the mean independent of record order.
        auto mean = [](std::vector<double>& values) {
            std::sort(values.begin(), values.end());
            double sum = 0.0;
            for (double v : values) {
                sum += v;
            }
            return sum / static_cast<double>(values.size());
        };
        aggregate.samples = lines.size();
        aggregate.line_pct = mean(lines);
        aggregate.branch_pct = mean(branches);
        return aggregate;
    }

    std::string_view to_string(ReportScope scope) {
        switch (scope) {
            case ReportScope::overall:
                return "overall";
            case ReportScope::dependent_only:
                return "dependent_only";
            case ReportScope::independent_only:
                return "independent_only";
        }
        return "overall";
    }

    ReportScope parse_report_scope(std::string_view text) {
        for (auto scope : {ReportScope::overall, ReportScope::dependent_only, ReportScope::independent_only}) {
            if (to_string(scope) == text) {
                return scope;
            }
        }
        throw std::invalid_argument(fmt::format("unknown report scope '{}'", text));
    }

    bool in_scope(const TestSuiteArtifact& artifact, ReportScope scope) {
        switch (scope) {
            case ReportScope::overall:
                return true;
            case ReportScope::dependent_only:
                return artifact.label == Label::dependent;
            case ReportScope::independent_only:
                return artifact.label == Label::independent;
        }
        return false;
    }

    AggregateReport aggregate(std::span<const TestSuiteArtifact> artifacts, ReportScope scope) {
        std::vector<TestSuiteArtifact> selected{};
        for (const auto& artifact : artifacts) {
            if (in_scope(artifact, scope)) {
                selected.push_back(artifact);
            }
        }
        AggregateReport report{};
        report.scope = scope;
        report.pr = parse_rate(selected);
        report.ex = execution_rate(selected);
        report.caseps = case_pass_rate(selected);
        report.suiteps = suite_pass_rate(selected);
        report.coverage = aggregate_coverage(selected);
        report.n_suites = selected.size();
        report.n_cases = report.ex.denominator;
        return report;
    }

    std::vector<AggregateReport> build_reports(std::span<const TestSuiteArtifact> artifacts) {
        return {aggregate(artifacts, ReportScope::overall), aggregate(artifacts, ReportScope::dependent_only),
                aggregate(artifacts, ReportScope::independent_only)};
    }

    std::string format_percent(const MetricFraction& fraction) {
        if (fraction.denominator == 0) {
            return "n/a";
        }
        using wide = unsigned __int128;
        auto num = static_cast<wide>(fraction.numerator) * 10000U;
        auto den = static_cast<wide>(fraction.denominator);
        auto hundredths = static_cast<std::uint64_t>((2 * num + den) / (2 * den));
        return fmt::format("{}.{:02}", hundredths / 100, hundredths % 100);
    }

    std::string format_percent(std::optional<double> value) {
        if (!value) {
            return "n/a";
        }
        // Tolerance absorbs binary representation error at exact .xx5 ties.
        auto hundredths = static_cast<std::int64_t>(std::floor(*value * 100.0 + 0.5 + 1e-7));
        auto sign = hundredths < 0 ? "-" : "";
        auto magnitude = hundredths < 0 ? -hundredths : hundredths;
        return fmt::format("{}{}.{:02}", sign, magnitude / 100, magnitude % 100);
    }

    ReportFormat parse_report_format(std::string_view text) {
        if (text == "json") {
            return ReportFormat::json;
        }
        if (text == "csv") {
            return ReportFormat::csv;
        }
        if (text == "markdown" || text == "md") {
            return ReportFormat::markdown;
        }
        throw std::invalid_argument(fmt::format("unknown report format '{}'", text));
    }

    std::string emit_report(const ReportDocument& document, ReportFormat format) {
        switch (format) {
            case ReportFormat::json: {
                json scopes = json::object();
                for (const auto& report : document.reports) {
                    scopes[std::string{to_string(report.scope)}] = json{
                            {"pr", fraction_json(report.pr)},
                            {"ex", fraction_json(report.ex)},
                            {"caseps", fraction_json(report.caseps)},
                            {"suiteps", fraction_json(report.suiteps)},
                            {"lcov_pct", optional_json(report.coverage.line_pct)},
                            {"bcov_pct", optional_json(report.coverage.branch_pct)},
                            {"coverage_samples", report.coverage.samples},
                            {"zero_branch_samples", report.coverage.zero_branch_samples},
                            {"n_suites", report.n_suites},
                            {"n_cases", report.n_cases},
                    };
                }
                json doc{
                        {"samples",
                         {{"total", document.samples_total},
                          {"skipped", document.samples_skipped},
                          {"evaluated", document.samples_total - document.samples_skipped}}},
                        {"scopes", std::move(scopes)},
                };
                return doc.dump(2) + "\n";
            }
            case ReportFormat::csv: {
                std::string out{"scope,metric,value,numerator,denominator\n"};
                for (const auto& report : document.reports) {
                    for (const auto& row : metric_rows) {
                        if (const auto* fraction = fraction_of(report, row.key)) {
                            out += fmt::format("{},{},{},{},{}\n", to_string(report.scope), row.key,
                                               format_percent(*fraction), fraction->numerator, fraction->denominator);
                        }
                        else {
                            out += fmt::format("{},{},{},,\n", to_string(report.scope), row.key,
                                               format_percent(coverage_of(report, row.key)));
                        }
                    }
                }
                return out;
            }
            case ReportFormat::markdown: {
                const auto* overall = find_scope(document, ReportScope::overall);
                const auto* dependent = find_scope(document, ReportScope::dependent_only);
                // A single-scope document (evaluate --scope) has nothing to parenthesize.
                const auto* single = document.reports.size() == 1 ? &document.reports.front() : nullptr;
                std::string header{"| Approach |"};
                std::string rule{"|---|"};
                std::string line = fmt::format("| {} |", document.approach);
                for (const auto& row : metric_rows) {
                    header += fmt::format(" {} |", row.heading);
                    rule += "---|";
                    if (single != nullptr) {
                        line += fmt::format(" {} |", with_percent_sign(cell(single, row.key)));
                    }
                    else {
                        line += fmt::format(" {} ({}) |", with_percent_sign(cell(overall, row.key)),
                                            with_percent_sign(cell(dependent, row.key)));
                    }
                }
                auto note = single != nullptr
                                    ? fmt::format("Scope: {}.", to_string(single->scope))
                                    : std::string{"Parenthesized values cover fixture-dependent samples only."};
                return fmt::format("{}\n{}\n{}\n\n{} Samples: {} total, {} skipped.\n", header, rule, line, note,
                                   document.samples_total, document.samples_skipped);
            }
        }
        throw std::invalid_argument("unknown report format");
    }

}  // namespace fixturegen
