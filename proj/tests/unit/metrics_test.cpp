// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/metrics.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace fixturegen {
    namespace {

        TestSuiteArtifact suite(std::vector<CaseStatus> statuses, Label label = Label::dependent) {
            TestSuiteArtifact artifact{};
            artifact.label = label;
            artifact.parse_ok = true;
            for (std::size_t i = 0; i < statuses.size(); ++i) {
                artifact.cases.push_back({"t" + std::to_string(i), statuses[i], ""});
            }
            return artifact;
        }

        TestSuiteArtifact unparseable(int requested = 5, Label label = Label::dependent) {
            TestSuiteArtifact artifact{};
            artifact.label = label;
            artifact.parse_ok = false;
            artifact.cases_requested = requested;
            return artifact;
        }

        constexpr auto P = CaseStatus::pass;
        constexpr auto F = CaseStatus::fail;
        constexpr auto E = CaseStatus::error;

        TEST(Metrics, ParseRate) {
            std::vector<TestSuiteArtifact> a{suite({P}), suite({P}), suite({F}), unparseable()};
            EXPECT_EQ(parse_rate(a), (MetricFraction{3, 4}));
            EXPECT_EQ(format_percent(parse_rate(a)), "75.00");
            EXPECT_FALSE(parse_rate({}).percent().has_value());
        }

        TEST(Metrics, ExecutionRateCountsFailuresAsExecuted) {
            std::vector<TestSuiteArtifact> a{suite({P, P, P, F, E})};
            EXPECT_EQ(execution_rate(a), (MetricFraction{4, 5}));
            EXPECT_DOUBLE_EQ(*execution_rate(a).percent(), 80.0);
            std::vector<TestSuiteArtifact> errors{suite({E, E, E, E, E})};
            EXPECT_DOUBLE_EQ(*execution_rate(errors).percent(), 0.0);
        }

        TEST(Metrics, CaseAndSuitePassRates) {
            std::vector<TestSuiteArtifact> a{suite({P, P, P, P, P}), suite({P, P, P, F, E})};
            EXPECT_EQ(case_pass_rate(a), (MetricFraction{8, 10}));
            EXPECT_DOUBLE_EQ(*case_pass_rate(a).percent(), 80.0);
            EXPECT_EQ(suite_pass_rate(a), (MetricFraction{1, 2}));
            EXPECT_DOUBLE_EQ(*suite_pass_rate(a).percent(), 50.0);
        }

        TEST(Metrics, BrokenSuitesChargeRequestedCases) {
            std::vector<TestSuiteArtifact> a{suite({P, P}), unparseable(5)};
            EXPECT_EQ(execution_rate(a), (MetricFraction{2, 7}));
            EXPECT_EQ(suite_pass_rate(a), (MetricFraction{1, 2}));

            auto empty = suite({});
            EXPECT_EQ(charged_cases(empty), 5U);
            EXPECT_EQ(suite_pass_rate(std::vector{empty}), (MetricFraction{0, 1}));

            auto crashed = suite({});
            crashed.load_error = "ImportError";
            crashed.cases_requested = 3;
            EXPECT_EQ(charged_cases(crashed), 3U);
        }

        TEST(Metrics, RandomTablesMatchRecount) {
            std::mt19937 rng{7};
            for (int round = 0; round < 200; ++round) {
                auto rows = testing::random_table(rng);
                auto artifacts = testing::to_artifacts(rows);
                for (std::optional<Label> only : {std::optional<Label>{}, std::optional{Label::dependent},
                                                  std::optional{Label::independent}}) {
                    auto expect = testing::recount(rows, only);
                    auto scope = !only                        ? ReportScope::overall
                                 : *only == Label::dependent ? ReportScope::dependent_only
                                                             : ReportScope::independent_only;
                    auto report = aggregate(artifacts, scope);
                    ASSERT_EQ(report.pr, (MetricFraction{expect.parsed, expect.suites}));
                    ASSERT_EQ(report.ex, (MetricFraction{expect.executed, expect.charged}));
                    ASSERT_EQ(report.caseps, (MetricFraction{expect.passed, expect.charged}));
                    ASSERT_EQ(report.suiteps, (MetricFraction{expect.all_pass_suites, expect.suites}));
                }
            }
        }

        TEST(Metrics, InvariantsOnRandomTables) {
            std::mt19937 rng{11};
            for (int round = 0; round < 200; ++round) {
                auto artifacts = testing::to_artifacts(testing::random_table(rng));
                auto reports = build_reports(artifacts);
                ASSERT_EQ(reports.size(), 3U);
                for (const auto& r : reports) {
                    EXPECT_LE(r.caseps.numerator, r.ex.numerator);
                    EXPECT_EQ(r.caseps.denominator, r.ex.denominator);
                }
                const auto& all = reports[0];
                const auto& dep = reports[1];
                const auto& ind = reports[2];
                for (auto field : {&AggregateReport::pr, &AggregateReport::ex, &AggregateReport::caseps,
                                   &AggregateReport::suiteps}) {
                    EXPECT_EQ((all.*field).numerator, (dep.*field).numerator + (ind.*field).numerator);
                    EXPECT_EQ((all.*field).denominator, (dep.*field).denominator + (ind.*field).denominator);
                }
            }
        }

        TEST(FormatPercent, HalfUpExact) {
            EXPECT_EQ(format_percent(MetricFraction{1, 800}), "0.13");
            EXPECT_EQ(format_percent(MetricFraction{1, 3}), "33.33");
            EXPECT_EQ(format_percent(MetricFraction{2, 3}), "66.67");
            EXPECT_EQ(format_percent(MetricFraction{1, 1}), "100.00");
            EXPECT_EQ(format_percent(MetricFraction{0, 7}), "0.00");
            EXPECT_EQ(format_percent(MetricFraction{0, 0}), "n/a");
            EXPECT_EQ(format_percent(MetricFraction{1, 80000}), "0.00");
            EXPECT_EQ(format_percent(MetricFraction{1, 40000}), "0.00");
            EXPECT_EQ(format_percent(MetricFraction{1, 20000}), "0.01");  // exactly 0.005
        }

        TEST(FormatPercent, Doubles) {
            EXPECT_EQ(format_percent(std::optional<double>{12.345}), "12.35");
            EXPECT_EQ(format_percent(std::optional<double>{0.125}), "0.13");
            EXPECT_EQ(format_percent(std::optional<double>{99.994}), "99.99");
            EXPECT_EQ(format_percent(std::optional<double>{}), "n/a");
        }

        TEST(Coverage, UnweightedMean) {
            auto a = suite({P});
            a.coverage = CoverageRecord{40.0, 30.0, 10, 2, false};
            auto b = suite({P});
            b.coverage = CoverageRecord{60.0, 50.0, 10, 2, false};
            auto agg = aggregate_coverage(std::vector{a, b});
            EXPECT_DOUBLE_EQ(*agg.line_pct, 50.0);
            EXPECT_DOUBLE_EQ(*agg.branch_pct, 40.0);
            EXPECT_EQ(agg.samples, 2U);
        }

        TEST(Coverage, ZeroBranchAndMissingRecords) {
            auto flat = suite({P});
            flat.coverage = CoverageRecord{90.0, 100.0, 10, 0, true};
            auto agg = aggregate_coverage(std::vector{flat});
            EXPECT_DOUBLE_EQ(*agg.branch_pct, 100.0);
            EXPECT_EQ(agg.zero_branch_samples, 1U);

            // 3-sample mix: (90 + 30 + 0) / 3 lines, (100 + 60 + 0) / 3 branches.
            auto partial = suite({P});
            partial.coverage = CoverageRecord{30.0, 60.0, 10, 5, false};
            auto broken = unparseable();
            auto unavailable = suite({P});
            unavailable.coverage_unavailable = true;
            agg = aggregate_coverage(std::vector{flat, partial, broken, unavailable});
            EXPECT_EQ(agg.samples, 3U);
            EXPECT_DOUBLE_EQ(*agg.line_pct, 40.0);
            EXPECT_NEAR(*agg.branch_pct, 160.0 / 3.0, 1e-12);

            auto none = aggregate_coverage(std::vector{broken, unavailable});
            EXPECT_FALSE(none.line_pct.has_value());
            EXPECT_FALSE(none.branch_pct.has_value());
        }

        TEST(Coverage, OrderIndependent) {
            std::vector<TestSuiteArtifact> a{};
            for (double v : {12.3, 45.6, 78.9, 0.1, 33.3}) {
                auto s = suite({P});
                s.coverage = CoverageRecord{v, v / 2, 10, 2, false};
                a.push_back(s);
            }
            auto forward = aggregate_coverage(a);
            std::reverse(a.begin(), a.end());
            auto backward = aggregate_coverage(a);
            EXPECT_EQ(*forward.line_pct, *backward.line_pct);
            EXPECT_EQ(*forward.branch_pct, *backward.branch_pct);
        }

        std::vector<TestSuiteArtifact> table_fixture() {
            // dependent: 7/10 suites pass; independent: 3/10 pass
            std::vector<TestSuiteArtifact> a{};
            for (int i = 0; i < 10; ++i) {
                a.push_back(suite({P, i < 7 ? P : F}, Label::dependent));
                a.push_back(suite({P, i < 3 ? P : E}, Label::independent));
            }
            return a;
        }

        TEST(Report, MarkdownCells) {
            ReportDocument doc{build_reports(table_fixture()), 20, 0};
            auto md = emit_report(doc, ReportFormat::markdown);
            EXPECT_NE(md.find("| Approach | PR | EX | CasePS | SuitePS | Line Cov. | Branch Cov. |"), std::string::npos);
            // SuitePS overall 10/20, dependent 7/10
            EXPECT_NE(md.find("| 50.00% (70.00%) |"), std::string::npos);
            EXPECT_NE(md.find("| 100.00% (100.00%) |"), std::string::npos);
            EXPECT_NE(md.find("Samples: 20 total, 0 skipped."), std::string::npos);
        }

        TEST(Report, SingleScopeMarkdownHasPlainCells) {
            ReportDocument doc{{aggregate(table_fixture(), ReportScope::independent_only)}, 20, 0};
            auto md = emit_report(doc, ReportFormat::markdown);
            EXPECT_NE(md.find("| 30.00% |"), std::string::npos);
            EXPECT_NE(md.find("Scope: independent_only."), std::string::npos);
            EXPECT_EQ(md.find("("), std::string::npos);
        }

        TEST(Report, CsvHasOneRowPerScopeAndMetric) {
            ReportDocument doc{build_reports(table_fixture()), 20, 0};
            auto csv = emit_report(doc, ReportFormat::csv);
            std::istringstream in{csv};
            std::string line{};
            std::getline(in, line);
            EXPECT_EQ(line, "scope,metric,value,numerator,denominator");
            std::size_t rows = 0;
            while (std::getline(in, line)) {
                ++rows;
            }
            EXPECT_EQ(rows, 3U * 6U);
            EXPECT_NE(csv.find("dependent_only,suiteps,70.00,7,10\n"), std::string::npos);
            EXPECT_NE(csv.find("overall,lcov,n/a,,\n"), std::string::npos);
        }

        TEST(Report, JsonCarriesAllScopes) {
            ReportDocument doc{build_reports(table_fixture()), 22, 2};
            auto parsed = json::parse(emit_report(doc, ReportFormat::json));
            EXPECT_EQ(parsed["samples"]["evaluated"], 20);
            EXPECT_EQ(parsed["scopes"]["dependent_only"]["suiteps"]["numerator"], 7);
            EXPECT_EQ(parsed["scopes"]["overall"]["suiteps"]["display"], "50.00");
            EXPECT_TRUE(parsed["scopes"]["overall"]["lcov_pct"].is_null());
            EXPECT_EQ(parsed["scopes"].size(), 3U);
            EXPECT_EQ(emit_report(doc, ReportFormat::json), emit_report(doc, ReportFormat::json));
        }

        TEST(Report, FormatAndScopeNames) {
            EXPECT_EQ(parse_report_format("md"), ReportFormat::markdown);
            EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
            EXPECT_THROW(parse_report_format("xml"), std::invalid_argument);
            EXPECT_EQ(parse_report_scope("dependent_only"), ReportScope::dependent_only);
            EXPECT_THROW(parse_report_scope("all"), std::invalid_argument);
        }

    }  // namespace
}  // namespace fixturegen
