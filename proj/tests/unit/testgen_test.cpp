// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/testgen.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <atomic>

namespace fixturegen {
    namespace {

        using testing::CallbackProvider;
        using testing::fenced;
        using testing::make_sample;
        using testing::ProviderClient;

        constexpr std::string_view clamp_code =
                "def clamp(x, lo, hi):\n    if x < lo:\n        return lo\n    if x > hi:\n        return hi\n    return x\n";

        std::string suite_with(const std::vector<std::string>& bodies) {
            std::string suite = "import unittest\nfrom clamp import clamp\n\n\nclass TestClamp(unittest.TestCase):\n";
            for (std::size_t i = 0; i < bodies.size(); ++i) {
                suite += "    def test_" + std::to_string(i) + "(self):\n        " + bodies[i] + "\n";
            }
            return suite;
        }

        const std::string good_suite = suite_with({"self.assertEqual(clamp(5, 0, 10), 5)",
                                                   "self.assertEqual(clamp(-1, 0, 10), 0)",
                                                   "self.assertEqual(clamp(11, 0, 10), 10)"});
        const std::string one_bad_suite =
                suite_with({"self.assertEqual(clamp(5, 0, 10), 5)", "self.assertEqual(clamp(-1, 0, 10), -1)"});

        class GenerateTest : public ::testing::Test {
          protected:
            TestSuiteArtifact generate(std::vector<std::string> replies, GenerationConfig config = {},
                                       GenerationMode mode = GenerationMode::fixturize,
                                       std::optional<std::string> exemplar = std::string{"print(clamp(1, 0, 2))"}) {
                auto index = std::make_shared<std::atomic<std::size_t>>(0);
                provider_ = std::make_shared<CallbackProvider>([replies, index](const std::string&) {
                    auto i = (*index)++;
                    return fenced(replies.at(std::min(i, replies.size() - 1)));
                });
                ProviderClient client{provider_};
                return generate_suite(sample_, exemplar, mode, client, runner_, config);
            }

            FocalSample sample_{make_sample("c", "clamp", std::string{clamp_code}, Label::dependent)};
            Sandbox sandbox_{testing::sandbox_config(std::chrono::seconds{60})};
            SuiteRunner runner_{sandbox_, testing::shim_path()};
            std::shared_ptr<CallbackProvider> provider_{};
        };

        TEST(GenerationPrompt, WithExemplar) {
            auto sample = make_sample("c", "clamp", std::string{clamp_code});
            auto text = build_generation_prompt(sample, std::string{"print(clamp(1, 0, 2))"}, 5).messages.at(0).text;
            EXPECT_TRUE(text.starts_with("Based on the following code, please use 'unittest' to generate a Python "
                                         "test suite that includes 5 test cases."));
            EXPECT_NE(text.find("'from clamp import <func1>, <func2>"), std::string::npos);
            EXPECT_NE(text.find("code: " + std::string{clamp_code.substr(0, clamp_code.size() - 1)}), std::string::npos);
            EXPECT_NE(text.find("Here is its invocation example: \nprint(clamp(1, 0, 2))\n"), std::string::npos);
            EXPECT_TRUE(text.ends_with("This can help you generate the test fixture section."));
        }

        TEST(GenerationPrompt, WithoutExemplarAndDirect) {
            auto sample = make_sample("c", "clamp", std::string{clamp_code});
            auto fixture = build_generation_prompt(sample, std::nullopt, 7).messages.at(0).text;
            auto direct = build_direct_prompt(sample, 7).messages.at(0).text;
            EXPECT_NE(fixture.find("includes 7 test cases"), std::string::npos);
            EXPECT_EQ(fixture, direct + "\nEnsure the presence of the test fixture in the test suite.");
            EXPECT_EQ(direct.find("fixture"), std::string::npos);
            EXPECT_THROW(build_direct_prompt(sample, 0), std::invalid_argument);
        }

        TEST(RepairPrompt, CarriesCodeSuiteAndError) {
            auto text = build_repair_prompt(clamp_code, good_suite, "test_0: AssertionError: 1 != 2").messages.at(0).text;
            EXPECT_TRUE(text.starts_with("The following Python test code failed to run."));
            EXPECT_NE(text.find("Original function code:\n" + std::string{clamp_code.substr(0, clamp_code.size() - 1)}),
                      std::string::npos);
            EXPECT_NE(text.find("Original test code:\n" + good_suite.substr(0, good_suite.size() - 1)), std::string::npos);
            EXPECT_NE(text.find("error message:\ntest_0: AssertionError: 1 != 2\n"), std::string::npos);
        }

        TEST(AggregateFailures, Shapes) {
            TestSuiteArtifact artifact{};
            artifact.cases = {{"t.a", CaseStatus::pass, ""},
                              {"t.b", CaseStatus::fail, "AssertionError: 1 != 2\n"},
                              {"t.c", CaseStatus::error, "NameError: x"}};
            EXPECT_EQ(aggregate_failures(artifact, 2000), "t.b: AssertionError: 1 != 2\nt.c: NameError: x");
            EXPECT_EQ(aggregate_failures(artifact, 5), "t.b: ...[truncated]");
            artifact.load_error = "SyntaxError: bad";
            EXPECT_EQ(aggregate_failures(artifact, 2000), "SyntaxError: bad");
            artifact.load_error.reset();
            artifact.cases.clear();
            EXPECT_EQ(aggregate_failures(artifact, 2000), "No test cases were found in the test code.");
        }

        TEST_F(GenerateTest, PassingSuiteUsesOneCall) {
            auto artifact = generate({good_suite});
            EXPECT_EQ(provider_->calls(), 1U);
            EXPECT_FALSE(artifact.repair_applied);
            EXPECT_TRUE(artifact.parse_ok);
            EXPECT_TRUE(artifact.exemplar_used);
            EXPECT_EQ(artifact.origin, SuiteOrigin::fixturize);
            ASSERT_EQ(artifact.cases.size(), 3U);
            for (const auto& c : artifact.cases) {
                EXPECT_EQ(c.status, CaseStatus::pass);
            }
            if (!artifact.coverage_unavailable) {
                ASSERT_TRUE(artifact.coverage);
                EXPECT_NEAR(artifact.coverage->line_pct, 100.0, 1e-9);
                EXPECT_NEAR(artifact.coverage->branch_pct, 100.0, 1e-9);
            }
        }

        TEST_F(GenerateTest, FailingCaseTriggersSingleRepair) {
            auto artifact = generate({one_bad_suite, good_suite});
            EXPECT_EQ(provider_->calls(), 2U);
            EXPECT_TRUE(artifact.repair_applied);
            EXPECT_EQ(artifact.suite_code, good_suite.substr(0, good_suite.size() - 1));
            auto prompts = provider_->prompts();
            EXPECT_NE(prompts[1].find("Original test code:\n" + one_bad_suite.substr(0, one_bad_suite.size() - 1)),
                      std::string::npos);
            EXPECT_NE(prompts[1].find("AssertionError"), std::string::npos);
        }

        TEST_F(GenerateTest, NeverMoreThanTwoCalls) {
            auto artifact = generate({one_bad_suite});
            EXPECT_EQ(provider_->calls(), 2U);
            EXPECT_TRUE(artifact.repair_applied);
            ASSERT_EQ(artifact.cases.size(), 2U);
            EXPECT_TRUE(artifact.dropped_cases.empty());
        }

        TEST_F(GenerateTest, UnparseableSuiteIsRepaired) {
            auto artifact = generate({"def broken(:\n    pass", "def broken(:\n    pass"});
            EXPECT_EQ(provider_->calls(), 2U);
            EXPECT_FALSE(artifact.parse_ok);
            EXPECT_TRUE(artifact.cases.empty());
            EXPECT_FALSE(artifact.coverage.has_value());
            auto prompts = provider_->prompts();
            EXPECT_NE(prompts[1].find("SyntaxError"), std::string::npos);
        }

        TEST_F(GenerateTest, DropPersistentFailures) {
            GenerationConfig config{};
            config.drop_persistent_failures = true;
            auto artifact = generate({one_bad_suite}, config);
            ASSERT_EQ(artifact.cases.size(), 1U);
            EXPECT_EQ(artifact.cases[0].status, CaseStatus::pass);
            ASSERT_EQ(artifact.dropped_cases.size(), 1U);
            EXPECT_NE(artifact.dropped_cases[0].find("test_1"), std::string::npos);
        }

        TEST_F(GenerateTest, DirectBaselineIgnoresExemplar) {
            auto artifact = generate({good_suite}, {}, GenerationMode::direct_baseline);
            EXPECT_FALSE(artifact.exemplar_used);
            EXPECT_EQ(artifact.origin, SuiteOrigin::direct_baseline);
            EXPECT_EQ(provider_->prompts()[0].find("invocation example"), std::string::npos);
            EXPECT_EQ(provider_->prompts()[0].find("fixture"), std::string::npos);
        }

        TEST_F(GenerateTest, CoverageCanBeDisabled) {
            GenerationConfig config{};
            config.collect_coverage = false;
            auto artifact = generate({good_suite}, config);
            EXPECT_FALSE(artifact.coverage.has_value());
        }

        TEST(Route, Table) {
            RouteConfig config{};
            EXPECT_EQ(route(Prediction::dependent, config), SuiteOrigin::fixturize);
            EXPECT_EQ(route(Prediction::independent, config), SuiteOrigin::direct_baseline);
            config.external_hook = "true";
            EXPECT_EQ(route(Prediction::independent, config), SuiteOrigin::routed_external);
            config.mode = GenerationMode::direct_baseline;
            EXPECT_EQ(route(Prediction::dependent, config), SuiteOrigin::direct_baseline);
        }

        TEST(ShellQuote, SingleQuotes) {
            EXPECT_EQ(shell_quote("/tmp/a b"), "'/tmp/a b'");
            EXPECT_EQ(shell_quote("it's"), "'it'\\''s'");
        }

        class HookTest : public ::testing::Test {
          protected:
            FocalSample sample_{make_sample("c", "clamp", std::string{clamp_code}, Label::independent)};
            Sandbox sandbox_{testing::sandbox_config(std::chrono::seconds{60})};
            SuiteRunner runner_{sandbox_, testing::shim_path()};
        };

        TEST_F(HookTest, StubGeneratorSuiteIsIngested) {
            ScratchDir dir{};
            auto canned = dir.path() / "canned.py";
            testing::write_file(canned, good_suite);
            RouteConfig config{};
            config.external_hook = "test -f {focal} && cp " + shell_quote(canned.string()) + " {out}";
            auto artifact = run_external_hook(sample_, config, runner_);
            EXPECT_EQ(artifact.origin, SuiteOrigin::routed_external);
            EXPECT_TRUE(artifact.parse_ok);
            EXPECT_FALSE(artifact.load_error.has_value());
            EXPECT_EQ(artifact.cases.size(), 3U);
            EXPECT_FALSE(artifact.repair_applied);
        }

        TEST_F(HookTest, FailingGeneratorIsLoadError) {
            RouteConfig config{};
            config.external_hook = "echo 'cannot read {focal}' 1>&2; exit 4";
            auto artifact = run_external_hook(sample_, config, runner_);
            EXPECT_FALSE(artifact.parse_ok);
            ASSERT_TRUE(artifact.load_error.has_value());
            EXPECT_NE(artifact.load_error->find("status 4"), std::string::npos);
            EXPECT_NE(artifact.load_error->find("<workdir>/clamp.py"), std::string::npos);

            config.external_hook = "true";
            artifact = run_external_hook(sample_, config, runner_);
            EXPECT_EQ(artifact.load_error, "external generator wrote no suite file");
        }

        TEST(Artifact, JsonRoundTrip) {
            TestSuiteArtifact artifact{};
            artifact.sample_id = "x";
            artifact.label = Label::dependent;
            artifact.base_name = "m";
            artifact.suite_code = "import unittest\n";
            artifact.exemplar_used = true;
            artifact.repair_applied = true;
            artifact.parse_ok = true;
            artifact.cases = {{"t.a", CaseStatus::pass, ""}, {"t.b", CaseStatus::fail, "boom"}};
            artifact.origin = SuiteOrigin::routed_external;
            artifact.cases_requested = 4;
            artifact.dropped_cases = {"t.c"};
            artifact.coverage = CoverageRecord{80.0, 50.0, 10, 4, false};
            auto back = artifact_from_json(to_json(artifact));
            EXPECT_EQ(to_json(back), to_json(artifact));
            EXPECT_EQ(back.cases, artifact.cases);
            EXPECT_EQ(back.origin, SuiteOrigin::routed_external);
        }

        TEST(WriteSuiteFiles, SideBySide) {
            ScratchDir dir{};
            auto sample = make_sample("c", "clamp", std::string{clamp_code});
            TestSuiteArtifact artifact{};
            artifact.suite_code = good_suite;
            write_suite_files(dir.path() / "c", sample, artifact);
            EXPECT_EQ(testing::read_file(dir.path() / "c" / "clamp.py"), clamp_code);
            EXPECT_EQ(testing::read_file(dir.path() / "c" / "test_clamp.py"), good_suite);
        }

    }  // namespace
}  // namespace fixturegen
