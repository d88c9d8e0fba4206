// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/classifier.hpp"
#include "fixturegen/corpus.hpp"
#include "fixturegen/jsonl.hpp"
#include "fixturegen/llm_gateway.hpp"
#include "fixturegen/runner_client.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    enum class SuiteOrigin { fixturize, direct_baseline, routed_external };
    enum class GenerationMode { fixturize, direct_baseline };

    std::string_view to_string(SuiteOrigin origin);
    SuiteOrigin parse_suite_origin(std::string_view text);
    std::string_view to_string(GenerationMode mode);
    GenerationMode parse_generation_mode(std::string_view text);

    inline constexpr int default_cases_per_suite = 5;

    struct TestSuiteArtifact {
        std::string sample_id{};
        Label label{Label::unlabeled};
        std::string base_name{};
        std::string suite_code{};
        bool exemplar_used{false};
        bool repair_applied{false};
        bool parse_ok{false};
        std::vector<CaseRecord> cases{};
        /// Parse or import failure of the final suite, or a failed external hook.
        std::optional<std::string> load_error{};
        SuiteOrigin origin{SuiteOrigin::fixturize};
        int cases_requested{default_cases_per_suite};
        /// Names of cases removed under drop_persistent_failures.
        std::vector<std::string> dropped_cases{};
        std::optional<CoverageRecord> coverage{};
        bool coverage_unavailable{false};
    };

    json to_json(const TestSuiteArtifact& artifact);
    TestSuiteArtifact artifact_from_json(const json& record);

    struct GenerationConfig {
        int cases_per_suite{default_cases_per_suite};
        bool drop_persistent_failures{false};
        /// Bytes of aggregated failure text quoted in the repair prompt.
        std::size_t error_cap{2000};
        bool collect_coverage{true};
    };

    ChatRequest build_generation_prompt(const FocalSample& sample, const std::optional<std::string>& exemplar,
                                        int cases_per_suite = default_cases_per_suite);

    /// The baseline prompt: no exemplar and no fixture instruction.
    ChatRequest build_direct_prompt(const FocalSample& sample, int cases_per_suite = default_cases_per_suite);

    ChatRequest build_repair_prompt(std::string_view function_code, std::string_view test_code,
                                    std::string_view error_message);

    /// Failure text for the repair prompt: the load error if the suite never
    /// ran, otherwise one "name: message" line per non-passing case.
    std::string aggregate_failures(const TestSuiteArtifact& artifact, std::size_t cap);

    /// Generate, run, and repair at most once: one or two chat requests.
    /// With an exemplar the prompt shows it; mode=direct_baseline ignores it.
    /// LLM errors propagate.
    TestSuiteArtifact generate_suite(const FocalSample& sample, const std::optional<std::string>& exemplar,
                                     GenerationMode mode, ChatClient& client, const SuiteRunner& runner,
                                     const GenerationConfig& config = {});

    struct RouteConfig {
        GenerationMode mode{GenerationMode::fixturize};
        /// Shell command with `{focal}` and `{out}` placeholders, used for
        /// independent samples when set.
        std::string external_hook{};
        std::chrono::seconds hook_timeout{300};
    };

    /// dependent: fixturize (or direct_baseline when that mode is forced);
    /// independent: routed_external when a hook is configured, else direct_baseline.
    SuiteOrigin route(Prediction prediction, const RouteConfig& config);

    /// Quotes a path for /bin/sh.
    std::string shell_quote(std::string_view text);

    /// Runs the external generator and ingests the suite it writes. A hook
    /// that fails or writes nothing yields an artifact with a load error.
    TestSuiteArtifact run_external_hook(const FocalSample& sample, const RouteConfig& route_config,
                                        const SuiteRunner& runner, const GenerationConfig& config = {});

    /// Writes `<dir>/<base>.py` and `<dir>/test_<base>.py`.
    void write_suite_files(const std::filesystem::path& dir, const FocalSample& sample,
                           const TestSuiteArtifact& artifact);

}  // namespace fixturegen
