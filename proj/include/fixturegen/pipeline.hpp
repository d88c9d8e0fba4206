// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/classifier.hpp"
#include "fixturegen/corpus.hpp"
#include "fixturegen/invocation.hpp"
#include "fixturegen/jsonl.hpp"
#include "fixturegen/llm_gateway.hpp"
#include "fixturegen/metrics.hpp"
#include "fixturegen/sandbox.hpp"
#include "fixturegen/testgen.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    enum class ProviderKind { http, script };

    std::string_view to_string(ProviderKind kind);
    ProviderKind parse_provider_kind(std::string_view text);

    struct RunConfig {
        std::filesystem::path corpus_path{};
        std::filesystem::path out_dir{"out"};

        ProviderKind provider{ProviderKind::http};
        ProviderConfig http{};
        std::filesystem::path script_path{};
        CassetteMode cassette_mode{CassetteMode::off};
        std::filesystem::path cassette_path{};

        ClassifierMethod classification_method{ClassifierMethod::ibc};
        GenerationMode generation_mode{GenerationMode::fixturize};
        int max_eic_iters{3};
        bool eic_feedback{true};
        int cases_per_suite{default_cases_per_suite};
        bool drop_persistent_failures{false};
        bool collect_coverage{true};
        std::string external_hook{};

        std::filesystem::path interpreter{"python3"};
        std::chrono::seconds sandbox_timeout{30};
        std::size_t stream_cap{64 * 1024};
        std::string sandbox_proxy{};
        std::filesystem::path runner_shim{};

        std::size_t max_parallel{4};
    };

    /// Throws std::invalid_argument describing the first bad field.
    void validate(const RunConfig& config);

    /// Provider for the configured kind. In replay mode the provider refuses
    /// every request, so a cassette miss can never reach the network.
    std::shared_ptr<ChatProvider> make_provider(const RunConfig& config);

    inline constexpr std::string_view stage_ibc = "ibc";
    inline constexpr std::string_view stage_direct = "direct";
    inline constexpr std::string_view stage_eic = "eic";
    inline constexpr std::string_view stage_utg = "utg";

    /// Counts every chat request by sample and stage, and appends one line
    /// per request to `audit.jsonl`.
    class AuditLog {
      public:
        explicit AuditLog(const std::filesystem::path& path);

        void record(std::string_view sample_id, std::string_view stage, const std::string* error);

        /// sample id -> stage -> requests
        std::map<std::string, std::map<std::string, std::size_t>> counts() const;
        json summary() const;

      private:
        JsonlAppender sink_;
        mutable std::mutex mutex_{};
        std::map<std::string, std::map<std::string, std::size_t>> counts_{};
    };

    /// Attributes requests from one pipeline stage of one sample to the audit log.
    class StageClient final : public ChatClient {
      public:
        StageClient(ChatClient& inner, AuditLog& audit, std::string sample_id, std::string_view stage);

        ChatResponse complete(const ChatRequest& request) override;

      private:
        ChatClient& inner_;
        AuditLog& audit_;
        std::string sample_id_;
        std::string stage_;
    };

    json to_json(const ClassificationOutcome& outcome, Label label);
    json to_json(const InvocationResult& result);

    inline constexpr std::string_view classifications_file = "classifications.jsonl";
    inline constexpr std::string_view invocations_file = "invocations.jsonl";
    inline constexpr std::string_view artifacts_file = "artifacts.jsonl";
    inline constexpr std::string_view audit_file = "audit.jsonl";
    inline constexpr std::string_view audit_summary_file = "audit_summary.json";
    inline constexpr std::string_view classification_report_file = "classification_report.json";

    struct ClassifyReport {
        std::size_t total{};
        std::size_t skipped{};
        std::optional<ClassificationScore> score{};
    };

    json to_json(const ClassifyReport& report);

    struct RunReport {
        ReportDocument document{};
        std::size_t resumed{};
    };

    /// Stage driver over one corpus and one output directory. Stage files are
    /// append-only; on a rerun the last record per sample wins and finished
    /// samples are not redone.
    class Pipeline {
      public:
        /// `provider` overrides make_provider(config).
        explicit Pipeline(RunConfig config, std::shared_ptr<ChatProvider> provider = nullptr);
        ~Pipeline();

        Pipeline(const Pipeline&) = delete;
        Pipeline& operator=(const Pipeline&) = delete;

        ClassifyReport classify();
        /// Classification, then the invocation loop for dependent samples.
        void invoke();
        /// Classification, routing, invocation, and suite generation.
        void generate();
        /// generate() followed by report files.
        RunReport run();

        const Corpus& corpus() const noexcept { return corpus_; }
        const AuditLog& audit() const noexcept { return *audit_; }
        std::size_t provider_calls() const noexcept;

      private:
        struct State;

        enum class Depth { classify, invoke, generate };

        void process_all(Depth depth);
        void process_sample(const FocalSample& sample, Depth depth);
        std::optional<ClassificationOutcome> classification_for(const FocalSample& sample);
        std::optional<InvocationResult> invocation_for(const FocalSample& sample);
        void write_audit_summary() const;

        RunConfig config_;
        Corpus corpus_{};
        std::shared_ptr<ChatProvider> provider_;
        std::unique_ptr<LlmGateway> gateway_;
        std::unique_ptr<Sandbox> sandbox_;
        std::unique_ptr<SuiteRunner> runner_;
        std::unique_ptr<AuditLog> audit_;
        std::unique_ptr<State> state_;
    };

    /// Recomputes reports from `artifacts.jsonl` alone: no chat requests and
    /// no executions. A malformed line is a JsonlError naming it.
    ReportDocument evaluate_artifacts(const std::filesystem::path& out_dir);

    /// Writes report.json, report.csv, and report.md.
    void write_reports(const std::filesystem::path& out_dir, const ReportDocument& document);

}  // namespace fixturegen
