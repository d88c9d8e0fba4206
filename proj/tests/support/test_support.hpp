// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/corpus.hpp"
#include "fixturegen/llm_gateway.hpp"
#include "fixturegen/pipeline.hpp"
#include "fixturegen/sandbox.hpp"
#include "fixturegen/testgen.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen::testing {

    std::filesystem::path source_dir();
    std::filesystem::path shim_path();
    std::filesystem::path mini_dir();
    std::filesystem::path python();
    std::filesystem::path cli_path();

    std::string read_file(const std::filesystem::path& path);
    void write_file(const std::filesystem::path& path, std::string_view content);

    SandboxConfig sandbox_config(std::chrono::seconds timeout = std::chrono::seconds{20});

    FocalSample make_sample(std::string id, std::string base_name, std::string code,
                            Label label = Label::unlabeled);

    /// Provider that answers through a callback and remembers every prompt.
    class CallbackProvider final : public ChatProvider {
      public:
        using Handler = std::function<std::string(const std::string& prompt)>;

        explicit CallbackProvider(Handler handler);

        ChatResponse send(const ChatRequest& request) override;
        std::string id() const override { return "callback"; }

        std::vector<std::string> prompts() const;
        std::size_t calls() const { return calls_.load(); }

      private:
        Handler handler_;
        mutable std::mutex mutex_{};
        std::vector<std::string> prompts_{};
        std::atomic<std::size_t> calls_{0};
    };

    /// Direct ChatClient over a provider, without any cassette.
    class ProviderClient final : public ChatClient {
      public:
        explicit ProviderClient(std::shared_ptr<ChatProvider> provider) : provider_(std::move(provider)) {}
        ChatResponse complete(const ChatRequest& request) override { return provider_->send(request); }

      private:
        std::shared_ptr<ChatProvider> provider_;
    };

    /// Fails the test run if anything asks it for a reply.
    class ForbiddenProvider final : public ChatProvider {
      public:
        ChatResponse send(const ChatRequest& request) override;
        std::string id() const override { return "forbidden"; }
        std::size_t calls() const { return calls_.load(); }

      private:
        std::atomic<std::size_t> calls_{0};
    };

    /// Replies that never work: a failing one-liner, a raising snippet, and
    /// a suite whose only case fails.
    std::string always_fail_reply(const std::string& prompt);

    std::string fenced(std::string_view code);

    /// One row of a synthetic result table. Only suites that ran have statuses.
    struct SuiteRow {
        enum class Kind { unparseable, load_error, empty, ran };
        Kind kind{Kind::ran};
        Label label{Label::dependent};
        int requested{5};
        std::vector<CaseStatus> statuses{};
    };

    /// Up to 20 suites with up to 10 cases each.
    std::vector<SuiteRow> random_table(std::mt19937& rng);

    std::vector<TestSuiteArtifact> to_artifacts(const std::vector<SuiteRow>& rows);

    struct Recount {
        std::uint64_t parsed{}, suites{};
        std::uint64_t executed{}, passed{}, charged{};
        std::uint64_t all_pass_suites{};
    };

    /// Straight count over the rows, optionally restricted to one label.
    Recount recount(const std::vector<SuiteRow>& rows, std::optional<Label> only = std::nullopt);

    /// RunConfig for the bundled mini corpus replaying the shipped cassette.
    RunConfig mini_replay_config(const std::filesystem::path& out_dir);

}  // namespace fixturegen::testing
