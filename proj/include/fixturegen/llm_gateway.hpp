// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fixturegen {

    enum class Role { system, user };

    std::string_view to_string(Role role);

    struct ChatMessage {
        Role role{Role::user};
        std::string text{};
    };

    /// Decoding is greedy and single-candidate unless a caller says otherwise.
    struct ChatRequest {
        std::vector<ChatMessage> messages{};
        double temperature{0.0};
        int candidate_count{1};

        static ChatRequest from_user_text(std::string text);
    };

    struct ChatResponse {
        std::string text{};
        std::int64_t latency_ms{};
        std::string provider_id{};
    };

    class LlmError : public std::runtime_error {
      public:
        using std::runtime_error::runtime_error;
    };

    /// Network failure, timeout, or a non-retryable HTTP status.
    class TransportError : public LlmError {
      public:
        using LlmError::LlmError;
    };

    class ReplayMissError : public LlmError {
      public:
        explicit ReplayMissError(std::string fingerprint);
        const std::string& fingerprint() const noexcept { return fingerprint_; }

      private:
        std::string fingerprint_;
    };

    /// Anything that answers chat requests. Pipeline stages only see this.
    class ChatClient {
      public:
        virtual ~ChatClient() = default;
        virtual ChatResponse complete(const ChatRequest& request) = 0;
    };

    /// A backend that actually produces replies (HTTP endpoint, script, test double).
    class ChatProvider {
      public:
        virtual ~ChatProvider() = default;
        virtual ChatResponse send(const ChatRequest& request) = 0;
        virtual std::string id() const = 0;
    };

    struct ProviderConfig {
        std::string endpoint{"https://api.openai.com/v1/chat/completions"};
        std::string model{"gpt-4o"};
        /// Name of the environment variable holding the API key, never the key.
        std::string credential_env{"OPENAI_API_KEY"};
        std::chrono::seconds timeout{120};
        int max_retries{3};
        std::chrono::milliseconds retry_backoff{500};
    };

    /// OpenAI-compatible chat-completions endpoint.
    class HttpChatProvider final : public ChatProvider {
      public:
        explicit HttpChatProvider(ProviderConfig config);

        ChatResponse send(const ChatRequest& request) override;
        std::string id() const override { return config_.model; }

      private:
        ProviderConfig config_;
        std::string scheme_host_port_;
        std::string path_;
    };

    /// Offline provider answering from a line-delimited script of
    /// {"when": [substrings...], "reply": text}. The first entry whose
    /// substrings all occur in the request text wins; no match is a
    /// TransportError.
    class ScriptedProvider final : public ChatProvider {
      public:
        struct Entry {
            std::vector<std::string> when{};
            std::string reply{};
        };

        explicit ScriptedProvider(std::vector<Entry> entries);
        static ScriptedProvider from_file(const std::filesystem::path& path);

        ChatResponse send(const ChatRequest& request) override;
        std::string id() const override { return "script"; }

      private:
        std::vector<Entry> entries_;
    };

    /// Text hashed into a cassette fingerprint: whitespace-collapsed message
    /// texts, temperature, and candidate count.
    std::string normalized_request(const ChatRequest& request);

    /// Hex SHA-256 of normalized_request().
    std::string fingerprint(const ChatRequest& request);

    struct CassetteEntry {
        std::string fingerprint{};
        std::string request_digest{};
        ChatResponse response{};
    };

    /// Line-delimited {fingerprint, request_digest, response_text, latency_ms}
    /// store. Lookups return the first entry recorded for a fingerprint.
    class Cassette {
      public:
        Cassette() = default;
        static Cassette load(const std::filesystem::path& path);

        const CassetteEntry* find(std::string_view fingerprint) const;
        void insert(CassetteEntry entry);
        std::size_t size() const noexcept { return entries_.size(); }

      private:
        std::vector<CassetteEntry> entries_{};
        std::unordered_map<std::string, std::size_t> index_{};
    };

    enum class CassetteMode { off, record, replay };

    std::string_view to_string(CassetteMode mode);
    CassetteMode parse_cassette_mode(std::string_view text);

    struct GatewayOptions {
        CassetteMode mode{CassetteMode::off};
        std::filesystem::path cassette_path{};
        /// In record mode, answer repeated fingerprints from the cassette.
        bool dedup{true};
        std::size_t max_in_flight{4};
    };

    /// Chat client fronting a provider with optional record/replay.
    /// Replay never calls the provider. Thread-safe.
    class LlmGateway final : public ChatClient {
      public:
        LlmGateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options);

        ChatResponse complete(const ChatRequest& request) override;

        std::size_t provider_calls() const noexcept { return provider_calls_.load(); }

      private:
        ChatResponse call_provider(const ChatRequest& request);

        std::shared_ptr<ChatProvider> provider_;
        GatewayOptions options_;
        Cassette cassette_{};
        std::ofstream cassette_out_{};
        std::mutex cassette_mutex_{};

        std::mutex slots_mutex_{};
        std::condition_variable slots_cv_{};
        std::size_t in_flight_{0};

        std::atomic<std::size_t> provider_calls_{0};
    };

    enum class CodeKind { single_line, snippet, test_suite };

    /// The reply could not be reduced to one statement on one line.
    class MultilineViolation : public std::runtime_error {
      public:
        explicit MultilineViolation(std::string extracted);
        const std::string& extracted() const noexcept { return extracted_; }

      private:
        std::string extracted_;
    };

    /// Contents of the first fenced code block, or the whole reply when there
    /// is none. For single_line, the result must be one line with no `;`
    /// statement separator outside string literals.
    std::string extract_code(std::string_view reply, CodeKind kind);

}  // namespace fixturegen
