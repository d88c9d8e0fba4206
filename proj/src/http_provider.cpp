// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "fixturegen/jsonl.hpp"
#include "fixturegen/llm_gateway.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <thread>

namespace fixturegen {

    namespace {
        bool retryable_status(int status) {
            return status == 408 || status == 429 || status >= 500;
        }
    }  // namespace

    HttpChatProvider::HttpChatProvider(ProviderConfig config) : config_(std::move(config)) {
        auto scheme_end = config_.endpoint.find("://");
        if (scheme_end == std::string::npos) {
            throw std::invalid_argument(fmt::format("endpoint '{}' has no scheme", config_.endpoint));
        }
        auto path_start = config_.endpoint.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            scheme_host_port_ = config_.endpoint;
            path_ = "/";
        }
        else {
            scheme_host_port_ = config_.endpoint.substr(0, path_start);
            path_ = config_.endpoint.substr(path_start);
        }
        if (config_.max_retries < 0) {
            throw std::invalid_argument("max_retries must be non-negative");
        }
    }

    ChatResponse HttpChatProvider::send(const ChatRequest& request) {
        json body = {
                {"model", config_.model},
                {"temperature", request.temperature},
                {"n", request.candidate_count},
                {"messages", json::array()},
        };
        for (const auto& message : request.messages) {
            body["messages"].push_back({{"role", to_string(message.role)}, {"content", message.text}});
        }
        auto payload = body.dump();

        httplib::Headers headers{};
        if (!config_.credential_env.empty()) {
            if (const char* key = std::getenv(config_.credential_env.c_str()); key != nullptr && *key != '\0') {
                headers.emplace("Authorization", fmt::format("Bearer {}", key));
            }
        }

        std::string last_error{};
        auto backoff = config_.retry_backoff;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(backoff);
                backoff *= 2;
            }
            httplib::Client client{scheme_host_port_};
            client.set_connection_timeout(config_.timeout);
            client.set_read_timeout(config_.timeout);
            client.set_write_timeout(config_.timeout);

            auto started = std::chrono::steady_clock::now();
            auto result = client.Post(path_, headers, payload, "application/json");
            auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started);

            if (!result) {
                last_error = fmt::format("request failed: {}", httplib::to_string(result.error()));
                continue;
            }
            if (result->status != 200) {
                last_error = fmt::format("HTTP {}: {}", result->status, result->body.substr(0, 500));
                if (retryable_status(result->status)) {
                    continue;
                }
                throw TransportError(last_error);
            }

            try {
                auto reply = json::parse(result->body);
                const auto& content = reply.at("choices").at(0).at("message").at("content");
                ChatResponse response{};
                response.text = content.is_null() ? std::string{} : content.get<std::string>();
                response.latency_ms = elapsed.count();
                response.provider_id = config_.model;
                return response;
            }
            catch (const json::exception& e) {
                throw TransportError(fmt::format("unexpected response body: {}", e.what()));
            }
        }
        throw TransportError(fmt::format("{} (after {} attempts)", last_error, config_.max_retries + 1));
    }

}  // namespace fixturegen
