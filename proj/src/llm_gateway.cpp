// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/llm_gateway.hpp"

#include "fixturegen/jsonl.hpp"
#include "fixturegen/text.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <array>

namespace fixturegen {

    namespace {
        constexpr std::size_t digest_preview_chars = 160;

        std::string sha256_hex(std::string_view data) {
            std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
            unsigned int length = 0;
            if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
                throw std::runtime_error("sha256 digest failed");
            }
            std::string hex{};
            hex.reserve(length * 2);
            for (unsigned int i = 0; i < length; ++i) {
                hex += fmt::format("{:02x}", digest[i]);
            }
            return hex;
        }

        void validate(const ChatRequest& request) {
            if (request.messages.empty()) {
                throw std::invalid_argument("chat request needs at least one message");
            }
            if (request.candidate_count != 1) {
                throw std::invalid_argument("only single-candidate requests are supported");
            }
        }

        /// True if `line` has a `;` outside string literals and comments.
        bool has_statement_separator(std::string_view line) {
            char quote = 0;
            bool triple = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                char c = line[i];
                if (quote != 0) {
                    if (c == '\\') {
                        ++i;
                        continue;
                    }
                    if (c != quote) {
                        continue;
                    }
                    if (!triple) {
                        quote = 0;
                    }
                    else if (line.substr(i, 3) == std::string(3, quote)) {
                        quote = 0;
                        i += 2;
                    }
                    continue;
                }
                if (c == '\'' || c == '"') {
                    quote = c;
                    triple = line.substr(i, 3) == std::string(3, c);
                    if (triple) {
                        i += 2;
                    }
                    continue;
                }
                if (c == '#') {
                    return false;
                }
                if (c == ';') {
                    return true;
                }
            }
            return false;
        }

        bool is_fence_line(std::string_view line) {
            return trim(line).starts_with("```");
        }
    }  // namespace

    std::string_view to_string(Role role) {
        return role == Role::system ? "system" : "user";
    }

    ChatRequest ChatRequest::from_user_text(std::string text) {
        ChatRequest request{};
        request.messages.push_back({Role::user, std::move(text)});
        return request;
    }

    ReplayMissError::ReplayMissError(std::string fingerprint)
        : LlmError(fmt::format("replay miss: no cassette entry for fingerprint {}", fingerprint)),
          fingerprint_(std::move(fingerprint)) {}

    std::string normalized_request(const ChatRequest& request) {
        std::string out{};
        for (const auto& message : request.messages) {
            out += collapse_whitespace(message.text);
            out += '\x1e';
        }
        out += fmt::format("temperature={:.6f}\x1e", request.temperature);
        out += fmt::format("n={}", request.candidate_count);
        return out;
    }

    std::string fingerprint(const ChatRequest& request) {
        return sha256_hex(normalized_request(request));
    }

    Cassette Cassette::load(const std::filesystem::path& path) {
        Cassette cassette{};
        if (!std::filesystem::exists(path)) {
            return cassette;
        }
        read_jsonl(path, [&](std::size_t, const json& record) {
            CassetteEntry entry{};
            entry.fingerprint = record.at("fingerprint").get<std::string>();
            entry.request_digest = record.value("request_digest", std::string{});
            entry.response.text = record.at("response_text").get<std::string>();
            entry.response.latency_ms = record.value("latency_ms", std::int64_t{0});
            entry.response.provider_id = "cassette";
            cassette.insert(std::move(entry));
        });
        return cassette;
    }

    const CassetteEntry* Cassette::find(std::string_view fingerprint) const {
        auto it = index_.find(std::string{fingerprint});
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

    void Cassette::insert(CassetteEntry entry) {
        if (index_.contains(entry.fingerprint)) {
            return;
        }
        index_.emplace(entry.fingerprint, entries_.size());
        entries_.push_back(std::move(entry));
    }

    std::string_view to_string(CassetteMode mode) {
        switch (mode) {
            case CassetteMode::off:
                return "off";
            case CassetteMode::record:
                return "record";
            case CassetteMode::replay:
                return "replay";
        }
        return "off";
    }

    CassetteMode parse_cassette_mode(std::string_view text) {
        if (text == "off") {
            return CassetteMode::off;
        }
        if (text == "record") {
            return CassetteMode::record;
        }
        if (text == "replay") {
            return CassetteMode::replay;
        }
        throw std::invalid_argument(fmt::format("unknown cassette mode '{}'", text));
    }

    LlmGateway::LlmGateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options)
        : provider_(std::move(provider)), options_(std::move(options)) {
        if (options_.max_in_flight == 0) {
            throw std::invalid_argument("max_in_flight must be positive");
        }
        if (options_.mode != CassetteMode::off) {
            if (options_.cassette_path.empty()) {
                throw std::invalid_argument("cassette mode requires a cassette path");
            }
            if (options_.mode == CassetteMode::replay && !std::filesystem::exists(options_.cassette_path)) {
                throw std::runtime_error(fmt::format("cassette {} does not exist", options_.cassette_path.string()));
            }
            cassette_ = Cassette::load(options_.cassette_path);
        }
        if (options_.mode == CassetteMode::record) {
            if (options_.cassette_path.has_parent_path()) {
                std::filesystem::create_directories(options_.cassette_path.parent_path());
            }
            cassette_out_.open(options_.cassette_path, std::ios::app | std::ios::binary);
            if (!cassette_out_) {
                throw std::runtime_error(fmt::format("cannot open cassette {}", options_.cassette_path.string()));
            }
        }
        if (options_.mode != CassetteMode::replay && !provider_) {
            throw std::invalid_argument("a provider is required unless replaying");
        }
    }

    ChatResponse LlmGateway::complete(const ChatRequest& request) {
        validate(request);
        if (options_.mode == CassetteMode::off) {
            return call_provider(request);
        }

        auto key = fingerprint(request);
        if (options_.mode == CassetteMode::replay) {
            std::lock_guard lock{cassette_mutex_};
            const auto* entry = cassette_.find(key);
            if (entry == nullptr) {
                throw ReplayMissError(key);
            }
            return entry->response;
        }

        if (options_.dedup) {
            std::lock_guard lock{cassette_mutex_};
            if (const auto* entry = cassette_.find(key); entry != nullptr) {
                return entry->response;
            }
        }

        auto response = call_provider(request);

        CassetteEntry entry{key, truncate_head(normalized_request(request), digest_preview_chars), response};
        json line = {
                {"fingerprint", entry.fingerprint},
                {"request_digest", entry.request_digest},
                {"response_text", entry.response.text},
                {"latency_ms", entry.response.latency_ms},
        };
        std::lock_guard lock{cassette_mutex_};
        cassette_out_ << line.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
        cassette_out_.flush();
        cassette_.insert(std::move(entry));
        return response;
    }

    ChatResponse LlmGateway::call_provider(const ChatRequest& request) {
        {
            std::unique_lock lock{slots_mutex_};
            slots_cv_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
            ++in_flight_;
        }
        struct slot_release {
            LlmGateway& self;
            ~slot_release() {
                {
                    std::lock_guard lock{self.slots_mutex_};
                    --self.in_flight_;
                }
                self.slots_cv_.notify_one();
            }
        } release{*this};

        ++provider_calls_;
        return provider_->send(request);
    }

    MultilineViolation::MultilineViolation(std::string extracted)
        : std::runtime_error("invocation is not a single statement on a single line"),
          extracted_(std::move(extracted)) {}

    std::string extract_code(std::string_view reply, CodeKind kind) {
        auto lines = split_lines(reply);
        std::string code{};
        auto open = std::ranges::find_if(lines, is_fence_line);
        if (open == lines.end()) {
            code = std::string{trim_block(reply)};
        }
        else {
            std::string body{};
            for (auto it = std::next(open); it != lines.end() && !is_fence_line(*it); ++it) {
                body.append(*it);
                body.push_back('\n');
            }
            code = std::string{trim_block(body)};
        }

        if (kind == CodeKind::single_line) {
            code = std::string{trim(code)};
            if (code.find('\n') != std::string::npos || code.find('\r') != std::string::npos ||
                has_statement_separator(code)) {
                throw MultilineViolation(code);
            }
        }
        return code;
    }

}  // namespace fixturegen
