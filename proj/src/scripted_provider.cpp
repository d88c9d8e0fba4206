// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/jsonl.hpp"
#include "fixturegen/llm_gateway.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace fixturegen {

    ScriptedProvider::ScriptedProvider(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    ScriptedProvider ScriptedProvider::from_file(const std::filesystem::path& path) {
        std::vector<Entry> entries{};
        read_jsonl(path, [&](std::size_t, const json& record) {
            Entry entry{};
            entry.when = record.at("when").get<std::vector<std::string>>();
            entry.reply = record.at("reply").get<std::string>();
            entries.push_back(std::move(entry));
        });
        return ScriptedProvider{std::move(entries)};
    }

    ChatResponse ScriptedProvider::send(const ChatRequest& request) {
        std::string text{};
        for (const auto& message : request.messages) {
            text += message.text;
            text += '\n';
        }
        for (const auto& entry : entries_) {
            bool matches = std::ranges::all_of(
                    entry.when, [&](const std::string& needle) { return text.find(needle) != std::string::npos; });
            if (matches) {
                return ChatResponse{entry.reply, 0, id()};
            }
        }
        throw TransportError(fmt::format("script has no entry matching request {}", fingerprint(request)));
    }

}  // namespace fixturegen
