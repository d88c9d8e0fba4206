// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/corpus.hpp"
#include "fixturegen/llm_gateway.hpp"
#include "fixturegen/sandbox.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    struct InvocationAttempt {
        int iteration{1};
        std::string code{};
        ExecutionOutcome outcome{};
        /// Set for failed attempts only.
        std::optional<ErrorCategory> category{};
    };

    enum class InvocationStatus { success, exhausted, skipped };

    std::string_view to_string(InvocationStatus status);
    InvocationStatus parse_invocation_status(std::string_view text);

    struct InvocationResult {
        std::string sample_id{};
        InvocationStatus status{InvocationStatus::skipped};
        /// Present iff status == success.
        std::optional<std::string> final_code{};
        std::vector<InvocationAttempt> attempts{};
        std::string skip_reason{};
    };

    struct EicConfig {
        int max_iters{3};
        /// Without feedback every attempt gets the initial prompt.
        bool feedback{true};
        /// Bytes of execution output quoted back to the model.
        std::size_t error_cap{2000};
        std::optional<std::chrono::seconds> timeout{};
    };

    /// Text fed back to the model for a failed attempt.
    std::string attempt_error_text(const InvocationAttempt& attempt, std::size_t cap);

    ChatRequest build_eic_prompt(const FocalSample& sample, const InvocationAttempt* previous,
                                 std::size_t error_cap = EicConfig{}.error_cap);

    /// The snippet runs after the focal source in one program, so it can call
    /// the function without importing it.
    std::string build_snippet_program(std::string_view focal_code, std::string_view snippet);

    /// Validate-and-fix loop: at most `max_iters` chat requests, stopping at
    /// the first snippet that exits 0. An LLM error ends the loop as skipped
    /// and keeps the attempts made so far.
    InvocationResult construct_invocation(const FocalSample& sample, ChatClient& client, const Sandbox& sandbox,
                                          const EicConfig& config = {});

}  // namespace fixturegen
