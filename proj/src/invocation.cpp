// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/invocation.hpp"

#include "fixturegen/text.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace fixturegen {

    namespace {
        constexpr std::string_view mock_hint =
                "If this error is caused by web link or services, database, or external dependencies, then "
                "introduce the mock method in the next instance generation. If not, there's no need for a mock. "
                "If necessary, use 'from unittest import mock' uniformly.";
    }  // namespace

    std::string_view to_string(InvocationStatus status) {
        switch (status) {
            case InvocationStatus::success:
                return "success";
            case InvocationStatus::exhausted:
                return "exhausted";
            case InvocationStatus::skipped:
                return "skipped";
        }
        return "skipped";
    }

    InvocationStatus parse_invocation_status(std::string_view text) {
        for (auto status : {InvocationStatus::success, InvocationStatus::exhausted, InvocationStatus::skipped}) {
            if (to_string(status) == text) {
                return status;
            }
        }
        throw std::invalid_argument(fmt::format("unknown invocation status '{}'", text));
    }

    std::string attempt_error_text(const InvocationAttempt& attempt, std::size_t cap) {
        const auto& outcome = attempt.outcome;
        std::string text{};
        switch (outcome.status) {
            case ExecStatus::timeout:
                text = fmt::format("Execution timed out.\n{}", outcome.combined_output());
                break;
            case ExecStatus::launch_error:
                text = fmt::format("The interpreter could not be started: {}", outcome.stderr_text);
                break;
            default:
                text = outcome.combined_output();
                break;
        }
        // The exception line sits at the end of a traceback.
        return truncate_tail(trim(text), cap);
    }

    ChatRequest build_eic_prompt(const FocalSample& sample, const InvocationAttempt* previous, std::size_t error_cap) {
        std::string prompt = fmt::format(
                "Generate an executable function invocation example for the following Python function. Given that "
                "the function is already provided before the invocation, do not show or import the function code.\n"
                "Function code:\n{}",
                trim_block(sample.code));
        if (previous != nullptr) {
            prompt += fmt::format("\n\nPrevious attempt (generated by you):\n{}\n\nExecution result:\n{}\n\n{}\n\n",
                                  trim_block(previous->code), attempt_error_text(*previous, error_cap), mock_hint);
            prompt += "Based on that, please generate a corrected invocation, and ensure all required imports and "
                      "context are included.";
        }
        return ChatRequest::from_user_text(std::move(prompt));
    }

    std::string build_snippet_program(std::string_view focal_code, std::string_view snippet) {
        std::string program{trim_block(focal_code)};
        program += "\n\n\n";
        program += trim_block(snippet);
        program += "\n";
        return program;
    }

    InvocationResult construct_invocation(const FocalSample& sample, ChatClient& client, const Sandbox& sandbox,
                                          const EicConfig& config) {
        if (config.max_iters < 1) {
            throw std::invalid_argument("max_iters must be at least 1");
        }
        if (!is_executable_language(sample.language)) {
            throw std::invalid_argument(
                    fmt::format("sample '{}' is in '{}', which the sandbox cannot execute", sample.id, sample.language));
        }

        InvocationResult result{};
        result.sample_id = sample.id;

        for (int iteration = 1; iteration <= config.max_iters; ++iteration) {
            const InvocationAttempt* previous =
                    config.feedback && !result.attempts.empty() ? &result.attempts.back() : nullptr;
            ChatResponse reply{};
            try {
                reply = client.complete(build_eic_prompt(sample, previous, config.error_cap));
            }
            catch (const LlmError& e) {
                result.status = InvocationStatus::skipped;
                result.skip_reason = e.what();
                return result;
            }

            InvocationAttempt attempt{};
            attempt.iteration = iteration;
            attempt.code = extract_code(reply.text, CodeKind::snippet);
            if (trim(attempt.code).empty()) {
                // Nothing to run; an empty program would exit 0 without invoking anything.
                attempt.outcome.status = ExecStatus::nonzero_exit;
                attempt.outcome.exit_code = 1;
                attempt.outcome.stderr_text = "The reply contained no code.";
            }
            else {
                ExecutionRequest request{};
                request.program_text = build_snippet_program(sample.code, attempt.code);
                request.aux_files.emplace(fmt::format("{}.py", sample.base_name), sample.code);
                request.timeout = config.timeout;
                attempt.outcome = sandbox.execute(request);
            }

            if (attempt.outcome.succeeded()) {
                result.final_code = attempt.code;
                result.attempts.push_back(std::move(attempt));
                result.status = InvocationStatus::success;
                return result;
            }
            attempt.category = categorize_error(attempt.outcome.combined_output());
            result.attempts.push_back(std::move(attempt));
        }
        result.status = InvocationStatus::exhausted;
        return result;
    }

}  // namespace fixturegen
