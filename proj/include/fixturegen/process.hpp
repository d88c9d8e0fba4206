// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fixturegen {

    struct ProcessSpec {
        std::vector<std::string> argv{};
        std::filesystem::path cwd{};
        /// Added to (or overriding) the parent environment.
        std::vector<std::pair<std::string, std::string>> extra_env{};
        std::chrono::milliseconds timeout{30'000};
        std::size_t stream_cap{64 * 1024};
    };

    struct ProcessResult {
        bool launched{false};
        std::string launch_error{};
        bool timed_out{false};
        /// Exit status, or 128 + signal number when killed by a signal.
        std::optional<int> exit_code{};
        std::string stdout_text{};
        std::string stderr_text{};
        bool stdout_truncated{false};
        bool stderr_truncated{false};
        std::int64_t duration_ms{};
    };

    /// Resolves a bare program name against PATH; a path with a '/' is returned
    /// as-is when it is executable.
    std::optional<std::filesystem::path> resolve_program(const std::filesystem::path& program);

    /// Runs argv in its own process group with stdin at /dev/null. The whole
    /// group is killed when the timeout expires. Each captured stream keeps at
    /// most `stream_cap` bytes; the rest is drained and dropped.
    ProcessResult run_process(const ProcessSpec& spec);

}  // namespace fixturegen
