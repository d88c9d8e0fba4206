// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixturegen {

    enum class ExecStatus { success, nonzero_exit, timeout, launch_error };

    std::string_view to_string(ExecStatus status);
    ExecStatus parse_exec_status(std::string_view text);

    /// Program text is written to `main.py` inside a fresh working directory
    /// next to `aux_files`, then run as `<interpreter> main.py args...`.
    struct ExecutionRequest {
        std::string program_text{};
        std::vector<std::string> args{};
        std::map<std::string, std::string> aux_files{};
        /// Falls back to the sandbox default when unset. Must be positive.
        std::optional<std::chrono::seconds> timeout{};
    };

    struct ExecutionOutcome {
        ExecStatus status{ExecStatus::launch_error};
        std::optional<int> exit_code{};
        std::string stdout_text{};
        std::string stderr_text{};
        std::int64_t duration_ms{};

        bool succeeded() const noexcept { return status == ExecStatus::success; }

        /// stdout and stderr joined, for feedback prompts and categorization.
        std::string combined_output() const;
    };

    struct SandboxConfig {
        std::filesystem::path interpreter{"python3"};
        std::chrono::seconds default_timeout{30};
        std::size_t stream_cap{64 * 1024};
        std::size_t max_parallel{4};
        /// When set, HTTP(S) proxy variables point here so network calls fail fast.
        std::string proxy{};
        std::filesystem::path temp_root{};
    };

    /// Fresh `fixturegen-XXXXXX` directory under `root` (or the system temp
    /// directory), removed recursively on destruction.
    class ScratchDir {
      public:
        explicit ScratchDir(const std::filesystem::path& root = {});
        ScratchDir(const ScratchDir&) = delete;
        ScratchDir& operator=(const ScratchDir&) = delete;
        ~ScratchDir();

        const std::filesystem::path& path() const noexcept { return path_; }

      private:
        std::filesystem::path path_;
    };

    inline constexpr std::string_view program_file_name = "main.py";
    inline constexpr std::string_view workdir_placeholder = "<workdir>";

    /// Runs interpreter programs in throwaway directories. Occurrences of the
    /// working directory path in captured output are replaced with
    /// `<workdir>` so that repeated runs produce comparable text.
    class Sandbox {
      public:
        explicit Sandbox(SandboxConfig config);

        ExecutionOutcome execute(const ExecutionRequest& request) const;

        const SandboxConfig& config() const noexcept { return config_; }

      private:
        SandboxConfig config_;
        mutable std::mutex slots_mutex_{};
        mutable std::condition_variable slots_cv_{};
        mutable std::size_t in_use_{0};
    };

    /// Focal code followed by the guarded main block that runs exactly one
    /// invocation line; any exception is printed to stdout and exits 1.
    /// Throws std::invalid_argument if the line contains a line break.
    std::string build_ibc_program(std::string_view focal_code, std::string_view invocation_line);

    enum class ErrorCategory { network_or_service, database, external_dependency, assertion, syntax, import, other };

    std::string_view to_string(ErrorCategory category);
    std::optional<ErrorCategory> parse_error_category(std::string_view text);

    /// Ordered rule table over interpreter output; the first matching rule wins.
    ErrorCategory categorize_error(std::string_view output);

}  // namespace fixturegen
