// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/sandbox.hpp"

#include "fixturegen/process.hpp"
#include "fixturegen/text.hpp"

#include <fmt/format.h>

extern "C" {
#include <stdlib.h>
}

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace fixturegen {

    namespace fs = std::filesystem;

    namespace {
        void write_file(const fs::path& path, std::string_view content) {
            if (path.has_parent_path()) {
                fs::create_directories(path.parent_path());
            }
            std::ofstream out{path, std::ios::binary};
            if (!out) {
                throw std::runtime_error(fmt::format("cannot write {}", path.string()));
            }
            out << content;
        }

        fs::path checked_relative(std::string_view name) {
            fs::path rel{name};
            if (name.empty() || rel.is_absolute()) {
                throw std::invalid_argument(fmt::format("aux file name '{}' must be a relative path", name));
            }
            for (const auto& part : rel) {
                if (part == "..") {
                    throw std::invalid_argument(fmt::format("aux file name '{}' escapes the workdir", name));
                }
            }
            return rel;
        }

        std::string normalize_paths(std::string text, const fs::path& workdir) {
            std::error_code ec{};
            auto canonical = fs::canonical(workdir, ec);
            if (!ec && canonical != workdir) {
                text = replace_all(std::move(text), canonical.string(), workdir_placeholder);
            }
            return replace_all(std::move(text), workdir.string(), workdir_placeholder);
        }

        struct category_rule {
            ErrorCategory category;
            std::vector<std::string_view> markers;
        };

        const std::vector<category_rule>& category_rules() {
            static const std::vector<category_rule> rules{
                    {ErrorCategory::network_or_service,
                     {"ConnectionError", "ConnectionRefusedError", "ConnectionResetError", "Connection refused",
                      "HTTPError", "HTTPConnectionPool", "HTTPSConnectionPool", "NewConnectionError",
                      "MaxRetryError", "Max retries exceeded", "URLError", "urlopen error", "gaierror",
                      "Name or service not known", "Temporary failure in name resolution", "ClientConnectorError",
                      "ConnectTimeout", "ReadTimeout", "Network is unreachable", "SSLError", "ProxyError",
                      "RemoteDisconnected"}},
                    {ErrorCategory::database,
                     {"sqlite3.", "OperationalError", "IntegrityError", "ProgrammingError", "DatabaseError",
                      "InterfaceError", "psycopg2", "pymysql", "MySQLdb", "mysql.connector", "pymongo",
                      "ServerSelectionTimeoutError", "sqlalchemy.exc", "no such table", "no such column",
                      "redis.exceptions"}},
                    {ErrorCategory::external_dependency,
                     {"ModuleNotFoundError", "No module named", "DistributionNotFound"}},
                    {ErrorCategory::import, {"ImportError", "cannot import name", "attempted relative import"}},
                    {ErrorCategory::assertion, {"AssertionError", "FAIL:"}},
                    {ErrorCategory::syntax, {"SyntaxError", "IndentationError", "TabError", "invalid syntax"}},
            };
            return rules;
        }
    }  // namespace

    ScratchDir::ScratchDir(const fs::path& root) {
        auto base = root.empty() ? fs::temp_directory_path() : root;
        fs::create_directories(base);
        auto templ = (base / "fixturegen-XXXXXX").string();
        if (::mkdtemp(templ.data()) == nullptr) {
            throw std::runtime_error(fmt::format("mkdtemp failed: {}", std::strerror(errno)));
        }
        path_ = templ;
    }

    ScratchDir::~ScratchDir() {
        std::error_code ec{};
        fs::remove_all(path_, ec);
    }

    std::string_view to_string(ExecStatus status) {
        switch (status) {
            case ExecStatus::success:
                return "success";
            case ExecStatus::nonzero_exit:
                return "nonzero_exit";
            case ExecStatus::timeout:
                return "timeout";
            case ExecStatus::launch_error:
                return "launch_error";
        }
        return "launch_error";
    }

    ExecStatus parse_exec_status(std::string_view text) {
        for (auto status : {ExecStatus::success, ExecStatus::nonzero_exit, ExecStatus::timeout,
                            ExecStatus::launch_error}) {
            if (to_string(status) == text) {
                return status;
            }
        }
        throw std::invalid_argument(fmt::format("unknown execution status '{}'", text));
    }

    std::string ExecutionOutcome::combined_output() const {
        if (stdout_text.empty()) {
            return stderr_text;
        }
        if (stderr_text.empty()) {
            return stdout_text;
        }
        std::string out = stdout_text;
        if (out.back() != '\n') {
            out.push_back('\n');
        }
        return out + stderr_text;
    }

    Sandbox::Sandbox(SandboxConfig config) : config_(std::move(config)) {
        if (config_.default_timeout.count() <= 0) {
            throw std::invalid_argument("sandbox timeout must be positive");
        }
        if (config_.max_parallel == 0) {
            throw std::invalid_argument("max_parallel must be positive");
        }
    }

    ExecutionOutcome Sandbox::execute(const ExecutionRequest& request) const {
        auto timeout = request.timeout.value_or(config_.default_timeout);
        if (timeout.count() <= 0) {
            throw std::invalid_argument("execution timeout must be positive");
        }

        {
            std::unique_lock lock{slots_mutex_};
            slots_cv_.wait(lock, [&] { return in_use_ < config_.max_parallel; });
            ++in_use_;
        }
        struct slot_release {
            const Sandbox& self;
            ~slot_release() {
                {
                    std::lock_guard lock{self.slots_mutex_};
                    --self.in_use_;
                }
                self.slots_cv_.notify_one();
            }
        } release{*this};

        ScratchDir workdir{config_.temp_root};
        for (const auto& [name, content] : request.aux_files) {
            write_file(workdir.path() / checked_relative(name), content);
        }
        write_file(workdir.path() / program_file_name, request.program_text);

        ProcessSpec spec{};
        spec.argv = {config_.interpreter.string(), std::string{program_file_name}};
        spec.argv.insert(spec.argv.end(), request.args.begin(), request.args.end());
        spec.cwd = workdir.path();
        spec.timeout = timeout;
        spec.stream_cap = config_.stream_cap;
        spec.extra_env = {
                {"PYTHONDONTWRITEBYTECODE", "1"},
                {"PYTHONHASHSEED", "0"},
                {"PYTHONIOENCODING", "utf-8"},
                {"PYTHONUNBUFFERED", "1"},
        };
        if (!config_.proxy.empty()) {
            for (const char* key : {"http_proxy", "https_proxy", "HTTP_PROXY", "HTTPS_PROXY", "ALL_PROXY"}) {
                spec.extra_env.emplace_back(key, config_.proxy);
            }
            spec.extra_env.emplace_back("no_proxy", "");
            spec.extra_env.emplace_back("NO_PROXY", "");
        }

        auto result = run_process(spec);

        ExecutionOutcome outcome{};
        outcome.duration_ms = result.duration_ms;
        if (!result.launched) {
            outcome.status = ExecStatus::launch_error;
            outcome.stderr_text = result.launch_error;
            return outcome;
        }
        outcome.stdout_text = normalize_paths(std::move(result.stdout_text), workdir.path());
        outcome.stderr_text = normalize_paths(std::move(result.stderr_text), workdir.path());
        if (result.timed_out) {
            outcome.status = ExecStatus::timeout;
            return outcome;
        }
        outcome.exit_code = result.exit_code;
        outcome.status = result.exit_code == 0 ? ExecStatus::success : ExecStatus::nonzero_exit;
        return outcome;
    }

    std::string build_ibc_program(std::string_view focal_code, std::string_view invocation_line) {
        if (invocation_line.find_first_of("\r\n") != std::string_view::npos) {
            throw std::invalid_argument("invocation line must not contain a line break");
        }
        std::string program{trim_block(focal_code)};
        program += "\n\n\n";
        program += "if __name__ == \"__main__\":\n";
        program += "    try:\n";
        program += "        ";
        program += trim(invocation_line);
        program += "\n";
        program += "    except Exception as e:\n";
        program += "        print(e)\n";
        program += "        exit(1)\n";
        return program;
    }

    std::string_view to_string(ErrorCategory category) {
        switch (category) {
            case ErrorCategory::network_or_service:
                return "network_or_service";
            case ErrorCategory::database:
                return "database";
            case ErrorCategory::external_dependency:
                return "external_dependency";
            case ErrorCategory::assertion:
                return "assertion";
            case ErrorCategory::syntax:
                return "syntax";
            case ErrorCategory::import:
                return "import";
            case ErrorCategory::other:
                return "other";
        }
        return "other";
    }

    std::optional<ErrorCategory> parse_error_category(std::string_view text) {
        for (auto category : {ErrorCategory::network_or_service, ErrorCategory::database,
                              ErrorCategory::external_dependency, ErrorCategory::assertion, ErrorCategory::syntax,
                              ErrorCategory::import, ErrorCategory::other}) {
            if (to_string(category) == text) {
                return category;
            }
        }
        return std::nullopt;
    }

    ErrorCategory categorize_error(std::string_view output) {
        for (const auto& rule : category_rules()) {
            for (auto marker : rule.markers) {
                if (output.find(marker) != std::string_view::npos) {
                    return rule.category;
                }
            }
        }
        return ErrorCategory::other;
    }

}  // namespace fixturegen
