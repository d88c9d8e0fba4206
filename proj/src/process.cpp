// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/process.hpp"

#include <fmt/format.h>

extern "C" {
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>
}

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <map>

extern char** environ;

namespace fixturegen {

    namespace {
        struct fd_guard {
            int fd{-1};
            ~fd_guard() { reset(); }
            void reset() {
                if (fd >= 0) {
                    ::close(fd);
                    fd = -1;
                }
            }
        };

        struct pipe_pair {
            fd_guard read_end{};
            fd_guard write_end{};
        };

        pipe_pair make_pipe() {
            std::array<int, 2> fds{};
            if (::pipe2(fds.data(), O_CLOEXEC) != 0) {
                throw std::runtime_error(fmt::format("pipe2 failed: {}", std::strerror(errno)));
            }
            pipe_pair p{};
            p.read_end.fd = fds[0];
            p.write_end.fd = fds[1];
            return p;
        }

        std::vector<std::string> build_environment(const std::vector<std::pair<std::string, std::string>>& extra) {
            std::map<std::string, std::string> env{};
            for (char** entry = environ; entry != nullptr && *entry != nullptr; ++entry) {
                std::string_view kv{*entry};
                auto eq = kv.find('=');
                if (eq == std::string_view::npos) {
                    continue;
                }
                env[std::string{kv.substr(0, eq)}] = std::string{kv.substr(eq + 1)};
            }
            for (const auto& [key, value] : extra) {
                env[key] = value;
            }
            std::vector<std::string> out{};
            out.reserve(env.size());
            for (const auto& [key, value] : env) {
                out.push_back(key + "=" + value);
            }
            return out;
        }

        std::vector<char*> to_cstrings(std::vector<std::string>& strings) {
            std::vector<char*> out{};
            out.reserve(strings.size() + 1);
            for (auto& s : strings) {
                out.push_back(s.data());
            }
            out.push_back(nullptr);
            return out;
        }

        void append_capped(std::string& dest, bool& truncated, const char* data, std::size_t n, std::size_t cap) {
            if (dest.size() < cap) {
                auto take = std::min(n, cap - dest.size());
                dest.append(data, take);
                if (take < n) {
                    truncated = true;
                }
            }
            else if (n > 0) {
                truncated = true;
            }
        }
    }  // namespace

    std::optional<std::filesystem::path> resolve_program(const std::filesystem::path& program) {
        if (program.empty()) {
            return std::nullopt;
        }
        if (program.string().find('/') != std::string::npos) {
            if (::access(program.c_str(), X_OK) == 0) {
                return program;
            }
            return std::nullopt;
        }
        const char* path_env = std::getenv("PATH");
        std::string_view search{path_env != nullptr ? path_env : "/usr/local/bin:/usr/bin:/bin"};
        while (!search.empty()) {
            auto colon = search.find(':');
            auto dir = search.substr(0, colon);
            if (!dir.empty()) {
                auto candidate = std::filesystem::path{dir} / program;
                if (::access(candidate.c_str(), X_OK) == 0 && !std::filesystem::is_directory(candidate)) {
                    return candidate;
                }
            }
            if (colon == std::string_view::npos) {
                break;
            }
            search.remove_prefix(colon + 1);
        }
        return std::nullopt;
    }

    ProcessResult run_process(const ProcessSpec& spec) {
        ProcessResult result{};
        auto started = std::chrono::steady_clock::now();
        auto finish = [&] {
            result.duration_ms =
                    std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                            .count();
            return result;
        };

        if (spec.argv.empty()) {
            throw std::invalid_argument("process argv is empty");
        }
        auto program = resolve_program(spec.argv.front());
        if (!program) {
            result.launch_error = fmt::format("program not found: {}", spec.argv.front());
            return finish();
        }

        std::vector<std::string> args = spec.argv;
        args.front() = program->string();
        auto env_strings = build_environment(spec.extra_env);
        auto argv = to_cstrings(args);
        auto envp = to_cstrings(env_strings);
        std::string cwd = spec.cwd.string();

        auto out_pipe = make_pipe();
        auto err_pipe = make_pipe();
        auto status_pipe = make_pipe();

        pid_t pid = ::fork();
        if (pid < 0) {
            result.launch_error = fmt::format("fork failed: {}", std::strerror(errno));
            return finish();
        }

        if (pid == 0) {
            ::setpgid(0, 0);
            int devnull = ::open("/dev/null", O_RDONLY);
            if (devnull >= 0) {
                ::dup2(devnull, STDIN_FILENO);
            }
            ::dup2(out_pipe.write_end.fd, STDOUT_FILENO);
            ::dup2(err_pipe.write_end.fd, STDERR_FILENO);
            if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
                int err = errno;
                [[maybe_unused]] auto n = ::write(status_pipe.write_end.fd, &err, sizeof(err));
                ::_exit(127);
            }
            ::execve(argv[0], argv.data(), envp.data());
            int err = errno;
            [[maybe_unused]] auto n = ::write(status_pipe.write_end.fd, &err, sizeof(err));
            ::_exit(127);
        }

        ::setpgid(pid, pid);
        out_pipe.write_end.reset();
        err_pipe.write_end.reset();
        status_pipe.write_end.reset();

        int exec_errno = 0;
        auto got = ::read(status_pipe.read_end.fd, &exec_errno, sizeof(exec_errno));
        if (got == static_cast<ssize_t>(sizeof(exec_errno))) {
            int status = 0;
            ::waitpid(pid, &status, 0);
            result.launch_error = fmt::format("exec {} failed: {}", args.front(), std::strerror(exec_errno));
            return finish();
        }
        result.launched = true;

        auto deadline = started + spec.timeout;
        std::array<char, 8192> buffer{};
        bool out_open = true;
        bool err_open = true;
        bool reaped = false;
        int wait_status = 0;
        std::chrono::steady_clock::time_point reaped_at{};
        constexpr auto orphan_grace = std::chrono::milliseconds{250};

        while (true) {
            if (!reaped) {
                auto w = ::waitpid(pid, &wait_status, WNOHANG);
                if (w == pid) {
                    reaped = true;
                    reaped_at = std::chrono::steady_clock::now();
                }
            }
            if (reaped && !out_open && !err_open) {
                break;
            }
            auto now = std::chrono::steady_clock::now();
            if (reaped && now - reaped_at > orphan_grace) {
                // A background grandchild still holds the pipes.
                ::kill(-pid, SIGKILL);
                break;
            }
            if (now >= deadline) {
                result.timed_out = true;
                ::kill(-pid, SIGKILL);
                if (!reaped) {
                    ::waitpid(pid, &wait_status, 0);
                    reaped = true;
                }
                break;
            }

            std::array<pollfd, 2> fds{};
            nfds_t count = 0;
            if (out_open) {
                fds[count++] = pollfd{out_pipe.read_end.fd, POLLIN, 0};
            }
            if (err_open) {
                fds[count++] = pollfd{err_pipe.read_end.fd, POLLIN, 0};
            }
            auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
            int wait_ms = static_cast<int>(std::min<long long>(remaining, 20));
            if (count == 0) {
                ::poll(nullptr, 0, wait_ms);
                continue;
            }
            int ready = ::poll(fds.data(), count, wait_ms);
            if (ready <= 0) {
                continue;
            }
            for (nfds_t i = 0; i < count; ++i) {
                if ((fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) {
                    continue;
                }
                auto n = ::read(fds[i].fd, buffer.data(), buffer.size());
                bool is_out = fds[i].fd == out_pipe.read_end.fd;
                if (n > 0) {
                    if (is_out) {
                        append_capped(result.stdout_text, result.stdout_truncated, buffer.data(),
                                      static_cast<std::size_t>(n), spec.stream_cap);
                    }
                    else {
                        append_capped(result.stderr_text, result.stderr_truncated, buffer.data(),
                                      static_cast<std::size_t>(n), spec.stream_cap);
                    }
                }
                else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
                    (is_out ? out_open : err_open) = false;
                }
            }
        }

        if (!result.timed_out) {
            if (WIFEXITED(wait_status)) {
                result.exit_code = WEXITSTATUS(wait_status);
            }
            else if (WIFSIGNALED(wait_status)) {
                result.exit_code = 128 + WTERMSIG(wait_status);
            }
            else {
                result.exit_code = 1;
            }
        }
        return finish();
    }

}  // namespace fixturegen
