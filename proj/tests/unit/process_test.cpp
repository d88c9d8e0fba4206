// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/process.hpp"

#include "fixturegen/sandbox.hpp"

#include <gtest/gtest.h>

namespace fixturegen {
    namespace {

        ProcessSpec shell(std::string script) {
            ProcessSpec spec{};
            spec.argv = {"/bin/sh", "-c", std::move(script)};
            spec.timeout = std::chrono::milliseconds{10'000};
            return spec;
        }

        TEST(Process, CapturesStreamsAndExitCode) {
            auto result = run_process(shell("echo out; echo err 1>&2; exit 3"));
            ASSERT_TRUE(result.launched);
            EXPECT_FALSE(result.timed_out);
            EXPECT_EQ(result.exit_code, 3);
            EXPECT_EQ(result.stdout_text, "out\n");
            EXPECT_EQ(result.stderr_text, "err\n");
        }

        TEST(Process, StdinIsClosed) {
            auto result = run_process(shell("cat; echo done"));
            EXPECT_EQ(result.exit_code, 0);
            EXPECT_EQ(result.stdout_text, "done\n");
        }

        TEST(Process, TimeoutKillsProcessGroup) {
            auto spec = shell("sleep 30 & sleep 30; echo never");
            spec.timeout = std::chrono::milliseconds{500};
            auto result = run_process(spec);
            EXPECT_TRUE(result.timed_out);
            EXPECT_GE(result.duration_ms, 500);
            EXPECT_LT(result.duration_ms, 10'000);
            EXPECT_EQ(result.stdout_text.find("never"), std::string::npos);
        }

        TEST(Process, StreamCapDrainsRest) {
            auto spec = shell("head -c 200000 /dev/zero | tr '\\0' 'a'; echo tail 1>&2");
            spec.stream_cap = 1000;
            auto result = run_process(spec);
            EXPECT_EQ(result.exit_code, 0);
            EXPECT_EQ(result.stdout_text.size(), 1000U);
            EXPECT_TRUE(result.stdout_truncated);
            EXPECT_FALSE(result.stderr_truncated);
            EXPECT_EQ(result.stderr_text, "tail\n");
        }

        TEST(Process, SignalExitCode) {
            auto result = run_process(shell("kill -TERM $$"));
            EXPECT_EQ(result.exit_code, 128 + 15);
        }

        TEST(Process, WorkingDirectoryAndEnvironment) {
            ScratchDir dir{};
            auto spec = shell("pwd; echo \"$FIXTUREGEN_PROBE\"");
            spec.cwd = dir.path();
            spec.extra_env = {{"FIXTUREGEN_PROBE", "set"}};
            auto result = run_process(spec);
            auto expected = std::filesystem::canonical(dir.path()).string() + "\nset\n";
            EXPECT_EQ(result.stdout_text, expected);
        }

        TEST(Process, MissingProgramIsLaunchError) {
            ProcessSpec spec{};
            spec.argv = {"/nonexistent/interpreter", "x"};
            auto result = run_process(spec);
            EXPECT_FALSE(result.launched);
            EXPECT_FALSE(result.launch_error.empty());

            spec.argv = {"definitely-not-a-program-fixturegen"};
            result = run_process(spec);
            EXPECT_FALSE(result.launched);
        }

        TEST(Process, ResolveProgram) {
            EXPECT_TRUE(resolve_program("sh").has_value());
            EXPECT_EQ(resolve_program("/bin/sh"), std::filesystem::path{"/bin/sh"});
            EXPECT_FALSE(resolve_program("/x/y").has_value());
            EXPECT_FALSE(resolve_program("definitely-not-a-program-fixturegen").has_value());
        }

    }  // namespace
}  // namespace fixturegen
