// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/sandbox.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace fixturegen {
    namespace {

        namespace fs = std::filesystem;

        ExecutionOutcome run(const std::string& program, std::optional<std::chrono::seconds> timeout = {}) {
            Sandbox sandbox{testing::sandbox_config()};
            ExecutionRequest request{};
            request.program_text = program;
            request.timeout = timeout;
            return sandbox.execute(request);
        }

        TEST(Sandbox, SuccessfulProgram) {
            auto outcome = run("print('ok')\n");
            EXPECT_EQ(outcome.status, ExecStatus::success);
            EXPECT_EQ(outcome.exit_code, 0);
            EXPECT_EQ(outcome.stdout_text, "ok\n");
        }

        TEST(Sandbox, UncaughtExceptionIsNonzeroExit) {
            auto outcome = run("raise ValueError('bad value')\n");
            EXPECT_EQ(outcome.status, ExecStatus::nonzero_exit);
            EXPECT_EQ(outcome.exit_code, 1);
            EXPECT_NE(outcome.stderr_text.find("ValueError: bad value"), std::string::npos);
            EXPECT_NE(outcome.combined_output().find("ValueError"), std::string::npos);
        }

        TEST(Sandbox, TimeoutIsReportedAfterDeadline) {
            auto outcome = run("import time\ntime.sleep(30)\n", std::chrono::seconds{2});
            EXPECT_EQ(outcome.status, ExecStatus::timeout);
            EXPECT_GE(outcome.duration_ms, 2000);
            EXPECT_LT(outcome.duration_ms, 15'000);
            EXPECT_FALSE(outcome.exit_code.has_value());
        }

        TEST(Sandbox, NonPositiveTimeoutRejected) {
            EXPECT_THROW(run("pass\n", std::chrono::seconds{0}), std::invalid_argument);
        }

        TEST(Sandbox, BadInterpreterIsLaunchError) {
            auto config = testing::sandbox_config();
            config.interpreter = "/nonexistent/python";
            Sandbox sandbox{config};
            auto outcome = sandbox.execute({"print(1)\n"});
            EXPECT_EQ(outcome.status, ExecStatus::launch_error);
        }

        TEST(Sandbox, WorkdirIsFreshAndRemoved) {
            ScratchDir root{};
            auto config = testing::sandbox_config();
            config.temp_root = root.path();
            Sandbox sandbox{config};
            ExecutionRequest request{};
            request.program_text = "import os\nprint(sorted(os.listdir('.')))\nopen('scratch.txt', 'w').write('x')\n";
            request.aux_files = {{"helper.py", "X = 1\n"}};
            auto first = sandbox.execute(request);
            auto second = sandbox.execute(request);
            EXPECT_EQ(first.stdout_text, "['helper.py', 'main.py']\n");
            EXPECT_EQ(second.stdout_text, first.stdout_text);
            EXPECT_TRUE(fs::is_empty(root.path()));
        }

        TEST(Sandbox, AuxFilesAreImportable) {
            Sandbox sandbox{testing::sandbox_config()};
            ExecutionRequest request{};
            request.program_text = "from calc import add\nprint(add(2, 3))\n";
            request.aux_files = {{"calc.py", "def add(a, b):\n    return a + b\n"}};
            EXPECT_EQ(sandbox.execute(request).stdout_text, "5\n");
        }

        TEST(Sandbox, AuxNamesCannotEscape) {
            Sandbox sandbox{testing::sandbox_config()};
            ExecutionRequest request{};
            request.program_text = "pass\n";
            request.aux_files = {{"../evil.py", ""}};
            EXPECT_THROW(sandbox.execute(request), std::invalid_argument);
            request.aux_files = {{"/tmp/evil.py", ""}};
            EXPECT_THROW(sandbox.execute(request), std::invalid_argument);
        }

        TEST(Sandbox, WorkdirPathIsMaskedInOutput) {
            auto outcome = run("import os\nprint(os.getcwd())\nraise KeyError('k')\n");
            EXPECT_EQ(outcome.stdout_text, "<workdir>\n");
            EXPECT_NE(outcome.stderr_text.find("<workdir>/main.py"), std::string::npos);
            EXPECT_EQ(outcome.stderr_text.find("fixturegen-"), std::string::npos);
        }

        TEST(Sandbox, ProxySettingMakesNetworkFailFast) {
            auto config = testing::sandbox_config();
            config.proxy = "http://127.0.0.1:9";
            Sandbox sandbox{config};
            auto outcome = sandbox.execute({"import os\nprint(os.environ['HTTPS_PROXY'], repr(os.environ['NO_PROXY']))\n"});
            EXPECT_EQ(outcome.stdout_text, "http://127.0.0.1:9 ''\n");
        }

        TEST(IbcProgram, LayoutAndSemantics) {
            auto program = build_ibc_program("\ndef add(a, b):\n    return a + b\n\n", "  print(add(1, 2))  ");
            EXPECT_EQ(program,
                      "def add(a, b):\n    return a + b\n\n\n"
                      "if __name__ == \"__main__\":\n"
                      "    try:\n"
                      "        print(add(1, 2))\n"
                      "    except Exception as e:\n"
                      "        print(e)\n"
                      "        exit(1)\n");
            auto ok = run(program);
            EXPECT_EQ(ok.status, ExecStatus::success);
            EXPECT_EQ(ok.stdout_text, "3\n");

            auto failing = run(build_ibc_program("def f():\n    raise ValueError('nope')\n", "f()"));
            EXPECT_EQ(failing.status, ExecStatus::nonzero_exit);
            EXPECT_EQ(failing.exit_code, 1);
            EXPECT_EQ(failing.stdout_text, "nope\n");
        }

        TEST(IbcProgram, RejectsLineBreaks) {
            EXPECT_THROW(build_ibc_program("x = 1", "f()\ng()"), std::invalid_argument);
        }

        TEST(Categorize, RuleTable) {
            EXPECT_EQ(categorize_error("requests.exceptions.ConnectionError: HTTPConnectionPool(host='x')"),
                      ErrorCategory::network_or_service);
            EXPECT_EQ(categorize_error("<urlopen error [Errno 111] Connection refused>"),
                      ErrorCategory::network_or_service);
            EXPECT_EQ(categorize_error("sqlite3.OperationalError: no such table: users"), ErrorCategory::database);
            EXPECT_EQ(categorize_error("ModuleNotFoundError: No module named 'boto3'"),
                      ErrorCategory::external_dependency);
            EXPECT_EQ(categorize_error("ImportError: cannot import name 'x' from 'y'"), ErrorCategory::import);
            EXPECT_EQ(categorize_error("AssertionError: 1 != 2"), ErrorCategory::assertion);
            EXPECT_EQ(categorize_error("SyntaxError: invalid syntax"), ErrorCategory::syntax);
            EXPECT_EQ(categorize_error("NameError: name 'x' is not defined"), ErrorCategory::other);
            EXPECT_EQ(categorize_error(""), ErrorCategory::other);
        }

        TEST(Categorize, EarlierRuleWins) {
            EXPECT_EQ(categorize_error("ModuleNotFoundError: No module named 'psycopg2'"), ErrorCategory::database);
        }

        TEST(Categorize, NamesRoundTrip) {
            for (auto c : {ErrorCategory::network_or_service, ErrorCategory::database,
                           ErrorCategory::external_dependency, ErrorCategory::assertion, ErrorCategory::syntax,
                           ErrorCategory::import, ErrorCategory::other}) {
                EXPECT_EQ(parse_error_category(to_string(c)), c);
            }
            EXPECT_FALSE(parse_error_category("bogus").has_value());
            for (auto s : {ExecStatus::success, ExecStatus::nonzero_exit, ExecStatus::timeout,
                           ExecStatus::launch_error}) {
                EXPECT_EQ(parse_exec_status(to_string(s)), s);
            }
        }

    }  // namespace
}  // namespace fixturegen
