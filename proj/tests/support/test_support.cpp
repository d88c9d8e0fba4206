// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "test_support.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fixturegen::testing {

    namespace fs = std::filesystem;

    fs::path source_dir() {
        return FIXTUREGEN_SOURCE_DIR;
    }

    fs::path shim_path() {
        return source_dir() / "tests" / "fixtures" / "runner_shim.py";
    }

    fs::path mini_dir() {
        return source_dir() / "data" / "mini";
    }

    fs::path python() {
        return FIXTUREGEN_PYTHON;
    }

    fs::path cli_path() {
        return FIXTUREGEN_CLI;
    }

    std::string read_file(const fs::path& path) {
        std::ifstream in{path, std::ios::binary};
        if (!in) {
            throw std::runtime_error(fmt::format("cannot read {}", path.string()));
        }
        std::ostringstream buffer{};
        buffer << in.rdbuf();
        return buffer.str();
    }

    void write_file(const fs::path& path, std::string_view content) {
        if (path.has_parent_path()) {
            fs::create_directories(path.parent_path());
        }
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        out << content;
    }

    SandboxConfig sandbox_config(std::chrono::seconds timeout) {
        SandboxConfig config{};
        config.interpreter = python();
        config.default_timeout = timeout;
        return config;
    }

    FocalSample make_sample(std::string id, std::string base_name, std::string code, Label label) {
        FocalSample sample{};
        sample.id = std::move(id);
        sample.base_name = std::move(base_name);
        sample.code = std::move(code);
        sample.label = label;
        return sample;
    }

    CallbackProvider::CallbackProvider(Handler handler) : handler_(std::move(handler)) {}

    ChatResponse CallbackProvider::send(const ChatRequest& request) {
        ++calls_;
        std::string prompt{};
        for (const auto& message : request.messages) {
            prompt += message.text;
        }
        {
            std::lock_guard lock{mutex_};
            prompts_.push_back(prompt);
        }
        ChatResponse response{};
        response.text = handler_(prompt);
        response.provider_id = id();
        return response;
    }

    std::vector<std::string> CallbackProvider::prompts() const {
        std::lock_guard lock{mutex_};
        return prompts_;
    }

    ChatResponse ForbiddenProvider::send(const ChatRequest&) {
        ++calls_;
        throw std::logic_error("network provider used during a replay-only run");
    }

    std::string fenced(std::string_view code) {
        return fmt::format("```python\n{}\n```", code);
    }

    std::string always_fail_reply(const std::string& prompt) {
        if (prompt.find("one-line function invocation") != std::string::npos) {
            return fenced("no_such_helper()");
        }
        if (prompt.find("executable function invocation") != std::string::npos) {
            return fenced("raise RuntimeError('still broken')");
        }
        return fenced("import unittest\n\n\nclass TestAlwaysFails(unittest.TestCase):\n"
                      "    def test_fails(self):\n        self.assertEqual(1, 2)\n");
    }

    std::vector<SuiteRow> random_table(std::mt19937& rng) {
        std::uniform_int_distribution<int> suites{0, 20};
        std::uniform_int_distribution<int> kinds{0, 9};
        std::uniform_int_distribution<int> cases{1, 10};
        std::uniform_int_distribution<int> requested{1, 8};
        std::uniform_int_distribution<int> status{0, 2};
        std::bernoulli_distribution dependent{0.5};
        std::vector<SuiteRow> rows(static_cast<std::size_t>(suites(rng)));
        for (auto& row : rows) {
            row.label = dependent(rng) ? Label::dependent : Label::independent;
            row.requested = requested(rng);
            switch (kinds(rng)) {
                case 0:
                    row.kind = SuiteRow::Kind::unparseable;
                    break;
                case 1:
                    row.kind = SuiteRow::Kind::load_error;
                    break;
                case 2:
                    row.kind = SuiteRow::Kind::empty;
                    break;
                default: {
                    row.kind = SuiteRow::Kind::ran;
                    int n = cases(rng);
                    // Bias toward passing so all-pass suites show up.
                    bool clean = dependent(rng);
                    for (int i = 0; i < n; ++i) {
                        row.statuses.push_back(clean ? CaseStatus::pass : static_cast<CaseStatus>(status(rng)));
                    }
                    break;
                }
            }
        }
        return rows;
    }

    std::vector<TestSuiteArtifact> to_artifacts(const std::vector<SuiteRow>& rows) {
        std::vector<TestSuiteArtifact> artifacts{};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            TestSuiteArtifact artifact{};
            artifact.sample_id = fmt::format("s{}", i);
            artifact.label = row.label;
            artifact.cases_requested = row.requested;
            artifact.parse_ok = row.kind != SuiteRow::Kind::unparseable;
            if (row.kind == SuiteRow::Kind::load_error) {
                artifact.load_error = "ImportError: synthetic";
            }
            for (std::size_t j = 0; j < row.statuses.size(); ++j) {
                artifact.cases.push_back({fmt::format("T.test_{}", j), row.statuses[j],
                                          row.statuses[j] == CaseStatus::pass ? "" : "synthetic"});
            }
            artifacts.push_back(std::move(artifact));
        }
        return artifacts;
    }

    Recount recount(const std::vector<SuiteRow>& rows, std::optional<Label> only) {
        Recount r{};
        for (const auto& row : rows) {
            if (only && row.label != *only) {
                continue;
            }
            ++r.suites;
            if (row.kind != SuiteRow::Kind::unparseable) {
                ++r.parsed;
            }
            if (row.kind != SuiteRow::Kind::ran) {
                r.charged += static_cast<std::uint64_t>(row.requested);
                continue;
            }
            r.charged += row.statuses.size();
            bool every = true;
            for (auto s : row.statuses) {
                r.executed += s != CaseStatus::error ? 1 : 0;
                r.passed += s == CaseStatus::pass ? 1 : 0;
                every = every && s == CaseStatus::pass;
            }
            r.all_pass_suites += every ? 1 : 0;
        }
        return r;
    }

    RunConfig mini_replay_config(const fs::path& out_dir) {
        RunConfig config{};
        config.corpus_path = mini_dir() / "corpus.jsonl";
        config.out_dir = out_dir;
        config.cassette_mode = CassetteMode::replay;
        config.cassette_path = mini_dir() / "cassette.jsonl";
        config.runner_shim = shim_path();
        config.interpreter = python();
        config.sandbox_timeout = std::chrono::seconds{20};
        config.max_parallel = 4;
        return config;
    }

}  // namespace fixturegen::testing
