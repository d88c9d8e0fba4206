// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/testgen.hpp"

#include "fixturegen/process.hpp"
#include "fixturegen/sandbox.hpp"
#include "fixturegen/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fixturegen {

    namespace fs = std::filesystem;

    namespace {
        std::string base_instruction(const FocalSample& sample, int cases_per_suite) {
            return fmt::format(
                    "Based on the following code, please use 'unittest' to generate a Python test suite that includes "
                    "{} test cases. Import each focal method from the specified file using the syntax: "
                    "'from {} import <func1>, <func2>···'.\n"
                    "code: {}",
                    cases_per_suite, sample.base_name, trim_block(sample.code));
        }

        void check_case_count(int cases_per_suite) {
            if (cases_per_suite < 1) {
                throw std::invalid_argument("cases_per_suite must be at least 1");
            }
        }

        bool needs_repair(const TestSuiteArtifact& artifact) {
            if (!artifact.parse_ok || artifact.load_error || artifact.cases.empty()) {
                return true;
            }
            return std::any_of(artifact.cases.begin(), artifact.cases.end(),
                               [](const CaseRecord& c) { return c.status != CaseStatus::pass; });
        }

        void evaluate(TestSuiteArtifact& artifact, const FocalSample& sample, const SuiteRunner& runner) {
            artifact.cases.clear();
            artifact.load_error.reset();
            auto check = runner.check_parse(artifact.suite_code);
            artifact.parse_ok = check.ok;
            if (!check.ok) {
                artifact.load_error = check.message;
                return;
            }
            auto run = runner.run_suite(sample.base_name, sample.code, artifact.suite_code);
            artifact.cases = std::move(run.cases);
            artifact.load_error = std::move(run.load_error);
        }

        void measure_coverage(TestSuiteArtifact& artifact, const FocalSample& sample, const SuiteRunner& runner,
                              const GenerationConfig& config) {
            if (!config.collect_coverage || !artifact.parse_ok || artifact.load_error || artifact.cases.empty()) {
                return;
            }
            auto result = runner.run_coverage(sample.base_name, sample.code, artifact.suite_code);
            artifact.coverage_unavailable = result.unavailable;
            artifact.coverage = result.coverage;
        }

        std::string read_file(const fs::path& path) {
            std::ifstream in{path, std::ios::binary};
            std::ostringstream buffer{};
            buffer << in.rdbuf();
            return buffer.str();
        }

        void write_file(const fs::path& path, std::string_view content) {
            std::ofstream out{path, std::ios::binary | std::ios::trunc};
            if (!out) {
                throw std::runtime_error(fmt::format("cannot write {}", path.string()));
            }
            out << content;
            if (!content.empty() && content.back() != '\n') {
                out << '\n';
            }
        }

        TestSuiteArtifact new_artifact(const FocalSample& sample, SuiteOrigin origin, int cases_per_suite) {
            TestSuiteArtifact artifact{};
            artifact.sample_id = sample.id;
            artifact.label = sample.label;
            artifact.base_name = sample.base_name;
            artifact.origin = origin;
            artifact.cases_requested = cases_per_suite;
            return artifact;
        }
    }  // namespace

    std::string_view to_string(SuiteOrigin origin) {
        switch (origin) {
            case SuiteOrigin::fixturize:
                return "fixturize";
            case SuiteOrigin::direct_baseline:
                return "direct_baseline";
            case SuiteOrigin::routed_external:
                return "routed_external";
        }
        return "fixturize";
    }

    SuiteOrigin parse_suite_origin(std::string_view text) {
        for (auto origin : {SuiteOrigin::fixturize, SuiteOrigin::direct_baseline, SuiteOrigin::routed_external}) {
            if (to_string(origin) == text) {
                return origin;
            }
        }
        throw std::invalid_argument(fmt::format("unknown suite origin '{}'", text));
    }

    std::string_view to_string(GenerationMode mode) {
        return mode == GenerationMode::fixturize ? "fixturize" : "direct_baseline";
    }

    GenerationMode parse_generation_mode(std::string_view text) {
        if (text == "fixturize") {
            return GenerationMode::fixturize;
        }
        if (text == "direct_baseline") {
            return GenerationMode::direct_baseline;
        }
        throw std::invalid_argument(fmt::format("unknown generation mode '{}'", text));
    }

    json to_json(const TestSuiteArtifact& artifact) {
        json cases = json::array();
        for (const auto& c : artifact.cases) {
            cases.push_back(to_json(c));
        }
        json record{
                {"sample_id", artifact.sample_id},
                {"label", to_string(artifact.label)},
                {"base_name", artifact.base_name},
                {"suite_code", artifact.suite_code},
                {"exemplar_used", artifact.exemplar_used},
                {"repair_applied", artifact.repair_applied},
                {"parse_ok", artifact.parse_ok},
                {"cases", std::move(cases)},
                {"load_error", artifact.load_error ? json(*artifact.load_error) : json(nullptr)},
                {"origin", to_string(artifact.origin)},
                {"cases_requested", artifact.cases_requested},
                {"dropped_cases", artifact.dropped_cases},
                {"coverage", artifact.coverage ? to_json(*artifact.coverage) : json(nullptr)},
                {"coverage_unavailable", artifact.coverage_unavailable},
        };
        return record;
    }

    TestSuiteArtifact artifact_from_json(const json& record) {
        TestSuiteArtifact artifact{};
        artifact.sample_id = record.at("sample_id").get<std::string>();
        auto label = parse_label(record.at("label").get<std::string>());
        if (!label) {
            throw std::invalid_argument("unknown label in artifact record");
        }
        artifact.label = *label;
        artifact.base_name = record.at("base_name").get<std::string>();
        artifact.suite_code = record.at("suite_code").get<std::string>();
        artifact.exemplar_used = record.at("exemplar_used").get<bool>();
        artifact.repair_applied = record.at("repair_applied").get<bool>();
        artifact.parse_ok = record.at("parse_ok").get<bool>();
        for (const auto& c : record.at("cases")) {
            artifact.cases.push_back(case_record_from_json(c));
        }
        if (const auto& err = record.at("load_error"); !err.is_null()) {
            artifact.load_error = err.get<std::string>();
        }
        artifact.origin = parse_suite_origin(record.at("origin").get<std::string>());
        artifact.cases_requested = record.at("cases_requested").get<int>();
        if (artifact.cases_requested < 1) {
            throw std::invalid_argument("cases_requested must be at least 1");
        }
        artifact.dropped_cases = record.value("dropped_cases", std::vector<std::string>{});
        if (auto it = record.find("coverage"); it != record.end() && !it->is_null()) {
            artifact.coverage = coverage_record_from_json(*it);
        }
        artifact.coverage_unavailable = record.value("coverage_unavailable", false);
        return artifact;
    }

    ChatRequest build_generation_prompt(const FocalSample& sample, const std::optional<std::string>& exemplar,
                                        int cases_per_suite) {
        check_case_count(cases_per_suite);
        auto prompt = base_instruction(sample, cases_per_suite);
        if (exemplar) {
            prompt += fmt::format("\nHere is its invocation example: \n{}\nThis can help you generate the test fixture "
                                  "section.",
                                  trim_block(*exemplar));
        }
        else {
            prompt += "\nEnsure the presence of the test fixture in the test suite.";
        }
        return ChatRequest::from_user_text(std::move(prompt));
    }

    ChatRequest build_direct_prompt(const FocalSample& sample, int cases_per_suite) {
        check_case_count(cases_per_suite);
        return ChatRequest::from_user_text(base_instruction(sample, cases_per_suite));
    }

    ChatRequest build_repair_prompt(std::string_view function_code, std::string_view test_code,
                                    std::string_view error_message) {
        auto prompt = fmt::format(
                "The following Python test code failed to run. Please analyze the error and regenerate the correct "
                "test code:\n"
                "Original function code:\n{}\n"
                "Original test code:\n{}\n"
                "error message:\n{}\n"
                "Please return the revised complete Python test code directly, only the code itself, without any "
                "explanation or comments. Ensure that the code format is correct and can be run directly.",
                trim_block(function_code), trim_block(test_code), trim(error_message));
        return ChatRequest::from_user_text(std::move(prompt));
    }

    std::string aggregate_failures(const TestSuiteArtifact& artifact, std::size_t cap) {
        std::string text{};
        if (artifact.load_error) {
            text = *artifact.load_error;
        }
        else if (artifact.cases.empty()) {
            text = "No test cases were found in the test code.";
        }
        else {
            for (const auto& c : artifact.cases) {
                if (c.status == CaseStatus::pass) {
                    continue;
                }
                text += fmt::format("{}: {}\n", c.name, trim(c.message));
            }
        }
        return truncate_head(trim(text), cap);
    }

    TestSuiteArtifact generate_suite(const FocalSample& sample, const std::optional<std::string>& exemplar,
                                     GenerationMode mode, ChatClient& client, const SuiteRunner& runner,
                                     const GenerationConfig& config) {
        if (!is_executable_language(sample.language)) {
            throw std::invalid_argument(
                    fmt::format("sample '{}' is in '{}', which the sandbox cannot execute", sample.id, sample.language));
        }
        auto origin = mode == GenerationMode::fixturize ? SuiteOrigin::fixturize : SuiteOrigin::direct_baseline;
        auto artifact = new_artifact(sample, origin, config.cases_per_suite);
        artifact.exemplar_used = mode == GenerationMode::fixturize && exemplar.has_value();

        auto request = mode == GenerationMode::fixturize
                               ? build_generation_prompt(sample, exemplar, config.cases_per_suite)
                               : build_direct_prompt(sample, config.cases_per_suite);
        artifact.suite_code = extract_code(client.complete(request).text, CodeKind::test_suite);
        evaluate(artifact, sample, runner);

        if (needs_repair(artifact)) {
            auto repair = build_repair_prompt(sample.code, artifact.suite_code,
                                              aggregate_failures(artifact, config.error_cap));
            artifact.suite_code = extract_code(client.complete(repair).text, CodeKind::test_suite);
            artifact.repair_applied = true;
            evaluate(artifact, sample, runner);

            if (config.drop_persistent_failures) {
                auto keep = std::stable_partition(artifact.cases.begin(), artifact.cases.end(),
                                                  [](const CaseRecord& c) { return c.status == CaseStatus::pass; });
                for (auto it = keep; it != artifact.cases.end(); ++it) {
                    artifact.dropped_cases.push_back(it->name);
                }
                artifact.cases.erase(keep, artifact.cases.end());
            }
        }
        measure_coverage(artifact, sample, runner, config);
        return artifact;
    }

    SuiteOrigin route(Prediction prediction, const RouteConfig& config) {
        if (prediction == Prediction::dependent) {
            return config.mode == GenerationMode::fixturize ? SuiteOrigin::fixturize : SuiteOrigin::direct_baseline;
        }
        return config.external_hook.empty() ? SuiteOrigin::direct_baseline : SuiteOrigin::routed_external;
    }

    std::string shell_quote(std::string_view text) {
        std::string out{"'"};
        for (char ch : text) {
            if (ch == '\'') {
                out += "'\\''";
            }
            else {
                out.push_back(ch);
            }
        }
        out.push_back('\'');
        return out;
    }

    TestSuiteArtifact run_external_hook(const FocalSample& sample, const RouteConfig& route_config,
                                        const SuiteRunner& runner, const GenerationConfig& config) {
        if (route_config.external_hook.empty()) {
            throw std::invalid_argument("no external generator configured");
        }
        auto artifact = new_artifact(sample, SuiteOrigin::routed_external, config.cases_per_suite);

        ScratchDir dir{};
        auto focal_path = dir.path() / focal_file_name(sample.base_name);
        auto out_path = dir.path() / suite_file_name(sample.base_name);
        write_file(focal_path, sample.code);

        auto command = replace_all(route_config.external_hook, "{focal}", shell_quote(focal_path.string()));
        command = replace_all(std::move(command), "{out}", shell_quote(out_path.string()));

        ProcessSpec spec{};
        spec.argv = {"/bin/sh", "-c", command};
        spec.cwd = dir.path();
        spec.timeout = route_config.hook_timeout;
        auto result = run_process(spec);

        std::string failure{};
        if (!result.launched) {
            failure = fmt::format("external generator failed to launch: {}", result.launch_error);
        }
        else if (result.timed_out) {
            failure = "external generator timed out";
        }
        else if (result.exit_code != 0) {
            failure = fmt::format("external generator exited with status {}: {}", result.exit_code.value_or(-1),
                                  truncate_tail(trim(result.stderr_text), config.error_cap));
        }
        else if (!fs::exists(out_path)) {
            failure = "external generator wrote no suite file";
        }
        if (!failure.empty()) {
            artifact.parse_ok = false;
            artifact.load_error = replace_all(std::move(failure), dir.path().string(), workdir_placeholder);
            return artifact;
        }

        artifact.suite_code = read_file(out_path);
        evaluate(artifact, sample, runner);
        measure_coverage(artifact, sample, runner, config);
        return artifact;
    }

    void write_suite_files(const fs::path& dir, const FocalSample& sample, const TestSuiteArtifact& artifact) {
        fs::create_directories(dir);
        write_file(dir / focal_file_name(sample.base_name), sample.code);
        write_file(dir / suite_file_name(sample.base_name), artifact.suite_code);
    }

}  // namespace fixturegen
