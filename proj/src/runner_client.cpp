// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/runner_client.hpp"

#include "fixturegen/text.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace fixturegen {

    namespace {
        constexpr std::string_view parse_check_program = R"(import ast
import sys

with open(sys.argv[1], encoding="utf-8") as handle:
    source = handle.read()
try:
    ast.parse(source, filename=sys.argv[1])
except SyntaxError as exc:
    print(f"{type(exc).__name__}: {exc}")
    sys.exit(1)
)";

        int require_int(const json& record, const char* field) {
            const auto& value = record.at(field);
            if (!value.is_number_integer()) {
                throw ShimProtocolError(fmt::format("field '{}' must be an integer", field));
            }
            return value.get<int>();
        }

        double require_pct(const json& record, const char* field) {
            const auto& value = record.at(field);
            if (!value.is_number()) {
                throw ShimProtocolError(fmt::format("field '{}' must be a number", field));
            }
            auto pct = value.get<double>();
            if (pct < 0.0 || pct > 100.0) {
                throw ShimProtocolError(fmt::format("field '{}' out of range: {}", field, pct));
            }
            return pct;
        }

        std::string describe_failure(const ExecutionOutcome& outcome) {
            switch (outcome.status) {
                case ExecStatus::timeout:
                    return "runner timed out";
                case ExecStatus::launch_error:
                    return fmt::format("runner failed to launch: {}", outcome.stderr_text);
                default:
                    break;
            }
            return fmt::format("runner exited with status {}: {}", outcome.exit_code.value_or(-1),
                               truncate_tail(outcome.stderr_text, 2000));
        }
    }  // namespace

    std::string_view to_string(CaseStatus status) {
        switch (status) {
            case CaseStatus::pass:
                return "pass";
            case CaseStatus::fail:
                return "fail";
            case CaseStatus::error:
                return "error";
        }
        return "error";
    }

    CaseStatus parse_case_status(std::string_view text) {
        if (text == "pass") {
            return CaseStatus::pass;
        }
        if (text == "fail") {
            return CaseStatus::fail;
        }
        if (text == "error") {
            return CaseStatus::error;
        }
        throw ShimProtocolError(fmt::format("unknown case status '{}'", text));
    }

    json to_json(const CaseRecord& record) {
        return json{{"name", record.name}, {"status", to_string(record.status)}, {"message", record.message}};
    }

    CaseRecord case_record_from_json(const json& record) {
        CaseRecord out{};
        out.name = record.at("name").get<std::string>();
        out.status = parse_case_status(record.at("status").get<std::string>());
        out.message = record.value("message", std::string{});
        if (out.status == CaseStatus::pass) {
            out.message.clear();
        }
        return out;
    }

    json to_json(const CoverageRecord& record) {
        return json{
                {"line_pct", record.line_pct},
                {"branch_pct", record.branch_pct},
                {"lines_total", record.lines_total},
                {"branches_total", record.branches_total},
                {"zero_branch_denominator", record.zero_branch_denominator},
        };
    }

    CoverageRecord coverage_record_from_json(const json& record) {
        CoverageRecord out{};
        out.line_pct = require_pct(record, "line_pct");
        out.branch_pct = require_pct(record, "branch_pct");
        out.lines_total = require_int(record, "lines_total");
        out.branches_total = require_int(record, "branches_total");
        out.zero_branch_denominator = record.value("zero_branch_denominator", out.branches_total == 0);
        if (out.branches_total == 0) {
            out.zero_branch_denominator = true;
            out.branch_pct = 100.0;
        }
        return out;
    }

    ShimOutput parse_shim_output(std::string_view stdout_text) {
        ShimOutput output{};
        for (auto line : split_lines(stdout_text)) {
            if (!line.starts_with(record_sentinel)) {
                continue;
            }
            auto payload = line.substr(record_sentinel.size());
            json record{};
            try {
                record = json::parse(payload);
            }
            catch (const json::parse_error& e) {
                throw ShimProtocolError(fmt::format("malformed record line: {}", e.what()));
            }
            try {
                auto kind = record.at("kind").get<std::string>();
                if (kind == "case") {
                    auto rec = case_record_from_json(record);
                    if (rec.name == suite_load_record_name) {
                        output.load_error = rec.message;
                    }
                    else {
                        output.cases.push_back(std::move(rec));
                    }
                }
                else if (kind == "summary") {
                    SuiteSummary summary{};
                    summary.cases = require_int(record, "cases");
                    summary.passed = require_int(record, "passed");
                    summary.failed = require_int(record, "failed");
                    summary.errored = require_int(record, "errored");
                    if (summary.passed + summary.failed + summary.errored != summary.cases) {
                        throw ShimProtocolError("summary counts do not add up");
                    }
                    output.summary = summary;
                }
                else if (kind == "coverage") {
                    output.coverage = coverage_record_from_json(record);
                }
                else if (kind == "error") {
                    ShimError error{record.value("code", std::string{}), record.value("message", std::string{})};
                    if (record.value("name", std::string{}) == suite_load_record_name) {
                        output.load_error = error.message;
                    }
                    output.errors.push_back(std::move(error));
                }
                else {
                    throw ShimProtocolError(fmt::format("unknown record kind '{}'", kind));
                }
            }
            catch (const json::exception& e) {
                throw ShimProtocolError(fmt::format("invalid record: {}", e.what()));
            }
        }

        if (output.summary) {
            SuiteSummary seen{};
            seen.cases = static_cast<int>(output.cases.size());
            for (const auto& rec : output.cases) {
                switch (rec.status) {
                    case CaseStatus::pass:
                        ++seen.passed;
                        break;
                    case CaseStatus::fail:
                        ++seen.failed;
                        break;
                    case CaseStatus::error:
                        ++seen.errored;
                        break;
                }
            }
            if (seen != *output.summary) {
                throw ShimProtocolError(fmt::format("summary {{{},{},{},{}}} disagrees with {} case records",
                                                    output.summary->cases, output.summary->passed,
                                                    output.summary->failed, output.summary->errored,
                                                    output.cases.size()));
            }
        }
        return output;
    }

    std::string suite_file_name(std::string_view base_name) {
        return fmt::format("test_{}.py", base_name);
    }

    std::string focal_file_name(std::string_view base_name) {
        return fmt::format("{}.py", base_name);
    }

    SuiteRunner::SuiteRunner(const Sandbox& sandbox, const std::filesystem::path& shim_script) : sandbox_(sandbox) {
        std::ifstream in{shim_script, std::ios::binary};
        if (!in) {
            throw std::runtime_error(fmt::format("cannot read runner shim {}", shim_script.string()));
        }
        std::ostringstream buffer{};
        buffer << in.rdbuf();
        shim_source_ = buffer.str();
    }

    ExecutionRequest SuiteRunner::make_request(std::string_view command, std::string_view base_name,
                                               std::string_view focal_code, std::string_view suite_code) const {
        ExecutionRequest request{};
        request.program_text = shim_source_;
        request.aux_files.emplace(focal_file_name(base_name), std::string{focal_code});
        request.aux_files.emplace(suite_file_name(base_name), std::string{suite_code});
        request.args = {std::string{command}, suite_file_name(base_name), focal_file_name(base_name)};
        return request;
    }

    ParseCheck SuiteRunner::check_parse(std::string_view suite_code) const {
        ExecutionRequest request{};
        request.program_text = std::string{parse_check_program};
        request.aux_files.emplace("suite_under_check.py", std::string{suite_code});
        request.args = {"suite_under_check.py"};
        auto outcome = sandbox_.execute(request);
        ParseCheck check{};
        check.ok = outcome.succeeded();
        if (!check.ok) {
            check.message = outcome.status == ExecStatus::nonzero_exit
                                    ? std::string{trim(outcome.combined_output())}
                                    : describe_failure(outcome);
        }
        return check;
    }

    SuiteRunResult SuiteRunner::run_suite(std::string_view base_name, std::string_view focal_code,
                                          std::string_view suite_code) const {
        SuiteRunResult result{};
        result.outcome = sandbox_.execute(make_request("run_suite", base_name, focal_code, suite_code));
        if (!result.outcome.succeeded()) {
            result.load_error = describe_failure(result.outcome);
            return result;
        }
        try {
            auto output = parse_shim_output(result.outcome.stdout_text);
            if (!output.summary && !output.load_error) {
                result.load_error = "runner produced no summary record";
                return result;
            }
            result.cases = std::move(output.cases);
            result.load_error = std::move(output.load_error);
            if (result.load_error) {
                result.cases.clear();
            }
        }
        catch (const ShimProtocolError& e) {
            result.load_error = fmt::format("runner protocol error: {}", e.what());
        }
        return result;
    }

    CoverageRunResult SuiteRunner::run_coverage(std::string_view base_name, std::string_view focal_code,
                                                std::string_view suite_code) const {
        CoverageRunResult result{};
        auto outcome = sandbox_.execute(make_request("run_coverage", base_name, focal_code, suite_code));
        if (!outcome.succeeded()) {
            result.message = describe_failure(outcome);
            return result;
        }
        try {
            auto output = parse_shim_output(outcome.stdout_text);
            for (const auto& error : output.errors) {
                if (error.code == coverage_unavailable_code) {
                    result.unavailable = true;
                    result.message = error.message;
                    return result;
                }
            }
            result.coverage = output.coverage;
            if (!result.coverage) {
                result.message = output.errors.empty() ? "runner produced no coverage record"
                                                       : output.errors.front().message;
            }
        }
        catch (const ShimProtocolError& e) {
            result.message = fmt::format("runner protocol error: {}", e.what());
        }
        return result;
    }

}  // namespace fixturegen
