// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/pipeline.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <iostream>
#include <string>
#include <vector>

namespace {

    using namespace fixturegen;

    struct CliOptions {
        RunConfig run{};
        std::string provider{"http"};
        std::string cassette_mode{"off"};
        std::string classification_method{"ibc"};
        std::string generation_mode{"fixturize"};
        int sandbox_timeout{30};
        int http_timeout{120};
        std::string scope{};
        std::string format{"markdown"};
        std::vector<std::string> passes{};
    };

    void add_shared_options(CLI::App& app, CliOptions& o) {
        auto& r = o.run;
        app.add_option("--corpus", r.corpus_path, "Corpus file (one JSON object per line)");
        app.add_option("--out", r.out_dir, "Output directory")->capture_default_str();
        app.add_option("--provider", o.provider, "Chat provider: http or script")->capture_default_str();
        app.add_option("--endpoint", r.http.endpoint, "Chat-completions URL")->capture_default_str();
        app.add_option("--model", r.http.model)->capture_default_str();
        app.add_option("--credential_env", r.http.credential_env, "Name of the variable holding the API key")
                ->capture_default_str();
        app.add_option("--http_timeout", o.http_timeout, "Seconds per HTTP request")->capture_default_str();
        app.add_option("--http_retries", r.http.max_retries)->capture_default_str();
        app.add_option("--script", r.script_path, "Reply script for the script provider");
        app.add_option("--cassette_mode", o.cassette_mode, "off, record, or replay")->capture_default_str();
        app.add_option("--cassette", r.cassette_path, "Cassette file");
        app.add_option("--classification_method", o.classification_method, "ibc or direct")->capture_default_str();
        app.add_option("--generation_mode", o.generation_mode, "fixturize or direct_baseline")->capture_default_str();
        app.add_option("--max_eic_iters", r.max_eic_iters)->capture_default_str();
        app.add_option("--eic_feedback", r.eic_feedback, "Quote the previous attempt in retries")
                ->capture_default_str();
        app.add_option("--cases_per_suite", r.cases_per_suite)->capture_default_str();
        app.add_option("--drop_persistent_failures", r.drop_persistent_failures,
                       "Remove cases still failing after the repair")
                ->capture_default_str();
        app.add_option("--coverage", r.collect_coverage, "Measure focal line and branch coverage")
                ->capture_default_str();
        app.add_option("--external_hook", r.external_hook,
                       "Generator for independent samples; {focal} and {out} are substituted");
        app.add_option("--interpreter", r.interpreter)->capture_default_str();
        app.add_option("--sandbox_timeout", o.sandbox_timeout, "Seconds per execution")->capture_default_str();
        app.add_option("--stream_cap", r.stream_cap, "Bytes kept per output stream")->capture_default_str();
        app.add_option("--sandbox_proxy", r.sandbox_proxy, "Proxy URL exported to executed code");
        app.add_option("--runner_shim", r.runner_shim, "Suite runner script executed in the sandbox");
        app.add_option("--max_parallel", r.max_parallel)->capture_default_str();
    }

    RunConfig finish(const CliOptions& o) {
        auto config = o.run;
        config.provider = parse_provider_kind(o.provider);
        config.cassette_mode = parse_cassette_mode(o.cassette_mode);
        config.classification_method = parse_classifier_method(o.classification_method);
        config.generation_mode = parse_generation_mode(o.generation_mode);
        config.sandbox_timeout = std::chrono::seconds{o.sandbox_timeout};
        config.http.timeout = std::chrono::seconds{o.http_timeout};
        return config;
    }

    void print_run(const RunReport& report, const Pipeline& pipeline) {
        std::cout << emit_report(report.document, ReportFormat::markdown);
        std::cout << fmt::format("resumed {}, provider calls {}\n", report.resumed, pipeline.provider_calls());
    }

    int record_cassette(const CliOptions& o) {
        auto base = finish(o);
        base.cassette_mode = CassetteMode::record;
        auto passes = o.passes;
        if (passes.empty()) {
            passes.push_back(fmt::format("{}:{}", to_string(base.classification_method),
                                         to_string(base.generation_mode)));
        }
        for (const auto& pass : passes) {
            auto colon = pass.find(':');
            if (colon == std::string::npos) {
                throw std::invalid_argument(fmt::format("pass '{}' must look like method:mode", pass));
            }
            auto config = base;
            config.classification_method = parse_classifier_method(pass.substr(0, colon));
            config.generation_mode = parse_generation_mode(pass.substr(colon + 1));
            config.out_dir = base.out_dir / fmt::format("{}-{}", pass.substr(0, colon), pass.substr(colon + 1));
            Pipeline pipeline{config};
            if (config.generation_mode == GenerationMode::fixturize) {
                pipeline.classify();
            }
            auto report = pipeline.run();
            std::cout << fmt::format("{}: {} samples, {} skipped, {} provider calls\n", pass,
                                     report.document.samples_total, report.document.samples_skipped,
                                     pipeline.provider_calls());
        }
        return 0;
    }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LLM-driven unit test generation with fixture-aware prompting"};
    app.set_config("--config", "", "TOML file whose keys match the long option names");
    app.require_subcommand(1);

    CliOptions o{};
    add_shared_options(app, o);

    auto* classify = app.add_subcommand("classify", "Classify samples and score against labels");
    auto* invoke = app.add_subcommand("invoke", "Classify, then build invocation examples for dependent samples");
    auto* generate = app.add_subcommand("generate", "Classify, build invocations, and generate suites");
    auto* run = app.add_subcommand("run", "Full pipeline with reports");
    auto* evaluate = app.add_subcommand("evaluate", "Recompute reports from an output directory");
    auto* record = app.add_subcommand("record-cassette", "Run pipeline passes while recording a cassette");
    evaluate->add_option("--scope", o.scope, "overall, dependent_only, or independent_only");
    evaluate->add_option("--format", o.format, "markdown, json, or csv")->capture_default_str();
    record->add_option("--pass", o.passes, "method:mode, repeatable (e.g. ibc:fixturize)");
    for (auto* sub : {classify, invoke, generate, run, evaluate, record}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (evaluate->parsed()) {
            auto document = evaluate_artifacts(o.run.out_dir);
            if (o.scope.empty()) {
                write_reports(o.run.out_dir, document);
            }
            else {
                auto scope = parse_report_scope(o.scope);
                std::erase_if(document.reports, [&](const AggregateReport& r) { return r.scope != scope; });
            }
            std::cout << emit_report(document, parse_report_format(o.format));
            return 0;
        }
        if (record->parsed()) {
            return record_cassette(o);
        }

        Pipeline pipeline{finish(o)};
        if (classify->parsed()) {
            std::cout << to_json(pipeline.classify()).dump(2) << "\n";
        }
        else if (invoke->parsed()) {
            pipeline.invoke();
        }
        else if (generate->parsed()) {
            pipeline.generate();
        }
        else if (run->parsed()) {
            if (pipeline.corpus().empty()) {
                std::cerr << "warning: corpus is empty\n";
            }
            print_run(pipeline.run(), pipeline);
        }
        return 0;
    }
    catch (const std::invalid_argument& e) {
        std::cerr << "fixturegen: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "fixturegen: " << e.what() << "\n";
        return 1;
    }
}
