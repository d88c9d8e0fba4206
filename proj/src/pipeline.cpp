// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/pipeline.hpp"

#include "fixturegen/text.hpp"

#include <fmt/format.h>

#include <atomic>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace fixturegen {

    namespace fs = std::filesystem;

    namespace {
        class ReplayOnlyProvider final : public ChatProvider {
          public:
            ChatResponse send(const ChatRequest&) override {
                throw TransportError("provider is disabled in replay mode");
            }
            std::string id() const override { return "replay-only"; }
        };

        json skip_record(const FocalSample& sample, std::string_view stage, std::string_view reason) {
            return json{
                    {"sample_id", sample.id},
                    {"label", to_string(sample.label)},
                    {"skipped", true},
                    {"stage", stage},
                    {"reason", reason},
            };
        }

        bool is_skip(const json& record) {
            return record.value("skipped", false);
        }

        void write_text(const fs::path& path, std::string_view text) {
            std::ofstream out{path, std::ios::binary | std::ios::trunc};
            if (!out) {
                throw std::runtime_error(fmt::format("cannot write {}", path.string()));
            }
            out << text;
        }

        std::unordered_map<std::string, json> load_last_records(const fs::path& path) {
            std::unordered_map<std::string, json> last{};
            if (!fs::exists(path)) {
                return last;
            }
            read_jsonl(path, [&](std::size_t, const json& record) {
                last.insert_or_assign(record.at("sample_id").get<std::string>(), record);
            });
            return last;
        }
    }  // namespace

    std::string_view to_string(ProviderKind kind) {
        return kind == ProviderKind::http ? "http" : "script";
    }

    ProviderKind parse_provider_kind(std::string_view text) {
        if (text == "http") {
            return ProviderKind::http;
        }
        if (text == "script") {
            return ProviderKind::script;
        }
        throw std::invalid_argument(fmt::format("unknown provider '{}'", text));
    }

    void validate(const RunConfig& config) {
        if (config.corpus_path.empty()) {
            throw std::invalid_argument("corpus is required");
        }
        if (config.out_dir.empty()) {
            throw std::invalid_argument("out is required");
        }
        if (config.max_eic_iters < 1) {
            throw std::invalid_argument("max_eic_iters must be at least 1");
        }
        if (config.cases_per_suite < 1) {
            throw std::invalid_argument("cases_per_suite must be at least 1");
        }
        if (config.sandbox_timeout.count() <= 0) {
            throw std::invalid_argument("sandbox_timeout must be positive");
        }
        if (config.max_parallel == 0) {
            throw std::invalid_argument("max_parallel must be at least 1");
        }
        if (config.cassette_mode != CassetteMode::off && config.cassette_path.empty()) {
            throw std::invalid_argument("cassette is required when cassette_mode is record or replay");
        }
        if (config.cassette_mode != CassetteMode::replay && config.provider == ProviderKind::script &&
            config.script_path.empty()) {
            throw std::invalid_argument("script is required for the script provider");
        }
    }

    std::shared_ptr<ChatProvider> make_provider(const RunConfig& config) {
        if (config.cassette_mode == CassetteMode::replay) {
            return std::make_shared<ReplayOnlyProvider>();
        }
        if (config.provider == ProviderKind::script) {
            return std::make_shared<ScriptedProvider>(ScriptedProvider::from_file(config.script_path));
        }
        return std::make_shared<HttpChatProvider>(config.http);
    }

    AuditLog::AuditLog(const fs::path& path) : sink_(path) {}

    void AuditLog::record(std::string_view sample_id, std::string_view stage, const std::string* error) {
        {
            std::lock_guard lock{mutex_};
            ++counts_[std::string{sample_id}][std::string{stage}];
        }
        json line{{"sample_id", sample_id}, {"stage", stage}, {"ok", error == nullptr}};
        if (error != nullptr) {
            line["error"] = *error;
        }
        sink_.append(line);
    }

    std::map<std::string, std::map<std::string, std::size_t>> AuditLog::counts() const {
        std::lock_guard lock{mutex_};
        return counts_;
    }

    json AuditLog::summary() const {
        auto counts = this->counts();
        json per_sample = json::object();
        std::map<std::string, std::size_t> per_stage{};
        std::map<std::string, std::size_t> max_per_sample{};
        std::size_t total = 0;
        for (const auto& [sample, stages] : counts) {
            per_sample[sample] = stages;
            for (const auto& [stage, n] : stages) {
                per_stage[stage] += n;
                max_per_sample[stage] = std::max(max_per_sample[stage], n);
                total += n;
            }
        }
        return json{
                {"requests", total},
                {"per_stage", per_stage},
                {"max_per_sample", max_per_sample},
                {"per_sample", std::move(per_sample)},
        };
    }

    StageClient::StageClient(ChatClient& inner, AuditLog& audit, std::string sample_id, std::string_view stage)
        : inner_(inner), audit_(audit), sample_id_(std::move(sample_id)), stage_(stage) {}

    ChatResponse StageClient::complete(const ChatRequest& request) {
        try {
            auto response = inner_.complete(request);
            audit_.record(sample_id_, stage_, nullptr);
            return response;
        }
        catch (const std::exception& e) {
            std::string error{e.what()};
            audit_.record(sample_id_, stage_, &error);
            throw;
        }
    }

    json to_json(const ClassificationOutcome& outcome, Label label) {
        json record{
                {"sample_id", outcome.sample_id},
                {"method", to_string(outcome.method)},
                {"predicted", to_string(outcome.predicted)},
                {"label", to_string(label)},
        };
        if (outcome.invocation) {
            record["invocation"] = *outcome.invocation;
            record["multiline_rejected"] = outcome.multiline_rejected;
        }
        if (outcome.error_category) {
            record["error_category"] = to_string(*outcome.error_category);
        }
        if (outcome.evidence) {
            record["exec_status"] = to_string(outcome.evidence->status);
            record["exit_code"] = outcome.evidence->exit_code ? json(*outcome.evidence->exit_code) : json(nullptr);
        }
        return record;
    }

    json to_json(const InvocationResult& result) {
        json attempts = json::array();
        for (const auto& attempt : result.attempts) {
            attempts.push_back(json{
                    {"iteration", attempt.iteration},
                    {"category", attempt.category ? json(to_string(*attempt.category)) : json(nullptr)},
                    {"exit_status", to_string(attempt.outcome.status)},
                    {"exit_code", attempt.outcome.exit_code ? json(*attempt.outcome.exit_code) : json(nullptr)},
                    {"code", attempt.code},
            });
        }
        json record{
                {"sample_id", result.sample_id},
                {"status", to_string(result.status)},
                {"attempts", std::move(attempts)},
        };
        if (result.final_code) {
            record["final_code"] = *result.final_code;
        }
        if (result.status == InvocationStatus::skipped) {
            record["skip_reason"] = result.skip_reason;
        }
        return record;
    }

    json to_json(const ClassifyReport& report) {
        json doc{{"total", report.total}, {"skipped", report.skipped}, {"scored", nullptr}};
        if (report.score) {
            const auto& c = report.score->counts;
            const auto& m = report.score->metrics;
            auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
            doc["scored"] = c.total();
            doc["confusion"] = json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
            doc["precision"] = opt(m.precision);
            doc["recall"] = opt(m.recall);
            doc["accuracy"] = opt(m.accuracy);
            doc["f1"] = opt(m.f1);
        }
        return doc;
    }

    struct Pipeline::State {
        explicit State(const fs::path& out)
            : classifications(load_last_records(out / classifications_file)),
              invocations(load_last_records(out / invocations_file)),
              artifacts(load_last_records(out / artifacts_file)),
              classification_sink(out / classifications_file),
              invocation_sink(out / invocations_file),
              artifact_sink(out / artifacts_file) {}

        std::optional<json> last(const std::unordered_map<std::string, json>& records, const std::string& id) const {
            std::lock_guard lock{mutex};
            auto it = records.find(id);
            if (it == records.end()) {
                return std::nullopt;
            }
            return it->second;
        }

        void append(std::unordered_map<std::string, json>& records, JsonlAppender& sink, const json& record) {
            sink.append(record);
            std::lock_guard lock{mutex};
            records.insert_or_assign(record.at("sample_id").get<std::string>(), record);
        }

        mutable std::mutex mutex{};
        std::unordered_map<std::string, json> classifications;
        std::unordered_map<std::string, json> invocations;
        std::unordered_map<std::string, json> artifacts;
        JsonlAppender classification_sink;
        JsonlAppender invocation_sink;
        JsonlAppender artifact_sink;
        std::atomic<std::size_t> resumed{0};
    };

    Pipeline::Pipeline(RunConfig config, std::shared_ptr<ChatProvider> provider) : config_(std::move(config)) {
        validate(config_);
        corpus_ = load_corpus(config_.corpus_path);
        provider_ = provider ? std::move(provider) : make_provider(config_);

        GatewayOptions options{};
        options.mode = config_.cassette_mode;
        options.cassette_path = config_.cassette_path;
        options.max_in_flight = config_.max_parallel;
        gateway_ = std::make_unique<LlmGateway>(provider_, options);

        SandboxConfig sandbox{};
        sandbox.interpreter = config_.interpreter;
        sandbox.default_timeout = config_.sandbox_timeout;
        sandbox.stream_cap = config_.stream_cap;
        sandbox.max_parallel = config_.max_parallel;
        sandbox.proxy = config_.sandbox_proxy;
        sandbox_ = std::make_unique<Sandbox>(sandbox);
        if (!config_.runner_shim.empty()) {
            runner_ = std::make_unique<SuiteRunner>(*sandbox_, config_.runner_shim);
        }

        fs::create_directories(config_.out_dir);
        audit_ = std::make_unique<AuditLog>(config_.out_dir / audit_file);
        state_ = std::make_unique<State>(config_.out_dir);
    }

    Pipeline::~Pipeline() = default;

    std::size_t Pipeline::provider_calls() const noexcept {
        return gateway_->provider_calls();
    }

    std::optional<ClassificationOutcome> Pipeline::classification_for(const FocalSample& sample) {
        auto method = config_.classification_method;
        if (auto prior = state_->last(state_->classifications, sample.id);
            prior && !is_skip(*prior) && prior->at("method").get<std::string>() == to_string(method)) {
            ClassificationOutcome outcome{};
            outcome.sample_id = sample.id;
            outcome.method = method;
            outcome.predicted = parse_prediction(prior->at("predicted").get<std::string>());
            return outcome;
        }

        auto stage = method == ClassifierMethod::ibc ? stage_ibc : stage_direct;
        StageClient client{*gateway_, *audit_, sample.id, stage};
        try {
            auto outcome = method == ClassifierMethod::ibc ? classify_ibc(sample, client, *sandbox_)
                                                           : classify_direct(sample, client);
            state_->append(state_->classifications, state_->classification_sink, to_json(outcome, sample.label));
            return outcome;
        }
        catch (const std::exception& e) {
            auto record = skip_record(sample, stage, e.what());
            record["method"] = to_string(method);
            state_->append(state_->classifications, state_->classification_sink, record);
            return std::nullopt;
        }
    }

    std::optional<InvocationResult> Pipeline::invocation_for(const FocalSample& sample) {
        if (auto prior = state_->last(state_->invocations, sample.id); prior) {
            auto status = parse_invocation_status(prior->at("status").get<std::string>());
            if (status != InvocationStatus::skipped) {
                InvocationResult result{};
                result.sample_id = sample.id;
                result.status = status;
                if (auto it = prior->find("final_code"); it != prior->end()) {
                    result.final_code = it->get<std::string>();
                }
                return result;
            }
        }

        StageClient client{*gateway_, *audit_, sample.id, stage_eic};
        EicConfig eic{};
        eic.max_iters = config_.max_eic_iters;
        eic.feedback = config_.eic_feedback;
        InvocationResult result{};
        try {
            result = construct_invocation(sample, client, *sandbox_, eic);
        }
        catch (const std::exception& e) {
            result.sample_id = sample.id;
            result.status = InvocationStatus::skipped;
            result.skip_reason = e.what();
        }
        state_->append(state_->invocations, state_->invocation_sink, to_json(result));
        if (result.status == InvocationStatus::skipped) {
            return std::nullopt;
        }
        return result;
    }

    void Pipeline::process_sample(const FocalSample& sample, Depth depth) {
        if (depth == Depth::generate) {
            if (auto prior = state_->last(state_->artifacts, sample.id); prior && !is_skip(*prior)) {
                ++state_->resumed;
                return;
            }
        }
        auto skip_artifact = [&](std::string_view stage, std::string_view reason) {
            if (depth == Depth::generate) {
                state_->append(state_->artifacts, state_->artifact_sink, skip_record(sample, stage, reason));
            }
        };

        try {
            RouteConfig route_config{};
            route_config.mode = config_.generation_mode;
            route_config.external_hook = config_.external_hook;

            // The baseline generates for every sample, so it has nothing to classify.
            bool needs_classification = depth == Depth::classify || config_.generation_mode == GenerationMode::fixturize;
            auto origin = SuiteOrigin::direct_baseline;
            if (needs_classification) {
                auto outcome = classification_for(sample);
                if (!outcome) {
                    skip_artifact("classification", "classification did not complete");
                    return;
                }
                origin = route(outcome->predicted, route_config);
            }
            if (depth == Depth::classify) {
                return;
            }

            if (!is_executable_language(sample.language)) {
                skip_artifact("generation", fmt::format("language '{}' cannot be executed", sample.language));
                return;
            }

            std::optional<std::string> exemplar{};
            if (origin == SuiteOrigin::fixturize) {
                auto invocation = invocation_for(sample);
                if (!invocation) {
                    skip_artifact(stage_eic, "invocation construction did not complete");
                    return;
                }
                exemplar = invocation->final_code;
            }
            if (depth == Depth::invoke) {
                return;
            }

            GenerationConfig generation{};
            generation.cases_per_suite = config_.cases_per_suite;
            generation.drop_persistent_failures = config_.drop_persistent_failures;
            generation.collect_coverage = config_.collect_coverage;

            TestSuiteArtifact artifact{};
            if (origin == SuiteOrigin::routed_external) {
                artifact = run_external_hook(sample, route_config, *runner_, generation);
            }
            else {
                StageClient client{*gateway_, *audit_, sample.id, stage_utg};
                auto mode = origin == SuiteOrigin::fixturize ? GenerationMode::fixturize : GenerationMode::direct_baseline;
                try {
                    artifact = generate_suite(sample, exemplar, mode, client, *runner_, generation);
                }
                catch (const LlmError& e) {
                    skip_artifact(stage_utg, e.what());
                    return;
                }
            }
            write_suite_files(config_.out_dir / sanitize_path_component(sample.id), sample, artifact);
            state_->append(state_->artifacts, state_->artifact_sink, to_json(artifact));
        }
        catch (const std::exception& e) {
            skip_artifact("pipeline", e.what());
        }
    }

    void Pipeline::process_all(Depth depth) {
        if (depth == Depth::generate && !runner_) {
            throw std::invalid_argument("runner_shim is not configured");
        }
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex{};
        std::exception_ptr first_error{};
        {
            std::vector<std::jthread> workers{};
            auto n = std::min(config_.max_parallel, std::max<std::size_t>(corpus_.size(), 1));
            for (std::size_t w = 0; w < n; ++w) {
                workers.emplace_back([&] {
                    for (auto i = next++; i < corpus_.size(); i = next++) {
                        try {
                            process_sample(corpus_[i], depth);
                        }
                        catch (...) {
                            std::lock_guard lock{error_mutex};
                            if (!first_error) {
                                first_error = std::current_exception();
                            }
                        }
                    }
                });
            }
        }
        write_audit_summary();
        if (first_error) {
            std::rethrow_exception(first_error);
        }
    }

    void Pipeline::write_audit_summary() const {
        write_text(config_.out_dir / audit_summary_file, audit_->summary().dump(2) + "\n");
    }

    ClassifyReport Pipeline::classify() {
        process_all(Depth::classify);

        ClassifyReport report{};
        report.total = corpus_.size();
        std::vector<ClassificationOutcome> outcomes{};
        for (const auto& sample : corpus_) {
            auto record = state_->last(state_->classifications, sample.id);
            if (!record || is_skip(*record)) {
                ++report.skipped;
                continue;
            }
            ClassificationOutcome outcome{};
            outcome.sample_id = sample.id;
            outcome.method = parse_classifier_method(record->at("method").get<std::string>());
            outcome.predicted = parse_prediction(record->at("predicted").get<std::string>());
            outcomes.push_back(std::move(outcome));
        }
        bool any_labeled = false;
        for (const auto& outcome : outcomes) {
            for (const auto& sample : corpus_) {
                if (sample.id == outcome.sample_id && sample.label != Label::unlabeled) {
                    any_labeled = true;
                }
            }
        }
        if (any_labeled) {
            report.score = score_classification(outcomes, corpus_);
        }
        else {
            std::cerr << "warning: no labeled samples were classified; scores omitted\n";
        }
        write_text(config_.out_dir / classification_report_file, to_json(report).dump(2) + "\n");
        return report;
    }

    void Pipeline::invoke() {
        process_all(Depth::invoke);
    }

    void Pipeline::generate() {
        process_all(Depth::generate);
    }

    RunReport Pipeline::run() {
        state_->resumed = 0;
        process_all(Depth::generate);

        std::vector<TestSuiteArtifact> artifacts{};
        for (const auto& sample : corpus_) {
            auto record = state_->last(state_->artifacts, sample.id);
            if (record && !is_skip(*record)) {
                artifacts.push_back(artifact_from_json(*record));
            }
        }
        RunReport report{};
        report.document.reports = build_reports(artifacts);
        report.document.samples_total = corpus_.size();
        report.document.samples_skipped = corpus_.size() - artifacts.size();
        report.resumed = state_->resumed;
        write_reports(config_.out_dir, report.document);
        return report;
    }

    ReportDocument evaluate_artifacts(const fs::path& out_dir) {
        auto index = out_dir / artifacts_file;
        if (!fs::exists(index)) {
            throw std::runtime_error(fmt::format("no artifact index at {}", index.string()));
        }
        std::vector<std::string> order{};
        std::unordered_map<std::string, std::optional<TestSuiteArtifact>> last{};
        read_jsonl(index, [&](std::size_t, const json& record) {
            auto id = record.at("sample_id").get<std::string>();
            std::optional<TestSuiteArtifact> artifact{};
            if (!is_skip(record)) {
                artifact = artifact_from_json(record);
            }
            if (!last.contains(id)) {
                order.push_back(id);
            }
            last.insert_or_assign(id, std::move(artifact));
        });

        std::vector<TestSuiteArtifact> artifacts{};
        for (const auto& id : order) {
            if (const auto& artifact = last.at(id)) {
                artifacts.push_back(*artifact);
            }
        }
        ReportDocument document{};
        document.reports = build_reports(artifacts);
        document.samples_total = order.size();
        document.samples_skipped = order.size() - artifacts.size();
        return document;
    }

    void write_reports(const fs::path& out_dir, const ReportDocument& document) {
        fs::create_directories(out_dir);
        write_text(out_dir / "report.json", emit_report(document, ReportFormat::json));
        write_text(out_dir / "report.csv", emit_report(document, ReportFormat::csv));
        write_text(out_dir / "report.md", emit_report(document, ReportFormat::markdown));
    }

}  // namespace fixturegen
