// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#include "fixturegen/classifier.hpp"

#include "fixturegen/text.hpp"

#include <fmt/format.h>

#include <unordered_map>

namespace fixturegen {

    namespace {
        constexpr std::string_view invocation_instruction =
                "Generate a minimal one-line function invocation example based on the given Python code.";

        const std::array<FewShotExample, 2> shipped_shots{{
                {"def add(a, b):\n    return a + b", "add(1, 2)"},
                {"def greet(name: str, punctuation: str = \"!\") -> str:\n"
                 "    return f\"Hello, {name}{punctuation}\"",
                 "greet(\"Alice\", punctuation=\"?\")"},
        }};
    }  // namespace

    std::string_view to_string(Prediction prediction) {
        return prediction == Prediction::dependent ? "dependent" : "independent";
    }

    Prediction parse_prediction(std::string_view text) {
        if (text == "dependent") {
            return Prediction::dependent;
        }
        if (text == "independent") {
            return Prediction::independent;
        }
        throw std::invalid_argument(fmt::format("unknown prediction '{}'", text));
    }

    std::string_view to_string(ClassifierMethod method) {
        return method == ClassifierMethod::ibc ? "ibc" : "direct";
    }

    ClassifierMethod parse_classifier_method(std::string_view text) {
        if (text == "ibc") {
            return ClassifierMethod::ibc;
        }
        if (text == "direct") {
            return ClassifierMethod::direct;
        }
        throw std::invalid_argument(fmt::format("unknown classifier method '{}'", text));
    }

    std::span<const FewShotExample, 2> default_shots() {
        return shipped_shots;
    }

    ChatRequest build_classifier_prompt(const FocalSample& sample, std::span<const FewShotExample, 2> shots) {
        std::string prompt{};
        prompt += fmt::format("{}\n", invocation_instruction);
        prompt += fmt::format("code: {}\n", sample.code);
        prompt += "The output must follow the two examples:\n";
        for (std::size_t i = 0; i < shots.size(); ++i) {
            prompt += fmt::format("{}.{}\n", i + 1, invocation_instruction);
            prompt += fmt::format("  code:{}\n", shots[i].code);
            prompt += fmt::format("  output:{}\n", shots[i].invocation);
        }
        prompt += "Note that the output must be exactly one single-line function invocation, "
                  "because it will be used in this framework:\n";
        prompt += "```python\n"
                  "if __name__ == \"__main__\":\n"
                  "    try:\n"
                  "        #the single-line function invocation example here\n"
                  "    except Exception as e:\n"
                  "        print(e)\n"
                  "        exit(1)\n"
                  "```";
        return ChatRequest::from_user_text(std::move(prompt));
    }

    ChatRequest build_direct_classifier_prompt(const FocalSample& sample) {
        auto prompt = fmt::format(
                "Determine whether the function can be correctly invoked solely by parameter passing without any "
                "previous setup.\n"
                "code: {}\n"
                "The output must be only \"yes\" or \"no\" without any other words.",
                sample.code);
        return ChatRequest::from_user_text(std::move(prompt));
    }

    ClassificationOutcome classify_ibc(const FocalSample& sample, ChatClient& client, const Sandbox& sandbox,
                                       std::span<const FewShotExample, 2> shots) {
        if (!is_executable_language(sample.language)) {
            throw std::invalid_argument(
                    fmt::format("sample '{}' is in '{}', which the sandbox cannot execute", sample.id, sample.language));
        }
        ClassificationOutcome outcome{};
        outcome.sample_id = sample.id;
        outcome.method = ClassifierMethod::ibc;

        auto reply = client.complete(build_classifier_prompt(sample, shots));

        std::string line{};
        try {
            line = extract_code(reply.text, CodeKind::single_line);
        }
        catch (const MultilineViolation& violation) {
            // Needing more than one statement is itself evidence of setup.
            outcome.invocation = violation.extracted();
            outcome.multiline_rejected = true;
            outcome.predicted = Prediction::dependent;
            return outcome;
        }
        outcome.invocation = line;

        ExecutionRequest request{};
        request.program_text = build_ibc_program(sample.code, line);
        request.aux_files.emplace(fmt::format("{}.py", sample.base_name), sample.code);
        auto evidence = sandbox.execute(request);

        outcome.predicted = evidence.succeeded() ? Prediction::independent : Prediction::dependent;
        if (!evidence.succeeded()) {
            outcome.error_category = categorize_error(evidence.combined_output());
        }
        outcome.evidence = std::move(evidence);
        return outcome;
    }

    InvalidReplyError::InvalidReplyError(std::string reply)
        : std::runtime_error(fmt::format("expected \"yes\" or \"no\", got \"{}\"", truncate_head(reply, 200))),
          reply_(std::move(reply)) {}

    Prediction parse_direct_reply(std::string_view reply) {
        auto text = to_lower(trim(reply));
        std::string_view view{text};
        auto strip = [&](std::string_view chars) {
            while (!view.empty() && chars.find(view.front()) != std::string_view::npos) {
                view.remove_prefix(1);
            }
            while (!view.empty() && chars.find(view.back()) != std::string_view::npos) {
                view.remove_suffix(1);
            }
        };
        strip(" \t\r\n\"'`*");
        strip(".,!;: \t\r\n\"'`*");
        if (view == "yes") {
            return Prediction::independent;
        }
        if (view == "no") {
            return Prediction::dependent;
        }
        throw InvalidReplyError(std::string{reply});
    }

    ClassificationOutcome classify_direct(const FocalSample& sample, ChatClient& client) {
        auto reply = client.complete(build_direct_classifier_prompt(sample));
        ClassificationOutcome outcome{};
        outcome.sample_id = sample.id;
        outcome.method = ClassifierMethod::direct;
        outcome.predicted = parse_direct_reply(reply.text);
        return outcome;
    }

    ClassificationMetrics classification_metrics(const ConfusionCounts& counts) {
        ClassificationMetrics metrics{};
        auto tp = static_cast<double>(counts.tp);
        auto fp = static_cast<double>(counts.fp);
        auto tn = static_cast<double>(counts.tn);
        auto fn = static_cast<double>(counts.fn);
        if (counts.tp + counts.fp > 0) {
            metrics.precision = tp / (tp + fp);
        }
        if (counts.tp + counts.fn > 0) {
            metrics.recall = tp / (tp + fn);
        }
        if (counts.total() > 0) {
            metrics.accuracy = (tp + tn) / (tp + fp + tn + fn);
        }
        if (metrics.precision && metrics.recall && *metrics.precision + *metrics.recall > 0.0) {
            auto p = *metrics.precision;
            auto r = *metrics.recall;
            metrics.f1 = 2.0 * (p * r) / (p + r);
        }
        return metrics;
    }

    ConfusionCounts tally(std::span<const std::pair<Prediction, Label>> predictions) {
        ConfusionCounts counts{};
        for (const auto& [predicted, label] : predictions) {
            if (label == Label::unlabeled) {
                continue;
            }
            bool positive = predicted == Prediction::dependent;
            bool actual = label == Label::dependent;
            if (positive && actual) {
                ++counts.tp;
            }
            else if (positive) {
                ++counts.fp;
            }
            else if (actual) {
                ++counts.fn;
            }
            else {
                ++counts.tn;
            }
        }
        return counts;
    }

    ClassificationScore score_classification(std::span<const ClassificationOutcome> outcomes,
                                             std::span<const FocalSample> corpus) {
        std::unordered_map<std::string_view, Label> labels{};
        for (const auto& sample : corpus) {
            labels.emplace(sample.id, sample.label);
        }
        std::vector<std::pair<Prediction, Label>> pairs{};
        for (const auto& outcome : outcomes) {
            auto it = labels.find(outcome.sample_id);
            if (it == labels.end() || it->second == Label::unlabeled) {
                continue;
            }
            pairs.emplace_back(outcome.predicted, it->second);
        }
        if (pairs.empty()) {
            throw std::invalid_argument("no labeled, non-skipped samples to score");
        }
        ClassificationScore score{};
        score.counts = tally(pairs);
        score.metrics = classification_metrics(score.counts);
        return score;
    }

}  // namespace fixturegen
