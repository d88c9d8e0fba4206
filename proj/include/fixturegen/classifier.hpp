// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fixturegen Authors

#pragma once

#include "fixturegen/corpus.hpp"
#include "fixturegen/llm_gateway.hpp"
#include "fixturegen/sandbox.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fixturegen {

    enum class Prediction { dependent, independent };
    enum class ClassifierMethod { ibc, direct };

    std::string_view to_string(Prediction prediction);
    Prediction parse_prediction(std::string_view text);
    std::string_view to_string(ClassifierMethod method);
    ClassifierMethod parse_classifier_method(std::string_view text);

    struct ClassificationOutcome {
        std::string sample_id{};
        Prediction predicted{Prediction::dependent};
        ClassifierMethod method{ClassifierMethod::ibc};
        /// ibc only: the single line the model produced (also kept when rejected).
        std::optional<std::string> invocation{};
        /// ibc only: absent when the reply was rejected before execution.
        std::optional<ExecutionOutcome> evidence{};
        std::optional<ErrorCategory> error_category{};
        bool multiline_rejected{false};
    };

    struct FewShotExample {
        std::string code{};
        std::string invocation{};
    };

    /// The two formatting examples shipped with the tool.
    std::span<const FewShotExample, 2> default_shots();

    ChatRequest build_classifier_prompt(const FocalSample& sample, std::span<const FewShotExample, 2> shots);

    ChatRequest build_direct_classifier_prompt(const FocalSample& sample);

    /// Asks for a single-line invocation, runs it inside the guarded wrapper,
    /// and predicts independent only on a clean exit. Issues exactly one chat
    /// request; LLM errors propagate to the caller.
    ClassificationOutcome classify_ibc(const FocalSample& sample, ChatClient& client, const Sandbox& sandbox,
                                       std::span<const FewShotExample, 2> shots = default_shots());

    class InvalidReplyError : public std::runtime_error {
      public:
        explicit InvalidReplyError(std::string reply);
        const std::string& reply() const noexcept { return reply_; }

      private:
        std::string reply_;
    };

    /// "yes" means invocable without setup (independent); "no" means dependent.
    /// Whitespace, quotes, case, and trailing punctuation are ignored.
    Prediction parse_direct_reply(std::string_view reply);

    ClassificationOutcome classify_direct(const FocalSample& sample, ChatClient& client);

    /// Dependent is the positive class.
    struct ConfusionCounts {
        std::size_t tp{};
        std::size_t fp{};
        std::size_t tn{};
        std::size_t fn{};

        std::size_t total() const noexcept { return tp + fp + tn + fn; }
        friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
    };

    /// Each metric is absent when its denominator is zero.
    struct ClassificationMetrics {
        std::optional<double> precision{};
        std::optional<double> recall{};
        std::optional<double> accuracy{};
        std::optional<double> f1{};
    };

    ClassificationMetrics classification_metrics(const ConfusionCounts& counts);

    struct ClassificationScore {
        ConfusionCounts counts{};
        ClassificationMetrics metrics{};
    };

    ConfusionCounts tally(std::span<const std::pair<Prediction, Label>> predictions);

    /// Scores outcomes against corpus labels; unlabeled samples are ignored.
    /// Throws std::invalid_argument when nothing labeled remains.
    ClassificationScore score_classification(std::span<const ClassificationOutcome> outcomes,
                                             std::span<const FocalSample> corpus);

}  // namespace fixturegen
