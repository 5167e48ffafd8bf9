// Copyright 2026 The idsens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idsens/artifact.hpp"
#include "idsens/booster.hpp"
#include "idsens/confusion.hpp"
#include "idsens/data_pipeline.hpp"
#include "idsens/forest.hpp"
#include "idsens/metrics.hpp"
#include "idsens/overlap.hpp"
#include "idsens/parallel.hpp"
#include "idsens/rng.hpp"

namespace idsens {

inline constexpr std::uint64_t kDefaultSeed = 20151;

struct EnsembleConfig {
    std::uint64_t seed = kDefaultSeed;
    /// Share of the training data the models are fitted on; the rest feeds
    /// the overlap statistics.
    double train_fraction = 0.8;
    RandomForestParams forest;
    /// Features examined per forest node; unset means ceil(sqrt(d)).
    std::optional<int> forest_max_features;
    BalancedBaggingParams bagging;
    BoosterParams booster;
    FeatureSubset ensemble_features = elastic_net_features();
    FeatureSubset forest_features = forward_selected_features();
    unsigned threads = default_thread_count();
};

struct TrainingLog {
    std::size_t fit_rows = 0;
    std::size_t validation_rows = 0;
    ClassCounts fit_counts{};
    ClassCounts validation_counts{};
    /// Validation confusion of the two corrected models; empty matrices when
    /// there was no validation part.
    std::optional<ConfusionMatrix> bagging_validation;
    std::optional<ConfusionMatrix> booster_validation;
};

/// Fits the three models and the two overlap models. `schema` must carry
/// nominal maps and describe the columns of `train`.
inline EnsembleArtifact train_full_ensemble(const SampleMatrix& train, const FeatureSchema& schema,
                                            const EnsembleConfig& config, TrainingLog* log = nullptr) {
    check_sample_matrix(train);
    if (!schema.has_nominal_maps()) fail(ErrorCode::NotFitted, "schema has nominal columns without code tables");
    if (train.feature_names != schema.feature_names()) fail(ErrorCode::SchemaMismatch, "training matrix does not match the schema");
    validate_feature_subset(config.ensemble_features, train.feature_names);
    validate_feature_subset(config.forest_features, train.feature_names);

    const auto split = stratified_split(train, config.train_fraction, config.seed);

    EnsembleArtifact a;
    a.schema = schema;
    a.ensemble_features = config.ensemble_features;
    a.forest_features = config.forest_features;
    a.scaler = fit_minmax(split.train);
    const auto fit_part = apply_minmax(a.scaler, split.train);
    const auto fit_ensemble = apply_feature_subset(fit_part, a.ensemble_features);
    const auto fit_forest = apply_feature_subset(fit_part, a.forest_features);

    auto bagging = config.bagging;
    bagging.seed = derive_seed(config.seed, 1);
    auto forest = config.forest;
    forest.seed = derive_seed(config.seed, 2);
    forest.tree.feature_subsample = config.forest_max_features.value_or(sqrt_features(fit_forest.d()));

    a.bagging = fit_balanced_bagging(fit_ensemble, bagging, config.threads);
    a.booster = fit_gradient_booster(fit_ensemble, config.booster, config.threads);
    a.forest = fit_random_forest(fit_forest, forest, config.threads);

    a.bagging_overlap = identity_overlap_model();
    a.booster_overlap = identity_overlap_model();
    std::optional<ConfusionMatrix> bagging_cm, booster_cm;
    if (split.validation.n() > 0) {
        const auto val = apply_feature_subset(apply_minmax(a.scaler, split.validation), a.ensemble_features);
        const auto bagging_scores = predict_proba(a.bagging, val);
        const auto booster_scores = predict_proba(a.booster, val);
        a.bagging_overlap = fit_overlap_model(bagging_scores, val.labels);
        a.booster_overlap = fit_overlap_model(booster_scores, val.labels);
        bagging_cm = confusion_matrix(val.labels, row_argmax(bagging_scores));
        booster_cm = confusion_matrix(val.labels, row_argmax(booster_scores));
    }

    if (log) {
        log->fit_rows = split.train.n();
        log->validation_rows = split.validation.n();
        log->fit_counts = count_classes(split.train.labels);
        log->validation_counts = count_classes(split.validation.labels);
        log->bagging_validation = std::move(bagging_cm);
        log->booster_validation = std::move(booster_cm);
    }
    validate_artifact(a);
    return a;
}

struct EvaluateOptions {
    bool correction = true;
    VoteMode vote = VoteMode::Sum;
};

struct EnsembleScores {
    ScoreMatrix bagging_raw;
    ScoreMatrix booster_raw;
    ScoreMatrix forest;
    /// Scores after the overlap correction; copies of the raw ones when
    /// correction is off.
    ScoreMatrix bagging;
    ScoreMatrix booster;
    std::vector<int> predicted;
};

/// Scales, projects and scores unscaled rows laid out like the artifact's
/// schema features.
inline EnsembleScores score_ensemble(const EnsembleArtifact& a, const SampleMatrix& data, const EvaluateOptions& options = {},
                                     unsigned threads = default_thread_count()) {
    if (data.feature_names != a.scaler.feature_names) {
        fail(ErrorCode::SchemaMismatch, "input features do not match the artifact's schema");
    }
    const auto scaled = apply_minmax(a.scaler, data);
    const auto ensemble_input = apply_feature_subset(scaled, a.ensemble_features);
    const auto forest_input = apply_feature_subset(scaled, a.forest_features);

    EnsembleScores s;
    parallel_for(3, threads, [&](std::size_t k) {
        if (k == 0) s.bagging_raw = predict_proba(a.bagging, ensemble_input);
        if (k == 1) s.booster_raw = predict_proba(a.booster, ensemble_input);
        if (k == 2) s.forest = predict_proba(a.forest, forest_input);
    });
    if (options.correction) {
        s.bagging = modify_membership_scores(s.bagging_raw, a.bagging_overlap);
        s.booster = modify_membership_scores(s.booster_raw, a.booster_overlap);
    } else {
        s.bagging = s.bagging_raw;
        s.booster = s.booster_raw;
    }
    const ScoreMatrix* members[] = {&s.bagging, &s.booster, &s.forest};
    s.predicted = combine_votes(members, options.vote);
    return s;
}

struct Evaluation {
    EnsembleScores scores;
    ConfusionMatrix multiclass;
    MetricsReport multiclass_report;
    ConfusionMatrix binary;
    MetricsReport binary_report;
};

inline Evaluation evaluate_artifact(const EnsembleArtifact& a, const SampleMatrix& test, const EvaluateOptions& options = {},
                                    unsigned threads = default_thread_count()) {
    check_sample_matrix(test);
    Evaluation e;
    e.scores = score_ensemble(a, test, options, threads);
    e.multiclass = confusion_matrix(test.labels, e.scores.predicted);
    e.multiclass_report = compute_metrics(e.multiclass);
    e.binary = collapse_to_binary(e.multiclass);
    e.binary_report = compute_metrics(e.binary);
    return e;
}

}  // namespace idsens
