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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "idsens/confusion.hpp"
#include "idsens/data_pipeline.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"
#include "idsens/metrics.hpp"

namespace idsens {

/// Scores a candidate feature subset; higher is better. Must be
/// deterministic for the selection to be reproducible.
using SubsetEvaluator = std::function<double(const FeatureSubset&)>;

/// Fits on the first matrix and returns predicted labels for the second.
using FitPredict = std::function<std::vector<int>(const SampleMatrix& train, const SampleMatrix& test)>;

/// Unweighted mean F1 over the classes that occur in either the truth or the
/// predictions.
inline double macro_f1(const ConfusionMatrix& cm) {
    const auto report = compute_metrics(cm);
    double total = 0.0;
    int used = 0;
    for (std::size_t c = 0; c < cm.size(); ++c) {
        if (cm.row_total(c) == 0 && cm.column_total(c) == 0) continue;
        total += report.classes[c].f_measure;
        ++used;
    }
    return used == 0 ? 0.0 : total / used;
}

/// Evaluator that splits `m` 75/25 (stratified, seeded) once, then scores
/// each subset by the macro F1 of `fit_predict` on the held-out quarter.
inline SubsetEvaluator holdout_f1_evaluator(const SampleMatrix& m, FitPredict fit_predict, std::uint64_t seed) {
    auto split = std::make_shared<SplitResult>(stratified_split(m, 0.75, seed));
    if (split->validation.n() == 0) fail(ErrorCode::InvalidArgument, "too few rows for a held-out split");
    return [split, fit_predict = std::move(fit_predict)](const FeatureSubset& subset) {
        const auto train = apply_feature_subset(split->train, subset);
        const auto test = apply_feature_subset(split->validation, subset);
        const auto predicted = fit_predict(train, test);
        return macro_f1(confusion_matrix(test.labels, predicted));
    };
}

struct SelectionStep {
    std::string added;
    double score = 0.0;
};

struct SelectionResult {
    FeatureSubset subset;
    /// Feature added at each greedy step and the score of the prefix it ends.
    std::vector<SelectionStep> trace;
};

/// Greedy forward selection over the columns of `m`. Each step adds the
/// feature with the highest evaluator score (earliest column on ties) until
/// `max_k` features are chosen; the shortest prefix with the best score wins.
inline SelectionResult sfs_forward_select_traced(const SubsetEvaluator& evaluator, const SampleMatrix& m, int max_k) {
    if (max_k < 1 || static_cast<std::size_t>(max_k) > m.d()) {
        fail(ErrorCode::InvalidArgument, "max_k must lie in [1, " + std::to_string(m.d()) + "]");
    }
    SelectionResult result;
    std::vector<bool> used(m.d(), false);
    FeatureSubset current;
    for (int step = 0; step < max_k; ++step) {
        std::size_t best = m.d();
        double best_score = 0.0;
        for (std::size_t j = 0; j < m.d(); ++j) {
            if (used[j]) continue;
            FeatureSubset candidate = current;
            candidate.names.push_back(m.feature_names[j]);
            const double score = evaluator(candidate);
            if (best == m.d() || score > best_score) {
                best = j;
                best_score = score;
            }
        }
        used[best] = true;
        current.names.push_back(m.feature_names[best]);
        result.trace.push_back({m.feature_names[best], best_score});
    }
    std::size_t best_len = 1;
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
        if (result.trace[k].score > result.trace[best_len - 1].score) best_len = k + 1;
    }
    result.subset.names.assign(current.names.begin(), current.names.begin() + static_cast<std::ptrdiff_t>(best_len));
    return result;
}

inline FeatureSubset sfs_forward_select(const SubsetEvaluator& evaluator, const SampleMatrix& m, int max_k) {
    return sfs_forward_select_traced(evaluator, m, max_k).subset;
}

}  // namespace idsens
