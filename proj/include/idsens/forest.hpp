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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"
#include "idsens/parallel.hpp"
#include "idsens/rng.hpp"
#include "idsens/tree.hpp"

namespace idsens {

enum class ForestKind { RandomForest, BalancedBagging };

constexpr std::string_view to_string(ForestKind k) {
    return k == ForestKind::RandomForest ? "rf-hddt" : "balanced-bagging";
}

/// Bag of classification trees; scores are the mean of the trees' leaf
/// class proportions.
struct ForestModel {
    ForestKind kind = ForestKind::RandomForest;
    SplitCriterion criterion = SplitCriterion::Hellinger;
    TreeParams tree_params;
    std::uint64_t seed = 0;
    std::size_t n_features = 0;
    std::vector<TrainedTree> trees;
    /// Class counts of each tree's training sample.
    std::vector<ClassCounts> sample_counts;

    friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

struct RandomForestParams {
    int n_trees = 100;
    TreeParams tree;
    SplitCriterion criterion = SplitCriterion::Hellinger;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

/// ceil(sqrt(d)), the per-node feature count used by default.
inline int sqrt_features(std::size_t d) {
    return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)))));
}

inline ForestModel fit_random_forest(const SampleMatrix& data, const RandomForestParams& params,
                                     unsigned threads = default_thread_count()) {
    check_sample_matrix(data);
    if (params.n_trees < 1) fail(ErrorCode::InvalidArgument, "forest needs at least one tree");
    ForestModel model;
    model.kind = ForestKind::RandomForest;
    model.criterion = params.criterion;
    model.tree_params = params.tree;
    model.seed = params.seed;
    model.n_features = data.d();
    model.trees.resize(static_cast<std::size_t>(params.n_trees));
    model.sample_counts.resize(model.trees.size());

    parallel_for(model.trees.size(), threads, [&](std::size_t t) {
        std::vector<std::size_t> rows(data.n());
        if (params.bootstrap) {
            Rng rng(derive_seed(params.seed, 2 * t));
            for (auto& r : rows) r = rng.below(data.n());
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        TreeParams tp = params.tree;
        tp.seed = derive_seed(params.seed, 2 * t + 1);
        ClassCounts counts{};
        for (auto r : rows) ++counts[static_cast<std::size_t>(data.labels[r])];
        model.sample_counts[t] = counts;
        model.trees[t] = fit_tree(data, rows, tp, params.criterion);
    });
    return model;
}

struct BalancedBaggingParams {
    int n_estimators = 50;
    TreeParams tree;
    SplitCriterion criterion = SplitCriterion::GiniGain;
    /// Per-class sample size cap; unset means the smallest class count.
    std::optional<long long> target;
    std::uint64_t seed = 0;
};

/// Row indices of an undersample holding min(count_c, target) records of
/// every class, drawn without replacement.
inline std::vector<std::size_t> balanced_undersample(std::span<const int> labels, long long target, Rng& rng) {
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    std::vector<std::size_t> rows;
    for (auto& members : by_class) {
        const std::size_t take = std::min<std::size_t>(members.size(), static_cast<std::size_t>(std::max(0LL, target)));
        // partial Fisher-Yates: the first `take` slots become the sample
        for (std::size_t k = 0; k < take; ++k) std::swap(members[k], members[k + rng.below(members.size() - k)]);
        rows.insert(rows.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

inline ForestModel fit_balanced_bagging(const SampleMatrix& data, const BalancedBaggingParams& params,
                                        unsigned threads = default_thread_count()) {
    check_sample_matrix(data);
    if (params.n_estimators < 1) fail(ErrorCode::InvalidArgument, "bagging needs at least one estimator");
    const ClassCounts counts = count_classes(data.labels);
    long long smallest = 0;
    for (auto c : counts) {
        if (c > 0 && (smallest == 0 || c < smallest)) smallest = c;
    }
    const long long target = params.target.value_or(smallest);
    if (target < 1) fail(ErrorCode::InvalidArgument, "sampling target must be positive");

    ForestModel model;
    model.kind = ForestKind::BalancedBagging;
    model.criterion = params.criterion;
    model.tree_params = params.tree;
    model.seed = params.seed;
    model.n_features = data.d();
    model.trees.resize(static_cast<std::size_t>(params.n_estimators));
    model.sample_counts.resize(model.trees.size());

    parallel_for(model.trees.size(), threads, [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, 2 * t));
        const auto rows = balanced_undersample(data.labels, target, rng);
        TreeParams tp = params.tree;
        tp.seed = derive_seed(params.seed, 2 * t + 1);
        ClassCounts sample{};
        for (auto r : rows) ++sample[static_cast<std::size_t>(data.labels[r])];
        model.sample_counts[t] = sample;
        model.trees[t] = fit_tree(data, rows, tp, params.criterion);
    });
    return model;
}

inline ScoreMatrix predict_proba(const ForestModel& model, const SampleMatrix& m) {
    if (m.d() != model.n_features) {
        fail(ErrorCode::ArityMismatch, "input has " + std::to_string(m.d()) + " features, model expects " +
                                           std::to_string(model.n_features));
    }
    if (model.trees.empty()) fail(ErrorCode::NotFitted, "forest has no trees");
    ScoreMatrix scores(m.n(), kNumClasses);
    const double inv = 1.0 / static_cast<double>(model.trees.size());
    for (std::size_t i = 0; i < m.n(); ++i) {
        auto out = scores.row(i);
        for (const auto& tree : model.trees) {
            const auto& p = tree_predict_proba(tree, m.values.row(i));
            for (std::size_t c = 0; c < kNumClasses; ++c) out[c] += p[c];
        }
        for (auto& v : out) v *= inv;
    }
    return scores;
}

}  // namespace idsens
