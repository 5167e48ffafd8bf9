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

#include <cmath>

#include <gtest/gtest.h>

#include "idsens/idsens.hpp"
#include "support/expect_error.hpp"
#include "support/reference_tables.hpp"
#include "support/synthetic.hpp"

namespace idsens {
namespace {

void expect_row_stochastic(const ScoreMatrix& s) {
    for (std::size_t i = 0; i < s.rows(); ++i) {
        double sum = 0.0;
        for (double v : s.row(i)) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-6);
    }
}

SampleMatrix small_blobs(std::uint64_t seed, double spread = 1.5) {
    return testing::make_blobs(testing::scaled_counts(testing::kUnswTrainCounts, 0.003, 5), 6, spread, seed);
}

TEST(RandomForest, OneTreeWithoutBootstrapEqualsSingleTree) {
    const auto m = small_blobs(1);
    RandomForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.tree.feature_subsample = static_cast<int>(m.d());
    p.seed = 5;
    const auto forest = fit_random_forest(m, p, 1);
    TreeParams tp = p.tree;
    tp.seed = derive_seed(p.seed, 1);
    const auto tree = fit_tree(m, tp, SplitCriterion::Hellinger);
    const auto scores = predict_proba(forest, m);
    for (std::size_t i = 0; i < m.n(); ++i) {
        const auto& expected = tree_predict_proba(tree, m.values.row(i));
        for (std::size_t c = 0; c < kNumClasses; ++c) ASSERT_EQ(scores(i, c), expected[c]);
    }
}

TEST(RandomForest, OneTreeForestEqualsStackedTreePredictions) {
    const auto m = small_blobs(2);
    RandomForestParams p;
    p.n_trees = 1;
    p.tree.feature_subsample = 2;
    const auto forest = fit_random_forest(m, p, 1);
    const auto scores = predict_proba(forest, m);
    for (std::size_t i = 0; i < m.n(); ++i) {
        const auto& expected = tree_predict_proba(forest.trees[0], m.values.row(i));
        for (std::size_t c = 0; c < kNumClasses; ++c) ASSERT_EQ(scores(i, c), expected[c]);
    }
}

TEST(RandomForest, SeedDeterminismAcrossThreadCounts) {
    const auto m = small_blobs(3);
    RandomForestParams p;
    p.n_trees = 8;
    p.tree.feature_subsample = 3;
    p.seed = 11;
    const auto a = fit_random_forest(m, p, 1);
    EXPECT_EQ(a, fit_random_forest(m, p, 1));
    EXPECT_EQ(a, fit_random_forest(m, p, 4));
    p.seed = 12;
    EXPECT_NE(a, fit_random_forest(m, p, 1));
}

TEST(RandomForest, ScoresAreRowStochastic) {
    const auto m = small_blobs(4);
    RandomForestParams p;
    p.n_trees = 10;
    p.tree.feature_subsample = 2;
    expect_row_stochastic(predict_proba(fit_random_forest(m, p), m));
}

TEST(RandomForest, HellingerRecallsMinorityAtLeastAsWellAsEntropy) {
    // 95:5 two-class overlapping blobs; recall measured on a fresh sample.
    ClassCounts counts{};
    counts[0] = 950;
    counts[1] = 50;
    const auto train = testing::make_blobs(counts, 4, 1.6, 31);
    // fresh noise around the same class means
    std::array<std::vector<double>, 2> mean{std::vector<double>(4), std::vector<double>(4)};
    for (std::size_t i = 0; i < train.n(); ++i) {
        const auto c = static_cast<std::size_t>(train.labels[i]);
        for (std::size_t j = 0; j < 4; ++j) mean[c][j] += train.values(i, j) / static_cast<double>(counts[c]);
    }
    auto fresh = train;
    Rng rng(99);
    for (std::size_t i = 0; i < fresh.n(); ++i) {
        const auto c = static_cast<std::size_t>(fresh.labels[i]);
        for (std::size_t j = 0; j < 4; ++j) fresh.values(i, j) = mean[c][j] + 1.6 * testing::gaussian(rng);
    }
    auto recall = [&](SplitCriterion criterion) {
        RandomForestParams p;
        p.n_trees = 25;
        p.criterion = criterion;
        p.tree.feature_subsample = 2;
        p.tree.min_samples_leaf = 5;
        p.seed = 7;
        const auto predicted = row_argmax(predict_proba(fit_random_forest(train, p), fresh));
        long long hit = 0, total = 0;
        for (std::size_t i = 0; i < fresh.n(); ++i) {
            if (fresh.labels[i] != 1) continue;
            ++total;
            hit += predicted[i] == 1;
        }
        return static_cast<double>(hit) / static_cast<double>(total);
    };
    const double hellinger = recall(SplitCriterion::Hellinger);
    const double entropy = recall(SplitCriterion::EntropyGain);
    RecordProperty("hellinger_recall", std::to_string(hellinger));
    RecordProperty("entropy_recall", std::to_string(entropy));
    EXPECT_GE(hellinger, entropy);
}

TEST(BalancedBagging, DefaultTargetBalancesToMinority) {
    ClassCounts counts{};
    counts[0] = 100;
    counts[1] = 10;
    const auto m = testing::make_blobs(counts, 3, 1.0, 2);
    BalancedBaggingParams p;
    p.n_estimators = 5;
    const auto model = fit_balanced_bagging(m, p);
    for (const auto& sample : model.sample_counts) {
        EXPECT_EQ(sample[0], 10);
        EXPECT_EQ(sample[1], 10);
    }
}

TEST(BalancedBagging, SampleAuditAcrossEstimators) {
    const auto m = testing::make_blobs(testing::scaled_counts(testing::kUnswTrainCounts, 0.01), 4, 1.0, 6);
    BalancedBaggingParams p;
    p.n_estimators = 20;
    p.seed = 3;
    const auto model = fit_balanced_bagging(m, p);
    const auto counts = count_classes(m.labels);
    const long long target = *std::min_element(counts.begin(), counts.end());
    ASSERT_EQ(model.sample_counts.size(), 20u);
    for (const auto& sample : model.sample_counts) {
        for (auto c : sample) EXPECT_EQ(c, target);
    }
}

TEST(BalancedBagging, UndersampleHasNoDuplicates) {
    std::vector<int> labels(50, 0);
    labels.insert(labels.end(), 8, 1);
    Rng rng(1);
    auto rows = balanced_undersample(labels, 8, rng);
    EXPECT_EQ(rows.size(), 16u);
    EXPECT_EQ(std::adjacent_find(rows.begin(), rows.end()), rows.end());
}

TEST(BalancedBagging, OneEstimatorOnBalancedDataIsPlainTree) {
    ClassCounts counts{};
    counts[0] = counts[1] = counts[2] = 12;
    const auto m = testing::make_blobs(counts, 3, 1.0, 9);
    BalancedBaggingParams p;
    p.n_estimators = 1;
    p.target = 12;
    p.seed = 4;
    const auto model = fit_balanced_bagging(m, p);
    TreeParams tp;
    tp.seed = derive_seed(p.seed, 1);
    const auto tree = fit_tree(m, tp, SplitCriterion::GiniGain);
    EXPECT_EQ(model.trees[0], tree);
}

TEST(BalancedBagging, DeterministicAndStochastic) {
    const auto m = small_blobs(5);
    BalancedBaggingParams p;
    p.n_estimators = 6;
    p.seed = 8;
    const auto a = fit_balanced_bagging(m, p, 1);
    EXPECT_EQ(a, fit_balanced_bagging(m, p, 3));
    expect_row_stochastic(predict_proba(a, m));
}

TEST(Booster, ZeroRoundsPredictsUniform) {
    const auto m = small_blobs(6);
    BoosterParams p;
    p.n_rounds = 0;
    const auto scores = predict_proba(fit_gradient_booster(m, p), m);
    for (double v : scores.data()) EXPECT_NEAR(v, 0.1, 1e-15);
}

TEST(Booster, TrainingLossNonIncreasing) {
    const auto m = small_blobs(7, 2.0);
    BoosterParams p;
    p.n_rounds = 15;
    p.max_depth = 3;
    const auto model = fit_gradient_booster(m, p);
    ASSERT_EQ(model.training_loss.size(), 16u);
    for (std::size_t r = 1; r < model.training_loss.size(); ++r) {
        EXPECT_LE(model.training_loss[r], model.training_loss[r - 1] + 1e-12) << "round " << r;
    }
    EXPECT_LT(model.training_loss.back(), model.training_loss.front());
}

TEST(Booster, SingleClassRaisesThatClass) {
    ClassCounts counts{};
    counts[4] = 30;
    const auto m = testing::make_blobs(counts, 3, 1.0, 1);
    BoosterParams p;
    p.n_rounds = 1;
    const auto scores = predict_proba(fit_gradient_booster(m, p), m);
    for (std::size_t i = 0; i < m.n(); ++i) EXPECT_GT(scores(i, 4), 0.1);
}

TEST(Booster, DeterministicAcrossThreadsAndRowStochastic) {
    const auto m = small_blobs(8);
    BoosterParams p;
    p.n_rounds = 5;
    const auto a = fit_gradient_booster(m, p, 1);
    EXPECT_EQ(a, fit_gradient_booster(m, p, 4));
    expect_row_stochastic(predict_proba(a, m));
}

TEST(Booster, ArityMismatch) {
    const auto m = small_blobs(9);
    BoosterParams p;
    p.n_rounds = 1;
    const auto model = fit_gradient_booster(m, p);
    EXPECT_ERROR(predict_proba(model, apply_feature_subset(m, FeatureSubset{{"f0"}})), ErrorCode::ArityMismatch);
    RandomForestParams fp;
    fp.n_trees = 1;
    EXPECT_ERROR(predict_proba(fit_random_forest(m, fp), apply_feature_subset(m, FeatureSubset{{"f0"}})), ErrorCode::ArityMismatch);
}

TEST(Softmax, GradientMatchesFiniteDifferences) {
    Rng rng(2024);
    for (int point = 0; point < 5; ++point) {
        ClassVector z{};
        for (auto& v : z) v = 6.0 * rng.uniform() - 3.0;
        const int label = static_cast<int>(rng.below(kNumClasses));
        const auto grad = softmax_cross_entropy_gradient(z, label);
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            const double h = 1e-5;
            auto up = z, down = z;
            up[c] += h;
            down[c] -= h;
            const double numeric = (softmax_cross_entropy(up, label) - softmax_cross_entropy(down, label)) / (2 * h);
            const double rel = std::abs(numeric - grad[c]) / std::max(std::abs(grad[c]), 1e-8);
            EXPECT_LT(rel, 1e-5) << "point " << point << " class " << c;
        }
    }
}

TEST(Softmax, PublishedScoreRowArgmax) {
    EXPECT_EQ(argmax(testing::kBaggingScoreRow), index_of(TrafficClass::Shellcode));
    EXPECT_EQ(argmax(softmax(testing::kBaggingScoreRow)), index_of(TrafficClass::Shellcode));
}

}  // namespace
}  // namespace idsens
