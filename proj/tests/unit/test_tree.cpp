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
#include <numbers>

#include <gtest/gtest.h>

#include "idsens/idsens.hpp"
#include "support/expect_error.hpp"
#include "support/synthetic.hpp"

namespace idsens {
namespace {

ClassCounts two(long long a, long long b) {
    ClassCounts c{};
    c[0] = a;
    c[1] = b;
    return c;
}

SampleMatrix xor_data() {
    SampleMatrix m;
    m.feature_names = {"a", "b"};
    m.values = Matrix<double>(4, 2);
    const double pts[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::size_t i = 0; i < 4; ++i) {
        m.values(i, 0) = pts[i][0];
        m.values(i, 1) = pts[i][1];
    }
    m.labels = {0, 1, 1, 0};
    return m;
}

ClassCounts random_counts(Rng& rng, int classes, long long max_count) {
    ClassCounts c{};
    for (int k = 0; k < classes; ++k) c[static_cast<std::size_t>(k)] = static_cast<long long>(rng.below(static_cast<std::size_t>(max_count) + 1));
    return c;
}

TEST(Hellinger, PerfectSeparationIsSqrt2) {
    EXPECT_NEAR(hellinger_split_score(two(5, 0), two(0, 7), 0), std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR(hellinger_split_score(two(5, 0), two(0, 7)), std::numbers::sqrt2, 1e-12);
}

TEST(Hellinger, IdenticalProportionsScoreZero) {
    EXPECT_NEAR(hellinger_split_score(two(2, 4), two(3, 6), 0), 0.0, 1e-12);
    EXPECT_NEAR(hellinger_split_score(two(2, 4), two(3, 6)), 0.0, 1e-12);
}

TEST(Hellinger, HandComputedBinaryCase) {
    const double expected = std::numbers::sqrt2 * (std::sqrt(0.75) - std::sqrt(0.25));
    EXPECT_NEAR(hellinger_split_score(two(3, 1), two(1, 3), 0), expected, 1e-12);
    EXPECT_NEAR(expected, 0.5176, 1e-4);
}

TEST(Hellinger, EmptySideScoresZero) {
    EXPECT_EQ(hellinger_split_score(ClassCounts{}, two(3, 4)), 0.0);
    EXPECT_EQ(hellinger_split_score(ClassCounts{}, two(3, 4), 1), 0.0);
}

TEST(Hellinger, BoundedAndSkewInsensitive) {
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const int classes = 2 + static_cast<int>(rng.below(9));
        const auto left = random_counts(rng, classes, 30);
        const auto right = random_counts(rng, classes, 30);
        const auto k = rng.below(static_cast<std::size_t>(classes));
        auto left7 = left, right7 = right;
        left7[k] *= 7;
        right7[k] *= 7;
        const double base = hellinger_split_score(left, right);
        EXPECT_GE(base, 0.0);
        EXPECT_LE(base, std::numbers::sqrt2 + 1e-12);
        EXPECT_NEAR(base, hellinger_split_score(left7, right7), 1e-12);
        if (left[k] + right[k] > 0) {
            EXPECT_NEAR(hellinger_split_score(left, right, static_cast<int>(k)),
                        hellinger_split_score(left7, right7, static_cast<int>(k)), 1e-12);
        }
    }
}

TEST(Impurity, PureSplitOfBalancedParentIsOneBit) {
    EXPECT_NEAR(impurity_split_score(two(4, 0), two(0, 4), SplitCriterion::EntropyGain), 1.0, 1e-12);
    EXPECT_NEAR(impurity_split_score(two(4, 0), two(0, 4), SplitCriterion::GiniGain), 0.5, 1e-12);
}

TEST(Impurity, ProportionalChildrenGainNothing) {
    EXPECT_NEAR(impurity_split_score(two(1, 2), two(3, 6), SplitCriterion::EntropyGain), 0.0, 1e-12);
    EXPECT_NEAR(impurity_split_score(two(1, 2), two(3, 6), SplitCriterion::GiniGain), 0.0, 1e-12);
}

TEST(Impurity, HandComputedEntropyGain) {
    const double h75 = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
    EXPECT_NEAR(h75, 0.8113, 1e-4);
    EXPECT_NEAR(impurity_split_score(two(3, 1), two(1, 3), SplitCriterion::EntropyGain), 1.0 - h75, 1e-12);
}

TEST(Impurity, NonNegativeAndSkewSensitiveWitness) {
    Rng rng(5);
    bool witnessed = false;
    for (int trial = 0; trial < 500; ++trial) {
        const auto left = random_counts(rng, 3, 20);
        const auto right = random_counts(rng, 3, 20);
        if (detail::sum(left) + detail::sum(right) == 0) continue;
        EXPECT_GE(impurity_split_score(left, right, SplitCriterion::EntropyGain), 0.0);
        EXPECT_GE(impurity_split_score(left, right, SplitCriterion::GiniGain), 0.0);
        auto left7 = left, right7 = right;
        left7[0] *= 7;
        right7[0] *= 7;
        if (std::abs(impurity_split_score(left, right, SplitCriterion::EntropyGain) -
                     impurity_split_score(left7, right7, SplitCriterion::EntropyGain)) > 1e-3) {
            witnessed = true;
        }
    }
    EXPECT_TRUE(witnessed);
}

TEST(SplitCriterionText, RoundTrips) {
    for (auto c : {SplitCriterion::EntropyGain, SplitCriterion::GiniGain, SplitCriterion::Hellinger}) {
        EXPECT_EQ(parse_split_criterion(to_string(c)), c);
    }
    EXPECT_FALSE(parse_split_criterion("chi2"));
}

TEST(FitTree, SingleClassIsOneLeaf) {
    ClassCounts counts{};
    counts[3] = 20;
    const auto tree = fit_tree(testing::make_blobs(counts, 3, 1.0, 1), TreeParams{}, SplitCriterion::Hellinger);
    ASSERT_EQ(tree.nodes.size(), 1u);
    EXPECT_EQ(tree.nodes[0].proba[3], 1.0);
}

TEST(FitTree, XorIsLearnedExactly) {
    const auto m = xor_data();
    for (auto criterion : {SplitCriterion::Hellinger, SplitCriterion::EntropyGain, SplitCriterion::GiniGain}) {
        TreeParams p;
        p.max_depth = 2;
        const auto tree = fit_tree(m, p, criterion);
        for (std::size_t i = 0; i < m.n(); ++i) {
            const auto& proba = tree_predict_proba(tree, m.values.row(i));
            EXPECT_EQ(proba[static_cast<std::size_t>(m.labels[i])], 1.0) << to_string(criterion) << " row " << i;
        }
    }
}

TEST(FitTree, DepthZeroIsGlobalProportions) {
    const auto m = testing::make_uniform(40, 3, 4, 9);
    TreeParams p;
    p.max_depth = 0;
    const auto tree = fit_tree(m, p, SplitCriterion::Hellinger);
    ASSERT_EQ(tree.nodes.size(), 1u);
    const auto counts = count_classes(m.labels);
    const auto& proba = tree_predict_proba(tree, m.values.row(0));
    for (std::size_t c = 0; c < kNumClasses; ++c) EXPECT_DOUBLE_EQ(proba[c], static_cast<double>(counts[c]) / 40.0);
}

TEST(FitTree, UnboundedTreeFitsTrainingSet) {
    const auto m = testing::make_uniform(300, 4, 10, 21);
    for (auto criterion : {SplitCriterion::Hellinger, SplitCriterion::EntropyGain}) {
        TreeParams p;
        p.feature_subsample = 2;
        p.seed = 3;
        const auto tree = fit_tree(m, p, criterion);
        for (std::size_t i = 0; i < m.n(); ++i) {
            EXPECT_EQ(argmax(tree_predict_proba(tree, m.values.row(i))), m.labels[i]);
        }
    }
}

TEST(FitTree, LeavesAreDistributionsAndNodesWellFormed) {
    const auto m = testing::make_blobs(testing::scaled_counts(testing::kUnswTrainCounts, 0.002), 5, 2.0, 4);
    TreeParams p;
    p.feature_subsample = 2;
    p.min_samples_leaf = 3;
    const auto tree = fit_tree(m, p, SplitCriterion::Hellinger);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        if (n.is_leaf()) {
            double s = 0.0;
            for (double v : n.proba) s += v;
            EXPECT_NEAR(s, 1.0, 1e-9);
        } else {
            EXPECT_GT(n.left, static_cast<int>(i));
            EXPECT_GT(n.right, static_cast<int>(i));
            EXPECT_TRUE(std::isfinite(n.threshold));
        }
    }
}

TEST(FitTree, DeterministicForFixedSeed) {
    const auto m = testing::make_blobs(testing::scaled_counts(testing::kUnswTrainCounts, 0.002), 6, 2.0, 8);
    TreeParams p;
    p.feature_subsample = 2;
    p.seed = 77;
    EXPECT_EQ(fit_tree(m, p, SplitCriterion::Hellinger), fit_tree(m, p, SplitCriterion::Hellinger));
}

TEST(FitTree, SkewDoesNotChangeHellingerSplits) {
    // Duplicating a class leaves every candidate score, so the chosen root
    // split, unchanged.
    auto m = testing::make_blobs(testing::scaled_counts(testing::kUnswTrainCounts, 0.001), 4, 2.0, 12);
    TreeParams p;
    p.max_depth = 1;
    const auto base = fit_tree(m, p, SplitCriterion::Hellinger);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < m.n(); ++i) {
        const int copies = m.labels[i] == index_of(TrafficClass::Worms) ? 7 : 1;
        for (int k = 0; k < copies; ++k) rows.push_back(i);
    }
    const auto skewed = fit_tree(m, rows, p, SplitCriterion::Hellinger);
    EXPECT_EQ(base.nodes[0].feature, skewed.nodes[0].feature);
    EXPECT_EQ(base.nodes[0].threshold, skewed.nodes[0].threshold);
}

TEST(TreePredict, ArityMismatch) {
    const auto tree = fit_tree(xor_data(), TreeParams{}, SplitCriterion::Hellinger);
    const std::vector<double> row{0.0, 1.0, 2.0};
    EXPECT_ERROR(tree_predict_proba(tree, row), ErrorCode::ArityMismatch);
}

TEST(TreePredict, ThresholdGoesLeftOnEquality) {
    SampleMatrix m;
    m.feature_names = {"x"};
    m.values = Matrix<double>(2, 1);
    m.values(0, 0) = 0.0;
    m.values(1, 0) = 2.0;
    m.labels = {0, 1};
    const auto tree = fit_tree(m, TreeParams{}, SplitCriterion::Hellinger);
    ASSERT_EQ(tree.nodes[0].threshold, 1.0);
    const std::vector<double> at{1.0};
    EXPECT_EQ(tree_predict_proba(tree, at)[0], 1.0);
}

}  // namespace
}  // namespace idsens
