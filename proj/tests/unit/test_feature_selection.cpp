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

#include <gtest/gtest.h>

#include <set>

#include "idsens/idsens.hpp"
#include "support/expect_error.hpp"
#include "support/synthetic.hpp"

namespace idsens {
namespace {

// Noise everywhere except feature 3, which carries the label.
SampleMatrix one_informative_feature(std::uint64_t seed) {
    auto m = testing::make_uniform(600, 6, 3, seed);
    Rng rng(seed + 100);
    for (std::size_t i = 0; i < m.n(); ++i) m.values(i, 3) = static_cast<double>(m.labels[i]) + 0.2 * rng.uniform();
    return m;
}

std::vector<int> tree_fit_predict(const SampleMatrix& train, const SampleMatrix& test) {
    TreeParams p;
    p.max_depth = 4;
    const auto tree = fit_tree(train, p, SplitCriterion::GiniGain);
    std::vector<int> out;
    for (std::size_t i = 0; i < test.n(); ++i) out.push_back(argmax(tree_predict_proba(tree, test.values.row(i))));
    return out;
}

// Additive scorer: each feature has a fixed worth.
SubsetEvaluator additive_evaluator(std::map<std::string, double> worth) {
    return [worth = std::move(worth)](const FeatureSubset& s) {
        double total = 0.0;
        for (const auto& name : s.names) total += worth.at(name);
        return total;
    };
}

TEST(MacroF1, PerfectAndEmptyClasses) {
    ConfusionMatrix cm;
    cm(0, 0) = 5;
    cm(6, 6) = 7;
    EXPECT_DOUBLE_EQ(macro_f1(cm), 1.0);
    cm(0, 6) = 5;
    // class 0: P=1, R=0.5; class 6: P=7/12, R=1
    const double f0 = 2 * 1.0 * 0.5 / 1.5;
    const double f6 = 2 * (7.0 / 12) / (7.0 / 12 + 1);
    EXPECT_NEAR(macro_f1(cm), (f0 + f6) / 2, 1e-12);
}

TEST(ForwardSelection, SingleStepPicksBestStandalone) {
    const auto m = testing::make_uniform(10, 4, 2, 1);
    const auto chosen = sfs_forward_select(additive_evaluator({{"f0", 0.1}, {"f1", 0.7}, {"f2", 0.3}, {"f3", 0.7}}), m, 1);
    EXPECT_EQ(chosen.names, std::vector<std::string>{"f1"});  // tie with f3, earlier column wins
}

TEST(ForwardSelection, StopsAtBestPrefix) {
    const auto m = testing::make_uniform(10, 4, 2, 1);
    const auto result = sfs_forward_select_traced(additive_evaluator({{"f0", -0.2}, {"f1", 0.5}, {"f2", 0.0}, {"f3", 0.4}}), m, 4);
    ASSERT_EQ(result.trace.size(), 4u);
    EXPECT_EQ(result.trace[0].added, "f1");
    EXPECT_EQ(result.trace[1].added, "f3");
    // adding f2 keeps 0.9, so the shorter prefix is kept
    EXPECT_EQ(result.subset.names, (std::vector<std::string>{"f1", "f3"}));
}

TEST(ForwardSelection, FindsInformativeFeatureWithRealModel) {
    const auto m = one_informative_feature(5);
    const auto evaluator = holdout_f1_evaluator(m, tree_fit_predict, 11);
    const auto result = sfs_forward_select_traced(evaluator, m, 3);
    EXPECT_EQ(result.trace.front().added, "f3");
    EXPECT_GT(result.trace.front().score, 0.95);
    EXPECT_LE(result.subset.names.size(), 3u);
    const std::set<std::string> unique(result.subset.names.begin(), result.subset.names.end());
    EXPECT_EQ(unique.size(), result.subset.names.size());
}

TEST(ForwardSelection, Deterministic) {
    const auto m = one_informative_feature(9);
    const auto a = sfs_forward_select(holdout_f1_evaluator(m, tree_fit_predict, 3), m, 4);
    const auto b = sfs_forward_select(holdout_f1_evaluator(m, tree_fit_predict, 3), m, 4);
    EXPECT_EQ(a.names, b.names);
}

TEST(ForwardSelection, RejectsBadBudget) {
    const auto m = testing::make_uniform(10, 4, 2, 1);
    const auto eval = additive_evaluator({{"f0", 0}, {"f1", 0}, {"f2", 0}, {"f3", 0}});
    EXPECT_ERROR(sfs_forward_select(eval, m, 0), ErrorCode::InvalidArgument);
    EXPECT_ERROR(sfs_forward_select(eval, m, 5), ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace idsens
