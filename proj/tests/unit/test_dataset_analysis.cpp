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

#include "idsens/idsens.hpp"
#include "support/expect_error.hpp"
#include "support/reference_tables.hpp"

namespace idsens {
namespace {

std::vector<int> labels_from(const ClassCounts& counts, long long repeat = 1) {
    std::vector<int> labels;
    for (long long r = 0; r < repeat; ++r) {
        for (std::size_t c = 0; c < kNumClasses; ++c) labels.insert(labels.end(), static_cast<std::size_t>(counts[c]), static_cast<int>(c));
    }
    return labels;
}

constexpr int N = kNormalIndex;
constexpr int W = index_of(TrafficClass::Worms);

TEST(ClassDistribution, FullDatasetCounts) {
    const auto dist = class_distribution(labels_from(testing::kUnswAllCounts));
    EXPECT_EQ(dist.total(), 257673);
    EXPECT_EQ(dist.counts[N], 93000);
    EXPECT_NEAR(rounded_proportion(dist.proportions[N]), 0.36, 1e-12);
    double sum = 0.0;
    for (double p : dist.proportions) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(ClassDistribution, SingleClass) {
    const auto dist = class_distribution(std::vector<int>(5, W));
    EXPECT_EQ(dist.proportions[W], 1.0);
    EXPECT_EQ(dist.proportions[N], 0.0);
}

TEST(ClassDistribution, EmptyInput) {
    EXPECT_ERROR(class_distribution(std::vector<int>{}), ErrorCode::EmptyInput);
}

TEST(ImbalanceRatio, RoundedModeReproducesPublishedTable) {
    const auto ir = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts)), IRMode::RoundedDistribution);
    EXPECT_NEAR(ir.ir(N, W), 514.29, 0.01);
    EXPECT_NEAR(ir.ir(N, index_of(TrafficClass::Generic)), 1.57, 0.01);
    EXPECT_NEAR(ir.ir(index_of(TrafficClass::DoS), index_of(TrafficClass::Fuzzers)), 1.50, 0.01);
}

TEST(ImbalanceRatio, RawCountMode) {
    const auto ir = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts)), IRMode::RawCount);
    EXPECT_NEAR(ir.directed(N, W), 93000.0 / 174.0, 1e-9);
    EXPECT_NEAR(ir.directed(N, W), 534.48, 0.005);
}

TEST(ImbalanceRatio, DiagonalAndAntisymmetry) {
    const auto ir = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts)), IRMode::RawCount);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(ir.directed(i, i), 1.0);
        for (int j = 0; j < 10; ++j) EXPECT_NEAR(ir.directed(i, j) * ir.directed(j, i), 1.0, 1e-9);
    }
}

TEST(ImbalanceRatio, ScaleInvariant) {
    const auto once = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts)), IRMode::RawCount);
    const auto thrice = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts, 3)), IRMode::RawCount);
    EXPECT_EQ(once.ratio, thrice.ratio);
}

TEST(ImbalanceRatio, ZeroClass) {
    ClassCounts counts = testing::kUnswAllCounts;
    counts[W] = 0;
    EXPECT_ERROR(imbalance_ratio_matrix(class_distribution(labels_from(counts)), IRMode::RawCount), ErrorCode::ZeroClass);
}

TEST(ImbalanceReport, MostImbalancedPairFirst) {
    const auto ir = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts)), IRMode::RoundedDistribution);
    const auto report = imbalance_report(ir);
    ASSERT_FALSE(report.empty());
    EXPECT_EQ(report.front().first, N);
    EXPECT_EQ(report.front().second, W);
    EXPECT_NEAR(report.front().ir, 514.29, 0.01);
}

TEST(ImbalanceReport, SortedDescendingAndBalancedPairAbsent) {
    const auto ir = imbalance_ratio_matrix(class_distribution(labels_from(testing::kUnswAllCounts)), IRMode::RoundedDistribution);
    const auto report = imbalance_report(ir);
    for (std::size_t k = 1; k < report.size(); ++k) EXPECT_GE(report[k - 1].ir, report[k].ir);
    for (const auto& p : report) {
        EXPECT_FALSE(p.first == index_of(TrafficClass::Analysis) && p.second == index_of(TrafficClass::Backdoor));
        EXPECT_GT(p.ir, 1.5);
    }
}

TEST(ImbalanceReport, ExactThresholdIsNotFlagged) {
    ClassCounts counts{};
    counts.fill(2);
    counts[0] = 3;  // 3/2 = 1.5 exactly
    const auto report = imbalance_report(imbalance_ratio_matrix(class_distribution(labels_from(counts)), IRMode::RawCount));
    EXPECT_TRUE(report.empty());
}

}  // namespace
}  // namespace idsens
