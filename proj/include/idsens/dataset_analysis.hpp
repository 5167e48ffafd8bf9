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
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"

namespace idsens {

struct ClassDistribution {
    ClassCounts counts{};
    ClassVector proportions{};

    long long total() const {
        long long t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

inline ClassDistribution class_distribution(std::span<const int> labels) {
    if (labels.empty()) fail(ErrorCode::EmptyInput, "no labels");
    ClassDistribution dist;
    dist.counts = count_classes(labels);
    const double total = static_cast<double>(labels.size());
    for (std::size_t c = 0; c < kNumClasses; ++c) dist.proportions[c] = static_cast<double>(dist.counts[c]) / total;
    return dist;
}

enum class IRMode {
    RawCount,
    /// Proportions rounded to two decimals (four when two would print zero)
    /// before ratioing, which is how the published IR table was produced.
    RoundedDistribution,
};

/// Pairwise class-size ratios from one-versus-one decomposition.
struct IRMatrix {
    std::array<std::array<double, kNumClasses>, kNumClasses> ratio{};
    IRMode mode = IRMode::RawCount;

    /// dist_i / dist_j.
    double directed(int i, int j) const { return ratio[i][j]; }

    /// Imbalance ratio of the pair: majority distribution over minority
    /// distribution, always >= 1 and symmetric.
    double ir(int i, int j) const { return std::max(ratio[i][j], ratio[j][i]); }
};

inline double rounded_proportion(double p) {
    const double two = std::round(p * 100.0) / 100.0;
    if (two > 0.0) return two;
    return std::round(p * 10000.0) / 10000.0;
}

inline IRMatrix imbalance_ratio_matrix(const ClassDistribution& dist, IRMode mode) {
    ClassVector basis{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (dist.counts[c] <= 0) fail(ErrorCode::ZeroClass, "class " + std::string(class_name(static_cast<int>(c))) + " has no records");
        basis[c] = mode == IRMode::RawCount ? static_cast<double>(dist.counts[c]) : rounded_proportion(dist.proportions[c]);
        if (basis[c] <= 0.0) fail(ErrorCode::ZeroClass, "class " + std::string(class_name(static_cast<int>(c))) + " rounds to zero");
    }
    IRMatrix ir;
    ir.mode = mode;
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        for (std::size_t j = 0; j < kNumClasses; ++j) ir.ratio[i][j] = i == j ? 1.0 : basis[i] / basis[j];
    }
    return ir;
}

struct ImbalancedPair {
    int first = 0;
    int second = 0;
    double ir = 1.0;
};

/// Unordered pairs whose IR strictly exceeds `threshold`, most imbalanced first.
inline std::vector<ImbalancedPair> imbalance_report(const IRMatrix& ir, double threshold = 1.5) {
    std::vector<ImbalancedPair> pairs;
    for (int i = 0; i < static_cast<int>(kNumClasses); ++i) {
        for (int j = i + 1; j < static_cast<int>(kNumClasses); ++j) {
            const double value = ir.ir(i, j);
            if (value > threshold) pairs.push_back({i, j, value});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const ImbalancedPair& a, const ImbalancedPair& b) { return a.ir > b.ir; });
    return pairs;
}

}  // namespace idsens
