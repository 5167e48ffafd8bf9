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

// Published UNSW-NB15 figures and a reference test-set confusion matrix used
// as fixed inputs in tests.

#include <array>
#include <vector>

#include "idsens/idsens.hpp"

namespace idsens::testing {

/// Record counts per class over the full published dataset (train + test).
inline constexpr ClassCounts kUnswAllCounts{2677, 2329, 16353, 44525, 24246, 58871, 93000, 13987, 1511, 174};

/// Ensemble confusion on the published test split, rows actual, columns
/// predicted, both in class-list order.
inline constexpr std::array<long long, 100> kReferenceTestConfusion{
    327,  193, 4,    1,    18,   0,     130,   0,    4,   0,    //
    126,  405, 0,    0,    13,   0,     39,    0,    0,   0,    //
    1604, 625, 1110, 228,  92,   0,     178,   59,   164, 29,   //
    779,  830, 39,   8511, 57,   0,     338,   221,  213, 144,  //
    482,  491, 4,    34,   4380, 0,     0,     10,   646, 15,   //
    15,   30,  37,   390,  99,   18145, 63,    7,    72,  13,   //
    200,  0,   0,    0,    668,  0,     35978, 0,    154, 0,    //
    103,  207, 0,    35,   14,   0,     31,    2967, 126, 13,   //
    0,    0,   0,    0,    7,    0,     9,     3,    358, 1,    //
    0,    0,   0,    1,    0,    0,     2,     0,    5,   36,   //
};

inline ConfusionMatrix reference_test_confusion() {
    return ConfusionMatrix::from_counts(ConfusionMatrix::multiclass_names(), kReferenceTestConfusion);
}

/// Its Normal-vs-Attack collapse.
inline ConfusionMatrix reference_binary_confusion() {
    const std::array<long long, 4> counts{35978, 1022, 790, 44542};
    return ConfusionMatrix::from_counts(ConfusionMatrix::binary_names(), counts);
}

/// Validation confusion of the bagging model used in the worked overlap example.
inline constexpr std::array<long long, 100> kWorkedValidationConfusion{
    501, 124, 0,   0,   46,  0,   3,   3,   0,   0,   //
    0,   302, 0,   0,   0,   12,  0,   0,   0,   1,   //
    3,   0,   270, 4,   0,   0,   0,   0,   5,   0,   //
    0,   0,   0,   254, 8,   0,   50,  0,   0,   0,   //
    3,   0,   0,   32,  345, 0,   23,  0,   0,   0,   //
    1,   0,   0,   0,   9,   138, 0,   0,   0,   0,   //
    0,   0,   0,   54,  78,  0,   876, 0,   0,   0,   //
    0,   0,   0,   0,   0,   0,   8,   132, 0,   0,   //
    0,   0,   0,   17,  0,   0,   0,   1,   187, 0,   //
    1,   0,   0,   1,   0,   0,   0,   0,   2,   74,  //
};

/// The two score rows of the worked example (true class Analysis).
inline constexpr std::array<std::array<double, kNumClasses>, 2> kWorkedScores{{
    {0.78, 0.81, 0.02, 0.01, 0.24, 0.08, 0.11, 0.19, 0.08, 0.22},
    {0.09, 0.54, 0.01, 0.03, 0.41, 0.04, 0.01, 0.06, 0.12, 0.14},
}};

/// First row of a published bagging score matrix; its maximum is Shellcode.
inline constexpr std::array<double, kNumClasses> kBaggingScoreRow{0.0083, 0.0103, 0.0988, 0.1506, 0.1718,
                                                                 0.0167, 0.0750, 0.0212, 0.4463, 0.0003};

}  // namespace idsens::testing
