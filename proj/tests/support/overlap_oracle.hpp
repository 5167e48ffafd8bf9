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

// Independent reference for the validation gap statistics. It works pair by
// pair, rescanning every row, and keeps a gap when the true class is the
// runner-up of its row, i.e. no other non-predicted class scores higher.

#include <cmath>
#include <span>
#include <vector>

#include "idsens/idsens.hpp"

namespace idsens::testing {

inline OverlapModel brute_force_error_statistics(const ScoreMatrix& ps, std::span<const int> truth, std::span<const int> pred) {
    OverlapModel out;
    for (std::size_t x = 0; x < kNumClasses; ++x) {
        for (std::size_t y = 0; y < kNumClasses; ++y) {
            if (x == y) continue;
            std::vector<double> kept;
            for (std::size_t i = 0; i < ps.rows(); ++i) {
                if (truth[i] != static_cast<int>(x) || pred[i] != static_cast<int>(y)) continue;
                bool runner_up = true;
                for (std::size_t z = 0; z < kNumClasses; ++z) {
                    if (z != x && z != y && ps(i, z) > ps(i, x)) runner_up = false;
                }
                if (runner_up) kept.push_back(ps(i, y) - ps(i, x));
            }
            if (kept.empty()) continue;
            double sum = 0.0;
            for (double v : kept) sum += v;
            const double mean = sum / static_cast<double>(kept.size());
            double sq = 0.0;
            for (double v : kept) sq += (v - mean) * (v - mean);
            out.mean[x][y] = mean;
            out.stddev[x][y] = std::sqrt(sq / static_cast<double>(kept.size()));
        }
    }
    return out;
}

/// Random row-normalised scores over the first `classes` columns (others 0),
/// labels uniform over the same classes.
struct RandomScoreInstance {
    ScoreMatrix scores;
    std::vector<int> truth;
    std::vector<int> predicted;
};

inline RandomScoreInstance random_score_instance(Rng& rng, std::size_t n, int classes) {
    RandomScoreInstance inst;
    inst.scores = ScoreMatrix(n, kNumClasses);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (int c = 0; c < classes; ++c) {
            const double v = -std::log(1.0 - rng.uniform());
            inst.scores(i, static_cast<std::size_t>(c)) = v;
            total += v;
        }
        for (int c = 0; c < classes; ++c) inst.scores(i, static_cast<std::size_t>(c)) /= total;
        inst.truth.push_back(static_cast<int>(rng.below(static_cast<std::size_t>(classes))));
    }
    inst.predicted = row_argmax(inst.scores);
    return inst;
}

inline double max_abs_deviation(const OverlapModel& a, const OverlapModel& b) {
    double worst = 0.0;
    for (std::size_t x = 0; x < kNumClasses; ++x) {
        for (std::size_t y = 0; y < kNumClasses; ++y) {
            worst = std::max({worst, std::abs(a.mean[x][y] - b.mean[x][y]), std::abs(a.stddev[x][y] - b.stddev[x][y])});
        }
    }
    return worst;
}

/// Random resolved model: each off-diagonal entry active with probability
/// `density`, mean in [0, 0.5), sd in [0, 0.2).
inline OverlapModel random_resolved_model(Rng& rng, double density) {
    OverlapModel m;
    for (std::size_t x = 0; x < kNumClasses; ++x) {
        for (std::size_t y = 0; y < kNumClasses; ++y) {
            if (x == y || rng.uniform() >= density) continue;
            m.mean[x][y] = 0.5 * rng.uniform();
            m.stddev[x][y] = 0.2 * rng.uniform();
        }
    }
    m.resolved = true;
    return m;
}

}  // namespace idsens::testing
