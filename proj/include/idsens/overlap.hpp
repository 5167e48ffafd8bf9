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

// Class-overlap correction.
//
// During validation, every record of class x that the classifier labels y
// leaves a score gap D = PS[y] - PS[x]. When x is the runner-up of the row,
// the gap is a sample of how far "x looks like y" errors fall short, and
// the per-pair mean and spread of those gaps are stored. At test time a row
// whose top-two gap falls inside the stored range of (runner-up, winner) has
// the runner-up score raised by the stored mean.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/confusion.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"

namespace idsens {

using ClassTable = std::array<std::array<double, kNumClasses>, kNumClasses>;

/// Mean and population standard deviation of validation score gaps,
/// indexed (true class, predicted class). Diagonals are always zero.
struct OverlapModel {
    ClassTable mean{};
    ClassTable stddev{};
    bool resolved = false;

    bool active(std::size_t actual, std::size_t predicted) const {
        return mean[actual][predicted] != 0.0 || stddev[actual][predicted] != 0.0;
    }

    friend bool operator==(const OverlapModel&, const OverlapModel&) = default;
};

/// Collects the retained gaps of all rows with true class x predicted as y
/// (x != y) and stores their mean and population standard deviation. A gap is
/// dropped when some third class z scores strictly above the true class,
/// i.e. PS[y] - PS[z] < D.
inline OverlapModel compute_error_statistics(const ScoreMatrix& scores, std::span<const int> true_labels,
                                             std::span<const int> predicted_labels) {
    if (scores.cols() != kNumClasses) fail(ErrorCode::AlignmentMismatch, "score matrix must have 10 columns");
    if (scores.rows() != true_labels.size() || scores.rows() != predicted_labels.size()) {
        fail(ErrorCode::AlignmentMismatch, "score rows and label lists differ in length");
    }

    std::array<std::array<std::vector<double>, kNumClasses>, kNumClasses> gaps;
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const auto x = static_cast<std::size_t>(true_labels[i]);
        const auto y = static_cast<std::size_t>(predicted_labels[i]);
        if (x == y) continue;
        const auto row = scores.row(i);
        const double gap = row[y] - row[x];
        bool keep = true;
        for (std::size_t z = 0; z < kNumClasses && keep; ++z) {
            if (z != x && z != y && row[y] - row[z] < gap) keep = false;
        }
        if (keep) gaps[x][y].push_back(gap);
    }

    OverlapModel model;
    for (std::size_t x = 0; x < kNumClasses; ++x) {
        for (std::size_t y = 0; y < kNumClasses; ++y) {
            const auto& list = gaps[x][y];
            if (list.empty()) continue;
            const double n = static_cast<double>(list.size());
            const double mu = std::accumulate(list.begin(), list.end(), 0.0) / n;
            double ss = 0.0;
            for (double v : list) ss += (v - mu) * (v - mu);
            model.mean[x][y] = mu;
            model.stddev[x][y] = std::sqrt(ss / n);
        }
    }
    return model;
}

namespace detail {

/// Within one true-class row, groups the active entries whose
/// [mean - sd, mean + sd] intervals chain together and keeps only the entry
/// with the largest confusion count (earlier class on ties).
inline void resolve_row(OverlapModel& model, const ConfusionMatrix& cm, std::size_t x) {
    struct Interval {
        std::size_t y;
        double lo;
        double hi;
    };
    std::vector<Interval> intervals;
    for (std::size_t y = 0; y < kNumClasses; ++y) {
        if (y == x || !model.active(x, y)) continue;
        intervals.push_back({y, model.mean[x][y] - model.stddev[x][y], model.mean[x][y] + model.stddev[x][y]});
    }
    std::stable_sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    std::size_t start = 0;
    while (start < intervals.size()) {
        std::size_t end = start + 1;
        double reach = intervals[start].hi;
        while (end < intervals.size() && intervals[end].lo <= reach) {
            reach = std::max(reach, intervals[end].hi);
            ++end;
        }
        if (end - start >= 2) {
            std::size_t keep = intervals[start].y;
            for (std::size_t k = start + 1; k < end; ++k) {
                const std::size_t y = intervals[k].y;
                if (cm(x, y) > cm(x, keep) || (cm(x, y) == cm(x, keep) && y < keep)) keep = y;
            }
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t y = intervals[k].y;
                if (y != keep) model.mean[x][y] = model.stddev[x][y] = 0.0;
            }
        }
        start = end;
    }
}

}  // namespace detail

inline OverlapModel resolve_range_overlaps(OverlapModel model, const ConfusionMatrix& cm) {
    if (model.resolved) fail(ErrorCode::NotFitted, "overlap model is already resolved");
    if (cm.size() != kNumClasses) fail(ErrorCode::ShapeMismatch, "confusion matrix must be 10x10");
    for (std::size_t x = 0; x < kNumClasses; ++x) detail::resolve_row(model, cm, x);
    model.resolved = true;
    return model;
}

/// Per row: if the gap between the top score and the runner-up lies within
/// [mean - sd, mean + sd] of (runner-up, top), the runner-up score grows by
/// that mean. Rows are not renormalised.
inline ScoreMatrix modify_membership_scores(ScoreMatrix scores, const OverlapModel& model) {
    if (!model.resolved) fail(ErrorCode::NotResolved, "overlap model must be resolved before use");
    if (scores.cols() != kNumClasses) fail(ErrorCode::ShapeMismatch, "score matrix must have 10 columns");
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        auto row = scores.row(i);
        const auto top = static_cast<std::size_t>(argmax(row));
        double gap = 1e10;
        std::size_t runner_up = top;
        for (std::size_t j = 0; j < kNumClasses; ++j) {
            if (j != top && row[top] - row[j] < gap) {
                gap = row[top] - row[j];
                runner_up = j;
            }
        }
        const double mu = model.mean[runner_up][top];
        const double sd = model.stddev[runner_up][top];
        if (gap >= mu - sd && gap <= mu + sd) row[runner_up] += mu;
    }
    return scores;
}

/// Convenience: validation statistics followed by range resolution.
inline OverlapModel fit_overlap_model(const ScoreMatrix& validation_scores, std::span<const int> true_labels) {
    const auto predicted = row_argmax(validation_scores);
    const auto cm = confusion_matrix(true_labels, predicted);
    return resolve_range_overlaps(compute_error_statistics(validation_scores, true_labels, predicted), cm);
}

/// A resolved model that never modifies scores.
inline OverlapModel identity_overlap_model() {
    OverlapModel m;
    m.resolved = true;
    return m;
}

}  // namespace idsens
