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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/confusion.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"

namespace idsens {

// ---------------------------------------------------------------------------
// Vote combination
// ---------------------------------------------------------------------------

enum class VoteMode { Sum, Hard };

constexpr std::string_view to_string(VoteMode m) { return m == VoteMode::Sum ? "sum" : "hard"; }

inline std::optional<VoteMode> parse_vote_mode(std::string_view text) {
    if (text == "sum") return VoteMode::Sum;
    if (text == "hard") return VoteMode::Hard;
    return std::nullopt;
}

namespace detail {

inline void check_same_shape(std::span<const ScoreMatrix* const> scores) {
    if (scores.empty()) fail(ErrorCode::ShapeMismatch, "no score matrices to combine");
    for (const auto* s : scores) {
        if (s->rows() != scores.front()->rows() || s->cols() != scores.front()->cols()) {
            fail(ErrorCode::ShapeMismatch, "score matrices differ in shape");
        }
    }
}

}  // namespace detail

/// Argmax of the element-wise sum of the score matrices, lowest index on ties.
inline std::vector<int> sum_vote(std::span<const ScoreMatrix* const> scores) {
    detail::check_same_shape(scores);
    const auto& first = *scores.front();
    std::vector<int> out(first.rows());
    std::vector<double> total(first.cols());
    for (std::size_t i = 0; i < first.rows(); ++i) {
        std::fill(total.begin(), total.end(), 0.0);
        for (const auto* s : scores) {
            auto row = s->row(i);
            for (std::size_t c = 0; c < total.size(); ++c) total[c] += row[c];
        }
        out[i] = argmax(total);
    }
    return out;
}

/// Each matrix votes for its row argmax; most votes wins, lowest index on ties.
inline std::vector<int> hard_vote(std::span<const ScoreMatrix* const> scores) {
    detail::check_same_shape(scores);
    const auto& first = *scores.front();
    std::vector<int> out(first.rows());
    std::vector<int> votes(first.cols());
    for (std::size_t i = 0; i < first.rows(); ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const auto* s : scores) ++votes[static_cast<std::size_t>(argmax(s->row(i)))];
        out[i] = argmax(votes);
    }
    return out;
}

inline std::vector<int> combine_votes(std::span<const ScoreMatrix* const> scores, VoteMode mode) {
    return mode == VoteMode::Sum ? sum_vote(scores) : hard_vote(scores);
}

// ---------------------------------------------------------------------------
// Normal vs Attack
// ---------------------------------------------------------------------------

inline constexpr int kBinaryNormal = 0;
inline constexpr int kBinaryAttack = 1;

inline std::vector<int> collapse_to_binary(std::span<const int> labels) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == kNormalIndex ? kBinaryNormal : kBinaryAttack;
    return out;
}

inline ConfusionMatrix collapse_to_binary(const ConfusionMatrix& cm) {
    if (cm.size() != kNumClasses) fail(ErrorCode::ShapeMismatch, "binary collapse expects a 10-class matrix");
    ConfusionMatrix out(ConfusionMatrix::binary_names());
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        const auto bi = i == static_cast<std::size_t>(kNormalIndex) ? 0u : 1u;
        for (std::size_t j = 0; j < kNumClasses; ++j) {
            const auto bj = j == static_cast<std::size_t>(kNormalIndex) ? 0u : 1u;
            out(bi, bj) += cm(i, j);
        }
    }
    return out;
}

inline ConfusionMatrix binary_confusion_matrix(std::span<const int> true_binary, std::span<const int> predicted_binary) {
    if (true_binary.size() != predicted_binary.size()) fail(ErrorCode::LengthMismatch, "label lists differ in length");
    ConfusionMatrix cm(ConfusionMatrix::binary_names());
    for (std::size_t i = 0; i < true_binary.size(); ++i) {
        ++cm(static_cast<std::size_t>(true_binary[i]), static_cast<std::size_t>(predicted_binary[i]));
    }
    return cm;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct ClassMetrics {
    std::string name;
    long long tp = 0;
    long long fn = 0;
    long long fp = 0;
    long long tn = 0;
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    double precision = 0.0;
    double f_measure = 0.0;
};

struct MetricsReport {
    std::vector<ClassMetrics> classes;
    double accuracy = 0.0;
    /// Attack rows predicted Normal over attack rows.
    double missed_alarm_rate = 0.0;
    /// Attack rows predicted as a different attack over attack rows.
    double attack_confusion_rate = 0.0;
    /// Normal rows predicted as any attack over Normal rows.
    double false_alarm_rate = 0.0;

    const ClassMetrics& at(std::string_view name) const {
        for (const auto& c : classes) {
            if (c.name == name) return c;
        }
        fail(ErrorCode::InvalidArgument, "no class '" + std::string(name) + "' in report");
    }
};

namespace detail {

inline double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace detail

/// One-vs-rest metrics per class. Every ratio with a zero denominator is 0.
/// Alarm rates treat the class named "Normal" as benign and all others as
/// attacks; they stay 0 when the matrix has no such class.
inline MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const long long total = cm.total();
    if (total <= 0) fail(ErrorCode::EmptyMatrix, "confusion matrix is empty");
    const auto n = static_cast<double>(total);
    MetricsReport report;
    long long correct = 0;
    for (std::size_t c = 0; c < cm.size(); ++c) {
        ClassMetrics m;
        m.name = cm.names()[c];
        m.tp = cm(c, c);
        m.fn = cm.row_total(c) - m.tp;
        m.fp = cm.column_total(c) - m.tp;
        m.tn = total - m.tp - m.fn - m.fp;
        const auto tp = static_cast<double>(m.tp);
        const auto fn = static_cast<double>(m.fn);
        const auto fp = static_cast<double>(m.fp);
        const auto tn = static_cast<double>(m.tn);
        m.accuracy = (tp + tn) / n;
        m.sensitivity = detail::safe_div(tp, tp + fn);
        m.fnr = detail::safe_div(fn, tp + fn);
        m.specificity = detail::safe_div(tn, tn + fp);
        m.fpr = detail::safe_div(fp, tn + fp);
        m.precision = detail::safe_div(tp, tp + fp);
        m.f_measure = detail::safe_div(2.0 * m.precision * m.sensitivity, m.precision + m.sensitivity);
        correct += m.tp;
        report.classes.push_back(std::move(m));
    }
    report.accuracy = static_cast<double>(correct) / n;

    if (auto normal = cm.index_of("Normal")) {
        long long attack_rows = 0;
        long long attack_as_normal = 0;
        long long attack_as_other = 0;
        for (std::size_t i = 0; i < cm.size(); ++i) {
            if (i == *normal) continue;
            attack_rows += cm.row_total(i);
            attack_as_normal += cm(i, *normal);
            attack_as_other += cm.row_total(i) - cm(i, i) - cm(i, *normal);
        }
        const long long normal_rows = cm.row_total(*normal);
        report.missed_alarm_rate = detail::safe_div(static_cast<double>(attack_as_normal), static_cast<double>(attack_rows));
        report.attack_confusion_rate = detail::safe_div(static_cast<double>(attack_as_other), static_cast<double>(attack_rows));
        report.false_alarm_rate = detail::safe_div(static_cast<double>(normal_rows - cm(*normal, *normal)),
                                                   static_cast<double>(normal_rows));
    }
    return report;
}

}  // namespace idsens
