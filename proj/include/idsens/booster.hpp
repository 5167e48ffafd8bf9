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
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/detail/presort.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"
#include "idsens/parallel.hpp"

namespace idsens {

// ---------------------------------------------------------------------------
// Softmax cross-entropy
// ---------------------------------------------------------------------------

inline ClassVector softmax(std::span<const double> margins) {
    ClassVector p{};
    const double top = *std::max_element(margins.begin(), margins.end());
    double z = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        p[c] = std::exp(margins[c] - top);
        z += p[c];
    }
    for (auto& v : p) v /= z;
    return p;
}

/// -log softmax(margins)[label], computed via log-sum-exp.
inline double softmax_cross_entropy(std::span<const double> margins, int label) {
    const double top = *std::max_element(margins.begin(), margins.end());
    double z = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) z += std::exp(margins[c] - top);
    return std::log(z) + top - margins[static_cast<std::size_t>(label)];
}

/// d loss / d margin_c = p_c - [c == label].
inline ClassVector softmax_cross_entropy_gradient(std::span<const double> margins, int label) {
    ClassVector g = softmax(margins);
    g[static_cast<std::size_t>(label)] -= 1.0;
    return g;
}

/// Diagonal of the Hessian, p_c (1 - p_c).
inline ClassVector softmax_cross_entropy_hessian(std::span<const double> margins) {
    ClassVector h = softmax(margins);
    for (auto& v : h) v = v * (1.0 - v);
    return h;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct RegressionNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }

    friend bool operator==(const RegressionNode&, const RegressionNode&) = default;
};

struct RegressionTree {
    std::vector<RegressionNode> nodes;

    double predict(std::span<const double> row) const {
        std::size_t i = 0;
        while (!nodes[i].is_leaf()) {
            const auto& n = nodes[i];
            i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
        }
        return nodes[i].value;
    }

    friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct BoosterParams {
    int n_rounds = 100;
    int max_depth = 6;
    double learning_rate = 0.3;
    double l2_lambda = 1.0;
    /// Minimum Hessian sum on each side of a split.
    double min_child_weight = 1.0;

    friend bool operator==(const BoosterParams&, const BoosterParams&) = default;
};

/// Newton-boosted trees on the softmax objective: one regression tree per
/// class and round, leaf values added to the class margin.
struct BoosterModel {
    BoosterParams params;
    std::size_t n_features = 0;
    ClassVector base_margin{};
    std::vector<std::array<RegressionTree, kNumClasses>> rounds;
    /// Mean training cross-entropy before round 1 and after every round.
    std::vector<double> training_loss;

    ClassVector margins(std::span<const double> row) const {
        ClassVector m = base_margin;
        for (const auto& round : rounds) {
            for (std::size_t c = 0; c < kNumClasses; ++c) m[c] += round[c].predict(row);
        }
        return m;
    }

    friend bool operator==(const BoosterModel&, const BoosterModel&) = default;
};

namespace detail {

/// Exact greedy, level-wise regression tree on (gradient, hessian) pairs.
/// Each level makes one pass over every presorted feature column.
class RegressionTreeBuilder {
public:
    RegressionTreeBuilder(const ColumnSample& sample, const SortedColumns& sorted, const BoosterParams& params)
        : sample_(sample), sorted_(sorted), params_(params) {}

    RegressionTree build(std::span<const double> grad, std::span<const double> hess) const {
        const std::size_t n = sample_.size();
        RegressionTree tree;
        std::vector<int> node_of(n, 0);
        std::vector<NodeStats> stats(1);
        for (std::size_t p = 0; p < n; ++p) {
            stats[0].g += grad[p];
            stats[0].h += hess[p];
        }
        tree.nodes.emplace_back();
        std::vector<int> frontier{0};

        for (int depth = 0; !frontier.empty(); ++depth) {
            std::vector<Candidate> best(tree.nodes.size());
            if (depth < params_.max_depth) {
                for (std::size_t f = 0; f < sample_.features(); ++f) scan_feature(f, node_of, grad, hess, stats, frontier, best);
            }
            std::vector<int> next;
            for (int id : frontier) {
                const auto& cand = best[static_cast<std::size_t>(id)];
                if (!cand.valid) {
                    tree.nodes[static_cast<std::size_t>(id)].value = leaf_value(stats[static_cast<std::size_t>(id)]);
                    continue;
                }
                const int left = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                tree.nodes.emplace_back();
                auto& node = tree.nodes[static_cast<std::size_t>(id)];
                node.feature = static_cast<int>(cand.feature);
                node.threshold = cand.threshold;
                node.left = left;
                node.right = left + 1;
                stats.push_back(cand.left);
                stats.push_back({stats[static_cast<std::size_t>(id)].g - cand.left.g, stats[static_cast<std::size_t>(id)].h - cand.left.h});
                next.push_back(left);
                next.push_back(left + 1);
            }
            if (next.empty()) break;
            for (std::size_t p = 0; p < n; ++p) {
                const auto& node = tree.nodes[static_cast<std::size_t>(node_of[p])];
                if (node.is_leaf() || node.left < 0) continue;
                node_of[p] = sample_(static_cast<std::uint32_t>(p), static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left : node.right;
            }
            frontier = std::move(next);
        }
        return tree;
    }

private:
    struct NodeStats {
        double g = 0.0;
        double h = 0.0;
    };

    struct Candidate {
        bool valid = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double gain = 0.0;
        NodeStats left;
    };

    double leaf_value(const NodeStats& s) const { return -s.g / (s.h + params_.l2_lambda) * params_.learning_rate; }

    double score(const NodeStats& s) const { return s.g * s.g / (s.h + params_.l2_lambda); }

    void scan_feature(std::size_t f, const std::vector<int>& node_of, std::span<const double> grad,
                      std::span<const double> hess, const std::vector<NodeStats>& stats,
                      const std::vector<int>& frontier, std::vector<Candidate>& best) const {
        const std::size_t nodes = stats.size();
        std::vector<NodeStats> acc(nodes);
        std::vector<double> last(nodes, 0.0);
        std::vector<std::uint8_t> active(nodes, 0);
        std::vector<std::uint8_t> seen(nodes, 0);
        for (int id : frontier) active[static_cast<std::size_t>(id)] = 1;

        for (std::uint32_t pos : sorted_[f]) {
            const auto k = static_cast<std::size_t>(node_of[pos]);
            if (!active[k]) continue;
            const double v = sample_(pos, f);
            if (seen[k] && last[k] < v) {
                const NodeStats& parent = stats[k];
                const NodeStats& left = acc[k];
                const NodeStats right{parent.g - left.g, parent.h - left.h};
                if (left.h >= params_.min_child_weight && right.h >= params_.min_child_weight) {
                    const double gain = score(left) + score(right) - score(parent);
                    auto& b = best[k];
                    if (gain > kMinGain && (!b.valid || gain > b.gain)) b = {true, f, midpoint(last[k], v), gain, left};
                }
            }
            acc[k].g += grad[pos];
            acc[k].h += hess[pos];
            last[k] = v;
            seen[k] = 1;
        }
    }

    static constexpr double kMinGain = 1e-12;

    const ColumnSample& sample_;
    const SortedColumns& sorted_;
    BoosterParams params_;
};

inline double mean_cross_entropy(const std::vector<ClassVector>& margins, std::span<const int> labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) loss += softmax_cross_entropy(margins[i], labels[i]);
    return loss / static_cast<double>(margins.size());
}

}  // namespace detail

inline BoosterModel fit_gradient_booster(const SampleMatrix& data, const BoosterParams& params,
                                         unsigned threads = default_thread_count()) {
    check_sample_matrix(data);
    if (params.n_rounds < 0 || params.max_depth < 0) fail(ErrorCode::InvalidArgument, "rounds and depth must be >= 0");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) fail(ErrorCode::InvalidArgument, "learning rate must lie in (0, 1]");
    if (params.l2_lambda < 0.0 || params.min_child_weight < 0.0) fail(ErrorCode::InvalidArgument, "regularisers must be >= 0");

    BoosterModel model;
    model.params = params;
    model.n_features = data.d();

    std::vector<std::size_t> all(data.n());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const detail::ColumnSample sample(data.values, all);
    const detail::SortedColumns sorted = detail::presort(sample);
    const detail::RegressionTreeBuilder builder(sample, sorted, params);

    std::vector<ClassVector> margins(data.n(), model.base_margin);
    model.training_loss.push_back(detail::mean_cross_entropy(margins, data.labels));

    std::vector<std::vector<double>> grad(kNumClasses, std::vector<double>(data.n()));
    std::vector<std::vector<double>> hess(kNumClasses, std::vector<double>(data.n()));
    for (int round = 0; round < params.n_rounds; ++round) {
        for (std::size_t i = 0; i < data.n(); ++i) {
            const ClassVector p = softmax(margins[i]);
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                grad[c][i] = p[c] - (data.labels[i] == static_cast<int>(c) ? 1.0 : 0.0);
                hess[c][i] = std::max(p[c] * (1.0 - p[c]), 1e-16);
            }
        }
        auto& trees = model.rounds.emplace_back();
        parallel_for(kNumClasses, threads, [&](std::size_t c) { trees[c] = builder.build(grad[c], hess[c]); });
        for (std::size_t i = 0; i < data.n(); ++i) {
            for (std::size_t c = 0; c < kNumClasses; ++c) margins[i][c] += trees[c].predict(data.values.row(i));
        }
        model.training_loss.push_back(detail::mean_cross_entropy(margins, data.labels));
    }
    return model;
}

inline ScoreMatrix predict_proba(const BoosterModel& model, const SampleMatrix& m) {
    if (m.d() != model.n_features) {
        fail(ErrorCode::ArityMismatch, "input has " + std::to_string(m.d()) + " features, booster expects " +
                                           std::to_string(model.n_features));
    }
    ScoreMatrix scores(m.n(), kNumClasses);
    for (std::size_t i = 0; i < m.n(); ++i) {
        const ClassVector p = softmax(model.margins(m.values.row(i)));
        std::copy(p.begin(), p.end(), scores.row(i).begin());
    }
    return scores;
}

}  // namespace idsens
