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
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/detail/presort.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"
#include "idsens/rng.hpp"

namespace idsens {

enum class SplitCriterion { EntropyGain, GiniGain, Hellinger };

constexpr std::string_view to_string(SplitCriterion c) {
    switch (c) {
    case SplitCriterion::EntropyGain: return "entropy-gain";
    case SplitCriterion::GiniGain: return "gini-gain";
    case SplitCriterion::Hellinger: return "hellinger";
    }
    return "?";
}

inline std::optional<SplitCriterion> parse_split_criterion(std::string_view text) {
    for (auto c : {SplitCriterion::EntropyGain, SplitCriterion::GiniGain, SplitCriterion::Hellinger}) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

/// Selects the multi-class form of `hellinger_split_score`.
inline constexpr int kAllClasses = -1;

// ---------------------------------------------------------------------------
// Split scores
// ---------------------------------------------------------------------------

namespace detail {

inline double ratio(long long part, long long whole) {
    return whole > 0 ? static_cast<double>(part) / static_cast<double>(whole) : 0.0;
}

inline double hellinger_pair(double left_a, double right_a, double left_b, double right_b) {
    const double dl = std::sqrt(left_a) - std::sqrt(left_b);
    const double dr = std::sqrt(right_a) - std::sqrt(right_b);
    return std::sqrt(dl * dl + dr * dr);
}

inline double entropy_bits(const ClassCounts& counts, long long total) {
    if (total <= 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / static_cast<double>(total);
            h -= p * std::log2(p);
        }
    }
    return h;
}

inline double gini(const ClassCounts& counts, long long total) {
    if (total <= 0) return 0.0;
    double s = 1.0;
    for (auto c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        s -= p * p;
    }
    return s;
}

inline long long sum(const ClassCounts& counts) { return std::accumulate(counts.begin(), counts.end(), 0LL); }

}  // namespace detail

/// Hellinger distance between the within-class partition distributions of a
/// binary split.
///
/// With `positive_class = c` the score compares class c against all other
/// records pooled. With `kAllClasses` it is the unweighted mean of the
/// class-versus-class distances over every pair of classes present at the
/// node; each term depends only on the fraction of each class sent left, so
/// resampling any class leaves the score unchanged. Range [0, sqrt(2)]; a
/// split with an empty side scores 0.
inline double hellinger_split_score(const ClassCounts& left, const ClassCounts& right, int positive_class = kAllClasses) {
    if (positive_class != kAllClasses) {
        const auto c = static_cast<std::size_t>(positive_class);
        const long long pos_left = left.at(c);
        const long long pos_right = right.at(c);
        const long long neg_left = detail::sum(left) - pos_left;
        const long long neg_right = detail::sum(right) - pos_right;
        const long long pos = pos_left + pos_right;
        const long long neg = neg_left + neg_right;
        return detail::hellinger_pair(detail::ratio(pos_left, pos), detail::ratio(pos_right, pos),
                                      detail::ratio(neg_left, neg), detail::ratio(neg_right, neg));
    }
    ClassVector frac_left{};
    ClassVector frac_right{};
    std::array<std::size_t, kNumClasses> present{};
    std::size_t k = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const long long total = left[c] + right[c];
        if (total > 0) {
            present[k++] = c;
            frac_left[c] = detail::ratio(left[c], total);
            frac_right[c] = detail::ratio(right[c], total);
        }
    }
    if (k < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const auto ca = present[a];
            const auto cb = present[b];
            acc += detail::hellinger_pair(frac_left[ca], frac_right[ca], frac_left[cb], frac_right[cb]);
        }
    }
    return acc / static_cast<double>(k * (k - 1) / 2);
}

/// Parent impurity minus size-weighted child impurity. Entropy in bits.
inline double impurity_split_score(const ClassCounts& left, const ClassCounts& right, SplitCriterion kind) {
    ClassCounts parent{};
    for (std::size_t c = 0; c < kNumClasses; ++c) parent[c] = left[c] + right[c];
    const long long n_left = detail::sum(left);
    const long long n_right = detail::sum(right);
    const long long n = n_left + n_right;
    if (n <= 0) fail(ErrorCode::InvalidArgument, "split of an empty node");
    auto impurity = [&](const ClassCounts& counts, long long total) {
        return kind == SplitCriterion::GiniGain ? detail::gini(counts, total) : detail::entropy_bits(counts, total);
    };
    const double wl = static_cast<double>(n_left) / static_cast<double>(n);
    const double wr = static_cast<double>(n_right) / static_cast<double>(n);
    const double gain = impurity(parent, n) - wl * impurity(left, n_left) - wr * impurity(right, n_right);
    return std::max(gain, 0.0);
}

inline double split_score(const ClassCounts& left, const ClassCounts& right, SplitCriterion criterion) {
    return criterion == SplitCriterion::Hellinger ? hellinger_split_score(left, right, kAllClasses)
                                                  : impurity_split_score(left, right, criterion);
}

// ---------------------------------------------------------------------------
// Tree model
// ---------------------------------------------------------------------------

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

struct TreeParams {
    int max_depth = kUnlimitedDepth;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    /// Features examined per node; 0 means all of them.
    int feature_subsample = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    ClassVector proba{};  // leaves only

    bool is_leaf() const { return feature < 0; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Axis-parallel classification tree. Rows with value <= threshold go left.
struct TrainedTree {
    std::vector<TreeNode> nodes;
    std::size_t n_features = 0;

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
    }

    friend bool operator==(const TrainedTree&, const TrainedTree&) = default;
};

namespace detail {

class ClassificationTreeBuilder {
public:
    ClassificationTreeBuilder(const SampleMatrix& data, std::span<const std::size_t> rows, const TreeParams& params,
                              SplitCriterion criterion)
        : sample_(data.values, rows), params_(params), criterion_(criterion), rng_(params.seed) {
        labels_.reserve(rows.size());
        for (auto r : rows) labels_.push_back(data.labels[r]);
        tree_.n_features = data.d();
    }

    TrainedTree build() {
        struct Work {
            int node;
            int depth;
            SortedColumns sorted;
        };
        std::vector<Work> stack;
        tree_.nodes.emplace_back();
        stack.push_back({0, 0, presort(sample_)});
        std::vector<std::uint8_t> goes_left(sample_.size(), 0);

        while (!stack.empty()) {
            Work work = std::move(stack.back());
            stack.pop_back();
            const auto& positions = work.sorted.front();

            ClassCounts counts{};
            for (auto pos : positions) ++counts[static_cast<std::size_t>(labels_[pos])];
            const long long n = static_cast<long long>(positions.size());

            const bool pure = std::count_if(counts.begin(), counts.end(), [](long long c) { return c > 0; }) <= 1;
            std::optional<Split> split;
            if (!pure && work.depth < params_.max_depth && n >= params_.min_samples_split) split = find_split(work.sorted, counts);
            if (!split) {
                auto& proba = tree_.nodes[work.node].proba;
                for (std::size_t c = 0; c < kNumClasses; ++c) proba[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
                continue;
            }

            for (auto pos : positions) goes_left[pos] = sample_(pos, split->feature) <= split->threshold ? 1 : 0;
            SortedColumns left_sorted;
            SortedColumns right_sorted;
            partition(work.sorted, goes_left, left_sorted, right_sorted);
            work.sorted.clear();

            const int left = static_cast<int>(tree_.nodes.size());
            tree_.nodes.emplace_back();
            const int right = static_cast<int>(tree_.nodes.size());
            tree_.nodes.emplace_back();
            auto& node = tree_.nodes[work.node];
            node.feature = static_cast<int>(split->feature);
            node.threshold = split->threshold;
            node.left = left;
            node.right = right;
            stack.push_back({right, work.depth + 1, std::move(right_sorted)});
            stack.push_back({left, work.depth + 1, std::move(left_sorted)});
        }
        return std::move(tree_);
    }

private:
    struct Split {
        std::size_t feature;
        double threshold;
        double score;
    };

    // Best split over a random feature subset, ties to (lower feature, lower
    // threshold). When every sampled feature is constant at the node the
    // remaining features are tried in the same random order until one
    // yields a valid split.
    std::optional<Split> find_split(const SortedColumns& sorted, const ClassCounts& parent) {
        const std::size_t d = sample_.features();
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng_.shuffle(std::span<std::size_t>(order));
        std::size_t k = params_.feature_subsample <= 0 ? d : std::min<std::size_t>(d, static_cast<std::size_t>(params_.feature_subsample));

        std::optional<Split> best;
        std::vector<std::size_t> batch(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        std::size_t next = k;
        while (true) {
            std::sort(batch.begin(), batch.end());
            for (auto f : batch) scan_feature(f, sorted[f], parent, best);
            if (best || next >= d) break;
            batch.assign(1, order[next++]);
        }
        return best;
    }

    void scan_feature(std::size_t f, const std::vector<std::uint32_t>& positions, const ClassCounts& parent,
                      std::optional<Split>& best) const {
        const long long n = static_cast<long long>(positions.size());
        const long long min_leaf = std::max(1, params_.min_samples_leaf);
        ClassCounts left{};
        for (long long i = 0; i + 1 < n; ++i) {
            const auto pos = positions[static_cast<std::size_t>(i)];
            ++left[static_cast<std::size_t>(labels_[pos])];
            const double v = sample_(pos, f);
            const double v_next = sample_(positions[static_cast<std::size_t>(i + 1)], f);
            if (!(v < v_next)) continue;
            const long long n_left = i + 1;
            if (n_left < min_leaf || n - n_left < min_leaf) continue;
            ClassCounts right{};
            for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = parent[c] - left[c];
            const double score = split_score(left, right, criterion_);
            if (!best || score > best->score) best = Split{f, midpoint(v, v_next), score};
        }
    }

    ColumnSample sample_;
    std::vector<int> labels_;
    TreeParams params_;
    SplitCriterion criterion_;
    Rng rng_;
    TrainedTree tree_;
};

}  // namespace detail

/// Fits a tree on `rows` of `data` (duplicates allowed, e.g. a bootstrap).
inline TrainedTree fit_tree(const SampleMatrix& data, std::span<const std::size_t> rows, const TreeParams& params,
                            SplitCriterion criterion) {
    check_sample_matrix(data);
    if (rows.empty()) fail(ErrorCode::EmptyInput, "tree needs at least one row");
    if (params.max_depth < 0 || params.min_samples_leaf < 1 || params.min_samples_split < 2) {
        fail(ErrorCode::InvalidArgument, "invalid tree parameters");
    }
    return detail::ClassificationTreeBuilder(data, rows, params, criterion).build();
}

inline TrainedTree fit_tree(const SampleMatrix& data, const TreeParams& params, SplitCriterion criterion) {
    std::vector<std::size_t> rows(data.n());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit_tree(data, rows, params, criterion);
}

inline const ClassVector& tree_predict_proba(const TrainedTree& tree, std::span<const double> row) {
    if (row.size() != tree.n_features) {
        fail(ErrorCode::ArityMismatch, "row has " + std::to_string(row.size()) + " features, tree expects " +
                                           std::to_string(tree.n_features));
    }
    std::size_t i = 0;
    while (!tree.nodes[i].is_leaf()) {
        const auto& node = tree.nodes[i];
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
    }
    return tree.nodes[i].proba;
}

}  // namespace idsens
