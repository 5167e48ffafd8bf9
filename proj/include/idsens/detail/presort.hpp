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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "idsens/matrix.hpp"

namespace idsens::detail {

/// Column-major copy of the training sample. Position p refers to the p-th
/// entry of the row list the sample was built from.
struct ColumnSample {
    std::vector<std::vector<double>> columns;

    ColumnSample(const Matrix<double>& values, std::span<const std::size_t> rows) : columns(values.cols()) {
        for (std::size_t f = 0; f < values.cols(); ++f) {
            auto& col = columns[f];
            col.resize(rows.size());
            for (std::size_t p = 0; p < rows.size(); ++p) col[p] = values(rows[p], f);
        }
    }

    std::size_t size() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t features() const { return columns.size(); }
    double operator()(std::uint32_t pos, std::size_t f) const { return columns[f][pos]; }
};

/// For each feature, the sample positions ordered by (value, position).
using SortedColumns = std::vector<std::vector<std::uint32_t>>;

inline SortedColumns presort(const ColumnSample& sample) {
    SortedColumns sorted(sample.features());
    for (std::size_t f = 0; f < sample.features(); ++f) {
        auto& order = sorted[f];
        order.resize(sample.size());
        std::iota(order.begin(), order.end(), std::uint32_t{0});
        const auto& col = sample.columns[f];
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
    return sorted;
}

/// Stable split of every feature ordering by the per-position flag.
inline void partition(const SortedColumns& parent, const std::vector<std::uint8_t>& goes_left,
                      SortedColumns& left, SortedColumns& right) {
    left.assign(parent.size(), {});
    right.assign(parent.size(), {});
    for (std::size_t f = 0; f < parent.size(); ++f) {
        for (std::uint32_t pos : parent[f]) (goes_left[pos] ? left[f] : right[f]).push_back(pos);
    }
}

/// Threshold between two consecutive distinct values; `lo <= t < hi`.
inline double midpoint(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return (mid >= hi || !std::isfinite(mid)) ? lo : mid;
}

}  // namespace idsens::detail
