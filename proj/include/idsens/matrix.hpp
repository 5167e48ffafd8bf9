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
#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/error.hpp"

namespace idsens {

/// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    T& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const T& operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    void append_row(std::span<const T> values) {
        if (rows_ == 0 && cols_ == 0) cols_ = values.size();
        assert(values.size() == cols_);
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Encoded features plus class labels. `labels[i]` indexes kClassNames.
struct SampleMatrix {
    Matrix<double> values;
    std::vector<int> labels;
    std::vector<std::string> feature_names;

    std::size_t n() const noexcept { return values.rows(); }
    std::size_t d() const noexcept { return values.cols(); }

    /// Rows picked by index, duplicates allowed.
    SampleMatrix select_rows(std::span<const std::size_t> rows) const {
        SampleMatrix out;
        out.feature_names = feature_names;
        out.values = Matrix<double>(rows.size(), d());
        out.labels.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto src = values.row(rows[i]);
            std::copy(src.begin(), src.end(), out.values.row(i).begin());
            out.labels.push_back(labels[rows[i]]);
        }
        return out;
    }

    friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;
};

/// n x 10 class membership scores, columns in kClassNames order.
using ScoreMatrix = Matrix<double>;

inline ClassCounts count_classes(std::span<const int> labels) {
    ClassCounts counts{};
    for (int label : labels) ++counts.at(static_cast<std::size_t>(label));
    return counts;
}

inline std::vector<int> row_argmax(const ScoreMatrix& scores) {
    std::vector<int> out(scores.rows());
    for (std::size_t i = 0; i < scores.rows(); ++i) out[i] = argmax(scores.row(i));
    return out;
}

inline void check_sample_matrix(const SampleMatrix& m) {
    if (m.n() == 0 || m.d() == 0) fail(ErrorCode::EmptyInput, "sample matrix has no rows or no features");
    if (m.labels.size() != m.n()) fail(ErrorCode::LengthMismatch, "label count differs from row count");
    if (m.feature_names.size() != m.d()) fail(ErrorCode::FeatureMismatch, "feature name count differs from column count");
    for (int label : m.labels) {
        if (label < 0 || label >= static_cast<int>(kNumClasses)) {
            fail(ErrorCode::InvalidArgument, "label out of range: " + std::to_string(label));
        }
    }
    for (double v : m.values.data()) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "sample matrix holds a non-finite value");
    }
}

}  // namespace idsens
