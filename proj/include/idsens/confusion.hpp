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
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <string>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"

namespace idsens {

/// Square count table; rows are actual classes, columns predicted classes.
class ConfusionMatrix {
public:
    ConfusionMatrix() : ConfusionMatrix(multiclass_names()) {}
    explicit ConfusionMatrix(std::vector<std::string> class_names)
        : names_(std::move(class_names)), counts_(names_.size(), names_.size(), 0) {}

    static std::vector<std::string> multiclass_names() { return {kClassNames.begin(), kClassNames.end()}; }
    static std::vector<std::string> binary_names() { return {"Normal", "Attack"}; }

    /// Builds a matrix from a row-major list of counts.
    static ConfusionMatrix from_counts(std::vector<std::string> class_names, std::span<const long long> counts) {
        ConfusionMatrix cm(std::move(class_names));
        if (counts.size() != cm.size() * cm.size()) fail(ErrorCode::ShapeMismatch, "count list does not match class count");
        std::copy(counts.begin(), counts.end(), cm.counts_.data().begin());
        return cm;
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    long long& operator()(std::size_t actual, std::size_t predicted) { return counts_(actual, predicted); }
    long long operator()(std::size_t actual, std::size_t predicted) const { return counts_(actual, predicted); }

    long long total() const {
        long long t = 0;
        for (auto v : counts_.data()) t += v;
        return t;
    }

    long long row_total(std::size_t actual) const {
        long long t = 0;
        for (std::size_t j = 0; j < size(); ++j) t += counts_(actual, j);
        return t;
    }

    long long column_total(std::size_t predicted) const {
        long long t = 0;
        for (std::size_t i = 0; i < size(); ++i) t += counts_(i, predicted);
        return t;
    }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == name) return i;
        }
        return std::nullopt;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::vector<std::string> names_;
    Matrix<long long> counts_;
};

inline ConfusionMatrix confusion_matrix(std::span<const int> true_labels, std::span<const int> predicted_labels) {
    if (true_labels.size() != predicted_labels.size()) fail(ErrorCode::LengthMismatch, "label lists differ in length");
    if (true_labels.empty()) fail(ErrorCode::EmptyInput, "no labels");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        ++cm(static_cast<std::size_t>(true_labels[i]), static_cast<std::size_t>(predicted_labels[i]));
    }
    return cm;
}

}  // namespace idsens
