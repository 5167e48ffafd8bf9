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
#include <cctype>
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

#include "idsens/error.hpp"

namespace idsens {

inline constexpr std::size_t kNumClasses = 10;

/// Canonical traffic classes. Every 10-wide vector and 10x10 array in the
/// library is indexed in this order.
enum class TrafficClass : int {
    Analysis = 0,
    Backdoor = 1,
    DoS = 2,
    Exploits = 3,
    Fuzzers = 4,
    Generic = 5,
    Normal = 6,
    Recon = 7,
    Shellcode = 8,
    Worms = 9,
};

constexpr int index_of(TrafficClass c) { return static_cast<int>(c); }

inline constexpr int kNormalIndex = index_of(TrafficClass::Normal);

inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "Analysis", "Backdoor", "DoS",    "Exploits",  "Fuzzers",
    "Generic",  "Normal",   "Recon",  "Shellcode", "Worms",
};

constexpr std::string_view class_name(int index) {
    return kClassNames.at(static_cast<std::size_t>(index));
}

using ClassVector = std::array<double, kNumClasses>;
using ClassCounts = std::array<long long, kNumClasses>;

namespace detail {

inline std::string normalize_class_text(std::string_view text) {
    std::string out;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    return out;
}

}  // namespace detail

/// Maps a dataset category cell to its class index. Accepts the canonical
/// names case-insensitively plus the spellings used by the published CSVs
/// ("Reconnaissance", "Backdoors"). The raw full dumps leave the category
/// empty for benign traffic, so an empty cell maps to Normal.
inline std::optional<int> find_class(std::string_view text) {
    const std::string key = detail::normalize_class_text(text);
    if (key.empty()) return kNormalIndex;
    if (key == "reconnaissance") return index_of(TrafficClass::Recon);
    if (key == "backdoors") return index_of(TrafficClass::Backdoor);
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        if (detail::normalize_class_text(kClassNames[i]) == key) return static_cast<int>(i);
    }
    return std::nullopt;
}

inline int class_index(std::string_view text) {
    if (auto idx = find_class(text)) return *idx;
    fail(ErrorCode::UnknownClassName, "'" + std::string(text) + "' is not a known traffic class");
}

/// Lowest index wins ties.
template <class Range>
int argmax(const Range& row) {
    auto best = std::begin(row);
    for (auto it = std::begin(row); it != std::end(row); ++it) {
        if (*it > *best) best = it;
    }
    return static_cast<int>(std::distance(std::begin(row), best));
}

}  // namespace idsens
