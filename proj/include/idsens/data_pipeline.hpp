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
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idsens/classes.hpp"
#include "idsens/csv.hpp"
#include "idsens/error.hpp"
#include "idsens/matrix.hpp"
#include "idsens/rng.hpp"
#include "idsens/schema.hpp"

namespace idsens {

// ---------------------------------------------------------------------------
// Raw table
// ---------------------------------------------------------------------------

/// One column of an ingested CSV. Numeric columns are parsed on ingest;
/// every other kind keeps the cell text.
struct RawColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> numbers;
    std::vector<std::string> texts;

    std::size_t size() const { return kind == ColumnKind::Numeric ? numbers.size() : texts.size(); }
};

/// Ingested CSV, columns in schema order.
struct RawTable {
    std::vector<RawColumn> columns;
    std::size_t rows = 0;

    const RawColumn& column(std::string_view name) const {
        for (const auto& c : columns) {
            if (c.name == name) return c;
        }
        fail(ErrorCode::MissingColumn, "no column '" + std::string(name) + "'");
    }
};

inline RawTable ingest_csv(std::istream& in, const FeatureSchema& schema) {
    std::string line;
    if (!std::getline(in, line) || csv::trim(line).empty()) fail(ErrorCode::EmptyInput, "no header row");
    const auto header = csv::split_record(line);

    std::vector<std::size_t> header_to_schema(header.size());
    std::set<std::string> header_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto idx = schema.find(header[i]);
        if (!idx) fail(ErrorCode::MissingColumn, "header column '" + header[i] + "' is not in the schema");
        if (!header_names.insert(header[i]).second) fail(ErrorCode::MissingColumn, "duplicate header column '" + header[i] + "'");
        header_to_schema[i] = *idx;
    }
    for (const auto& c : schema.columns) {
        if (!header_names.count(c.name)) fail(ErrorCode::MissingColumn, "schema column '" + c.name + "' missing from header");
    }

    RawTable table;
    for (const auto& c : schema.columns) table.columns.push_back({c.name, c.kind, {}, {}});

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split_record(line);
        if (cells.size() != header.size()) {
            fail(ErrorCode::MalformedRow, "row " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                                              " cells, found " + std::to_string(cells.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            auto& col = table.columns[header_to_schema[i]];
            if (col.kind == ColumnKind::Numeric) {
                auto value = csv::parse_double(cells[i]);
                if (!value) {
                    fail(ErrorCode::MalformedRow, "row " + std::to_string(line_no) + ": column '" + col.name +
                                                      "' is not a finite number: '" + cells[i] + "'");
                }
                col.numbers.push_back(*value);
            } else {
                col.texts.push_back(cells[i]);
            }
        }
        ++table.rows;
    }
    if (table.rows == 0) fail(ErrorCode::EmptyInput, "no data rows");
    return table;
}

inline RawTable ingest_csv(const std::string& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path);
    return ingest_csv(in, schema);
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

/// Builds nominal code tables from the category texts present in `raw`.
inline FeatureSchema fit_nominal_maps(const FeatureSchema& schema, const RawTable& raw) {
    std::map<std::string, std::vector<std::string>> observed;
    for (const auto& c : raw.columns) {
        if (c.kind == ColumnKind::Nominal) observed[c.name] = c.texts;
    }
    return with_nominal_maps(schema, observed);
}

/// Drops identifier columns, encodes nominals, maps the category column to
/// class indices. The schema must already carry nominal maps.
inline SampleMatrix preprocess(const RawTable& raw, const FeatureSchema& schema) {
    if (!schema.has_nominal_maps()) fail(ErrorCode::NotFitted, "schema has nominal columns without code tables");
    const auto names = schema.feature_names();
    std::vector<const RawColumn*> sources;
    for (const auto& name : names) sources.push_back(&raw.column(name));
    const auto& target = raw.column(schema.columns[schema.target_index()].name);

    SampleMatrix m;
    m.feature_names = names;
    m.values = Matrix<double>(raw.rows, names.size());
    m.labels.reserve(raw.rows);
    for (std::size_t j = 0; j < sources.size(); ++j) {
        const RawColumn& src = *sources[j];
        if (src.kind == ColumnKind::Numeric) {
            for (std::size_t i = 0; i < raw.rows; ++i) m.values(i, j) = src.numbers[i];
        } else {
            const NominalMap& map = schema.nominal_maps.at(src.name);
            for (std::size_t i = 0; i < raw.rows; ++i) m.values(i, j) = encode_nominal(map, src.texts[i]);
        }
    }
    for (std::size_t i = 0; i < raw.rows; ++i) m.labels.push_back(class_index(target.texts[i]));
    return m;
}

// ---------------------------------------------------------------------------
// Min-max scaling
// ---------------------------------------------------------------------------

struct ScalerParams {
    std::vector<std::string> feature_names;
    std::vector<double> min;
    std::vector<double> max;

    friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

inline ScalerParams fit_minmax(const SampleMatrix& train) {
    check_sample_matrix(train);
    ScalerParams p;
    p.feature_names = train.feature_names;
    p.min.assign(train.d(), 0.0);
    p.max.assign(train.d(), 0.0);
    for (std::size_t j = 0; j < train.d(); ++j) {
        double lo = train.values(0, j);
        double hi = lo;
        for (std::size_t i = 1; i < train.n(); ++i) {
            lo = std::min(lo, train.values(i, j));
            hi = std::max(hi, train.values(i, j));
        }
        p.min[j] = lo;
        p.max[j] = hi;
    }
    return p;
}

/// x' = (x - min) / (max - min), 0 for constant features. No clipping.
inline SampleMatrix apply_minmax(const ScalerParams& params, SampleMatrix m) {
    if (m.feature_names != params.feature_names) fail(ErrorCode::FeatureMismatch, "matrix features differ from scaler features");
    for (std::size_t j = 0; j < m.d(); ++j) {
        const double lo = params.min[j];
        const double span = params.max[j] - lo;
        for (std::size_t i = 0; i < m.n(); ++i) {
            double& x = m.values(i, j);
            x = span > 0.0 ? (x - lo) / span : 0.0;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Stratified split
// ---------------------------------------------------------------------------

struct SplitResult {
    SampleMatrix train;
    SampleMatrix validation;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> validation_rows;
};

/// Per-class validation sizes. The total is round-half-up of n * (1 - f);
/// classes receive floor(n_c * (1 - f)) and the leftover records go to the
/// classes with the largest fractional quota (lower class index on ties).
inline ClassCounts stratified_validation_sizes(const ClassCounts& counts, double train_fraction) {
    const double holdout = 1.0 - train_fraction;
    constexpr double kSnap = 1e-9;
    std::array<double, kNumClasses> quota{};
    std::array<double, kNumClasses> frac{};
    ClassCounts sizes{};
    double total_quota = 0.0;
    long long assigned = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        double q = static_cast<double>(counts[c]) * holdout;
        if (std::abs(q - std::round(q)) < kSnap) q = std::round(q);
        quota[c] = q;
        total_quota += q;
        sizes[c] = static_cast<long long>(std::floor(q));
        frac[c] = std::round((q - std::floor(q)) / kSnap) * kSnap;
        assigned += sizes[c];
    }
    if (std::abs(total_quota - std::round(total_quota)) < kSnap) total_quota = std::round(total_quota);
    long long remaining = static_cast<long long>(std::floor(total_quota + 0.5)) - assigned;

    std::array<std::size_t, kNumClasses> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; k < kNumClasses && remaining > 0; ++k) {
        const std::size_t c = order[k];
        if (frac[c] <= 0.0) break;
        ++sizes[c];
        --remaining;
    }
    return sizes;
}

inline SplitResult stratified_split(const SampleMatrix& m, double train_fraction, std::uint64_t seed) {
    check_sample_matrix(m);
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) fail(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1]");

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < m.n(); ++i) by_class[static_cast<std::size_t>(m.labels[i])].push_back(i);
    const auto sizes = stratified_validation_sizes(count_classes(m.labels), train_fraction);

    std::vector<bool> in_validation(m.n(), false);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& rows = by_class[c];
        Rng rng(derive_seed(seed, c));
        rng.shuffle(std::span<std::size_t>(rows));
        for (long long k = 0; k < sizes[c]; ++k) in_validation[rows[static_cast<std::size_t>(k)]] = true;
    }

    SplitResult out;
    for (std::size_t i = 0; i < m.n(); ++i) (in_validation[i] ? out.validation_rows : out.train_rows).push_back(i);
    out.train = m.select_rows(out.train_rows);
    out.validation = m.select_rows(out.validation_rows);
    return out;
}

// ---------------------------------------------------------------------------
// Feature subsets
// ---------------------------------------------------------------------------

/// Ordered list of model input features.
struct FeatureSubset {
    std::vector<std::string> names;

    friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;
};

inline void validate_feature_subset(const FeatureSubset& subset, const std::vector<std::string>& available) {
    if (subset.names.empty()) fail(ErrorCode::InvalidArgument, "feature subset is empty");
    std::set<std::string> seen;
    for (const auto& name : subset.names) {
        if (!seen.insert(name).second) fail(ErrorCode::InvalidArgument, "duplicate feature '" + name + "' in subset");
        if (std::find(available.begin(), available.end(), name) == available.end()) {
            fail(ErrorCode::UnknownFeature, "feature '" + name + "' is not available");
        }
    }
}

inline SampleMatrix apply_feature_subset(const SampleMatrix& m, const FeatureSubset& subset) {
    std::vector<std::size_t> cols;
    for (const auto& name : subset.names) {
        auto it = std::find(m.feature_names.begin(), m.feature_names.end(), name);
        if (it == m.feature_names.end()) fail(ErrorCode::UnknownFeature, "feature '" + name + "' is not in the matrix");
        cols.push_back(static_cast<std::size_t>(it - m.feature_names.begin()));
    }
    SampleMatrix out;
    out.feature_names = subset.names;
    out.labels = m.labels;
    out.values = Matrix<double>(m.n(), cols.size());
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out.values(i, j) = m.values(i, cols[j]);
    }
    return out;
}

/// Newline-separated feature names; blank lines and `#` comments ignored.
inline FeatureSubset parse_feature_subset(std::istream& in) {
    FeatureSubset subset;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto name = csv::trim(line);
        if (!name.empty()) subset.names.emplace_back(name);
    }
    return subset;
}

inline FeatureSubset load_feature_subset(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open feature list " + path);
    return parse_feature_subset(in);
}

/// The 24 features kept by Elastic Net; input of the bagging and boosting
/// models.
inline FeatureSubset elastic_net_features() {
    return {{"dur", "proto", "service", "state", "spkts", "dpkts", "sbytes", "dbytes",
             "rate", "sttl", "dttl", "sload", "dload", "sloss", "dloss", "sinpkt",
             "dinpkt", "sjit", "djit", "swin", "stcpb", "dtcpb", "dwin", "tcprtt"}};
}

/// The 8 features kept by forward selection; input of the Hellinger forest.
inline FeatureSubset forward_selected_features() {
    return {{"proto", "service", "sbytes", "rate", "dload", "sjit", "djit", "tcprtt"}};
}

}  // namespace idsens
