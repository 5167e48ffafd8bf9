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
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idsens/csv.hpp"
#include "idsens/error.hpp"

namespace idsens {

enum class ColumnKind { Numeric, Nominal, Identifier, TargetCategory, TargetLabel };

constexpr std::string_view to_string(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Nominal: return "nominal";
    case ColumnKind::Identifier: return "identifier";
    case ColumnKind::TargetCategory: return "target-category";
    case ColumnKind::TargetLabel: return "target-label";
    }
    return "?";
}

inline std::optional<ColumnKind> parse_column_kind(std::string_view text) {
    for (auto kind : {ColumnKind::Numeric, ColumnKind::Nominal, ColumnKind::Identifier,
                      ColumnKind::TargetCategory, ColumnKind::TargetLabel}) {
        if (to_string(kind) == text) return kind;
    }
    return std::nullopt;
}

struct SchemaColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;

    friend bool operator==(const SchemaColumn&, const SchemaColumn&) = default;
};

/// Category text -> integer code. Codes run 1..k in sorted-text order; 0 is
/// reserved for categories not seen when the map was built.
using NominalMap = std::map<std::string, int>;

/// Column layout of an input CSV and the learned nominal encodings.
struct FeatureSchema {
    std::vector<SchemaColumn> columns;
    std::map<std::string, NominalMap> nominal_maps;

    /// Model-facing columns (numeric and nominal), in schema order.
    std::vector<std::string> feature_names() const {
        std::vector<std::string> names;
        for (const auto& c : columns) {
            if (c.kind == ColumnKind::Numeric || c.kind == ColumnKind::Nominal) names.push_back(c.name);
        }
        return names;
    }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].name == name) return i;
        }
        return std::nullopt;
    }

    std::size_t target_index() const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].kind == ColumnKind::TargetCategory) return i;
        }
        fail(ErrorCode::InvalidSchema, "schema has no target-category column");
    }

    bool has_nominal_maps() const {
        return std::all_of(columns.begin(), columns.end(), [&](const SchemaColumn& c) {
            return c.kind != ColumnKind::Nominal || nominal_maps.count(c.name) > 0;
        });
    }

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

inline void validate_schema(const FeatureSchema& schema) {
    std::set<std::string> seen;
    int targets = 0;
    int labels = 0;
    for (const auto& c : schema.columns) {
        if (c.name.empty()) fail(ErrorCode::InvalidSchema, "empty column name");
        if (!seen.insert(c.name).second) fail(ErrorCode::InvalidSchema, "duplicate column '" + c.name + "'");
        if (c.kind == ColumnKind::TargetCategory) ++targets;
        if (c.kind == ColumnKind::TargetLabel) ++labels;
    }
    if (targets != 1) fail(ErrorCode::InvalidSchema, "schema needs exactly one target-category column");
    if (labels > 1) fail(ErrorCode::InvalidSchema, "schema allows at most one target-label column");
    if (schema.feature_names().empty()) fail(ErrorCode::InvalidSchema, "schema has no feature columns");
    for (const auto& [name, map] : schema.nominal_maps) {
        auto idx = schema.find(name);
        if (!idx || schema.columns[*idx].kind != ColumnKind::Nominal) {
            fail(ErrorCode::InvalidSchema, "nominal map for non-nominal column '" + name + "'");
        }
        std::vector<int> codes;
        for (const auto& [text, code] : map) codes.push_back(code);
        std::sort(codes.begin(), codes.end());
        for (std::size_t i = 0; i < codes.size(); ++i) {
            if (codes[i] != static_cast<int>(i) + 1) {
                fail(ErrorCode::InvalidSchema, "nominal codes for '" + name + "' are not contiguous from 1");
            }
        }
    }
}

/// Schema text: one `<column-name> <kind>` pair per line, `#` starts a
/// comment. Kinds: numeric, nominal, identifier, target-category,
/// target-label.
inline FeatureSchema parse_schema(std::istream& in) {
    FeatureSchema schema;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string name;
        std::string kind_text;
        if (!(fields >> name)) continue;
        std::string extra;
        if (!(fields >> kind_text) || (fields >> extra)) {
            fail(ErrorCode::InvalidSchema, "line " + std::to_string(line_no) + ": expected '<name> <kind>'");
        }
        auto kind = parse_column_kind(kind_text);
        if (!kind) fail(ErrorCode::InvalidSchema, "line " + std::to_string(line_no) + ": unknown kind '" + kind_text + "'");
        schema.columns.push_back({name, *kind});
    }
    validate_schema(schema);
    return schema;
}

inline FeatureSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open schema file " + path);
    return parse_schema(in);
}

inline std::string format_schema(const FeatureSchema& schema) {
    std::string out;
    for (const auto& c : schema.columns) {
        out += c.name;
        out += ' ';
        out += to_string(c.kind);
        out += '\n';
    }
    return out;
}

/// Layout of the published UNSW-NB15 training/testing CSVs (45 columns).
inline FeatureSchema unsw_nb15_schema() {
    using K = ColumnKind;
    FeatureSchema s;
    s.columns = {
        {"id", K::Identifier},         {"dur", K::Numeric},
        {"proto", K::Nominal},         {"service", K::Nominal},
        {"state", K::Nominal},         {"spkts", K::Numeric},
        {"dpkts", K::Numeric},         {"sbytes", K::Numeric},
        {"dbytes", K::Numeric},        {"rate", K::Numeric},
        {"sttl", K::Numeric},          {"dttl", K::Numeric},
        {"sload", K::Numeric},         {"dload", K::Numeric},
        {"sloss", K::Numeric},         {"dloss", K::Numeric},
        {"sinpkt", K::Numeric},        {"dinpkt", K::Numeric},
        {"sjit", K::Numeric},          {"djit", K::Numeric},
        {"swin", K::Numeric},          {"stcpb", K::Numeric},
        {"dtcpb", K::Numeric},         {"dwin", K::Numeric},
        {"tcprtt", K::Numeric},        {"synack", K::Numeric},
        {"ackdat", K::Numeric},        {"smean", K::Numeric},
        {"dmean", K::Numeric},         {"trans_depth", K::Numeric},
        {"response_body_len", K::Numeric}, {"ct_srv_src", K::Numeric},
        {"ct_state_ttl", K::Numeric},  {"ct_dst_ltm", K::Numeric},
        {"ct_src_dport_ltm", K::Numeric}, {"ct_dst_sport_ltm", K::Numeric},
        {"ct_dst_src_ltm", K::Numeric}, {"is_ftp_login", K::Numeric},
        {"ct_ftp_cmd", K::Numeric},    {"ct_flw_http_mthd", K::Numeric},
        {"ct_src_ltm", K::Numeric},    {"ct_srv_dst", K::Numeric},
        {"is_sm_ips_ports", K::Numeric}, {"attack_cat", K::TargetCategory},
        {"label", K::TargetLabel},
    };
    return s;
}

/// Learns a code table for every nominal column from `values_by_column`
/// (column name -> observed cell texts).
inline FeatureSchema with_nominal_maps(FeatureSchema schema,
                                       const std::map<std::string, std::vector<std::string>>& values_by_column) {
    schema.nominal_maps.clear();
    for (const auto& c : schema.columns) {
        if (c.kind != ColumnKind::Nominal) continue;
        std::set<std::string> distinct;
        if (auto it = values_by_column.find(c.name); it != values_by_column.end()) {
            distinct.insert(it->second.begin(), it->second.end());
        }
        NominalMap map;
        int code = 1;
        for (const auto& text : distinct) map.emplace(text, code++);
        schema.nominal_maps.emplace(c.name, std::move(map));
    }
    return schema;
}

inline int encode_nominal(const NominalMap& map, const std::string& text) {
    auto it = map.find(text);
    return it == map.end() ? 0 : it->second;
}

}  // namespace idsens
