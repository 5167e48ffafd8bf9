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

// Trained ensemble and its JSON container. Layout: docs/artifact-format.md.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "idsens/booster.hpp"
#include "idsens/classes.hpp"
#include "idsens/data_pipeline.hpp"
#include "idsens/error.hpp"
#include "idsens/forest.hpp"
#include "idsens/overlap.hpp"
#include "idsens/schema.hpp"

namespace idsens {

inline constexpr int kArtifactVersion = 1;
inline constexpr std::string_view kArtifactFormat = "idsens.ensemble";

struct EnsembleArtifact {
    int format_version = kArtifactVersion;
    std::vector<std::string> class_list{kClassNames.begin(), kClassNames.end()};
    /// Input layout with the nominal encodings learned at training time.
    FeatureSchema schema;
    ScalerParams scaler;
    /// Input of the bagging and boosting models.
    FeatureSubset ensemble_features;
    /// Input of the Hellinger forest.
    FeatureSubset forest_features;
    ForestModel bagging;
    BoosterModel booster;
    ForestModel forest;
    OverlapModel bagging_overlap;
    OverlapModel booster_overlap;

    friend bool operator==(const EnsembleArtifact&, const EnsembleArtifact&) = default;
};

/// Throws CorruptArtifact or SchemaMismatch when the parts do not fit
/// together.
inline void validate_artifact(const EnsembleArtifact& a) {
    auto corrupt = [](const std::string& what) { fail(ErrorCode::CorruptArtifact, what); };
    if (a.class_list != std::vector<std::string>(kClassNames.begin(), kClassNames.end())) corrupt("unexpected class list");
    if (!a.bagging_overlap.resolved || !a.booster_overlap.resolved) corrupt("overlap models must be resolved");
    if (a.scaler.min.size() != a.scaler.feature_names.size() || a.scaler.max.size() != a.scaler.feature_names.size()) {
        corrupt("scaler vectors differ in length");
    }
    if (a.scaler.feature_names != a.schema.feature_names()) {
        fail(ErrorCode::SchemaMismatch, "scaler features do not match the schema");
    }
    validate_feature_subset(a.ensemble_features, a.scaler.feature_names);
    validate_feature_subset(a.forest_features, a.scaler.feature_names);
    if (a.bagging.trees.empty() || a.forest.trees.empty()) corrupt("forest without trees");
    if (a.bagging.n_features != a.ensemble_features.names.size() || a.booster.n_features != a.ensemble_features.names.size()) {
        corrupt("ensemble models disagree with their feature subset");
    }
    if (a.forest.n_features != a.forest_features.names.size()) corrupt("forest disagrees with its feature subset");
}

namespace detail {

using nlohmann::json;

// Nodes are stored as parallel arrays. Children always follow their parent,
// which is what the loader checks to rule out cycles.
template <class Node>
void check_nodes(const std::vector<Node>& nodes, std::size_t n_features) {
    if (nodes.empty()) fail(ErrorCode::CorruptArtifact, "tree without nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.is_leaf()) continue;
        const auto size = static_cast<long long>(nodes.size());
        if (static_cast<std::size_t>(n.feature) >= n_features || n.left <= static_cast<long long>(i) ||
            n.right <= static_cast<long long>(i) || n.left >= size || n.right >= size) {
            fail(ErrorCode::CorruptArtifact, "malformed tree node " + std::to_string(i));
        }
    }
}

inline json tree_params_to_json(const TreeParams& p) {
    return {{"max_depth", p.max_depth},
            {"min_samples_leaf", p.min_samples_leaf},
            {"min_samples_split", p.min_samples_split},
            {"feature_subsample", p.feature_subsample},
            {"seed", p.seed}};
}

inline TreeParams tree_params_from_json(const json& j) {
    TreeParams p;
    p.max_depth = j.at("max_depth").get<int>();
    p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    p.min_samples_split = j.at("min_samples_split").get<int>();
    p.feature_subsample = j.at("feature_subsample").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

inline json tree_to_json(const TrainedTree& t) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array();
    json leaves = json::array();
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        if (n.is_leaf()) leaves.push_back(n.proba);
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"leaf_proba", leaves}};
}

inline TrainedTree tree_from_json(const json& j, std::size_t n_features) {
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto leaves = j.at("leaf_proba").get<std::vector<ClassVector>>();
    if (threshold.size() != feature.size() || left.size() != feature.size() || right.size() != feature.size()) {
        fail(ErrorCode::CorruptArtifact, "tree arrays differ in length");
    }
    TrainedTree t;
    t.n_features = n_features;
    t.nodes.resize(feature.size());
    std::size_t leaf = 0;
    for (std::size_t i = 0; i < feature.size(); ++i) {
        auto& n = t.nodes[i];
        n.feature = feature[i];
        n.threshold = threshold[i];
        n.left = left[i];
        n.right = right[i];
        if (n.is_leaf()) {
            if (leaf >= leaves.size()) fail(ErrorCode::CorruptArtifact, "missing leaf probabilities");
            n.proba = leaves[leaf++];
        }
    }
    if (leaf != leaves.size()) fail(ErrorCode::CorruptArtifact, "extra leaf probabilities");
    check_nodes(t.nodes, n_features);
    return t;
}

inline json forest_to_json(const ForestModel& m) {
    json trees = json::array();
    for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
    return {{"kind", std::string(to_string(m.kind))},
            {"criterion", std::string(to_string(m.criterion))},
            {"seed", m.seed},
            {"n_features", m.n_features},
            {"tree_params", tree_params_to_json(m.tree_params)},
            {"sample_counts", m.sample_counts},
            {"trees", trees}};
}

inline ForestModel forest_from_json(const json& j) {
    ForestModel m;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == to_string(ForestKind::RandomForest)) {
        m.kind = ForestKind::RandomForest;
    } else if (kind == to_string(ForestKind::BalancedBagging)) {
        m.kind = ForestKind::BalancedBagging;
    } else {
        fail(ErrorCode::CorruptArtifact, "unknown forest kind '" + kind + "'");
    }
    const auto criterion = parse_split_criterion(j.at("criterion").get<std::string>());
    if (!criterion) fail(ErrorCode::CorruptArtifact, "unknown split criterion");
    m.criterion = *criterion;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.tree_params = tree_params_from_json(j.at("tree_params"));
    m.sample_counts = j.at("sample_counts").get<std::vector<ClassCounts>>();
    for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, m.n_features));
    if (m.sample_counts.size() != m.trees.size()) fail(ErrorCode::CorruptArtifact, "sample counts do not match trees");
    return m;
}

inline json regression_tree_to_json(const RegressionTree& t) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(), value = json::array();
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

inline RegressionTree regression_tree_from_json(const json& j, std::size_t n_features) {
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto value = j.at("value").get<std::vector<double>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n) {
        fail(ErrorCode::CorruptArtifact, "tree arrays differ in length");
    }
    RegressionTree t;
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i]};
    check_nodes(t.nodes, n_features);
    return t;
}

inline json booster_to_json(const BoosterModel& m) {
    json rounds = json::array();
    for (const auto& round : m.rounds) {
        json trees = json::array();
        for (const auto& t : round) trees.push_back(regression_tree_to_json(t));
        rounds.push_back(std::move(trees));
    }
    const auto& p = m.params;
    return {{"params",
             {{"n_rounds", p.n_rounds},
              {"max_depth", p.max_depth},
              {"learning_rate", p.learning_rate},
              {"l2_lambda", p.l2_lambda},
              {"min_child_weight", p.min_child_weight}}},
            {"n_features", m.n_features},
            {"base_margin", m.base_margin},
            {"training_loss", m.training_loss},
            {"rounds", rounds}};
}

inline BoosterModel booster_from_json(const json& j) {
    BoosterModel m;
    const auto& p = j.at("params");
    m.params.n_rounds = p.at("n_rounds").get<int>();
    m.params.max_depth = p.at("max_depth").get<int>();
    m.params.learning_rate = p.at("learning_rate").get<double>();
    m.params.l2_lambda = p.at("l2_lambda").get<double>();
    m.params.min_child_weight = p.at("min_child_weight").get<double>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.base_margin = j.at("base_margin").get<ClassVector>();
    m.training_loss = j.at("training_loss").get<std::vector<double>>();
    for (const auto& round : j.at("rounds")) {
        if (round.size() != kNumClasses) fail(ErrorCode::CorruptArtifact, "booster round must hold 10 trees");
        auto& trees = m.rounds.emplace_back();
        for (std::size_t c = 0; c < kNumClasses; ++c) trees[c] = regression_tree_from_json(round.at(c), m.n_features);
    }
    return m;
}

inline json overlap_to_json(const OverlapModel& m) {
    return {{"resolved", m.resolved}, {"mean", m.mean}, {"stddev", m.stddev}};
}

inline OverlapModel overlap_from_json(const json& j) {
    OverlapModel m;
    m.resolved = j.at("resolved").get<bool>();
    m.mean = j.at("mean").get<ClassTable>();
    m.stddev = j.at("stddev").get<ClassTable>();
    return m;
}

inline json schema_to_json(const FeatureSchema& s) {
    json columns = json::array();
    for (const auto& c : s.columns) columns.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
    return {{"columns", columns}, {"nominal_maps", s.nominal_maps}};
}

inline FeatureSchema schema_from_json(const json& j) {
    FeatureSchema s;
    for (const auto& c : j.at("columns")) {
        const auto kind = parse_column_kind(c.at("kind").get<std::string>());
        if (!kind) fail(ErrorCode::CorruptArtifact, "unknown column kind");
        s.columns.push_back({c.at("name").get<std::string>(), *kind});
    }
    s.nominal_maps = j.at("nominal_maps").get<std::map<std::string, NominalMap>>();
    validate_schema(s);
    return s;
}

}  // namespace detail

inline nlohmann::json artifact_to_json(const EnsembleArtifact& a) {
    using detail::json;
    return {{"format", std::string(kArtifactFormat)},
            {"format_version", a.format_version},
            {"class_list", a.class_list},
            {"schema", detail::schema_to_json(a.schema)},
            {"scaler", {{"features", a.scaler.feature_names}, {"min", a.scaler.min}, {"max", a.scaler.max}}},
            {"subsets", {{"ensemble", a.ensemble_features.names}, {"forest", a.forest_features.names}}},
            {"models",
             {{"balanced_bagging", detail::forest_to_json(a.bagging)},
              {"booster", detail::booster_to_json(a.booster)},
              {"rf_hddt", detail::forest_to_json(a.forest)}}},
            {"overlap",
             {{"balanced_bagging", detail::overlap_to_json(a.bagging_overlap)},
              {"booster", detail::overlap_to_json(a.booster_overlap)}}}};
}

inline EnsembleArtifact artifact_from_json(const nlohmann::json& j) {
    EnsembleArtifact a;
    try {
        if (!j.is_object() || j.value("format", std::string()) != kArtifactFormat) {
            fail(ErrorCode::CorruptArtifact, "not an idsens ensemble artifact");
        }
        a.format_version = j.at("format_version").get<int>();
        if (a.format_version < 1 || a.format_version > kArtifactVersion) {
            fail(ErrorCode::UnsupportedVersion, "artifact format version " + std::to_string(a.format_version) +
                                                    " is not supported (max " + std::to_string(kArtifactVersion) + ")");
        }
        a.class_list = j.at("class_list").get<std::vector<std::string>>();
        a.schema = detail::schema_from_json(j.at("schema"));
        const auto& scaler = j.at("scaler");
        a.scaler.feature_names = scaler.at("features").get<std::vector<std::string>>();
        a.scaler.min = scaler.at("min").get<std::vector<double>>();
        a.scaler.max = scaler.at("max").get<std::vector<double>>();
        a.ensemble_features.names = j.at("subsets").at("ensemble").get<std::vector<std::string>>();
        a.forest_features.names = j.at("subsets").at("forest").get<std::vector<std::string>>();
        const auto& models = j.at("models");
        a.bagging = detail::forest_from_json(models.at("balanced_bagging"));
        a.booster = detail::booster_from_json(models.at("booster"));
        a.forest = detail::forest_from_json(models.at("rf_hddt"));
        a.bagging_overlap = detail::overlap_from_json(j.at("overlap").at("balanced_bagging"));
        a.booster_overlap = detail::overlap_from_json(j.at("overlap").at("booster"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::CorruptArtifact, std::string("malformed artifact: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnsupportedVersion) throw;
        fail(ErrorCode::CorruptArtifact, e.what());
    }
    validate_artifact(a);
    return a;
}

/// Compact JSON text. Equal artifacts serialize to equal bytes.
inline std::string serialize_artifact(const EnsembleArtifact& a) { return artifact_to_json(a).dump() + "\n"; }

inline EnsembleArtifact deserialize_artifact(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::CorruptArtifact, std::string("artifact is not valid JSON: ") + e.what());
    }
    return artifact_from_json(j);
}

inline void save_artifact(const EnsembleArtifact& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path);
    out << serialize_artifact(a);
    if (!out.flush()) fail(ErrorCode::Io, "write failed for " + path);
}

inline EnsembleArtifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_artifact(buffer.str());
}

}  // namespace idsens
