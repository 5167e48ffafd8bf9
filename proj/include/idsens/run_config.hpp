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

// Command-line run configuration: a JSON file whose keys mirror the
// library parameter structs. Missing keys keep their defaults; unknown keys
// are rejected so typos do not silently fall back.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "idsens/error.hpp"
#include "idsens/pipeline.hpp"

namespace idsens {

struct RunPaths {
    std::string data;
    std::string test;
    std::string schema;
    std::string artifact;
    std::string out;
};

struct RunConfig {
    RunPaths paths;
    EnsembleConfig ensemble;
    EvaluateOptions evaluate;
    bool binary = false;
    bool dump_scores = false;
};

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a_64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> known) {
    if (!j.is_object()) fail(ErrorCode::InvalidArgument, "config: '" + std::string(where) + "' must be an object");
    const std::set<std::string_view> allowed(known);
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            fail(ErrorCode::InvalidArgument, "config: unknown key '" + item.key() + "' in '" + std::string(where) + "'");
        }
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

/// null means no depth limit.
inline void read_depth(const json& j, int& out) {
    if (!j.contains("max_depth")) return;
    out = j.at("max_depth").is_null() ? kUnlimitedDepth : j.at("max_depth").get<int>();
}

inline json depth_to_json(int depth) { return depth == kUnlimitedDepth ? json(nullptr) : json(depth); }

inline SplitCriterion read_criterion(const json& j, SplitCriterion fallback) {
    if (!j.contains("criterion")) return fallback;
    const auto text = j.at("criterion").get<std::string>();
    auto c = parse_split_criterion(text);
    if (!c) fail(ErrorCode::InvalidArgument, "config: unknown criterion '" + text + "'");
    return *c;
}

inline FeatureSubset read_subset(const json& j, const std::string& base_dir) {
    if (j.is_string()) {
        std::string path = j.get<std::string>();
        if (!path.empty() && path.front() != '/' && !base_dir.empty()) path = base_dir + "/" + path;
        return load_feature_subset(path);
    }
    return {j.get<std::vector<std::string>>()};
}

inline void read_tree(const json& j, TreeParams& t) {
    read_depth(j, t.max_depth);
    read_if(j, "min_samples_leaf", t.min_samples_leaf);
    read_if(j, "min_samples_split", t.min_samples_split);
}

}  // namespace detail

/// Applies `j` on top of `config`. Relative feature-list paths resolve
/// against `base_dir`.
inline RunConfig apply_config_json(RunConfig config, const nlohmann::json& j, const std::string& base_dir = "") {
    using detail::read_if;
    try {
        detail::reject_unknown_keys(j, "<root>",
                                    {"seed", "train_fraction", "threads", "paths", "random_forest", "balanced_bagging",
                                     "booster", "ensemble_features", "forest_features", "evaluate"});
        auto& e = config.ensemble;
        read_if(j, "seed", e.seed);
        read_if(j, "train_fraction", e.train_fraction);
        read_if(j, "threads", e.threads);
        if (j.contains("paths")) {
            const auto& p = j.at("paths");
            detail::reject_unknown_keys(p, "paths", {"data", "test", "schema", "artifact", "out"});
            read_if(p, "data", config.paths.data);
            read_if(p, "test", config.paths.test);
            read_if(p, "schema", config.paths.schema);
            read_if(p, "artifact", config.paths.artifact);
            read_if(p, "out", config.paths.out);
        }
        if (j.contains("random_forest")) {
            const auto& r = j.at("random_forest");
            detail::reject_unknown_keys(r, "random_forest",
                                        {"n_trees", "max_depth", "min_samples_leaf", "min_samples_split", "max_features",
                                         "criterion", "bootstrap"});
            read_if(r, "n_trees", e.forest.n_trees);
            detail::read_tree(r, e.forest.tree);
            if (r.contains("max_features")) {
                e.forest_max_features = r.at("max_features").is_null() ? std::nullopt
                                                                      : std::optional<int>(r.at("max_features").get<int>());
            }
            e.forest.criterion = detail::read_criterion(r, e.forest.criterion);
            read_if(r, "bootstrap", e.forest.bootstrap);
        }
        if (j.contains("balanced_bagging")) {
            const auto& b = j.at("balanced_bagging");
            detail::reject_unknown_keys(b, "balanced_bagging",
                                        {"n_estimators", "max_depth", "min_samples_leaf", "min_samples_split", "criterion", "target"});
            read_if(b, "n_estimators", e.bagging.n_estimators);
            detail::read_tree(b, e.bagging.tree);
            e.bagging.criterion = detail::read_criterion(b, e.bagging.criterion);
            if (b.contains("target")) {
                e.bagging.target = b.at("target").is_null() ? std::nullopt
                                                           : std::optional<long long>(b.at("target").get<long long>());
            }
        }
        if (j.contains("booster")) {
            const auto& g = j.at("booster");
            detail::reject_unknown_keys(g, "booster", {"n_rounds", "max_depth", "learning_rate", "l2_lambda", "min_child_weight"});
            read_if(g, "n_rounds", e.booster.n_rounds);
            read_if(g, "max_depth", e.booster.max_depth);
            read_if(g, "learning_rate", e.booster.learning_rate);
            read_if(g, "l2_lambda", e.booster.l2_lambda);
            read_if(g, "min_child_weight", e.booster.min_child_weight);
        }
        if (j.contains("ensemble_features")) e.ensemble_features = detail::read_subset(j.at("ensemble_features"), base_dir);
        if (j.contains("forest_features")) e.forest_features = detail::read_subset(j.at("forest_features"), base_dir);
        if (j.contains("evaluate")) {
            const auto& v = j.at("evaluate");
            detail::reject_unknown_keys(v, "evaluate", {"correction", "vote", "binary", "dump_scores"});
            read_if(v, "correction", config.evaluate.correction);
            if (v.contains("vote")) {
                const auto text = v.at("vote").get<std::string>();
                auto mode = parse_vote_mode(text);
                if (!mode) fail(ErrorCode::InvalidArgument, "config: vote must be 'sum' or 'hard', got '" + text + "'");
                config.evaluate.vote = *mode;
            }
            read_if(v, "binary", config.binary);
            read_if(v, "dump_scores", config.dump_scores);
        }
    } catch (const nlohmann::json::exception& ex) {
        fail(ErrorCode::InvalidArgument, std::string("config: ") + ex.what());
    }
    return config;
}

inline RunConfig load_run_config(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& ex) {
        fail(ErrorCode::InvalidArgument, "config " + path + ": " + ex.what());
    }
    const auto slash = path.find_last_of('/');
    return apply_config_json(std::move(base), j, slash == std::string::npos ? "" : path.substr(0, slash));
}

/// Everything that influences model or report bytes. Paths and the thread
/// count are left out: they do not change results.
inline nlohmann::json effective_config_json(const RunConfig& c) {
    const auto& e = c.ensemble;
    nlohmann::json j;
    j["seed"] = e.seed;
    j["train_fraction"] = e.train_fraction;
    j["random_forest"] = {{"n_trees", e.forest.n_trees},
                          {"max_depth", detail::depth_to_json(e.forest.tree.max_depth)},
                          {"min_samples_leaf", e.forest.tree.min_samples_leaf},
                          {"min_samples_split", e.forest.tree.min_samples_split},
                          {"max_features", e.forest_max_features ? nlohmann::json(*e.forest_max_features) : nlohmann::json(nullptr)},
                          {"criterion", to_string(e.forest.criterion)},
                          {"bootstrap", e.forest.bootstrap}};
    j["balanced_bagging"] = {{"n_estimators", e.bagging.n_estimators},
                             {"max_depth", detail::depth_to_json(e.bagging.tree.max_depth)},
                             {"min_samples_leaf", e.bagging.tree.min_samples_leaf},
                             {"min_samples_split", e.bagging.tree.min_samples_split},
                             {"criterion", to_string(e.bagging.criterion)},
                             {"target", e.bagging.target ? nlohmann::json(*e.bagging.target) : nlohmann::json(nullptr)}};
    j["booster"] = {{"n_rounds", e.booster.n_rounds},
                    {"max_depth", e.booster.max_depth},
                    {"learning_rate", e.booster.learning_rate},
                    {"l2_lambda", e.booster.l2_lambda},
                    {"min_child_weight", e.booster.min_child_weight}};
    j["ensemble_features"] = e.ensemble_features.names;
    j["forest_features"] = e.forest_features.names;
    j["evaluate"] = {{"correction", c.evaluate.correction},
                     {"vote", to_string(c.evaluate.vote)},
                     {"binary", c.binary},
                     {"dump_scores", c.dump_scores}};
    return j;
}

inline std::string config_hash(const RunConfig& c) { return hex64(fnv1a_64(effective_config_json(c).dump())); }

}  // namespace idsens
