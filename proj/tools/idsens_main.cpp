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

// idsens: analyze / train / evaluate / predict over the ensemble pipeline.
// Exit codes: 0 ok, 2 usage, 3 data, 4 I/O.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "idsens/idsens.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string data, test, schema, config, artifact, out, vote;
    std::optional<std::uint64_t> seed;
    bool no_correction = false;
    bool binary = false;
    bool dump_scores = false;
};

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) idsens::fail(idsens::ErrorCode::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class OutputDir {
public:
    explicit OutputDir(std::string dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) idsens::fail(idsens::ErrorCode::Io, "cannot create output directory " + dir_ + ": " + ec.message());
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = (fs::path(dir_) / name).string();
        std::ofstream out(path, std::ios::binary);
        out << content;
        if (!out) idsens::fail(idsens::ErrorCode::Io, "cannot write " + path);
        written_.push_back(name);
    }

    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    const std::vector<std::string>& written() const { return written_; }

private:
    std::string dir_;
    std::vector<std::string> written_;
};

idsens::RunConfig resolve_config(const Flags& f) {
    idsens::RunConfig c;
    if (!f.config.empty()) c = idsens::load_run_config(f.config);
    // flags win over the file
    if (!f.data.empty()) c.paths.data = f.data;
    if (!f.test.empty()) c.paths.test = f.test;
    if (!f.schema.empty()) c.paths.schema = f.schema;
    if (!f.artifact.empty()) c.paths.artifact = f.artifact;
    if (!f.out.empty()) c.paths.out = f.out;
    if (f.seed) c.ensemble.seed = *f.seed;
    if (f.no_correction) c.evaluate.correction = false;
    if (f.binary) c.binary = true;
    if (f.dump_scores) c.dump_scores = true;
    if (!f.vote.empty()) c.evaluate.vote = *idsens::parse_vote_mode(f.vote);
    return c;
}

void require_path(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing required ") + flag);
}

void require_file(const std::string& path, const char* flag) {
    require_path(path, flag);
    if (!fs::is_regular_file(path)) idsens::fail(idsens::ErrorCode::Io, std::string(flag) + ": no such file " + path);
}

idsens::FeatureSchema base_schema(const idsens::RunConfig& c) {
    return c.paths.schema.empty() ? idsens::unsw_nb15_schema() : idsens::load_schema(c.paths.schema);
}

json input_entry(const std::string& path) {
    return {{"path", path}, {"fnv1a", idsens::hex64(idsens::fnv1a_64(read_file(path)))}};
}

void write_manifest(OutputDir& out, const std::string& command, const idsens::RunConfig& c, json inputs) {
    json m;
    m["tool"] = "idsens";
    m["version"] = idsens::kVersion;
    m["artifact_format_version"] = idsens::kArtifactVersion;
    m["command"] = command;
    m["seed"] = c.ensemble.seed;
    m["config_hash"] = idsens::config_hash(c);
    m["config"] = idsens::effective_config_json(c);
    m["inputs"] = std::move(inputs);
    m["outputs"] = out.written();
    out.write_json("manifest.json", m);
}

// ---------------------------------------------------------------------------
// Report writers
// ---------------------------------------------------------------------------

std::string confusion_csv(const idsens::ConfusionMatrix& cm) {
    std::string s = "actual\\predicted";
    for (const auto& n : cm.names()) s += "," + n;
    s += "\n";
    for (std::size_t i = 0; i < cm.size(); ++i) {
        s += cm.names()[i];
        for (std::size_t j = 0; j < cm.size(); ++j) s += "," + std::to_string(cm(i, j));
        s += "\n";
    }
    return s;
}

/// Ratios in percent with two decimals, FPR/FNR as fractions with three.
json metrics_json(const idsens::MetricsReport& r) {
    json classes = json::array();
    for (const auto& c : r.classes) {
        classes.push_back({{"class", c.name},
                           {"tp", c.tp},
                           {"fn", c.fn},
                           {"fp", c.fp},
                           {"tn", c.tn},
                           {"accuracy_pct", round_to(100.0 * c.accuracy, 2)},
                           {"sensitivity_pct", round_to(100.0 * c.sensitivity, 2)},
                           {"specificity_pct", round_to(100.0 * c.specificity, 2)},
                           {"fpr", round_to(c.fpr, 3)},
                           {"fnr", round_to(c.fnr, 3)},
                           {"precision_pct", round_to(100.0 * c.precision, 2)},
                           {"f_measure_pct", round_to(100.0 * c.f_measure, 2)}});
    }
    return {{"accuracy_pct", round_to(100.0 * r.accuracy, 2)},
            {"missed_alarm_rate", round_to(r.missed_alarm_rate, 4)},
            {"attack_confusion_rate", round_to(r.attack_confusion_rate, 4)},
            {"false_alarm_rate", round_to(r.false_alarm_rate, 4)},
            {"classes", classes}};
}

std::string class_table_csv(const idsens::ClassTable& t, int decimals) {
    std::string s = "actual\\predicted";
    for (auto n : idsens::kClassNames) s += "," + std::string(n);
    s += "\n";
    for (std::size_t i = 0; i < idsens::kNumClasses; ++i) {
        s += idsens::kClassNames[i];
        for (std::size_t j = 0; j < idsens::kNumClasses; ++j) s += "," + fixed(t[i][j], decimals);
        s += "\n";
    }
    return s;
}

std::string scores_csv(const idsens::ScoreMatrix& m) {
    std::string s;
    for (std::size_t c = 0; c < idsens::kNumClasses; ++c) s += (c ? "," : "") + std::string(idsens::kClassNames[c]);
    s += "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + fixed(row[c], 6);
        s += "\n";
    }
    return s;
}

json counts_json(const idsens::ClassCounts& counts) {
    json j = json::object();
    for (std::size_t c = 0; c < idsens::kNumClasses; ++c) j[std::string(idsens::kClassNames[c])] = counts[c];
    return j;
}

idsens::ClassTable ir_table(const idsens::IRMatrix& ir) {
    idsens::ClassTable t{};
    for (int i = 0; i < static_cast<int>(idsens::kNumClasses); ++i)
        for (int j = 0; j < static_cast<int>(idsens::kNumClasses); ++j) t[i][j] = ir.ir(i, j);
    return t;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int run_analyze(const idsens::RunConfig& c) {
    require_file(c.paths.data, "--data");
    require_path(c.paths.out, "--out");
    const auto schema = base_schema(c);
    const auto raw = idsens::ingest_csv(c.paths.data, schema);
    const auto& target = raw.column(schema.columns[schema.target_index()].name);
    std::vector<int> labels;
    labels.reserve(raw.rows);
    for (const auto& t : target.texts) labels.push_back(idsens::class_index(t));

    const auto dist = idsens::class_distribution(labels);
    OutputDir out(c.paths.out);
    std::string d = "class,count,proportion,rounded_proportion\n";
    for (std::size_t k = 0; k < idsens::kNumClasses; ++k) {
        d += std::string(idsens::kClassNames[k]) + "," + std::to_string(dist.counts[k]) + "," + fixed(dist.proportions[k], 6) +
             "," + fixed(idsens::rounded_proportion(dist.proportions[k]), 4) + "\n";
    }
    out.write("distribution.csv", d);

    const auto rounded = idsens::imbalance_ratio_matrix(dist, idsens::IRMode::RoundedDistribution);
    const auto raw_ir = idsens::imbalance_ratio_matrix(dist, idsens::IRMode::RawCount);
    out.write("ir_rounded.csv", class_table_csv(ir_table(rounded), 2));
    out.write("ir_raw.csv", class_table_csv(ir_table(raw_ir), 2));

    json pairs = json::array();
    for (const auto& p : idsens::imbalance_report(rounded)) {
        pairs.push_back({{"first", idsens::class_name(p.first)}, {"second", idsens::class_name(p.second)}, {"ir", round_to(p.ir, 2)}});
    }
    out.write_json("imbalanced_pairs.json", {{"mode", "rounded-distribution"}, {"threshold", 1.5}, {"pairs", pairs}});
    write_manifest(out, "analyze", c, {{"data", input_entry(c.paths.data)}});
    return 0;
}

int run_train(const idsens::RunConfig& c) {
    require_file(c.paths.data, "--data");
    require_path(c.paths.artifact, "--artifact");
    const auto base = base_schema(c);
    const auto raw = idsens::ingest_csv(c.paths.data, base);
    const auto schema = idsens::fit_nominal_maps(base, raw);
    const auto data = idsens::preprocess(raw, schema);

    idsens::TrainingLog log;
    const auto artifact = idsens::train_full_ensemble(data, schema, c.ensemble, &log);
    const auto artifact_dir = fs::path(c.paths.artifact).parent_path();
    if (!artifact_dir.empty()) fs::create_directories(artifact_dir);
    idsens::save_artifact(artifact, c.paths.artifact);

    OutputDir out(c.paths.out.empty() ? (artifact_dir.empty() ? std::string(".") : artifact_dir.string()) : c.paths.out);
    json j;
    j["rows"] = data.n();
    j["fit_rows"] = log.fit_rows;
    j["validation_rows"] = log.validation_rows;
    j["fit_counts"] = counts_json(log.fit_counts);
    j["validation_counts"] = counts_json(log.validation_counts);
    if (log.bagging_validation) {
        j["balanced_bagging_validation_macro_f1"] = round_to(idsens::macro_f1(*log.bagging_validation), 4);
        out.write("validation_confusion_balanced_bagging.csv", confusion_csv(*log.bagging_validation));
    }
    if (log.booster_validation) {
        j["booster_validation_macro_f1"] = round_to(idsens::macro_f1(*log.booster_validation), 4);
        out.write("validation_confusion_booster.csv", confusion_csv(*log.booster_validation));
    }
    j["booster_training_loss"] = artifact.booster.training_loss;
    out.write_json("training_log.json", j);
    out.write("overlap_balanced_bagging_mean.csv", class_table_csv(artifact.bagging_overlap.mean, 6));
    out.write("overlap_balanced_bagging_stddev.csv", class_table_csv(artifact.bagging_overlap.stddev, 6));
    out.write("overlap_booster_mean.csv", class_table_csv(artifact.booster_overlap.mean, 6));
    out.write("overlap_booster_stddev.csv", class_table_csv(artifact.booster_overlap.stddev, 6));
    json inputs = {{"data", input_entry(c.paths.data)}};
    if (!c.paths.schema.empty()) inputs["schema"] = input_entry(c.paths.schema);
    write_manifest(out, "train", c, inputs);
    return 0;
}

struct LoadedInputs {
    idsens::EnsembleArtifact artifact;
    idsens::SampleMatrix data;
};

LoadedInputs load_for_scoring(const idsens::RunConfig& c, const std::string& csv_path, const char* flag) {
    require_file(c.paths.artifact, "--artifact");
    require_file(csv_path, flag);
    LoadedInputs in{idsens::load_artifact(c.paths.artifact), {}};
    if (!c.paths.schema.empty()) {
        const auto given = idsens::load_schema(c.paths.schema);
        if (given.columns != in.artifact.schema.columns) {
            idsens::fail(idsens::ErrorCode::SchemaMismatch, "schema file does not match the artifact's schema");
        }
    }
    in.data = idsens::preprocess(idsens::ingest_csv(csv_path, in.artifact.schema), in.artifact.schema);
    return in;
}

int run_evaluate(const idsens::RunConfig& c) {
    require_path(c.paths.out, "--out");
    const auto in = load_for_scoring(c, c.paths.test, "--test");
    const auto e = idsens::evaluate_artifact(in.artifact, in.data, c.evaluate, c.ensemble.threads);

    OutputDir out(c.paths.out);
    out.write("confusion_multiclass.csv", confusion_csv(e.multiclass));
    out.write_json("metrics_multiclass.json", metrics_json(e.multiclass_report));
    if (c.binary) {
        out.write("confusion_binary.csv", confusion_csv(e.binary));
        out.write_json("metrics_binary.json", metrics_json(e.binary_report));
    }
    if (c.dump_scores) {
        out.write("scores_balanced_bagging_raw.csv", scores_csv(e.scores.bagging_raw));
        out.write("scores_booster_raw.csv", scores_csv(e.scores.booster_raw));
        out.write("scores_balanced_bagging.csv", scores_csv(e.scores.bagging));
        out.write("scores_booster.csv", scores_csv(e.scores.booster));
        out.write("scores_rf_hddt.csv", scores_csv(e.scores.forest));
    }
    write_manifest(out, "evaluate", c, {{"test", input_entry(c.paths.test)}, {"artifact", input_entry(c.paths.artifact)}});

    const auto& b = e.binary_report.at("Attack");
    std::cout << "accuracy " << fixed(100.0 * e.multiclass_report.accuracy, 2) << "%  attack sensitivity "
              << fixed(100.0 * b.sensitivity, 2) << "%  false alarm rate " << fixed(e.binary_report.false_alarm_rate, 4)
              << "  (correction " << (c.evaluate.correction ? "on" : "off") << ")\n";
    return 0;
}

int run_predict(const idsens::RunConfig& c) {
    require_path(c.paths.out, "--out");
    const auto in = load_for_scoring(c, c.paths.data, "--data");
    const auto s = idsens::score_ensemble(in.artifact, in.data, c.evaluate, c.ensemble.threads);
    OutputDir out(c.paths.out);
    std::string p = "row,predicted\n";
    for (std::size_t i = 0; i < s.predicted.size(); ++i) {
        p += std::to_string(i) + "," + std::string(idsens::class_name(s.predicted[i])) + "\n";
    }
    out.write("predictions.csv", p);
    write_manifest(out, "predict", c, {{"data", input_entry(c.paths.data)}, {"artifact", input_entry(c.paths.artifact)}});
    return 0;
}

int exit_code_for(const idsens::Error& e) {
    switch (e.code()) {
    case idsens::ErrorCode::Io: return kExitIo;
    case idsens::ErrorCode::InvalidArgument: return kExitUsage;
    default: return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"idsens: imbalance- and overlap-aware intrusion detection ensemble"};
    app.set_version_flag("--version", std::string(idsens::kVersion));
    app.require_subcommand(1);

    Flags f;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON run configuration; flags override it");
        sub->add_option("--schema", f.schema, "column layout file (default: built-in UNSW-NB15 layout)");
        sub->add_option("--out", f.out, "output directory for reports and manifest");
    };
    auto* analyze = app.add_subcommand("analyze", "class distribution and imbalance ratios");
    add_common(analyze);
    analyze->add_option("--data", f.data, "labelled CSV");

    auto* train = app.add_subcommand("train", "fit the ensemble and write an artifact");
    add_common(train);
    train->add_option("--data", f.data, "training CSV");
    train->add_option("--artifact", f.artifact, "artifact output path");
    train->add_option("--seed", f.seed, "random seed (default " + std::to_string(idsens::kDefaultSeed) + ")");

    auto* evaluate = app.add_subcommand("evaluate", "score a labelled test CSV and write metric reports");
    add_common(evaluate);
    evaluate->add_option("--test", f.test, "labelled test CSV");
    evaluate->add_option("--artifact", f.artifact, "trained artifact");
    evaluate->add_flag("--no-correction", f.no_correction, "skip the overlap correction");
    evaluate->add_flag("--binary", f.binary, "also report the Normal-vs-Attack view");
    evaluate->add_flag("--dump-scores", f.dump_scores, "write raw and corrected score matrices");
    evaluate->add_option("--vote", f.vote, "vote mode")->check(CLI::IsMember({"sum", "hard"}));

    auto* predict = app.add_subcommand("predict", "write predicted labels for a CSV");
    add_common(predict);
    predict->add_option("--data", f.data, "CSV in the artifact's column layout");
    predict->add_option("--artifact", f.artifact, "trained artifact");
    predict->add_flag("--no-correction", f.no_correction, "skip the overlap correction");
    predict->add_option("--vote", f.vote, "vote mode")->check(CLI::IsMember({"sum", "hard"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "idsens: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        const auto config = resolve_config(f);
        if (analyze->parsed()) return run_analyze(config);
        if (train->parsed()) return run_train(config);
        if (evaluate->parsed()) return run_evaluate(config);
        return run_predict(config);
    } catch (const UsageError& e) {
        std::cerr << "idsens: " << e.what() << "\n";
        return kExitUsage;
    } catch (const idsens::Error& e) {
        std::cerr << "idsens: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "idsens: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "idsens: internal error: " << e.what() << "\n";
        return 1;
    }
}
