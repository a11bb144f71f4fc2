// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <map>
#include <string>
#include <vector>

#include "litpred/complexity.hpp"
#include "litpred/corpus.hpp"
#include "litpred/eval.hpp"
#include "litpred/features.hpp"
#include "litpred/inference.hpp"
#include "litpred/model.hpp"

namespace litpred {

struct PipelineConfig {
    // Corpus source: either a seeded generator or an existing file.
    std::string corpus_source = "generate";  // "generate" | "file"
    std::string corpus_path;                 // input path for the file source
    GeneratorConfig generator;

    SplitKind split_kind = SplitKind::Temporal8020;
    double test_fraction = 0.2;

    bool use_grid = true;
    GridSpec grid;
    BoosterParams booster;
    RidgeParams ridge;
    ForestParams forest;

    ComplexityMeasure measure = ComplexityMeasure::Entropy;
    int n_complexity_groups = 15;
    int n_confidence_bins = 10;
    int n_duration_bins = 15;
    bool case_level_curves = false;

    std::string out_dir = "run";
    std::uint64_t seed = 0;
    int threads = 0;
    bool emit_csv_matrix = false;
    bool verbose = false;

    std::string to_json() const;
    static PipelineConfig from_json(const std::string& text);
    static PipelineConfig from_file(const std::string& path);
};

/// Append-only record of one command run; every artifact the command wrote
/// is listed with its content hash.
class Manifest {
public:
    Manifest(const PipelineConfig& config, const std::string& command);

    void record_seed(const std::string& name, std::uint64_t seed);
    void record_count(const std::string& name, std::uint64_t value);
    void record_input(const std::string& path);
    void record_output(const std::string& path);
    void record_timing(const std::string& stage, double ms);
    /// Writes <out_dir>/manifest_<command>.json (itself excluded from outputs).
    std::string save();

private:
    std::string command_;
    std::string out_dir_;
    std::string config_json_;
    std::map<std::string, std::uint64_t> seeds_;
    std::map<std::string, std::uint64_t> counts_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::vector<std::pair<std::string, double>> timings_;
};

// ---------------------------------------------------------------------------
// In-process pipeline state shared by commands
// ---------------------------------------------------------------------------

struct PipelineData {
    CaseCollection corpus;
    std::uint64_t corpus_identity = 0;  // config hash (generate) or file hash
    FeatureArtifacts artifacts;
    RawFeatureTable raw;
    SplitPlan split;
    FeatureSchema schema_full;
    FeatureSchema schema_basic;
    std::vector<std::size_t> train_rows;  // indices into raw.rows
    std::vector<std::size_t> test_rows;
};

CaseCollection materialize_corpus(const PipelineConfig& config, std::uint64_t* identity_out);

/// Loads or computes corpus, artifacts, raw features, split and schemas.
PipelineData prepare_pipeline_data(const PipelineConfig& config, Manifest* manifest,
                                   bool use_raw_cache = true);

struct TrainedModels {
    ModelHandle full;
    ModelHandle basic;
    GridResult grid_full;
    GridResult grid_basic;
};

TrainedModels train_models(const PipelineConfig& config, PipelineData& data, Manifest* manifest);

// ---------------------------------------------------------------------------
// Commands (the CLI maps one subcommand to each)
// ---------------------------------------------------------------------------

void cmd_generate(const PipelineConfig& config);
void cmd_ingest(const PipelineConfig& config);
/// Returns the violation count; artifacts are written either way.
std::size_t cmd_validate(const PipelineConfig& config);
void cmd_featurize(const PipelineConfig& config);
void cmd_train(const PipelineConfig& config);
void cmd_report(const PipelineConfig& config);
void cmd_ablate(const PipelineConfig& config);
void cmd_regress(const PipelineConfig& config);

// Report internals reused by the ablation and by tests.
struct PredictionSet {
    std::vector<int> labels;
    std::vector<int> predictions;
    std::vector<std::array<double, 3>> probabilities;
    std::vector<double> scores;  // complexity per document
};

PredictionSet predict_rows(const ModelHandle& model, const FeatureSchema& schema,
                           const PipelineData& data, const std::vector<std::size_t>& rows,
                           ComplexityMeasure measure, int threads);

std::vector<RegressionRow> build_regression_rows(const PipelineData& data,
                                                 const std::vector<std::size_t>& rows,
                                                 const std::vector<double>& scores);

}  // namespace litpred
