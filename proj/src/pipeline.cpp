// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/pipeline.hpp"

#include "stage_timer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>

#include <json.hpp>

namespace litpred {

using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

json generator_to_json(const GeneratorConfig& g) {
    return {{"n_cases", g.n_cases},
            {"outcome_mix", g.outcome_mix},
            {"mean_docs_per_case", g.mean_docs_per_case},
            {"embedding_dim", g.embedding_dim},
            {"signal_preset", preset_name(g.signal_preset)},
            {"seed", g.seed},
            {"state_shift", g.state_shift}};
}

GeneratorConfig generator_from_json(const json& j, std::uint64_t fallback_seed) {
    GeneratorConfig g;
    g.n_cases = j.value("n_cases", static_cast<std::int64_t>(1000));
    if (j.contains("outcome_mix")) {
        const auto mix = j.at("outcome_mix").get<std::vector<double>>();
        if (mix.size() != 3)
            raise(ErrorCode::InvalidArgument, "outcome_mix must have 3 entries");
        for (int k = 0; k < 3; ++k) g.outcome_mix[static_cast<std::size_t>(k)] = mix[static_cast<std::size_t>(k)];
    }
    g.mean_docs_per_case = j.value("mean_docs_per_case", 8.13);
    g.embedding_dim = j.value("embedding_dim", 384);
    g.signal_preset = preset_from_name(j.value("signal_preset", std::string("planted-signal")));
    g.seed = j.contains("seed") && !j.at("seed").is_null() ? j.at("seed").get<std::uint64_t>()
                                                           : fallback_seed;
    g.state_shift = j.value("state_shift", 0.0);
    return g;
}

json booster_to_json(const BoosterParams& p) {
    return {{"n_rounds", p.n_rounds},
            {"max_depth", p.max_depth},
            {"learning_rate", p.learning_rate},
            {"row_subsample", p.row_subsample},
            {"col_subsample_per_tree", p.col_subsample_per_tree},
            {"min_child_hessian", p.min_child_hessian},
            {"n_histogram_bins", p.n_histogram_bins},
            {"l2_leaf_penalty", p.l2_leaf_penalty}};
}

BoosterParams booster_from_json(const json& j) {
    BoosterParams p;
    p.n_rounds = j.value("n_rounds", 500);
    p.max_depth = j.value("max_depth", 3);
    p.learning_rate = j.value("learning_rate", 0.05);
    p.row_subsample = j.value("row_subsample", 0.8);
    p.col_subsample_per_tree = j.value("col_subsample_per_tree", 1.0);
    p.min_child_hessian = j.value("min_child_hessian", 5.0);
    p.n_histogram_bins = j.value("n_histogram_bins", 256);
    p.l2_leaf_penalty = j.value("l2_leaf_penalty", 1.0);
    return p;
}



}  // namespace

std::string PipelineConfig::to_json() const {
    json j;
    j["corpus"] = {{"source", corpus_source},
                   {"path", corpus_path},
                   {"generator", generator_to_json(generator)}};
    j["split"] = {{"kind", split_kind_name(split_kind)}, {"test_fraction", test_fraction}};
    j["model"] = {{"grid", use_grid},
                  {"grid_spec",
                   {{"max_depth", grid.max_depths},
                    {"learning_rate", grid.learning_rates},
                    {"col_subsample", grid.col_subsamples}}},
                  {"booster", booster_to_json(booster)},
                  {"ridge", {{"lambda", ridge.lambda}, {"max_iters", ridge.max_iters}}},
                  {"forest",
                   {{"n_trees", forest.n_trees},
                    {"max_depth", forest.max_depth},
                    {"min_samples_leaf", forest.min_samples_leaf}}}};
    j["report"] = {{"measure", complexity_measure_name(measure)},
                   {"n_complexity_groups", n_complexity_groups},
                   {"n_confidence_bins", n_confidence_bins},
                   {"n_duration_bins", n_duration_bins},
                   {"case_level_curves", case_level_curves}};
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["threads"] = threads;
    j["emit_csv_matrix"] = emit_csv_matrix;
    j["verbose"] = verbose;
    return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.contains("config")) j = j.at("config");  // accept a manifest as config
    PipelineConfig c;
    c.seed = j.value("seed", static_cast<std::uint64_t>(0));
    if (j.contains("corpus")) {
        const auto& cj = j.at("corpus");
        c.corpus_source = cj.value("source", std::string("generate"));
        c.corpus_path = cj.value("path", std::string());
        if (cj.contains("generator"))
            c.generator = generator_from_json(cj.at("generator"), derive_seed(c.seed, "corpus"));
        else
            c.generator.seed = derive_seed(c.seed, "corpus");
    } else {
        c.generator.seed = derive_seed(c.seed, "corpus");
    }
    if (j.contains("split")) {
        const auto& sj = j.at("split");
        c.split_kind = split_kind_from_name(sj.value("kind", std::string("temporal_80_20")));
        c.test_fraction = sj.value("test_fraction", 0.2);
    }
    if (j.contains("model")) {
        const auto& mj = j.at("model");
        c.use_grid = mj.value("grid", true);
        if (mj.contains("grid_spec")) {
            const auto& gj = mj.at("grid_spec");
            if (gj.contains("max_depth")) c.grid.max_depths = gj.at("max_depth").get<std::vector<int>>();
            if (gj.contains("learning_rate"))
                c.grid.learning_rates = gj.at("learning_rate").get<std::vector<double>>();
            if (gj.contains("col_subsample"))
                c.grid.col_subsamples = gj.at("col_subsample").get<std::vector<double>>();
        }
        if (mj.contains("booster")) c.booster = booster_from_json(mj.at("booster"));
        if (mj.contains("ridge")) {
            c.ridge.lambda = mj.at("ridge").value("lambda", c.ridge.lambda);
            c.ridge.max_iters = mj.at("ridge").value("max_iters", c.ridge.max_iters);
        }
        if (mj.contains("forest")) {
            c.forest.n_trees = mj.at("forest").value("n_trees", c.forest.n_trees);
            c.forest.max_depth = mj.at("forest").value("max_depth", c.forest.max_depth);
            c.forest.min_samples_leaf =
                mj.at("forest").value("min_samples_leaf", c.forest.min_samples_leaf);
        }
    }
    if (j.contains("report")) {
        const auto& rj = j.at("report");
        c.measure = complexity_measure_from_name(rj.value("measure", std::string("entropy")));
        c.n_complexity_groups = rj.value("n_complexity_groups", 15);
        c.n_confidence_bins = rj.value("n_confidence_bins", 10);
        c.n_duration_bins = rj.value("n_duration_bins", 15);
        c.case_level_curves = rj.value("case_level_curves", false);
    }
    c.out_dir = j.value("out_dir", std::string("run"));
    c.threads = j.value("threads", 0);
    c.emit_csv_matrix = j.value("emit_csv_matrix", false);
    c.verbose = j.value("verbose", false);
    return c;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    return from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

Manifest::Manifest(const PipelineConfig& config, const std::string& command)
    : command_(command), out_dir_(config.out_dir), config_json_(config.to_json()) {}

void Manifest::record_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }
void Manifest::record_count(const std::string& name, std::uint64_t value) { counts_[name] = value; }
void Manifest::record_input(const std::string& path) { inputs_.push_back(path); }
void Manifest::record_output(const std::string& path) { outputs_.push_back(path); }
void Manifest::record_timing(const std::string& stage, double ms) {
    timings_.emplace_back(stage, ms);
}

std::string Manifest::save() {
    json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command_;
    j["config"] = json::parse(config_json_);
    json seeds = json::object();
    for (const auto& [k, v] : seeds_) seeds[k] = v;
    j["seeds"] = seeds;
    json counts = json::object();
    for (const auto& [k, v] : counts_) counts[k] = v;
    j["counts"] = counts;
    auto files = [](const std::vector<std::string>& paths) {
        json arr = json::array();
        for (const auto& p : paths)
            arr.push_back({{"path", p},
                           {"fnv64", to_hex(file_fnv64(p))},
                           {"bytes", file_size_bytes(p)}});
        return arr;
    };
    j["inputs"] = files(inputs_);
    j["outputs"] = files(outputs_);
    json timings = json::object();
    for (const auto& [k, v] : timings_) timings[k] = v;
    j["timings_ms"] = timings;
    const std::string path = join_path(out_dir_, "manifest_" + command_ + ".json");
    atomic_write_file(path, j.dump(2) + "\n");
    return path;
}

// ---------------------------------------------------------------------------
// Shared stage helpers
// ---------------------------------------------------------------------------

CaseCollection materialize_corpus(const PipelineConfig& config, std::uint64_t* identity_out) {
    if (config.corpus_source == "generate") {
        if (identity_out) {
            const std::string id = json({{"generator", generator_to_json(config.generator)}}).dump();
            *identity_out = fnv1a64(id);
        }
        return generate_corpus(config.generator);
    }
    if (config.corpus_source == "file") {
        if (config.corpus_path.empty())
            raise(ErrorCode::InvalidArgument, "corpus source 'file' requires corpus.path");
        if (identity_out) *identity_out = file_fnv64(config.corpus_path);
        return ingest_corpus(config.corpus_path);
    }
    raise(ErrorCode::InvalidArgument, "unknown corpus source: " + config.corpus_source);
}

namespace {

std::vector<std::size_t> rows_for_cases(const RawFeatureTable& raw,
                                        const std::vector<std::size_t>& case_indices) {
    std::vector<char> in_set;
    for (std::size_t c : case_indices)
        if (c >= in_set.size()) in_set.resize(c + 1, 0);
    for (std::size_t c : case_indices) in_set[c] = 1;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < raw.rows.size(); ++i)
        if (raw.rows[i].case_index < in_set.size() && in_set[raw.rows[i].case_index])
            rows.push_back(i);
    return rows;
}

}  // namespace

PipelineData prepare_pipeline_data(const PipelineConfig& config, Manifest* manifest,
                                   bool use_raw_cache) {
    PipelineData data;
    {
        StageTimer t(manifest, "corpus", config.verbose);
        data.corpus = materialize_corpus(config, &data.corpus_identity);
    }
    const std::uint64_t feature_seed = derive_seed(config.seed, "features");
    if (manifest) {
        manifest->record_seed("generator", config.generator.seed);
        manifest->record_seed("features", feature_seed);
        manifest->record_count("cases", data.corpus.cases.size());
        manifest->record_count("documents", data.corpus.total_documents());
    }
    {
        StageTimer t(manifest, "artifacts", config.verbose);
        data.artifacts = build_feature_artifacts(data.corpus, feature_seed);
    }
    const std::string cache_path = join_path(config.out_dir, "raw_features.bin");
    bool cached = false;
    if (use_raw_cache) {
        if (auto table = read_raw_table(cache_path, data.corpus_identity, feature_seed)) {
            data.raw = std::move(*table);
            cached = true;
        }
    }
    if (!cached) {
        StageTimer t(manifest, "raw_features", config.verbose);
        data.raw = compute_raw_features(data.corpus, data.artifacts, config.threads);
        if (use_raw_cache) {
            ensure_dir(config.out_dir);
            write_raw_table(data.raw, data.corpus_identity, feature_seed, cache_path);
            if (manifest) manifest->record_output(cache_path);
        }
    } else if (manifest) {
        manifest->record_input(cache_path);
    }
    {
        StageTimer t(manifest, "split", config.verbose);
        const std::uint64_t split_seed = derive_seed(config.seed, "split");
        if (config.split_kind == SplitKind::Temporal8020)
            data.split = temporal_case_split(data.corpus, config.test_fraction);
        else
            data.split = alternate_split(config.split_kind, data.corpus, split_seed);
        data.split.seed = split_seed;
        if (manifest) manifest->record_seed("split", split_seed);
    }
    data.schema_full = fit_schema(data.corpus, data.split.train_cases, FeatureVariant::Full);
    data.schema_basic = fit_schema(data.corpus, data.split.train_cases, FeatureVariant::Basic);
    data.train_rows = rows_for_cases(data.raw, data.split.train_cases);
    data.test_rows = rows_for_cases(data.raw, data.split.test_cases);
    if (manifest) {
        manifest->record_count("train_documents", data.train_rows.size());
        manifest->record_count("test_documents", data.test_rows.size());
    }
    return data;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

double fold_macro_f1(const FeatureMatrix& train, const FeatureMatrix& valid,
                     const BoosterParams& params, std::uint64_t fingerprint) {
    const Ensemble model = train_gbdt(train, params, fingerprint);
    std::vector<int> predictions(valid.n_rows);
    std::vector<int> labels = valid.labels;
    std::vector<double> row;
    std::vector<std::array<double, 3>> probs;
    for (std::size_t r = 0; r < valid.n_rows; ++r) {
        valid.get_row(r, row);
        predictions[r] = model.predict_proba(row).argmax();
    }
    return compute_metrics(labels, predictions, probs).macro_f1;
}

std::array<double, 3> priors_of(const FeatureMatrix& X) {
    std::array<double, 3> p{};
    for (int y : X.labels) p[static_cast<std::size_t>(y)] += 1.0;
    for (auto& v : p) v /= static_cast<double>(X.labels.empty() ? 1 : X.labels.size());
    return p;
}

ModelHandle train_variant(const PipelineConfig& config, PipelineData& data,
                          FeatureVariant variant, Manifest* manifest, GridResult* grid_out) {
    const FeatureSchema& schema =
        variant == FeatureVariant::Full ? data.schema_full : data.schema_basic;
    const std::string tag = feature_variant_name(variant);

    BoosterParams base = config.booster;
    base.threads = config.threads;

    GridResult grid;
    if (config.use_grid) {
        StageTimer t(manifest, std::string("grid_") + tag, config.verbose);
        const std::uint64_t fold_seed = derive_seed(config.seed, "cv-folds");
        const FoldAssignment folds =
            grouped_kfold(data.corpus, data.split.train_cases, 3, fold_seed);
        if (manifest) manifest->record_seed("cv_folds", fold_seed);

        // Fold matrices are shared across grid cells.
        std::vector<FeatureMatrix> fold_train(3), fold_valid(3);
        for (int f = 0; f < 3; ++f) {
            const auto train_cases = folds.cases_in_fold(f, true);
            const auto valid_cases = folds.cases_in_fold(f, false);
            fold_train[static_cast<std::size_t>(f)] = encode_matrix(
                schema, data.corpus, data.raw, rows_for_cases(data.raw, train_cases),
                config.threads);
            fold_valid[static_cast<std::size_t>(f)] = encode_matrix(
                schema, data.corpus, data.raw, rows_for_cases(data.raw, valid_cases),
                config.threads);
        }
        const std::uint64_t fingerprint = schema.fingerprint();
        grid = grid_search(config.grid, 3, base,
                           [&](const BoosterParams& cell, int fold) {
                               BoosterParams p = cell;
                               p.seed = derive_seed(
                                   config.seed, "cv-" + std::string(tag) + "-d" +
                                                    std::to_string(cell.max_depth) + "-r" +
                                                    format_double(cell.learning_rate) + "-c" +
                                                    format_double(cell.col_subsample_per_tree) +
                                                    "-fold" + std::to_string(fold));
                               return fold_macro_f1(fold_train[static_cast<std::size_t>(fold)],
                                                    fold_valid[static_cast<std::size_t>(fold)], p,
                                                    fingerprint);
                           });
    } else {
        GridCell cell;
        cell.max_depth = base.max_depth;
        cell.learning_rate = base.learning_rate;
        cell.col_subsample = base.col_subsample_per_tree;
        grid.cells.push_back(cell);
        grid.best_cell = 0;
    }

    BoosterParams best = grid.best_params(base);
    best.seed = derive_seed(config.seed, std::string("final-") + tag);
    best.threads = config.threads;
    if (manifest) manifest->record_seed(std::string("final_") + tag, best.seed);

    FeatureMatrix train_matrix;
    {
        StageTimer t(manifest, std::string("final_train_") + tag, config.verbose);
        train_matrix = encode_matrix(schema, data.corpus, data.raw, data.train_rows,
                                     config.threads);
    }
    ModelHandle handle;
    handle.kind = "gbdt";
    handle.variant = variant;
    handle.schema_fingerprint = schema.fingerprint();
    handle.class_priors = priors_of(train_matrix);
    {
        StageTimer t(manifest, std::string("final_fit_") + tag, config.verbose);
        handle.gbdt = train_gbdt(train_matrix, best, handle.schema_fingerprint);
    }
    if (grid_out) *grid_out = std::move(grid);
    return handle;
}

}  // namespace

TrainedModels train_models(const PipelineConfig& config, PipelineData& data, Manifest* manifest) {
    TrainedModels out;
    out.full = train_variant(config, data, FeatureVariant::Full, manifest, &out.grid_full);
    out.basic = train_variant(config, data, FeatureVariant::Basic, manifest, &out.grid_basic);
    return out;
}

// ---------------------------------------------------------------------------
// Prediction helpers
// ---------------------------------------------------------------------------

PredictionSet predict_rows(const ModelHandle& model, const FeatureSchema& schema,
                           const PipelineData& data, const std::vector<std::size_t>& rows,
                           ComplexityMeasure measure, int threads) {
    PredictionSet out;
    const std::size_t n = rows.size();
    out.labels.resize(n);
    out.predictions.resize(n);
    out.probabilities.resize(n);
    out.scores.resize(n);
    parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> values;
        for (std::size_t i = begin; i < end; ++i) {
            const RawFeatureRow& row = data.raw.rows[rows[i]];
            values = encode_row(schema, data.corpus.cases[row.case_index], row);
            const auto probs = model.predict_proba(values);
            out.labels[i] = static_cast<int>(row.label);
            out.predictions[i] = probs.argmax();
            out.probabilities[i] = probs.p;
            out.scores[i] = complexity_score(measure, probs);
        }
    });
    return out;
}

std::vector<RegressionRow> build_regression_rows(const PipelineData& data,
                                                 const std::vector<std::size_t>& rows,
                                                 const std::vector<double>& scores) {
    if (rows.size() != scores.size())
        raise(ErrorCode::InvalidArgument, "build_regression_rows: length mismatch");
    std::vector<RegressionRow> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RawFeatureRow& raw = data.raw.rows[rows[i]];
        const CaseRecord& c = data.corpus.cases[raw.case_index];
        RegressionRow& r = out[i];
        r.complexity = scores[i];
        r.jurisdiction = c.jurisdiction;
        r.case_type = c.case_type;
        r.plaintiff_type = c.plaintiff_type;
        r.defendant_type = c.defendant_type;
        r.n_plaintiffs = static_cast<double>(c.n_plaintiffs);
        r.n_defendants = static_cast<double>(c.n_defendants);
        r.log_duration = std::log1p(static_cast<double>(raw.filing_day - raw.start_day));
        r.knn10_win_rate = raw.knn_summary[0].win_rate;
        r.knn10_missing = raw.knn_summary[0].missing;
        r.cluster_id = c.case_id;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Simple commands
// ---------------------------------------------------------------------------

void cmd_generate(const PipelineConfig& config) {
    Manifest manifest(config, "generate");
    ensure_dir(config.out_dir);
    CaseCollection corpus;
    {
        StageTimer t(&manifest, "generate", config.verbose);
        corpus = generate_corpus(config.generator);
    }
    manifest.record_seed("generator", config.generator.seed);
    manifest.record_count("cases", corpus.cases.size());
    manifest.record_count("documents", corpus.total_documents());
    const std::string corpus_path = join_path(config.out_dir, "corpus.jsonl");
    {
        StageTimer t(&manifest, "write_corpus", config.verbose);
        write_corpus(corpus, corpus_path);
    }
    manifest.record_output(corpus_path);
    const auto report = validate_corpus(corpus);
    const std::string report_path = join_path(config.out_dir, "validation_report.json");
    atomic_write_file(report_path, report.to_json());
    manifest.record_output(report_path);
    if (!report.clean())
        raise(ErrorCode::Internal, "generated corpus failed validation; see " + report_path);
    manifest.save();
}

void cmd_ingest(const PipelineConfig& config) {
    if (config.corpus_path.empty())
        raise(ErrorCode::InvalidArgument, "ingest requires corpus.path");
    Manifest manifest(config, "ingest");
    ensure_dir(config.out_dir);
    manifest.record_input(config.corpus_path);
    CaseCollection corpus;
    {
        StageTimer t(&manifest, "ingest", config.verbose);
        corpus = ingest_corpus(config.corpus_path);
    }
    manifest.record_count("cases", corpus.cases.size());
    manifest.record_count("documents", corpus.total_documents());
    const auto report = validate_corpus(corpus);
    const std::string report_path = join_path(config.out_dir, "validation_report.json");
    atomic_write_file(report_path, report.to_json());
    manifest.record_output(report_path);
    const std::string corpus_path = join_path(config.out_dir, "corpus.jsonl");
    write_corpus(corpus, corpus_path);
    manifest.record_output(corpus_path);
    manifest.save();
    if (!report.clean())
        raise(ErrorCode::Validation,
              "ingested corpus has " + std::to_string(report.findings.size()) +
                  " invariant violations; see " + report_path);
}

std::size_t cmd_validate(const PipelineConfig& config) {
    Manifest manifest(config, "validate");
    ensure_dir(config.out_dir);
    CaseCollection corpus = materialize_corpus(config, nullptr);
    const auto report = validate_corpus(corpus);
    const std::string report_path = join_path(config.out_dir, "validation_report.json");
    atomic_write_file(report_path, report.to_json());
    manifest.record_output(report_path);
    manifest.record_count("violations", report.findings.size());
    manifest.save();
    return report.findings.size();
}

void cmd_featurize(const PipelineConfig& config) {
    Manifest manifest(config, "featurize");
    ensure_dir(config.out_dir);
    PipelineData data = prepare_pipeline_data(config, &manifest);

    const std::string split_path = join_path(config.out_dir, "split.json");
    atomic_write_file(split_path, data.split.to_json(data.corpus));
    manifest.record_output(split_path);

    // Encoded matrix over all surviving documents, train rows first.
    std::vector<std::size_t> ordered = data.train_rows;
    ordered.insert(ordered.end(), data.test_rows.begin(), data.test_rows.end());
    FeatureMatrix matrix;
    {
        StageTimer t(&manifest, "encode", config.verbose);
        matrix = encode_matrix(data.schema_full, data.corpus, data.raw, ordered, config.threads);
    }
    const std::string matrix_path = join_path(config.out_dir, "features.bin");
    write_feature_matrix(matrix, matrix_path);
    manifest.record_output(matrix_path);

    json sidecar = json::parse(data.schema_full.to_json());
    sidecar["n_rows"] = matrix.n_rows;
    sidecar["n_train_rows"] = data.train_rows.size();
    sidecar["n_test_rows"] = data.test_rows.size();
    sidecar["fingerprint"] = to_hex(data.schema_full.fingerprint());
    json rows_meta = json::array();
    for (std::size_t idx : ordered) {
        const auto& r = data.raw.rows[idx];
        rows_meta.push_back({{"case_id", data.corpus.cases[r.case_index].case_id},
                             {"doc_index", r.doc_index},
                             {"label", static_cast<int>(r.label)}});
    }
    sidecar["rows"] = rows_meta;
    const std::string sidecar_path = join_path(config.out_dir, "features_schema.json");
    atomic_write_file(sidecar_path, sidecar.dump(2) + "\n");
    manifest.record_output(sidecar_path);

    if (config.emit_csv_matrix) {
        const std::string csv_path = join_path(config.out_dir, "features.csv");
        atomic_write_file(csv_path, feature_matrix_csv(data.schema_full, matrix, matrix.n_rows));
        manifest.record_output(csv_path);
    }
    const std::string snapshot_path = join_path(config.out_dir, "neighbor_index.json");
    atomic_write_file(snapshot_path, data.artifacts.index_summary.snapshot_json());
    manifest.record_output(snapshot_path);
    manifest.save();
}

void cmd_train(const PipelineConfig& config) {
    Manifest manifest(config, "train");
    ensure_dir(config.out_dir);
    ensure_dir(join_path(config.out_dir, "models"));
    PipelineData data = prepare_pipeline_data(config, &manifest);

    const std::string split_path = join_path(config.out_dir, "split.json");
    atomic_write_file(split_path, data.split.to_json(data.corpus));
    manifest.record_output(split_path);

    TrainedModels models = train_models(config, data, &manifest);

    const std::string full_path = join_path(config.out_dir, "models/model_full.json");
    atomic_write_file(full_path, models.full.to_json());
    manifest.record_output(full_path);
    const std::string basic_path = join_path(config.out_dir, "models/model_basic.json");
    atomic_write_file(basic_path, models.basic.to_json());
    manifest.record_output(basic_path);

    const std::string cv_full = join_path(config.out_dir, "cv_table_full.csv");
    atomic_write_file(cv_full, models.grid_full.table_csv());
    manifest.record_output(cv_full);
    const std::string cv_basic = join_path(config.out_dir, "cv_table_basic.csv");
    atomic_write_file(cv_basic, models.grid_basic.table_csv());
    manifest.record_output(cv_basic);
    manifest.save();
}

}  // namespace litpred
