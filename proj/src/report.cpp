// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include <json.hpp>

#include "litpred/pipeline.hpp"

#include "stage_timer.hpp"

namespace litpred {

using nlohmann::json;

namespace {

ModelHandle load_model(const std::string& path) {
    try {
        return ModelHandle::from_json(read_text_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io)
            raise(ErrorCode::InvalidArgument,
                  "missing model file " + path + "; run the train command first");
        throw;
    }
}

struct TestVectors {
    std::vector<double> elapsed_days;
    std::vector<double> doc_ordinals;
    std::vector<int> settled;
};

TestVectors test_vectors(const PipelineData& data, const std::vector<std::size_t>& rows) {
    TestVectors v;
    v.elapsed_days.reserve(rows.size());
    v.doc_ordinals.reserve(rows.size());
    v.settled.reserve(rows.size());
    for (std::size_t idx : rows) {
        const auto& r = data.raw.rows[idx];
        v.elapsed_days.push_back(static_cast<double>(r.filing_day - r.start_day));
        v.doc_ordinals.push_back(static_cast<double>(r.doc_index));
        v.settled.push_back(r.label == Outcome::Settlement ? 1 : 0);
    }
    return v;
}

std::string predictions_csv(const PipelineData& data, const std::vector<std::size_t>& rows,
                            const PredictionSet& preds) {
    std::string out =
        "case_id,doc_index,label,predicted,p_loss,p_settle,p_win,score,elapsed_days\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = data.raw.rows[rows[i]];
        out += data.corpus.cases[r.case_index].case_id;
        out += ',' + std::to_string(r.doc_index);
        out += ',' + std::to_string(preds.labels[i]);
        out += ',' + std::to_string(preds.predictions[i]);
        for (int k = 0; k < 3; ++k)
            out += ',' + format_double(preds.probabilities[i][static_cast<std::size_t>(k)]);
        out += ',' + format_double(preds.scores[i]);
        out += ',' + format_double(static_cast<double>(r.filing_day - r.start_day));
        out += '\n';
    }
    return out;
}

json curve_to_json(const BinnedCurve& c) {
    json points = json::array();
    for (const auto& p : c.points)
        points.push_back({{"bin_low", p.bin_low},
                          {"bin_high", p.bin_high},
                          {"count", p.count},
                          {"value", p.value},
                          {"stderr", p.stderr_value}});
    return {{"x", c.x_name}, {"y", c.y_name}, {"points", points}};
}

json metrics_to_json_obj(const MetricReport& m) { return json::parse(m.to_json()); }

std::string roc_csv(const std::array<std::vector<RocPoint>, 3>& rocs) {
    std::string out = "class,threshold,fpr,tpr\n";
    for (int k = 0; k < 3; ++k)
        for (const auto& p : rocs[static_cast<std::size_t>(k)]) {
            out += outcome_name(static_cast<Outcome>(k));
            out += ',' + format_double(p.threshold);
            out += ',' + format_double(p.fpr);
            out += ',' + format_double(p.tpr);
            out += '\n';
        }
    return out;
}

std::string metrics_csv(const MetricReport& full, const MetricReport& basic) {
    std::string out = "model,class,precision,recall,f1,auc,accuracy,macro_f1,weighted_f1\n";
    auto rows = [&](const char* name, const MetricReport& m) {
        std::string s;
        for (int k = 0; k < 3; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            s += name;
            s += ',' + std::string(outcome_name(static_cast<Outcome>(k)));
            s += ',' + format_double(m.precision[ks]);
            s += ',' + format_double(m.recall[ks]);
            s += ',' + format_double(m.f1[ks]);
            s += ',' + format_double(m.auc[ks]);
            s += ',' + format_double(m.accuracy);
            s += ',' + format_double(m.macro_f1);
            s += ',' + format_double(m.weighted_f1);
            s += '\n';
        }
        return s;
    };
    out += rows("full", full);
    out += rows("basic", basic);
    return out;
}

std::string confidence_csv(const std::vector<ConfidenceBin>& bins) {
    std::string out = "bin_low,bin_high,count,fraction,accuracy\n";
    for (const auto& b : bins) {
        out += format_double(b.lo);
        out += ',' + format_double(b.hi);
        out += ',' + std::to_string(b.count);
        out += ',' + format_double(b.fraction);
        out += ',' + format_double(b.accuracy);
        out += '\n';
    }
    return out;
}

/// Mean-|SHAP| importance over documents with the local-accuracy identity
/// asserted on every prediction. Stripe-count is fixed so results do not
/// depend on the thread count.
ImportanceTable shap_importance_over_rows(const ModelHandle& model, const FeatureSchema& schema,
                                          const PipelineData& data,
                                          const std::vector<std::size_t>& rows, int threads) {
    if (model.kind != "gbdt")
        raise(ErrorCode::InvalidArgument, "shap importance requires a gbdt model");
    const Ensemble& ensemble = *model.gbdt;
    const auto expected = ensemble.expected_margins();
    constexpr std::size_t kStripes = 64;
    const std::size_t n = rows.size();
    const std::size_t n_stripes = std::min(kStripes, std::max<std::size_t>(1, n));
    std::vector<ImportanceAccumulator> stripes(n_stripes, ImportanceAccumulator(schema.width()));
    std::vector<char> ok(n_stripes, 1);
    parallel_for(n_stripes, threads, [&](std::size_t s) {
        const std::size_t begin = s * n / n_stripes;
        const std::size_t end = (s + 1) * n / n_stripes;
        std::vector<double> values;
        for (std::size_t i = begin; i < end; ++i) {
            const RawFeatureRow& row = data.raw.rows[rows[i]];
            values = encode_row(schema, data.corpus.cases[row.case_index], row);
            const auto phi = tree_shap(ensemble, values);
            const auto margins = ensemble.predict_margins(values.data());
            for (int k = 0; k < 3; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                double sum = expected[ks];
                for (const auto& f : phi) sum += f[ks];
                if (std::abs(sum - margins[ks]) > 1e-6) ok[s] = 0;
            }
            stripes[s].add(phi);
        }
    });
    for (char flag : ok)
        if (!flag)
            raise(ErrorCode::Internal,
                  "Shapley local accuracy violated: attributions do not sum to the margin");
    ImportanceAccumulator total(schema.width());
    for (const auto& s : stripes) total.merge(s);
    return total.finalize(schema);
}

struct AblationCell {
    std::string model;
    std::string split;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double majority_rate = 0.0;
    MetricReport metrics;
    bool failed = false;
    std::string error;
};

std::string ablation_csv(const std::vector<AblationCell>& cells) {
    std::string out =
        "model,split,n_train_docs,n_test_docs,majority_rate,accuracy,macro_f1,weighted_f1,"
        "auc_loss,auc_settle,auc_win,failed,error\n";
    for (const auto& c : cells) {
        out += c.model;
        out += ',' + c.split;
        out += ',' + std::to_string(c.n_train);
        out += ',' + std::to_string(c.n_test);
        out += ',' + format_double(c.majority_rate);
        out += ',' + format_double(c.metrics.accuracy);
        out += ',' + format_double(c.metrics.macro_f1);
        out += ',' + format_double(c.metrics.weighted_f1);
        for (int k = 0; k < 3; ++k)
            out += ',' + format_double(c.metrics.auc[static_cast<std::size_t>(k)]);
        out += ',' + std::string(c.failed ? "1" : "0");
        out += ',' + c.error;
        out += '\n';
    }
    return out;
}

double majority_rate_of(const std::vector<int>& labels) {
    std::array<double, 3> counts{};
    for (int y : labels) counts[static_cast<std::size_t>(y)] += 1.0;
    return labels.empty() ? 0.0
                          : *std::max_element(counts.begin(), counts.end()) /
                                static_cast<double>(labels.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

void cmd_report(const PipelineConfig& config) {
    Manifest manifest(config, "report");
    ensure_dir(config.out_dir);
    ensure_dir(join_path(config.out_dir, "report"));
    PipelineData data = prepare_pipeline_data(config, &manifest);

    const std::string full_path = join_path(config.out_dir, "models/model_full.json");
    const std::string basic_path = join_path(config.out_dir, "models/model_basic.json");
    const ModelHandle full = load_model(full_path);
    const ModelHandle basic = load_model(basic_path);
    manifest.record_input(full_path);
    manifest.record_input(basic_path);
    if (full.schema_fingerprint != data.schema_full.fingerprint())
        raise(ErrorCode::InvalidArgument,
              "model_full was trained against a different feature schema; retrain");
    if (basic.schema_fingerprint != data.schema_basic.fingerprint())
        raise(ErrorCode::InvalidArgument,
              "model_basic was trained against a different feature schema; retrain");

    PredictionSet preds_full, preds_basic;
    {
        StageTimer t(&manifest, "predict", config.verbose);
        preds_full = predict_rows(full, data.schema_full, data, data.test_rows, config.measure,
                                  config.threads);
        preds_basic = predict_rows(basic, data.schema_basic, data, data.test_rows, config.measure,
                                   config.threads);
    }
    const TestVectors tv = test_vectors(data, data.test_rows);

    json bundle;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = join_path(config.out_dir, "report/" + name);
        atomic_write_file(path, content);
        manifest.record_output(path);
        return path;
    };

    // 1. Confidence bins over predicted win probability.
    std::vector<double> p_win(preds_full.probabilities.size());
    std::vector<int> won(preds_full.labels.size());
    for (std::size_t i = 0; i < p_win.size(); ++i) {
        p_win[i] = preds_full.probabilities[i][2];
        won[i] = preds_full.labels[i] == 2 ? 1 : 0;
    }
    const auto conf_bins = confidence_accuracy_bins(p_win, won, config.n_confidence_bins);
    emit("confidence_bins.csv", confidence_csv(conf_bins));
    {
        json arr = json::array();
        for (const auto& b : conf_bins)
            arr.push_back({{"bin_low", b.lo},
                           {"bin_high", b.hi},
                           {"count", b.count},
                           {"fraction", b.fraction},
                           {"accuracy", b.accuracy}});
        bundle["confidence_bins"] = arr;
    }

    // 2. Per-class metrics and ROC points for both models.
    const MetricReport metrics_full =
        compute_metrics(preds_full.labels, preds_full.predictions, preds_full.probabilities);
    const MetricReport metrics_basic =
        compute_metrics(preds_basic.labels, preds_basic.predictions, preds_basic.probabilities);
    std::array<std::vector<RocPoint>, 3> rocs;
    {
        std::vector<double> scores(preds_full.labels.size());
        std::vector<int> pos(preds_full.labels.size());
        for (int k = 0; k < 3; ++k) {
            for (std::size_t i = 0; i < scores.size(); ++i) {
                scores[i] = preds_full.probabilities[i][static_cast<std::size_t>(k)];
                pos[i] = preds_full.labels[i] == k ? 1 : 0;
            }
            rocs[static_cast<std::size_t>(k)] = roc_points(scores, pos);
        }
    }
    emit("class_metrics.csv", metrics_csv(metrics_full, metrics_basic));
    emit("roc_points.csv", roc_csv(rocs));
    bundle["class_metrics"] = {{"full", metrics_to_json_obj(metrics_full)},
                               {"basic", metrics_to_json_obj(metrics_basic)}};

    // 3. Feature importance with group totals.
    const ImportanceTable importance =
        shap_importance_over_rows(full, data.schema_full, data, data.test_rows, config.threads);
    emit("feature_importance.csv", importance.csv());
    {
        json feats = json::array();
        for (const auto& f : importance.features)
            feats.push_back({{"feature", f.name},
                             {"group", feature_group_name(f.group)},
                             {"mean_abs_shap", f.mean_abs_shap}});
        bundle["feature_importance"] = {{"features", feats},
                                        {"group_totals",
                                         {{"basic", importance.total_basic},
                                          {"fact", importance.total_fact},
                                          {"actor", importance.total_actor},
                                          {"all", importance.grand_total}}}};
    }

    // 4. Disagreement and accuracy by complexity group.
    const auto disagreement =
        disagreement_curve(preds_basic.predictions, preds_full.predictions, preds_full.labels,
                           preds_full.scores, config.n_complexity_groups);
    emit("complexity_disagreement.csv", disagreement.csv());
    {
        json arr = json::array();
        for (const auto& p : disagreement.points)
            arr.push_back({{"group", p.group},
                           {"count", p.count},
                           {"mean_score", p.mean_score},
                           {"disagreement", p.disagreement},
                           {"accuracy_baseline", p.accuracy_baseline},
                           {"accuracy_full", p.accuracy_full}});
        bundle["complexity_disagreement"] = arr;
    }

    // 5. Complexity as a function of case progression.
    const auto duration = duration_complexity_curve(preds_full.scores, tv.elapsed_days,
                                                    tv.doc_ordinals, config.n_duration_bins);
    emit("duration_complexity_days.csv", duration.by_log_days.csv());
    emit("duration_complexity_docindex.csv", duration.by_log_doc_index.csv());
    bundle["duration_entropy"] = {{"by_log_days", curve_to_json(duration.by_log_days)},
                                  {"by_log_doc_index", curve_to_json(duration.by_log_doc_index)}};

    // 6. Settlement rate against complexity and duration.
    const auto settlement = settlement_rate_curve(preds_full.scores, tv.elapsed_days, tv.settled,
                                                  config.n_complexity_groups);
    emit("settlement_rate_complexity.csv", settlement.by_score.csv());
    emit("settlement_rate_days.csv", settlement.by_log_days.csv());
    bundle["settlement_rate"] = {{"by_complexity", curve_to_json(settlement.by_score)},
                                 {"by_log_days", curve_to_json(settlement.by_log_days)}};

    // 7. Complexity regression.
    const auto reg_rows = build_regression_rows(data, data.test_rows, preds_full.scores);
    const auto regression = run_complexity_regression(reg_rows);
    emit("complexity_regression.csv", regression.csv());
    emit("complexity_regression.txt", regression.text());
    {
        json terms = json::array();
        for (const auto& t : regression.terms)
            terms.push_back(
                {{"term", t.name}, {"block", t.block}, {"beta", t.beta}, {"se", t.se}, {"t", t.t}});
        bundle["complexity_regression"] = {{"terms", terms},
                                           {"r2", regression.r2},
                                           {"n_obs", regression.n_obs},
                                           {"n_clusters", regression.n_clusters}};
    }

    // Raw prediction dump for downstream recounts.
    emit("predictions_test.csv", predictions_csv(data, data.test_rows, preds_full));

    const std::string bundle_path = join_path(config.out_dir, "report/report.json");
    atomic_write_file(bundle_path, bundle.dump(2) + "\n");
    manifest.record_output(bundle_path);
    manifest.save();
}

// ---------------------------------------------------------------------------
// regress
// ---------------------------------------------------------------------------

void cmd_regress(const PipelineConfig& config) {
    Manifest manifest(config, "regress");
    ensure_dir(config.out_dir);
    PipelineData data = prepare_pipeline_data(config, &manifest);
    const std::string full_path = join_path(config.out_dir, "models/model_full.json");
    const ModelHandle full = load_model(full_path);
    manifest.record_input(full_path);
    if (full.schema_fingerprint != data.schema_full.fingerprint())
        raise(ErrorCode::InvalidArgument,
              "model_full was trained against a different feature schema; retrain");
    const auto preds = predict_rows(full, data.schema_full, data, data.test_rows, config.measure,
                                    config.threads);
    const auto rows = build_regression_rows(data, data.test_rows, preds.scores);
    const auto regression = run_complexity_regression(rows);
    const std::string csv_path = join_path(config.out_dir, "complexity_regression.csv");
    atomic_write_file(csv_path, regression.csv());
    manifest.record_output(csv_path);
    const std::string txt_path = join_path(config.out_dir, "complexity_regression.txt");
    atomic_write_file(txt_path, regression.text());
    manifest.record_output(txt_path);
    manifest.save();
}

// ---------------------------------------------------------------------------
// ablate
// ---------------------------------------------------------------------------

namespace {

AblationCell run_cell(const PipelineConfig& config, const PipelineData& data,
                      const std::string& model_kind, SplitKind split_kind) {
    AblationCell cell;
    cell.model = model_kind;
    cell.split = split_kind_name(split_kind);
    try {
        SplitPlan plan;
        if (split_kind == SplitKind::Temporal8020) {
            plan = data.split;
        } else {
            plan = alternate_split(split_kind, data.corpus,
                                   derive_seed(config.seed, "ablate-split"));
        }
        const FeatureSchema schema =
            fit_schema(data.corpus, plan.train_cases, FeatureVariant::Full);
        std::vector<std::size_t> train_rows, test_rows;
        {
            std::vector<char> mark(data.corpus.cases.size(), 0);
            for (std::size_t c : plan.train_cases) mark[c] = 1;
            for (std::size_t c : plan.test_cases) mark[c] = 2;
            for (std::size_t i = 0; i < data.raw.rows.size(); ++i) {
                if (mark[data.raw.rows[i].case_index] == 1) train_rows.push_back(i);
                if (mark[data.raw.rows[i].case_index] == 2) test_rows.push_back(i);
            }
        }
        const FeatureMatrix train =
            encode_matrix(schema, data.corpus, data.raw, train_rows, config.threads);
        cell.n_train = train.n_rows;

        ModelHandle handle;
        handle.variant = FeatureVariant::Full;
        handle.schema_fingerprint = schema.fingerprint();
        if (model_kind == "gbdt") {
            BoosterParams p = config.booster;
            p.threads = config.threads;
            p.seed = derive_seed(config.seed, "ablate-gbdt-" + cell.split);
            handle.kind = "gbdt";
            handle.gbdt = train_gbdt(train, p, schema.fingerprint());
        } else if (model_kind == "ridge") {
            RidgeParams p = config.ridge;
            p.threads = config.threads;
            handle.kind = "ridge";
            handle.ridge = train_ridge(train, p);
            if (!handle.ridge->converged)
                std::cerr << "[litpred] note: ridge stopped at max_iters with gradient norm "
                          << format_double(handle.ridge->final_grad_norm) << "\n";
        } else {
            ForestParams p = config.forest;
            p.threads = config.threads;
            p.seed = derive_seed(config.seed, "ablate-forest");
            handle.kind = "forest";
            handle.forest = train_forest(train, p);
        }

        const auto preds = [&]() {
            PredictionSet out;
            const std::size_t n = test_rows.size();
            out.labels.resize(n);
            out.predictions.resize(n);
            out.probabilities.resize(n);
            out.scores.resize(n);
            parallel_blocks(n, config.threads, [&](std::size_t begin, std::size_t end) {
                std::vector<double> values;
                for (std::size_t i = begin; i < end; ++i) {
                    const RawFeatureRow& row = data.raw.rows[test_rows[i]];
                    values = encode_row(schema, data.corpus.cases[row.case_index], row);
                    const auto probs = handle.predict_proba(values);
                    out.labels[i] = static_cast<int>(row.label);
                    out.predictions[i] = probs.argmax();
                    out.probabilities[i] = probs.p;
                    out.scores[i] = complexity_score(config.measure, probs);
                }
            });
            return out;
        }();
        cell.n_test = test_rows.size();
        cell.majority_rate = majority_rate_of(preds.labels);
        cell.metrics = compute_metrics(preds.labels, preds.predictions, preds.probabilities);
    } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

void cmd_ablate(const PipelineConfig& config) {
    Manifest manifest(config, "ablate");
    ensure_dir(config.out_dir);
    ensure_dir(join_path(config.out_dir, "ablation"));
    PipelineData data = prepare_pipeline_data(config, &manifest);

    std::vector<AblationCell> cells;
    {
        StageTimer t(&manifest, "cells", config.verbose);
        cells.push_back(run_cell(config, data, "gbdt", SplitKind::Temporal8020));
        cells.push_back(run_cell(config, data, "ridge", SplitKind::Temporal8020));
        cells.push_back(run_cell(config, data, "forest", SplitKind::Temporal8020));
        cells.push_back(run_cell(config, data, "gbdt", SplitKind::HalfStates));
        cells.push_back(run_cell(config, data, "gbdt", SplitKind::CrossStateHoldout));
    }

    json bundle;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = join_path(config.out_dir, "ablation/" + name);
        atomic_write_file(path, content);
        manifest.record_output(path);
    };
    emit("ablation.csv", ablation_csv(cells));
    {
        json arr = json::array();
        for (const auto& c : cells)
            arr.push_back({{"model", c.model},
                           {"split", c.split},
                           {"n_train_docs", c.n_train},
                           {"n_test_docs", c.n_test},
                           {"majority_rate", c.majority_rate},
                           {"accuracy", c.metrics.accuracy},
                           {"macro_f1", c.metrics.macro_f1},
                           {"weighted_f1", c.metrics.weighted_f1},
                           {"failed", c.failed},
                           {"error", c.error}});
        bundle["cells"] = arr;
    }

    // Complexity ablation: ridge classifier plus the 1 - max p measure,
    // reproducing the disagreement, duration and settlement analyses.
    {
        StageTimer t(&manifest, "complexity_ablation", config.verbose);
        const FeatureMatrix train_full = encode_matrix(data.schema_full, data.corpus, data.raw,
                                                       data.train_rows, config.threads);
        const FeatureMatrix train_basic = encode_matrix(data.schema_basic, data.corpus, data.raw,
                                                        data.train_rows, config.threads);
        RidgeParams rp = config.ridge;
        rp.threads = config.threads;
        ModelHandle ridge_full;
        ridge_full.kind = "ridge";
        ridge_full.variant = FeatureVariant::Full;
        ridge_full.schema_fingerprint = data.schema_full.fingerprint();
        ridge_full.ridge = train_ridge(train_full, rp);
        ModelHandle ridge_basic;
        ridge_basic.kind = "ridge";
        ridge_basic.variant = FeatureVariant::Basic;
        ridge_basic.schema_fingerprint = data.schema_basic.fingerprint();
        ridge_basic.ridge = train_ridge(train_basic, rp);

        const auto preds_full = predict_rows(ridge_full, data.schema_full, data, data.test_rows,
                                             ComplexityMeasure::OneMinusMax, config.threads);
        const auto preds_basic = predict_rows(ridge_basic, data.schema_basic, data, data.test_rows,
                                              ComplexityMeasure::OneMinusMax, config.threads);
        const TestVectors tv = test_vectors(data, data.test_rows);

        const auto disagreement =
            disagreement_curve(preds_basic.predictions, preds_full.predictions, preds_full.labels,
                               preds_full.scores, config.n_complexity_groups);
        emit("complexity_ablation_disagreement.csv", disagreement.csv());
        const auto duration = duration_complexity_curve(preds_full.scores, tv.elapsed_days,
                                                        tv.doc_ordinals, config.n_duration_bins);
        emit("complexity_ablation_duration_days.csv", duration.by_log_days.csv());
        emit("complexity_ablation_duration_docindex.csv", duration.by_log_doc_index.csv());
        const auto settlement = settlement_rate_curve(preds_full.scores, tv.elapsed_days,
                                                      tv.settled, config.n_complexity_groups);
        emit("complexity_ablation_settlement.csv", settlement.by_score.csv());
        emit("complexity_ablation_settlement_days.csv", settlement.by_log_days.csv());

        bundle["complexity_ablation"] = {
            {"measure", "one_minus_max"},
            {"model", "ridge"},
            {"settlement_by_complexity", curve_to_json(settlement.by_score)},
            {"duration_by_log_days", curve_to_json(duration.by_log_days)}};
    }

    const std::string bundle_path = join_path(config.out_dir, "ablation/ablation.json");
    atomic_write_file(bundle_path, bundle.dump(2) + "\n");
    manifest.record_output(bundle_path);
    manifest.save();
}

}  // namespace litpred
