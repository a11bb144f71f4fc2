// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

namespace litpred {

using nlohmann::json;

const char* split_kind_name(SplitKind k) {
    switch (k) {
        case SplitKind::Temporal8020: return "temporal_80_20";
        case SplitKind::HalfStates: return "half_states";
        case SplitKind::CrossStateHoldout: return "cross_state_holdout";
    }
    raise(ErrorCode::Internal, "bad split kind");
}

SplitKind split_kind_from_name(const std::string& name) {
    if (name == "temporal_80_20") return SplitKind::Temporal8020;
    if (name == "half_states") return SplitKind::HalfStates;
    if (name == "cross_state_holdout") return SplitKind::CrossStateHoldout;
    raise(ErrorCode::InvalidArgument, "unknown split kind: " + name);
}

namespace {

std::vector<std::size_t> cases_by_start(const CaseCollection& collection,
                                        const std::vector<std::size_t>& subset) {
    std::vector<std::size_t> order = subset;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = collection.cases[a];
        const auto& cb = collection.cases[b];
        if (ca.start_day != cb.start_day) return ca.start_day < cb.start_day;
        return ca.case_id < cb.case_id;
    });
    return order;
}

SplitPlan temporal_within(const CaseCollection& collection, std::vector<std::size_t> subset,
                          double test_fraction) {
    if (subset.size() < 5)
        raise(ErrorCode::InvalidArgument, "temporal split requires at least 5 cases");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        raise(ErrorCode::InvalidArgument, "test_fraction must be in (0, 1)");
    const auto order = cases_by_start(collection, subset);
    const auto n = order.size();
    const auto n_train = static_cast<std::size_t>(
        std::ceil((1.0 - test_fraction) * static_cast<double>(n)));
    SplitPlan plan;
    plan.kind = SplitKind::Temporal8020;
    plan.train_cases.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    plan.test_cases.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return plan;
}

}  // namespace

SplitPlan temporal_case_split(const CaseCollection& collection, double test_fraction) {
    std::vector<std::size_t> all(collection.cases.size());
    std::iota(all.begin(), all.end(), 0);
    return temporal_within(collection, std::move(all), test_fraction);
}

SplitPlan alternate_split(SplitKind kind, const CaseCollection& collection, std::uint64_t seed) {
    if (kind == SplitKind::Temporal8020) {
        auto plan = temporal_case_split(collection);
        plan.seed = seed;
        return plan;
    }
    std::set<std::string> state_set;
    for (const auto& c : collection.cases) state_set.insert(c.jurisdiction);
    std::vector<std::string> states(state_set.begin(), state_set.end());
    if (states.size() < 2)
        raise(ErrorCode::InvalidArgument,
              std::string(split_kind_name(kind)) + " requires at least 2 states, found " +
                  std::to_string(states.size()));

    Rng rng(derive_seed(seed, split_kind_name(kind)));
    rng.shuffle(states);
    const auto n_pick = (states.size() + 1) / 2;
    std::vector<std::string> picked(states.begin(),
                                    states.begin() + static_cast<std::ptrdiff_t>(n_pick));
    std::vector<std::string> rest(states.begin() + static_cast<std::ptrdiff_t>(n_pick),
                                  states.end());
    std::sort(picked.begin(), picked.end());
    std::sort(rest.begin(), rest.end());

    SplitPlan plan;
    plan.kind = kind;
    plan.seed = seed;
    if (kind == SplitKind::HalfStates) {
        std::vector<std::size_t> retained;
        for (std::size_t i = 0; i < collection.cases.size(); ++i)
            if (std::binary_search(picked.begin(), picked.end(), collection.cases[i].jurisdiction))
                retained.push_back(i);
        auto inner = temporal_within(collection, std::move(retained), 0.2);
        plan.train_cases = std::move(inner.train_cases);
        plan.test_cases = std::move(inner.test_cases);
        plan.train_states = picked;
        plan.test_states = picked;
        return plan;
    }
    // Cross-state holdout: disjoint train and test state sets.
    for (std::size_t i = 0; i < collection.cases.size(); ++i) {
        if (std::binary_search(picked.begin(), picked.end(), collection.cases[i].jurisdiction))
            plan.train_cases.push_back(i);
        else
            plan.test_cases.push_back(i);
    }
    plan.train_states = picked;
    plan.test_states = rest;
    if (plan.train_cases.empty() || plan.test_cases.empty())
        raise(ErrorCode::InvalidArgument, "cross-state holdout produced an empty side");
    return plan;
}

std::string SplitPlan::to_json(const CaseCollection& collection) const {
    auto ids = [&](const std::vector<std::size_t>& idxs) {
        json arr = json::array();
        for (std::size_t i : idxs) arr.push_back(collection.cases[i].case_id);
        return arr;
    };
    json j;
    j["kind"] = split_kind_name(kind);
    j["seed"] = seed;
    j["train_case_count"] = train_cases.size();
    j["test_case_count"] = test_cases.size();
    if (!train_states.empty()) j["train_states"] = train_states;
    if (!test_states.empty()) j["test_states"] = test_states;
    j["train_cases"] = ids(train_cases);
    j["test_cases"] = ids(test_cases);
    return j.dump(2) + "\n";
}

FoldAssignment grouped_kfold(const CaseCollection& collection,
                             const std::vector<std::size_t>& train_cases, int k,
                             std::uint64_t seed) {
    if (k < 2) raise(ErrorCode::InvalidArgument, "grouped_kfold requires k >= 2");
    if (static_cast<std::size_t>(k) > train_cases.size())
        raise(ErrorCode::InvalidArgument,
              "grouped_kfold: k = " + std::to_string(k) + " exceeds case count " +
                  std::to_string(train_cases.size()));
    // Canonical order by case_id, then a seeded shuffle and round-robin.
    std::vector<std::size_t> order = train_cases;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return collection.cases[a].case_id < collection.cases[b].case_id;
    });
    Rng rng(derive_seed(seed, "grouped-kfold"));
    rng.shuffle(order);
    FoldAssignment fa;
    fa.n_folds = k;
    fa.seed = seed;
    for (std::size_t i = 0; i < order.size(); ++i)
        fa.fold_of_case[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return fa;
}

std::vector<std::size_t> FoldAssignment::cases_in_fold(int fold, bool complement) const {
    std::vector<std::size_t> out;
    for (const auto& [case_idx, f] : fold_of_case)
        if ((f == fold) != complement) out.push_back(case_idx);
    return out;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double binary_auc(const std::vector<double>& scores, const std::vector<int>& positive) {
    if (scores.size() != positive.size())
        raise(ErrorCode::InvalidArgument, "binary_auc: length mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (positive[order[t]]) {
                rank_sum_pos += avg_rank;
                ++n_pos;
            }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return 0.5;
    return (rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricReport compute_metrics(const std::vector<int>& labels, const std::vector<int>& predictions,
                             const std::vector<std::array<double, 3>>& probabilities) {
    if (labels.empty() || labels.size() != predictions.size() ||
        (!probabilities.empty() && probabilities.size() != labels.size()))
        raise(ErrorCode::InvalidArgument, "compute_metrics: length mismatch or empty input");
    MetricReport r;
    r.n = labels.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ++r.confusion[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(predictions[i])];
        if (labels[i] == predictions[i]) ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);

    double weighted = 0.0;
    for (int k = 0; k < 3; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        std::size_t tp = r.confusion[ks][ks], fp = 0, fn = 0, support = 0;
        for (int j = 0; j < 3; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (j != k) {
                fp += r.confusion[js][ks];
                fn += r.confusion[ks][js];
            }
            support += r.confusion[ks][js];
        }
        r.precision[ks] = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        r.recall[ks] = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        r.f1[ks] = (r.precision[ks] + r.recall[ks]) > 0.0
                       ? 2.0 * r.precision[ks] * r.recall[ks] / (r.precision[ks] + r.recall[ks])
                       : 0.0;
        r.macro_f1 += r.f1[ks] / 3.0;
        weighted += r.f1[ks] * static_cast<double>(support);
    }
    r.weighted_f1 = weighted / static_cast<double>(r.n);

    if (!probabilities.empty()) {
        std::vector<double> scores(labels.size());
        std::vector<int> pos(labels.size());
        for (int k = 0; k < 3; ++k) {
            for (std::size_t i = 0; i < labels.size(); ++i) {
                scores[i] = probabilities[i][static_cast<std::size_t>(k)];
                pos[i] = labels[i] == k ? 1 : 0;
            }
            r.auc[static_cast<std::size_t>(k)] = binary_auc(scores, pos);
        }
    }
    return r;
}

std::string MetricReport::to_json() const {
    json j;
    j["n"] = n;
    j["accuracy"] = accuracy;
    j["macro_f1"] = macro_f1;
    j["weighted_f1"] = weighted_f1;
    for (int k = 0; k < 3; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        j["classes"][outcome_name(static_cast<Outcome>(k))] = {{"precision", precision[ks]},
                                                               {"recall", recall[ks]},
                                                               {"f1", f1[ks]},
                                                               {"auc", auc[ks]}};
    }
    json conf = json::array();
    for (const auto& row : confusion) conf.push_back(row);
    j["confusion"] = conf;
    return j.dump(2) + "\n";
}

std::vector<ConfidenceBin> confidence_accuracy_bins(const std::vector<double>& p_win,
                                                    const std::vector<int>& won, int n_bins) {
    if (p_win.size() != won.size())
        raise(ErrorCode::InvalidArgument, "confidence_accuracy_bins: length mismatch");
    if (n_bins < 1) raise(ErrorCode::InvalidArgument, "n_bins must be >= 1");
    std::vector<ConfidenceBin> bins(static_cast<std::size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) {
        bins[static_cast<std::size_t>(b)].lo = static_cast<double>(b) / n_bins;
        bins[static_cast<std::size_t>(b)].hi = static_cast<double>(b + 1) / n_bins;
    }
    std::vector<std::size_t> hits(static_cast<std::size_t>(n_bins), 0);
    for (std::size_t i = 0; i < p_win.size(); ++i) {
        const double p = p_win[i];
        if (p < 0.0 || p > 1.0)
            raise(ErrorCode::InvalidArgument, "p_win values must lie in [0, 1]");
        auto b = static_cast<int>(p * n_bins);
        if (b == n_bins) b = n_bins - 1;  // the last bin is right-inclusive
        const auto bs = static_cast<std::size_t>(b);
        ++bins[bs].count;
        const int call = p > 0.5 ? 1 : 0;
        if (call == won[i]) ++hits[bs];
    }
    for (std::size_t b = 0; b < bins.size(); ++b) {
        bins[b].fraction =
            p_win.empty() ? 0.0
                          : static_cast<double>(bins[b].count) / static_cast<double>(p_win.size());
        bins[b].accuracy =
            bins[b].count > 0 ? static_cast<double>(hits[b]) / static_cast<double>(bins[b].count)
                              : 0.0;
    }
    return bins;
}

std::vector<RocPoint> roc_points(const std::vector<double>& scores,
                                 const std::vector<int>& positive) {
    if (scores.size() != positive.size())
        raise(ErrorCode::InvalidArgument, "roc_points: length mismatch");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double n_pos = 0.0, n_neg = 0.0;
    for (int p : positive) (p ? n_pos : n_neg) += 1.0;
    std::vector<RocPoint> points;
    points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double tp = 0.0, fp = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            if (positive[order[i]])
                tp += 1.0;
            else
                fp += 1.0;
            ++i;
        }
        points.push_back({s, n_neg > 0.0 ? fp / n_neg : 0.0, n_pos > 0.0 ? tp / n_pos : 0.0});
    }
    return points;
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

BoosterParams GridResult::best_params(const BoosterParams& base) const {
    if (best_cell < 0) raise(ErrorCode::Internal, "grid search selected no cell");
    const GridCell& c = cells[static_cast<std::size_t>(best_cell)];
    BoosterParams p = base;
    p.max_depth = c.max_depth;
    p.learning_rate = c.learning_rate;
    p.col_subsample_per_tree = c.col_subsample;
    return p;
}

std::string GridResult::table_csv() const {
    std::string out = "max_depth,learning_rate,col_subsample,mean_macro_f1,selected,failed";
    std::size_t max_folds = 0;
    for (const auto& c : cells) max_folds = std::max(max_folds, c.fold_macro_f1.size());
    for (std::size_t f = 0; f < max_folds; ++f) out += ",fold" + std::to_string(f) + "_macro_f1";
    out += '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        out += std::to_string(c.max_depth);
        out += ',' + format_double(c.learning_rate);
        out += ',' + format_double(c.col_subsample);
        out += ',' + format_double(c.mean_macro_f1);
        out += ',' + std::string(static_cast<int>(i) == best_cell ? "1" : "0");
        out += ',' + std::string(c.failed ? "1" : "0");
        for (double v : c.fold_macro_f1) out += ',' + format_double(v);
        out += '\n';
    }
    return out;
}

GridResult grid_search(const GridSpec& grid, int n_folds, const BoosterParams& base,
                       const CellEvaluator& evaluate) {
    if (grid.max_depths.empty() || grid.learning_rates.empty() || grid.col_subsamples.empty())
        raise(ErrorCode::InvalidArgument, "grid_search: empty grid");
    if (n_folds < 1) raise(ErrorCode::InvalidArgument, "grid_search: n_folds must be >= 1");

    GridResult result;
    for (int depth : grid.max_depths)
        for (double rate : grid.learning_rates)
            for (double colsample : grid.col_subsamples) {
                GridCell cell;
                cell.max_depth = depth;
                cell.learning_rate = rate;
                cell.col_subsample = colsample;
                BoosterParams p = base;
                p.max_depth = depth;
                p.learning_rate = rate;
                p.col_subsample_per_tree = colsample;
                try {
                    double sum = 0.0;
                    for (int f = 0; f < n_folds; ++f) {
                        const double score = evaluate(p, f);
                        cell.fold_macro_f1.push_back(score);
                        sum += score;
                    }
                    cell.mean_macro_f1 = sum / n_folds;
                } catch (const std::exception& e) {
                    cell.failed = true;
                    cell.error = e.what();
                    cell.fold_macro_f1.clear();
                    cell.mean_macro_f1 = 0.0;
                }
                result.cells.push_back(std::move(cell));
            }

    // Argmax of mean macro-F1; cells are generated in lexicographic
    // (depth, rate, colsample) order so strict inequality keeps the smallest.
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& c = result.cells[i];
        if (c.failed) continue;
        if (result.best_cell < 0 ||
            c.mean_macro_f1 > result.cells[static_cast<std::size_t>(result.best_cell)].mean_macro_f1)
            result.best_cell = static_cast<int>(i);
    }
    if (result.best_cell < 0)
        raise(ErrorCode::Internal, "grid_search: every cell failed");
    return result;
}

}  // namespace litpred
