// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "litpred/corpus.hpp"
#include "litpred/model.hpp"

namespace litpred {

enum class SplitKind { Temporal8020, HalfStates, CrossStateHoldout };
const char* split_kind_name(SplitKind k);
SplitKind split_kind_from_name(const std::string& name);

struct SplitPlan {
    SplitKind kind = SplitKind::Temporal8020;
    std::uint64_t seed = 0;
    std::vector<std::size_t> train_cases;  // indices into the collection
    std::vector<std::size_t> test_cases;
    std::vector<std::string> train_states;  // populated for state-based kinds
    std::vector<std::string> test_states;

    std::string to_json(const CaseCollection& collection) const;
};

/// Cases ordered by (start_day, case_id); the first ceil((1-f) * n) train.
SplitPlan temporal_case_split(const CaseCollection& collection, double test_fraction = 0.2);

SplitPlan alternate_split(SplitKind kind, const CaseCollection& collection, std::uint64_t seed);

struct FoldAssignment {
    int n_folds = 0;
    std::uint64_t seed = 0;
    std::map<std::size_t, int> fold_of_case;  // case index -> fold

    std::vector<std::size_t> cases_in_fold(int fold, bool complement = false) const;
};

FoldAssignment grouped_kfold(const CaseCollection& collection,
                             const std::vector<std::size_t>& train_cases, int k,
                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct MetricReport {
    double accuracy = 0.0;
    std::array<double, 3> precision{};
    std::array<double, 3> recall{};
    std::array<double, 3> f1{};
    double macro_f1 = 0.0;
    double weighted_f1 = 0.0;
    std::array<double, 3> auc{};
    std::array<std::array<std::size_t, 3>, 3> confusion{};  // [true][predicted]
    std::size_t n = 0;

    std::string to_json() const;
};

MetricReport compute_metrics(const std::vector<int>& labels, const std::vector<int>& predictions,
                             const std::vector<std::array<double, 3>>& probabilities);

/// One-vs-rest AUC by the rank statistic with half credit for ties.
double binary_auc(const std::vector<double>& scores, const std::vector<int>& positive);

struct ConfidenceBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double fraction = 0.0;
    double accuracy = 0.0;
};

/// Equal-width bins of predicted win probability; accuracy of the binary
/// win/not-win call implied by thresholding at 0.5.
std::vector<ConfidenceBin> confidence_accuracy_bins(const std::vector<double>& p_win,
                                                    const std::vector<int>& won, int n_bins = 10);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

std::vector<RocPoint> roc_points(const std::vector<double>& scores,
                                 const std::vector<int>& positive);

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

struct GridSpec {
    std::vector<int> max_depths = {2, 3};
    std::vector<double> learning_rates = {0.03, 0.05};
    std::vector<double> col_subsamples = {0.6, 0.8};
};

struct GridCell {
    int max_depth = 0;
    double learning_rate = 0.0;
    double col_subsample = 0.0;
    std::vector<double> fold_macro_f1;
    double mean_macro_f1 = 0.0;
    bool failed = false;
    std::string error;
};

struct GridResult {
    std::vector<GridCell> cells;
    int best_cell = -1;

    BoosterParams best_params(const BoosterParams& base) const;
    std::string table_csv() const;
};

/// Evaluates one (cell, fold) pair and returns the validation macro-F1.
using CellEvaluator = std::function<double(const BoosterParams& cell_params, int fold)>;

GridResult grid_search(const GridSpec& grid, int n_folds, const BoosterParams& base,
                       const CellEvaluator& evaluate);

}  // namespace litpred
