// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <array>
#include <string>
#include <vector>

#include "litpred/features.hpp"
#include "litpred/model.hpp"

namespace litpred {

enum class ComplexityMeasure { Entropy, OneMinusMax };
const char* complexity_measure_name(ComplexityMeasure m);
ComplexityMeasure complexity_measure_from_name(const std::string& name);

inline constexpr double kMaxEntropy3 = 1.0986122886681098;  // ln 3

/// Shannon entropy in nats; 0 * log 0 reads as 0. Rejects distributions
/// whose mass deviates from 1 by more than 1e-6.
double entropy(const OutcomeProbabilities& p);
double one_minus_max(const OutcomeProbabilities& p);
double complexity_score(ComplexityMeasure m, const OutcomeProbabilities& p);

/// Equal-frequency group assignment by ascending score; ties keep input
/// order; sizes differ by at most one. Returns group index per element.
std::vector<int> complexity_groups(const std::vector<double>& scores, int n_groups = 15);

struct CurvePoint {
    double bin_low = 0.0;
    double bin_high = 0.0;
    std::size_t count = 0;
    double value = 0.0;
    double stderr_value = 0.0;
};

struct BinnedCurve {
    std::string x_name;
    std::string y_name;
    std::vector<CurvePoint> points;

    std::string csv() const;
};

/// Mean of y over equal-frequency bins of x, with standard errors of the mean.
BinnedCurve binned_mean_curve(const std::vector<double>& x, const std::vector<double>& y,
                              int n_bins, const std::string& x_name, const std::string& y_name);

/// Rate of a binary indicator over equal-frequency bins of x, with Wald
/// binomial standard errors.
BinnedCurve binned_rate_curve(const std::vector<double>& x, const std::vector<int>& indicator,
                              int n_bins, const std::string& x_name, const std::string& y_name);

struct DisagreementPoint {
    int group = 0;
    std::size_t count = 0;
    double disagreement = 0.0;
    double accuracy_baseline = 0.0;
    double accuracy_full = 0.0;
    double mean_score = 0.0;
};

struct DisagreementCurve {
    std::vector<DisagreementPoint> points;
    std::string csv() const;
};

DisagreementCurve disagreement_curve(const std::vector<int>& baseline_predictions,
                                     const std::vector<int>& full_predictions,
                                     const std::vector<int>& labels,
                                     const std::vector<double>& scores, int n_groups);

struct DurationCurves {
    BinnedCurve by_log_days;
    BinnedCurve by_log_doc_index;
};

DurationCurves duration_complexity_curve(const std::vector<double>& scores,
                                         const std::vector<double>& elapsed_days,
                                         const std::vector<double>& doc_ordinals, int n_bins);

struct SettlementCurves {
    BinnedCurve by_score;
    BinnedCurve by_log_days;
};

SettlementCurves settlement_rate_curve(const std::vector<double>& scores,
                                       const std::vector<double>& elapsed_days,
                                       const std::vector<int>& settled, int n_bins);

/// Weighted least-squares slope over curve points (weights = counts),
/// with its standard error under the per-bin SEM.
struct SlopeEstimate {
    double slope = 0.0;
    double stderr_value = 0.0;
};
SlopeEstimate curve_slope(const BinnedCurve& curve);

// ---------------------------------------------------------------------------
// SHAP importance aggregation
// ---------------------------------------------------------------------------

struct ImportanceEntry {
    std::string name;
    FeatureGroup group = FeatureGroup::Basic;
    double mean_abs_shap = 0.0;
};

struct ImportanceTable {
    std::vector<ImportanceEntry> features;  // descending by value
    double total_basic = 0.0;
    double total_fact = 0.0;
    double total_actor = 0.0;
    double grand_total = 0.0;

    std::string csv() const;
};

/// Streaming accumulator: one add() per document with its attribution matrix.
class ImportanceAccumulator {
public:
    explicit ImportanceAccumulator(std::size_t n_features)
        : sums_(n_features, 0.0), n_docs_(0) {}

    void add(const std::vector<std::array<double, 3>>& phi);
    void merge(const ImportanceAccumulator& other);
    ImportanceTable finalize(const FeatureSchema& schema) const;

private:
    std::vector<double> sums_;
    std::size_t n_docs_;
};

ImportanceTable shap_importance(const std::vector<std::vector<std::array<double, 3>>>& attributions,
                                const FeatureSchema& schema);

}  // namespace litpred
