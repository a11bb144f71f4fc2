// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "litpred/common.hpp"

namespace litpred {

struct StandardizeStats {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
};

/// In-place standardization to mean 0, population sd 1. Errors on constant
/// input.
StandardizeStats standardize(std::vector<double>& column);
void apply_standardize(std::vector<double>& column, const StandardizeStats& stats);
void invert_standardize(std::vector<double>& column, const StandardizeStats& stats);

struct OlsClusteredResult {
    std::vector<std::string> names;
    Eigen::VectorXd beta;
    Eigen::VectorXd se;  // CR1 cluster-robust
    Eigen::VectorXd t;
    double r2 = 0.0;
    std::size_t n_obs = 0;
    std::size_t n_clusters = 0;
};

/// OLS with CR1 cluster-robust standard errors,
/// c = [G/(G-1)] * [(N-1)/(N-K)]. QR solve, cluster sums accumulated in
/// ascending cluster-id order.
OlsClusteredResult ols_clustered(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const std::vector<std::string>& cluster_ids,
                                 const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// The complexity-determinants regression
// ---------------------------------------------------------------------------

struct RegressionRow {
    double complexity = 0.0;
    std::string jurisdiction;
    std::string case_type;
    std::string plaintiff_type;
    std::string defendant_type;
    double n_plaintiffs = 0.0;
    double n_defendants = 0.0;
    double log_duration = 0.0;
    double knn10_win_rate = 0.0;
    bool knn10_missing = false;
    std::string cluster_id;
};

struct RegressionTerm {
    std::string name;
    std::string block;  // "intercept" | factor name | "numeric"
    double beta = 0.0;
    double se = 0.0;
    double t = 0.0;
};

struct ComplexityRegressionResult {
    std::vector<RegressionTerm> terms;
    double r2 = 0.0;
    std::size_t n_obs = 0;
    std::size_t n_clusters = 0;
    std::size_t n_dropped_missing = 0;
    std::vector<std::string> dropped_constant;
    std::string reference_case_type;
    std::string reference_plaintiff_type;
    std::string reference_defendant_type;
    std::string reference_jurisdiction;

    std::string csv() const;
    std::string text() const;  // grouped rendering with reference captions
};

/// Standardized entropy regressed on factor blocks (jurisdiction, case type,
/// party types; declared reference levels) and standardized numeric
/// covariates, with case-clustered CR1 errors. Rows lacking the 10-NN win
/// rate are dropped.
ComplexityRegressionResult run_complexity_regression(const std::vector<RegressionRow>& rows);

}  // namespace litpred
