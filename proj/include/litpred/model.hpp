// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "litpred/corpus.hpp"
#include "litpred/features.hpp"

namespace litpred {

struct OutcomeProbabilities {
    std::array<double, 3> p = {0.0, 0.0, 0.0};  // (loss, settle, win)

    int argmax() const {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>(best)]) best = k;
        return best;  // ties resolve to the lowest class code
    }
};

struct BoosterParams {
    int n_rounds = 500;
    int max_depth = 3;
    double learning_rate = 0.05;
    double row_subsample = 0.8;
    double col_subsample_per_tree = 1.0;
    double min_child_hessian = 5.0;
    int n_histogram_bins = 256;
    double l2_leaf_penalty = 1.0;
    std::uint64_t seed = 0;
    int threads = 0;  // execution detail, not part of the trained model

    void validate() const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    bool default_left = true;
    double cover = 0.0;
    double value = 0.0;  // leaf value
};

struct Tree {
    int klass = 0;
    std::vector<TreeNode> nodes;

    double evaluate(const double* row) const {
        int at = 0;
        while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
            const TreeNode& n = nodes[static_cast<std::size_t>(at)];
            const double v = row[n.feature];
            if (std::isnan(v))
                at = n.default_left ? n.left : n.right;
            else
                at = v <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(at)].value;
    }

    /// Cover-weighted mean output (the tree's expected value).
    double expected_value() const;
};

struct SoftmaxGradHess {
    std::array<double, 3> grad;
    std::array<double, 3> hess;
};

std::array<double, 3> softmax3(const std::array<double, 3>& margins);
SoftmaxGradHess softmax_grad_hess(const std::array<double, 3>& margins, Outcome label);

/// Multiclass boosted-tree model; trees are stored round-major, one tree per
/// class within a round.
struct Ensemble {
    BoosterParams params;
    std::array<double, 3> base_scores = {0.0, 0.0, 0.0};
    std::vector<Tree> trees;
    std::uint64_t schema_fingerprint = 0;

    std::array<double, 3> predict_margins(const double* row) const;
    OutcomeProbabilities predict_proba(const std::vector<double>& row) const;
    int predict_class(const std::vector<double>& row) const;

    /// Per-class expected margin under the training cover distribution; the
    /// additive base of the Shapley decomposition.
    std::array<double, 3> expected_margins() const;

    std::string to_json() const;
    static Ensemble from_json(const std::string& text);
};

Ensemble train_gbdt(const FeatureMatrix& X, const BoosterParams& params,
                    std::uint64_t schema_fingerprint,
                    std::vector<double>* train_loss_per_round = nullptr);

/// Exact per-tree Shapley attributions, n_features x 3 classes, flattened
/// feature-major. Local accuracy: sum_f phi[f][k] + expected_margins()[k]
/// equals predict_margins()[k] within 1e-6.
std::vector<std::array<double, 3>> tree_shap(const Ensemble& ensemble,
                                             const std::vector<double>& row);

// ---------------------------------------------------------------------------
// Ablation baselines
// ---------------------------------------------------------------------------

struct RidgeParams {
    double lambda = 1e-3;
    int max_iters = 4000;
    double grad_tol = 1e-6;
    int threads = 0;
};

struct RidgeModel {
    Eigen::MatrixXd weights;  // 3 x (n_features + 1), last column is the intercept
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    bool converged = false;
    double final_grad_norm = 0.0;
    double final_objective = 0.0;
    int iterations = 0;

    OutcomeProbabilities predict_proba(const std::vector<double>& row) const;
};

RidgeModel train_ridge(const FeatureMatrix& X, const RidgeParams& params);

struct ForestParams {
    int n_trees = 150;
    int max_depth = 14;
    int min_samples_leaf = 5;
    int n_histogram_bins = 256;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct ForestModel {
    std::vector<Tree> trees;  // leaf value holds the majority class index
    int n_features = 0;

    OutcomeProbabilities predict_proba(const std::vector<double>& row) const;
};

ForestModel train_forest(const FeatureMatrix& X, const ForestParams& params);

// ---------------------------------------------------------------------------
// Persistence envelope shared by the three model kinds
// ---------------------------------------------------------------------------

struct ModelHandle {
    std::string kind;  // "gbdt" | "ridge" | "forest"
    std::uint64_t schema_fingerprint = 0;
    FeatureVariant variant = FeatureVariant::Full;
    std::array<double, 3> class_priors = {0.0, 0.0, 0.0};
    std::optional<Ensemble> gbdt;
    std::optional<RidgeModel> ridge;
    std::optional<ForestModel> forest;

    OutcomeProbabilities predict_proba(const std::vector<double>& row) const;
    std::string to_json() const;
    static ModelHandle from_json(const std::string& text);
};

}  // namespace litpred
