// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <algorithm>
#include <cmath>
#include <numeric>

#include "binner.hpp"
#include "litpred/model.hpp"

namespace litpred {

// ---------------------------------------------------------------------------
// Ridge-regularized multinomial regression, full-batch gradient descent with
// backtracking. Features are standardized internally; the intercept column is
// not penalized.
// ---------------------------------------------------------------------------

namespace {

double ridge_objective(const Eigen::MatrixXd& Xs, const std::vector<int>& y,
                       const Eigen::MatrixXd& W, double lambda, Eigen::MatrixXd& margins) {
    const auto n = Xs.rows();
    margins.noalias() = Xs * W.transpose();  // n x 3
    double loss = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        const double m = margins.row(r).maxCoeff();
        const double lse =
            m + std::log(std::exp(margins(r, 0) - m) + std::exp(margins(r, 1) - m) +
                         std::exp(margins(r, 2) - m));
        loss += lse - margins(r, y[static_cast<std::size_t>(r)]);
    }
    loss /= static_cast<double>(n);
    const auto f = W.cols() - 1;  // intercept excluded from the penalty
    loss += 0.5 * lambda * W.leftCols(f).squaredNorm();
    return loss;
}

}  // namespace

RidgeModel train_ridge(const FeatureMatrix& X, const RidgeParams& params) {
    const auto n = static_cast<Eigen::Index>(X.n_rows);
    const auto f = static_cast<Eigen::Index>(X.n_cols);
    if (n < 2) raise(ErrorCode::InvalidArgument, "training requires at least two rows");
    {
        std::array<std::size_t, 3> counts = {0, 0, 0};
        for (int y : X.labels) ++counts[static_cast<std::size_t>(y)];
        int present = 0;
        int only = 0;
        for (int k = 0; k < 3; ++k)
            if (counts[static_cast<std::size_t>(k)] > 0) {
                ++present;
                only = k;
            }
        if (present < 2)
            raise(ErrorCode::InvalidArgument,
                  std::string("degenerate training input: every label is '") +
                      outcome_name(static_cast<Outcome>(only)) + "'");
    }

    RidgeModel model;
    model.feature_mean.resize(X.n_cols);
    model.feature_scale.resize(X.n_cols);
    Eigen::MatrixXd Xs(n, f + 1);
    for (Eigen::Index c = 0; c < f; ++c) {
        const double* col = X.col(static_cast<std::size_t>(c));
        double mean = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) mean += col[r];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) var += (col[r] - mean) * (col[r] - mean);
        var /= static_cast<double>(n);
        const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
        model.feature_mean[static_cast<std::size_t>(c)] = mean;
        model.feature_scale[static_cast<std::size_t>(c)] = scale;
        for (Eigen::Index r = 0; r < n; ++r) Xs(r, c) = (col[r] - mean) / scale;
    }
    Xs.col(f).setOnes();

    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(3, f + 1);
    Eigen::MatrixXd margins(n, 3), probs(n, 3), grad(3, f + 1), trial(3, f + 1);

    double objective = ridge_objective(Xs, X.labels, W, params.lambda, margins);
    double step = 1.0;
    int iter = 0;
    double grad_norm = 0.0;
    for (; iter < params.max_iters; ++iter) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double m = margins.row(r).maxCoeff();
            double z = 0.0;
            for (int k = 0; k < 3; ++k) z += std::exp(margins(r, k) - m);
            for (int k = 0; k < 3; ++k) probs(r, k) = std::exp(margins(r, k) - m) / z;
            probs(r, X.labels[static_cast<std::size_t>(r)]) -= 1.0;
        }
        grad.noalias() = probs.transpose() * Xs / static_cast<double>(n);
        grad.leftCols(f) += params.lambda * W.leftCols(f);
        grad_norm = grad.norm();
        if (grad_norm < params.grad_tol) break;

        // Armijo backtracking on the descent direction -grad.
        double t = step;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            trial = W - t * grad;
            const double obj_trial = ridge_objective(Xs, X.labels, trial, params.lambda, margins);
            if (obj_trial <= objective - 0.5 * t * grad_norm * grad_norm) {
                W = trial;
                objective = obj_trial;
                step = std::min(t * 1.5, 1e3);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // step underflow: no further progress possible
    }
    // Margins may hold a rejected trial; recompute the accepted state.
    model.final_objective = ridge_objective(Xs, X.labels, W, params.lambda, margins);
    model.converged = grad_norm < params.grad_tol;
    model.final_grad_norm = grad_norm;
    model.iterations = iter;
    model.weights = W;
    return model;
}

OutcomeProbabilities RidgeModel::predict_proba(const std::vector<double>& row) const {
    const auto f = static_cast<std::size_t>(weights.cols() - 1);
    if (row.size() != f)
        raise(ErrorCode::InvalidArgument, "ridge model expects " + std::to_string(f) +
                                              " features, got " + std::to_string(row.size()));
    std::array<double, 3> m{};
    for (int k = 0; k < 3; ++k) {
        double acc = weights(k, static_cast<Eigen::Index>(f));
        for (std::size_t c = 0; c < f; ++c)
            acc += weights(k, static_cast<Eigen::Index>(c)) * (row[c] - feature_mean[c]) /
                   feature_scale[c];
        m[static_cast<std::size_t>(k)] = acc;
    }
    OutcomeProbabilities out;
    out.p = softmax3(m);
    return out;
}

// ---------------------------------------------------------------------------
// Random forest with per-split feature subsampling and majority-vote
// probabilities.
// ---------------------------------------------------------------------------

namespace {

struct ForestBuildNode {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::array<double, 3> counts{};
    int tree_node = -1;
    int depth = 0;
};

double weighted_gini(const std::array<double, 3>& counts) {
    const double n = counts[0] + counts[1] + counts[2];
    if (n <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : counts) s += c * c;
    return n - s / n;  // n * gini impurity
}

int majority_class(const std::array<double, 3>& counts) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (counts[static_cast<std::size_t>(k)] > counts[static_cast<std::size_t>(best)]) best = k;
    return best;
}

Tree build_forest_tree(const Binner& binner, const std::vector<int>& labels,
                       const ForestParams& params, std::uint64_t tree_seed) {
    Rng rng(tree_seed);
    const std::size_t n = binner.n_rows;
    const std::size_t nf = binner.n_cols;

    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    std::sort(rows.begin(), rows.end());
    std::vector<std::size_t> rows_tmp(n);

    const auto m_feats = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(nf)))));
    std::vector<std::size_t> perm(nf);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> feats(m_feats);

    Tree tree;
    tree.klass = 0;
    tree.nodes.push_back(TreeNode{});

    std::array<double, 3> root_counts{};
    for (std::size_t r : rows) root_counts[static_cast<std::size_t>(labels[r])] += 1.0;
    tree.nodes[0].cover = static_cast<double>(n);

    std::vector<ForestBuildNode> stack = {{0, n, root_counts, 0, 0}};
    while (!stack.empty()) {
        const ForestBuildNode node = stack.back();
        stack.pop_back();
        const std::size_t count = node.end - node.begin;
        TreeNode& tn = tree.nodes[static_cast<std::size_t>(node.tree_node)];

        const bool pure = node.counts[0] == static_cast<double>(count) ||
                          node.counts[1] == static_cast<double>(count) ||
                          node.counts[2] == static_cast<double>(count);
        if (node.depth >= params.max_depth || pure ||
            count < 2 * static_cast<std::size_t>(params.min_samples_leaf)) {
            tn.value = static_cast<double>(majority_class(node.counts));
            continue;
        }

        // Per-split feature subsample via partial Fisher-Yates.
        for (std::size_t i = 0; i < m_feats; ++i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(nf) - 1));
            std::swap(perm[i], perm[j]);
            feats[i] = perm[i];
        }
        std::sort(feats.begin(), feats.end());

        double best_impurity = weighted_gini(node.counts);
        int best_f = -1, best_bin = -1;
        std::array<double, 3> best_left{};
        double hist[256][3];
        for (std::size_t f : feats) {
            const int bins = binner.bin_count(f);
            if (bins < 2) continue;
            for (int b = 0; b < bins; ++b) hist[b][0] = hist[b][1] = hist[b][2] = 0.0;
            const std::uint8_t* codes = binner.col(f);
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t r = rows[i];
                hist[codes[r]][static_cast<std::size_t>(labels[r])] += 1.0;
            }
            std::array<double, 3> left{};
            for (int b = 0; b + 1 < bins; ++b) {
                for (int k = 0; k < 3; ++k) left[static_cast<std::size_t>(k)] += hist[b][k];
                const double nl = left[0] + left[1] + left[2];
                const double nr = static_cast<double>(count) - nl;
                if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
                std::array<double, 3> right = {node.counts[0] - left[0], node.counts[1] - left[1],
                                               node.counts[2] - left[2]};
                const double impurity = weighted_gini(left) + weighted_gini(right);
                if (impurity < best_impurity - 1e-12) {
                    best_impurity = impurity;
                    best_f = static_cast<int>(f);
                    best_bin = b;
                    best_left = left;
                }
            }
        }
        if (best_f < 0) {
            tn.value = static_cast<double>(majority_class(node.counts));
            continue;
        }

        const std::uint8_t* codes = binner.col(static_cast<std::size_t>(best_f));
        const auto n_left =
            static_cast<std::size_t>(best_left[0] + best_left[1] + best_left[2]);
        std::size_t left_at = node.begin, right_at = node.begin + n_left;
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const std::size_t r = rows[i];
            if (codes[r] <= best_bin)
                rows_tmp[left_at++] = r;
            else
                rows_tmp[right_at++] = r;
        }
        std::copy(rows_tmp.begin() + static_cast<std::ptrdiff_t>(node.begin),
                  rows_tmp.begin() + static_cast<std::ptrdiff_t>(node.end),
                  rows.begin() + static_cast<std::ptrdiff_t>(node.begin));

        tn.feature = best_f;
        tn.threshold =
            binner.cuts[static_cast<std::size_t>(best_f)][static_cast<std::size_t>(best_bin)];
        tn.left = static_cast<int>(tree.nodes.size());
        tn.right = tn.left + 1;
        TreeNode left_node, right_node;
        left_node.cover = static_cast<double>(n_left);
        right_node.cover = static_cast<double>(count - n_left);
        tree.nodes.push_back(left_node);
        tree.nodes.push_back(right_node);
        std::array<double, 3> right_counts = {node.counts[0] - best_left[0],
                                              node.counts[1] - best_left[1],
                                              node.counts[2] - best_left[2]};
        stack.push_back({node.begin, node.begin + n_left, best_left, tn.left, node.depth + 1});
        stack.push_back({node.begin + n_left, node.end, right_counts, tn.right, node.depth + 1});
    }
    return tree;
}

}  // namespace

ForestModel train_forest(const FeatureMatrix& X, const ForestParams& params) {
    if (X.n_rows < 2) raise(ErrorCode::InvalidArgument, "training requires at least two rows");
    const int threads = resolve_threads(params.threads);
    const Binner binner = Binner::build(X, params.n_histogram_bins, threads);

    ForestModel model;
    model.n_features = static_cast<int>(X.n_cols);
    model.trees.resize(static_cast<std::size_t>(params.n_trees));
    parallel_for(static_cast<std::size_t>(params.n_trees), threads, [&](std::size_t t) {
        model.trees[t] = build_forest_tree(
            binner, X.labels, params, derive_seed(params.seed, "forest-tree-" + std::to_string(t)));
    });
    return model;
}

OutcomeProbabilities ForestModel::predict_proba(const std::vector<double>& row) const {
    if (static_cast<int>(row.size()) != n_features)
        raise(ErrorCode::InvalidArgument, "forest model expects " + std::to_string(n_features) +
                                              " features, got " + std::to_string(row.size()));
    std::array<double, 3> votes{};
    for (const auto& t : trees)
        votes[static_cast<std::size_t>(static_cast<int>(t.evaluate(row.data())))] += 1.0;
    OutcomeProbabilities out;
    const auto n = static_cast<double>(trees.size());
    for (int k = 0; k < 3; ++k) out.p[static_cast<std::size_t>(k)] = votes[static_cast<std::size_t>(k)] / n;
    return out;
}

}  // namespace litpred
