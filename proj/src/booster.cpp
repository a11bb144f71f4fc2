// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <algorithm>
#include <cmath>
#include <numeric>

#include "binner.hpp"
#include "litpred/model.hpp"

namespace litpred {

void BoosterParams::validate() const {
    if (n_rounds < 1) raise(ErrorCode::InvalidArgument, "n_rounds must be >= 1");
    if (max_depth < 1) raise(ErrorCode::InvalidArgument, "max_depth must be >= 1");
    if (learning_rate <= 0.0) raise(ErrorCode::InvalidArgument, "learning_rate must be > 0");
    if (row_subsample <= 0.0 || row_subsample > 1.0)
        raise(ErrorCode::InvalidArgument, "row_subsample must be in (0, 1]");
    if (col_subsample_per_tree <= 0.0 || col_subsample_per_tree > 1.0)
        raise(ErrorCode::InvalidArgument, "col_subsample_per_tree must be in (0, 1]");
    if (min_child_hessian < 0.0)
        raise(ErrorCode::InvalidArgument, "min_child_hessian must be >= 0");
    if (n_histogram_bins < 2 || n_histogram_bins > 256)
        raise(ErrorCode::InvalidArgument, "n_histogram_bins must be in [2, 256]");
    if (l2_leaf_penalty < 0.0) raise(ErrorCode::InvalidArgument, "l2_leaf_penalty must be >= 0");
}

std::array<double, 3> softmax3(const std::array<double, 3>& margins) {
    const double m = std::max({margins[0], margins[1], margins[2]});
    std::array<double, 3> e = {std::exp(margins[0] - m), std::exp(margins[1] - m),
                               std::exp(margins[2] - m)};
    const double s = e[0] + e[1] + e[2];
    return {e[0] / s, e[1] / s, e[2] / s};
}

SoftmaxGradHess softmax_grad_hess(const std::array<double, 3>& margins, Outcome label) {
    for (double m : margins)
        if (!std::isfinite(m) && m > 0)
            raise(ErrorCode::InvalidArgument, "softmax_grad_hess requires finite margins");
    const auto p = softmax3(margins);
    SoftmaxGradHess out;
    for (int k = 0; k < 3; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        out.grad[ks] = p[ks] - (k == static_cast<int>(label) ? 1.0 : 0.0);
        out.hess[ks] = p[ks] * (1.0 - p[ks]);
    }
    return out;
}

double Tree::expected_value() const {
    // Cover-weighted mean of leaf values, computed bottom-up.
    std::vector<double> exp_val(nodes.size(), 0.0);
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const TreeNode& n = nodes[i];
        if (n.feature < 0) {
            exp_val[i] = n.value;
        } else {
            const double cl = nodes[static_cast<std::size_t>(n.left)].cover;
            const double cr = nodes[static_cast<std::size_t>(n.right)].cover;
            const double total = cl + cr;
            exp_val[i] = total > 0.0
                             ? (cl * exp_val[static_cast<std::size_t>(n.left)] +
                                cr * exp_val[static_cast<std::size_t>(n.right)]) /
                                   total
                             : 0.0;
        }
    }
    return exp_val.empty() ? 0.0 : exp_val[0];
}

std::array<double, 3> Ensemble::predict_margins(const double* row) const {
    std::array<double, 3> m = base_scores;
    for (const auto& t : trees) m[static_cast<std::size_t>(t.klass)] += t.evaluate(row);
    return m;
}

OutcomeProbabilities Ensemble::predict_proba(const std::vector<double>& row) const {
    OutcomeProbabilities out;
    out.p = softmax3(predict_margins(row.data()));
    return out;
}

int Ensemble::predict_class(const std::vector<double>& row) const {
    return predict_proba(row).argmax();
}

std::array<double, 3> Ensemble::expected_margins() const {
    std::array<double, 3> m = base_scores;
    for (const auto& t : trees) m[static_cast<std::size_t>(t.klass)] += t.expected_value();
    return m;
}

namespace {

struct SplitCandidate {
    double gain = 0.0;
    int bin = -1;
    double grad_left = 0.0;
    double hess_left = 0.0;
    double count_left = 0.0;
    bool valid = false;
};

struct BuildNode {
    std::size_t begin = 0;
    std::size_t end = 0;
    double grad_sum = 0.0;
    double hess_sum = 0.0;
    int tree_node = -1;
};

double leaf_weight(double g, double h, double lambda) { return -g / (h + lambda); }

double split_score(double g, double h, double lambda) { return g * g / (h + lambda); }

}  // namespace

Ensemble train_gbdt(const FeatureMatrix& X, const BoosterParams& params,
                    std::uint64_t schema_fingerprint,
                    std::vector<double>* train_loss_per_round) {
    params.validate();
    const std::size_t n = X.n_rows;
    const std::size_t nf = X.n_cols;
    if (n < 2) raise(ErrorCode::InvalidArgument, "training requires at least two rows");

    std::array<std::size_t, 3> class_counts = {0, 0, 0};
    for (int y : X.labels) {
        if (y < 0 || y > 2) raise(ErrorCode::InvalidArgument, "labels must be in {0, 1, 2}");
        ++class_counts[static_cast<std::size_t>(y)];
    }
    {
        int present = 0;
        int the_class = 0;
        for (int k = 0; k < 3; ++k)
            if (class_counts[static_cast<std::size_t>(k)] > 0) {
                ++present;
                the_class = k;
            }
        if (present < 2)
            raise(ErrorCode::InvalidArgument,
                  std::string("degenerate training input: every label is '") +
                      outcome_name(static_cast<Outcome>(the_class)) + "'");
    }

    Ensemble model;
    model.params = params;
    model.params.threads = 0;  // normalized: thread count never affects the artifact
    model.schema_fingerprint = schema_fingerprint;
    for (int k = 0; k < 3; ++k) {
        const double prior =
            static_cast<double>(class_counts[static_cast<std::size_t>(k)]) / static_cast<double>(n);
        model.base_scores[static_cast<std::size_t>(k)] = std::log(std::max(prior, 1e-300));
    }

    const int threads = resolve_threads(params.threads);
    const Binner binner = Binner::build(X, params.n_histogram_bins, threads);

    // Round-major margins; class-major gradient arrays for contiguous access.
    std::vector<double> margins(n * 3);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < 3; ++k) margins[r * 3 + k] = model.base_scores[k];
    std::array<std::vector<double>, 3> grad, hess;
    for (auto& v : grad) v.resize(n);
    for (auto& v : hess) v.resize(n);

    Rng rng(derive_seed(params.seed, "gbdt-train"));
    std::vector<std::size_t> row_perm(n), col_perm(nf);
    std::iota(row_perm.begin(), row_perm.end(), 0);
    std::iota(col_perm.begin(), col_perm.end(), 0);

    const auto n_sub = std::max<std::size_t>(
        1, static_cast<std::size_t>(params.row_subsample * static_cast<double>(n)));
    const auto f_sub = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(params.col_subsample_per_tree * static_cast<double>(nf))));

    std::vector<std::size_t> rows(n_sub), rows_tmp(n_sub);
    std::vector<std::size_t> feats(f_sub);

    model.trees.reserve(static_cast<std::size_t>(params.n_rounds) * 3);

    for (int round = 0; round < params.n_rounds; ++round) {
        // Gradients at the current margins, for every row.
        parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
            std::array<double, 3> m{};
            for (std::size_t r = begin; r < end; ++r) {
                for (std::size_t k = 0; k < 3; ++k) m[k] = margins[r * 3 + k];
                const auto p = softmax3(m);
                const auto y = static_cast<std::size_t>(X.labels[r]);
                for (std::size_t k = 0; k < 3; ++k) {
                    grad[k][r] = p[k] - (k == y ? 1.0 : 0.0);
                    hess[k][r] = p[k] * (1.0 - p[k]);
                }
            }
        });

        if (n_sub < n) {
            rng.shuffle(row_perm);
            std::copy(row_perm.begin(), row_perm.begin() + static_cast<std::ptrdiff_t>(n_sub),
                      rows.begin());
            std::sort(rows.begin(), rows.end());
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }

        for (int klass = 0; klass < 3; ++klass) {
            if (f_sub < nf) {
                rng.shuffle(col_perm);
                std::copy(col_perm.begin(), col_perm.begin() + static_cast<std::ptrdiff_t>(f_sub),
                          feats.begin());
                std::sort(feats.begin(), feats.end());
            } else {
                std::iota(feats.begin(), feats.end(), 0);
            }

            const std::vector<double>& g = grad[static_cast<std::size_t>(klass)];
            const std::vector<double>& h = hess[static_cast<std::size_t>(klass)];

            Tree tree;
            tree.klass = klass;
            std::vector<int> split_bin;  // aligned with tree.nodes

            // Node histograms: per feature slot, [g 256][h 256][count 256].
            const std::size_t hist_stride = 3 * 256;
            const std::size_t hist_size = feats.size() * hist_stride;
            auto build_hist = [&](std::size_t begin, std::size_t end, std::vector<double>& hist) {
                hist.assign(hist_size, 0.0);
                parallel_blocks(feats.size(), threads, [&](std::size_t fb, std::size_t fe) {
                    for (std::size_t fi = fb; fi < fe; ++fi) {
                        const std::uint8_t* codes = binner.col(feats[fi]);
                        double* hg = hist.data() + fi * hist_stride;
                        double* hh = hg + 256;
                        double* hc = hh + 256;
                        for (std::size_t i = begin; i < end; ++i) {
                            const std::size_t r = rows[i];
                            const std::uint8_t b = codes[r];
                            hg[b] += g[r];
                            hh[b] += h[r];
                            hc[b] += 1.0;
                        }
                    }
                });
            };

            double g_root = 0.0, h_root = 0.0;
            for (std::size_t r : rows) {
                g_root += g[r];
                h_root += h[r];
            }
            tree.nodes.push_back(TreeNode{});
            tree.nodes[0].cover = static_cast<double>(rows.size());
            split_bin.push_back(-1);

            struct HistNode {
                BuildNode node;
                std::vector<double> hist;
            };
            std::vector<HistNode> level(1);
            level[0].node = {0, rows.size(), g_root, h_root, 0};
            build_hist(0, rows.size(), level[0].hist);

            for (int depth = 0; depth < params.max_depth && !level.empty(); ++depth) {
                const bool children_split = depth + 1 < params.max_depth;
                std::vector<HistNode> next_level;
                for (HistNode& hn : level) {
                    const BuildNode& node = hn.node;
                    const std::size_t count = node.end - node.begin;
                    const double parent_score =
                        split_score(node.grad_sum, node.hess_sum, params.l2_leaf_penalty);

                    int best_f = -1;
                    SplitCandidate best;
                    for (std::size_t fi = 0; fi < feats.size(); ++fi) {
                        const int bins = binner.bin_count(feats[fi]);
                        if (bins < 2) continue;
                        const double* hg = hn.hist.data() + fi * hist_stride;
                        const double* hh = hg + 256;
                        const double* hc = hh + 256;
                        double gl = 0.0, hl = 0.0, cl = 0.0;
                        for (int b = 0; b + 1 < bins; ++b) {
                            gl += hg[b];
                            hl += hh[b];
                            cl += hc[b];
                            const double gr = node.grad_sum - gl;
                            const double hr = node.hess_sum - hl;
                            if (hl < params.min_child_hessian || hr < params.min_child_hessian)
                                continue;
                            const double gain =
                                0.5 * (split_score(gl, hl, params.l2_leaf_penalty) +
                                       split_score(gr, hr, params.l2_leaf_penalty) - parent_score);
                            if (gain > 0.0 && (best_f < 0 || gain > best.gain)) {
                                best = {gain, b, gl, hl, cl, true};
                                best_f = static_cast<int>(feats[fi]);
                            }
                        }
                    }

                    TreeNode& tn = tree.nodes[static_cast<std::size_t>(node.tree_node)];
                    if (best_f < 0) {
                        tn.value = leaf_weight(node.grad_sum, node.hess_sum,
                                               params.l2_leaf_penalty) *
                                   params.learning_rate;
                        continue;
                    }

                    // Stable partition keeps row order inside both children.
                    const std::uint8_t* codes = binner.col(static_cast<std::size_t>(best_f));
                    const auto n_left = static_cast<std::size_t>(best.count_left);
                    std::size_t left_at = node.begin;
                    std::size_t right_at = node.begin + n_left;
                    for (std::size_t i = node.begin; i < node.end; ++i) {
                        const std::size_t r = rows[i];
                        if (codes[r] <= best.bin)
                            rows_tmp[left_at++] = r;
                        else
                            rows_tmp[right_at++] = r;
                    }
                    std::copy(rows_tmp.begin() + static_cast<std::ptrdiff_t>(node.begin),
                              rows_tmp.begin() + static_cast<std::ptrdiff_t>(node.end),
                              rows.begin() + static_cast<std::ptrdiff_t>(node.begin));

                    tn.feature = best_f;
                    tn.threshold = binner.cuts[static_cast<std::size_t>(best_f)]
                                              [static_cast<std::size_t>(best.bin)];
                    tn.default_left = true;
                    tn.left = static_cast<int>(tree.nodes.size());
                    tn.right = tn.left + 1;
                    split_bin[static_cast<std::size_t>(node.tree_node)] = best.bin;

                    TreeNode left_node, right_node;
                    left_node.cover = best.count_left;
                    right_node.cover = static_cast<double>(count) - best.count_left;
                    tree.nodes.push_back(left_node);
                    split_bin.push_back(-1);
                    tree.nodes.push_back(right_node);
                    split_bin.push_back(-1);

                    HistNode left_child, right_child;
                    left_child.node = {node.begin, node.begin + n_left, best.grad_left,
                                       best.hess_left, tn.left};
                    right_child.node = {node.begin + n_left, node.end,
                                        node.grad_sum - best.grad_left,
                                        node.hess_sum - best.hess_left, tn.right};
                    if (children_split) {
                        // Build the smaller child's histogram directly; the
                        // sibling's follows by subtraction from the parent.
                        const bool left_smaller = n_left <= count - n_left;
                        HistNode& small = left_smaller ? left_child : right_child;
                        HistNode& large = left_smaller ? right_child : left_child;
                        build_hist(small.node.begin, small.node.end, small.hist);
                        large.hist = std::move(hn.hist);
                        for (std::size_t i = 0; i < hist_size; ++i)
                            large.hist[i] -= small.hist[i];
                    }
                    next_level.push_back(std::move(left_child));
                    next_level.push_back(std::move(right_child));
                }
                level = std::move(next_level);
            }
            // Remaining frontier nodes become leaves.
            for (const HistNode& hn : level) {
                TreeNode& tn = tree.nodes[static_cast<std::size_t>(hn.node.tree_node)];
                tn.value =
                    leaf_weight(hn.node.grad_sum, hn.node.hess_sum, params.l2_leaf_penalty) *
                    params.learning_rate;
            }

            // Update margins for every row using binned traversal.
            parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t r = begin; r < end; ++r) {
                    int at = 0;
                    while (tree.nodes[static_cast<std::size_t>(at)].feature >= 0) {
                        const auto& tn = tree.nodes[static_cast<std::size_t>(at)];
                        const auto f = static_cast<std::size_t>(tn.feature);
                        at = binner.col(f)[r] <=
                                     split_bin[static_cast<std::size_t>(at)]
                                 ? tn.left
                                 : tn.right;
                    }
                    margins[r * 3 + static_cast<std::size_t>(klass)] +=
                        tree.nodes[static_cast<std::size_t>(at)].value;
                }
            });

            model.trees.push_back(std::move(tree));
        }

        if (train_loss_per_round) {
            double loss = 0.0;
            std::array<double, 3> m{};
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t k = 0; k < 3; ++k) m[k] = margins[r * 3 + k];
                const auto p = softmax3(m);
                loss -= std::log(std::max(p[static_cast<std::size_t>(X.labels[r])], 1e-300));
            }
            train_loss_per_round->push_back(loss / static_cast<double>(n));
        }
    }
    return model;
}

}  // namespace litpred
