// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <algorithm>
#include <array>
#include <cmath>

#include "litpred/model.hpp"

namespace litpred {

namespace {

// Polynomial-time exact Shapley values for one tree, conditioning on the
// tree-path cover distribution. Path bookkeeping follows the classic
// EXTEND / UNWIND formulation; each recursion level owns one arena slice.

constexpr int kMaxPath = 24;

struct PathElement {
    int feature_index = -1;
    double zero_fraction = 0.0;
    double one_fraction = 0.0;
    double pweight = 0.0;
};

void extend_path(PathElement* path, int depth, double zero_fraction, double one_fraction,
                 int feature_index) {
    path[depth] = {feature_index, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
    for (int i = depth - 1; i >= 0; --i) {
        path[i + 1].pweight +=
            one_fraction * path[i].pweight * (i + 1) / static_cast<double>(depth + 1);
        path[i].pweight *= zero_fraction * (depth - i) / static_cast<double>(depth + 1);
    }
}

void unwind_path(PathElement* path, int depth, int path_index) {
    const double one_fraction = path[path_index].one_fraction;
    const double zero_fraction = path[path_index].zero_fraction;
    double next_one_portion = path[depth].pweight;
    for (int i = depth - 1; i >= 0; --i) {
        if (one_fraction != 0.0) {
            const double tmp = path[i].pweight;
            path[i].pweight =
                next_one_portion * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
            next_one_portion =
                tmp - path[i].pweight * zero_fraction * (depth - i) / static_cast<double>(depth + 1);
        } else {
            path[i].pweight = path[i].pweight * (depth + 1) / (zero_fraction * (depth - i));
        }
    }
    for (int i = path_index; i < depth; ++i) {
        path[i].feature_index = path[i + 1].feature_index;
        path[i].zero_fraction = path[i + 1].zero_fraction;
        path[i].one_fraction = path[i + 1].one_fraction;
    }
}

double unwound_path_sum(const PathElement* path, int depth, int path_index) {
    const double one_fraction = path[path_index].one_fraction;
    const double zero_fraction = path[path_index].zero_fraction;
    double next_one_portion = path[depth].pweight;
    double total = 0.0;
    for (int i = depth - 1; i >= 0; --i) {
        if (one_fraction != 0.0) {
            const double tmp =
                next_one_portion * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
            total += tmp;
            next_one_portion =
                path[i].pweight - tmp * zero_fraction * (depth - i) / static_cast<double>(depth + 1);
        } else if (zero_fraction != 0.0) {
            total += path[i].pweight / zero_fraction * (depth + 1) / static_cast<double>(depth - i);
        }
    }
    return total;
}

void shap_recurse(const Tree& tree, const double* row, int node_index, PathElement* arena,
                  int level, const PathElement* parent_path, int parent_depth,
                  double parent_zero_fraction, double parent_one_fraction,
                  int parent_feature_index, double* phi) {
    if ((level + 1) * kMaxPath > kMaxPath * kMaxPath || parent_depth + 2 >= kMaxPath)
        raise(ErrorCode::Internal, "tree too deep for Shapley path buffer");
    PathElement* path = arena + level * kMaxPath;
    std::copy(parent_path, parent_path + parent_depth + 1, path);
    int depth = parent_depth + 1;
    extend_path(path, depth, parent_zero_fraction, parent_one_fraction, parent_feature_index);

    const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
    if (node.feature < 0) {
        for (int i = 1; i <= depth; ++i) {
            const double w = unwound_path_sum(path, depth, i);
            phi[path[i].feature_index] +=
                w * (path[i].one_fraction - path[i].zero_fraction) * node.value;
        }
        return;
    }

    const double v = row[node.feature];
    const bool go_left = std::isnan(v) ? node.default_left : v <= node.threshold;
    const int hot = go_left ? node.left : node.right;
    const int cold = go_left ? node.right : node.left;
    const double cover = node.cover;
    const double hot_zero =
        cover > 0.0 ? tree.nodes[static_cast<std::size_t>(hot)].cover / cover : 0.0;
    const double cold_zero =
        cover > 0.0 ? tree.nodes[static_cast<std::size_t>(cold)].cover / cover : 0.0;

    double incoming_zero = 1.0, incoming_one = 1.0;
    int k = 0;
    while (k <= depth && path[k].feature_index != node.feature) ++k;
    if (k <= depth) {
        incoming_zero = path[k].zero_fraction;
        incoming_one = path[k].one_fraction;
        unwind_path(path, depth, k);
        --depth;
    }
    shap_recurse(tree, row, hot, arena, level + 1, path, depth, hot_zero * incoming_zero,
                 incoming_one, node.feature, phi);
    shap_recurse(tree, row, cold, arena, level + 1, path, depth, cold_zero * incoming_zero, 0.0,
                 node.feature, phi);
}

}  // namespace

std::vector<std::array<double, 3>> tree_shap(const Ensemble& ensemble,
                                             const std::vector<double>& row) {
    std::vector<std::array<double, 3>> phi(row.size(), {0.0, 0.0, 0.0});
    std::vector<double> phi_k(row.size());
    std::vector<PathElement> arena(static_cast<std::size_t>(kMaxPath) * kMaxPath);
    const PathElement root_parent{};  // empty path sentinel, never read past depth -1
    for (const auto& tree : ensemble.trees) {
        if (tree.nodes.size() == 1) continue;  // constant tree attributes nothing
        std::fill(phi_k.begin(), phi_k.end(), 0.0);
        shap_recurse(tree, row.data(), 0, arena.data(), 0, &root_parent, -1, 1.0, 1.0, -1,
                     phi_k.data());
        const auto k = static_cast<std::size_t>(tree.klass);
        for (std::size_t f = 0; f < row.size(); ++f) phi[f][k] += phi_k[f];
    }
    return phi;
}

}  // namespace litpred
