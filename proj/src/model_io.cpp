// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <json.hpp>

#include "litpred/model.hpp"

namespace litpred {

using nlohmann::json;

namespace {

json params_to_json(const BoosterParams& p) {
    return {{"n_rounds", p.n_rounds},
            {"max_depth", p.max_depth},
            {"learning_rate", p.learning_rate},
            {"row_subsample", p.row_subsample},
            {"col_subsample_per_tree", p.col_subsample_per_tree},
            {"min_child_hessian", p.min_child_hessian},
            {"n_histogram_bins", p.n_histogram_bins},
            {"l2_leaf_penalty", p.l2_leaf_penalty},
            {"seed", p.seed}};
}

BoosterParams params_from_json(const json& j) {
    BoosterParams p;
    p.n_rounds = j.at("n_rounds").get<int>();
    p.max_depth = j.at("max_depth").get<int>();
    p.learning_rate = j.at("learning_rate").get<double>();
    p.row_subsample = j.at("row_subsample").get<double>();
    p.col_subsample_per_tree = j.at("col_subsample_per_tree").get<double>();
    p.min_child_hessian = j.at("min_child_hessian").get<double>();
    p.n_histogram_bins = j.at("n_histogram_bins").get<int>();
    p.l2_leaf_penalty = j.at("l2_leaf_penalty").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

json trees_to_json(const std::vector<Tree>& trees) {
    json out = json::array();
    for (const auto& t : trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes)
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right,
                                         n.default_left ? 1 : 0, n.cover, n.value}));
        out.push_back({{"class", t.klass}, {"nodes", nodes}});
    }
    return out;
}

std::vector<Tree> trees_from_json(const json& j) {
    std::vector<Tree> trees;
    for (const auto& tj : j) {
        Tree t;
        t.klass = tj.at("class").get<int>();
        for (const auto& nj : tj.at("nodes")) {
            TreeNode n;
            n.feature = nj.at(0).get<int>();
            n.threshold = nj.at(1).get<double>();
            n.left = nj.at(2).get<int>();
            n.right = nj.at(3).get<int>();
            n.default_left = nj.at(4).get<int>() != 0;
            n.cover = nj.at(5).get<double>();
            n.value = nj.at(6).get<double>();
            t.nodes.push_back(n);
        }
        trees.push_back(std::move(t));
    }
    return trees;
}

}  // namespace

std::string Ensemble::to_json() const {
    json j;
    j["format_version"] = 1;
    j["kind"] = "gbdt";
    j["params"] = params_to_json(params);
    j["base_scores"] = base_scores;
    j["schema_fingerprint"] = to_hex(schema_fingerprint);
    j["trees"] = trees_to_json(trees);
    return j.dump() + "\n";
}

Ensemble Ensemble::from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind").get<std::string>() != "gbdt")
        raise(ErrorCode::InvalidArgument, "not a gbdt model file");
    Ensemble e;
    e.params = params_from_json(j.at("params"));
    const auto bs = j.at("base_scores").get<std::vector<double>>();
    for (int k = 0; k < 3; ++k) e.base_scores[static_cast<std::size_t>(k)] = bs.at(static_cast<std::size_t>(k));
    e.schema_fingerprint = std::stoull(j.at("schema_fingerprint").get<std::string>(), nullptr, 16);
    e.trees = trees_from_json(j.at("trees"));
    return e;
}

OutcomeProbabilities ModelHandle::predict_proba(const std::vector<double>& row) const {
    if (kind == "gbdt") return gbdt->predict_proba(row);
    if (kind == "ridge") return ridge->predict_proba(row);
    if (kind == "forest") return forest->predict_proba(row);
    raise(ErrorCode::Internal, "empty model handle");
}

std::string ModelHandle::to_json() const {
    json j;
    j["format_version"] = 1;
    j["kind"] = kind;
    j["schema_fingerprint"] = to_hex(schema_fingerprint);
    j["feature_variant"] = feature_variant_name(variant);
    j["class_priors"] = class_priors;
    if (kind == "gbdt") {
        j["params"] = params_to_json(gbdt->params);
        j["base_scores"] = gbdt->base_scores;
        j["trees"] = trees_to_json(gbdt->trees);
    } else if (kind == "ridge") {
        const auto& m = *ridge;
        json w = json::array();
        for (int k = 0; k < 3; ++k) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.weights.cols(); ++c) row.push_back(m.weights(k, c));
            w.push_back(row);
        }
        j["weights"] = w;
        j["feature_mean"] = m.feature_mean;
        j["feature_scale"] = m.feature_scale;
        j["converged"] = m.converged;
        j["final_grad_norm"] = m.final_grad_norm;
        j["final_objective"] = m.final_objective;
        j["iterations"] = m.iterations;
    } else if (kind == "forest") {
        j["n_features"] = forest->n_features;
        j["trees"] = trees_to_json(forest->trees);
    } else {
        raise(ErrorCode::Internal, "empty model handle");
    }
    return j.dump() + "\n";
}

ModelHandle ModelHandle::from_json(const std::string& text) {
    const json j = json::parse(text);
    ModelHandle h;
    h.kind = j.at("kind").get<std::string>();
    h.schema_fingerprint = std::stoull(j.at("schema_fingerprint").get<std::string>(), nullptr, 16);
    h.variant = feature_variant_from_name(j.at("feature_variant").get<std::string>());
    const auto priors = j.at("class_priors").get<std::vector<double>>();
    for (int k = 0; k < 3; ++k)
        h.class_priors[static_cast<std::size_t>(k)] = priors.at(static_cast<std::size_t>(k));
    if (h.kind == "gbdt") {
        Ensemble e;
        e.params = params_from_json(j.at("params"));
        const auto bs = j.at("base_scores").get<std::vector<double>>();
        for (int k = 0; k < 3; ++k)
            e.base_scores[static_cast<std::size_t>(k)] = bs.at(static_cast<std::size_t>(k));
        e.schema_fingerprint = h.schema_fingerprint;
        e.trees = trees_from_json(j.at("trees"));
        h.gbdt = std::move(e);
    } else if (h.kind == "ridge") {
        RidgeModel m;
        const auto& w = j.at("weights");
        const auto cols = w.at(0).size();
        m.weights.resize(3, static_cast<Eigen::Index>(cols));
        for (int k = 0; k < 3; ++k)
            for (std::size_t c = 0; c < cols; ++c)
                m.weights(k, static_cast<Eigen::Index>(c)) = w.at(static_cast<std::size_t>(k)).at(c).get<double>();
        m.feature_mean = j.at("feature_mean").get<std::vector<double>>();
        m.feature_scale = j.at("feature_scale").get<std::vector<double>>();
        m.converged = j.at("converged").get<bool>();
        m.final_grad_norm = j.at("final_grad_norm").get<double>();
        m.final_objective = j.at("final_objective").get<double>();
        m.iterations = j.at("iterations").get<int>();
        h.ridge = std::move(m);
    } else if (h.kind == "forest") {
        ForestModel m;
        m.n_features = j.at("n_features").get<int>();
        m.trees = trees_from_json(j.at("trees"));
        h.forest = std::move(m);
    } else {
        raise(ErrorCode::InvalidArgument, "unknown model kind: " + h.kind);
    }
    return h;
}

}  // namespace litpred
