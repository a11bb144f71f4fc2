// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace litpred {

StandardizeStats standardize(std::vector<double>& column) {
    if (column.empty()) raise(ErrorCode::InvalidArgument, "standardize: empty column");
    StandardizeStats s;
    for (double v : column) s.mean += v;
    s.mean /= static_cast<double>(column.size());
    double var = 0.0;
    for (double v : column) var += (v - s.mean) * (v - s.mean);
    var /= static_cast<double>(column.size());
    s.sd = std::sqrt(var);
    if (s.sd <= 0.0)
        raise(ErrorCode::InvalidArgument, "standardize: column is constant");
    apply_standardize(column, s);
    return s;
}

void apply_standardize(std::vector<double>& column, const StandardizeStats& stats) {
    for (double& v : column) v = (v - stats.mean) / stats.sd;
}

void invert_standardize(std::vector<double>& column, const StandardizeStats& stats) {
    for (double& v : column) v = v * stats.sd + stats.mean;
}

OlsClusteredResult ols_clustered(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const std::vector<std::string>& cluster_ids,
                                 const std::vector<std::string>& names) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (y.size() != n || static_cast<Eigen::Index>(cluster_ids.size()) != n)
        raise(ErrorCode::InvalidArgument, "ols_clustered: dimension mismatch");
    if (static_cast<Eigen::Index>(names.size()) != k)
        raise(ErrorCode::InvalidArgument, "ols_clustered: one name per column required");
    if (n <= k) raise(ErrorCode::InvalidArgument, "ols_clustered: need more rows than columns");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        const auto perm = qr.colsPermutation().indices();
        std::string collinear;
        for (Eigen::Index i = qr.rank(); i < k; ++i) {
            if (!collinear.empty()) collinear += ", ";
            collinear += names[static_cast<std::size_t>(perm[i])];
        }
        raise(ErrorCode::InvalidArgument,
              "ols_clustered: design matrix is rank deficient; collinear columns: " + collinear);
    }

    OlsClusteredResult r;
    r.names = names;
    r.n_obs = static_cast<std::size_t>(n);
    r.beta = qr.solve(y);
    const Eigen::VectorXd residuals = y - X * r.beta;

    const double y_mean = y.mean();
    const double sst = (y.array() - y_mean).square().sum();
    const double ssr = residuals.squaredNorm();
    r.r2 = sst > 0.0 ? 1.0 - ssr / sst : 0.0;

    // Cluster sums in ascending cluster-id order.
    std::map<std::string, std::vector<Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < n; ++i)
        clusters[cluster_ids[static_cast<std::size_t>(i)]].push_back(i);
    r.n_clusters = clusters.size();
    if (r.n_clusters < 2)
        raise(ErrorCode::InvalidArgument, "ols_clustered: need at least 2 clusters");

    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd xg(k);
    for (const auto& [id, rows] : clusters) {
        (void)id;
        xg.setZero();
        for (Eigen::Index i : rows) xg += X.row(i).transpose() * residuals[i];
        meat.noalias() += xg * xg.transpose();
    }

    const auto G = static_cast<double>(r.n_clusters);
    const auto N = static_cast<double>(n);
    const auto K = static_cast<double>(k);
    const double correction = (G / (G - 1.0)) * ((N - 1.0) / (N - K));

    const Eigen::MatrixXd xtx = X.transpose() * X;
    const auto ldlt = xtx.ldlt();
    const Eigen::MatrixXd half = ldlt.solve(meat);
    const Eigen::MatrixXd cov = correction * ldlt.solve(half.transpose()).transpose();

    r.se.resize(k);
    r.t.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        r.se[i] = std::sqrt(std::max(0.0, cov(i, i)));
        r.t[i] = r.se[i] > 0.0 ? r.beta[i] / r.se[i] : 0.0;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Complexity regression
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> levels_with_reference_first(const std::set<std::string>& levels,
                                                     const std::string& preferred_reference) {
    std::vector<std::string> out(levels.begin(), levels.end());
    const auto it = std::find(out.begin(), out.end(), preferred_reference);
    if (it != out.end()) {
        out.erase(it);
        out.insert(out.begin(), preferred_reference);
    }
    return out;  // first element is the omitted reference
}

}  // namespace

ComplexityRegressionResult run_complexity_regression(const std::vector<RegressionRow>& rows) {
    std::vector<const RegressionRow*> usable;
    usable.reserve(rows.size());
    for (const auto& r : rows)
        if (!r.knn10_missing) usable.push_back(&r);
    if (usable.size() < 10)
        raise(ErrorCode::InvalidArgument,
              "complexity regression needs at least 10 usable rows, got " +
                  std::to_string(usable.size()));

    ComplexityRegressionResult out;
    out.n_dropped_missing = rows.size() - usable.size();

    std::set<std::string> jur, ct, pt, dt;
    for (const auto* r : usable) {
        jur.insert(r->jurisdiction);
        ct.insert(r->case_type);
        pt.insert(r->plaintiff_type);
        dt.insert(r->defendant_type);
    }
    const auto jur_levels = levels_with_reference_first(jur, *jur.begin());
    const auto ct_levels = levels_with_reference_first(ct, "bankruptcy");
    const auto pt_levels = levels_with_reference_first(pt, "corporate");
    const auto dt_levels = levels_with_reference_first(dt, "corporate");
    out.reference_jurisdiction = jur_levels.front();
    out.reference_case_type = ct_levels.front();
    out.reference_plaintiff_type = pt_levels.front();
    out.reference_defendant_type = dt_levels.front();

    const auto n = static_cast<Eigen::Index>(usable.size());

    // Dependent and numeric covariates in standard-deviation units.
    auto standardized = [&](auto getter, const std::string& label,
                            std::vector<double>& col) -> bool {
        col.resize(usable.size());
        for (std::size_t i = 0; i < usable.size(); ++i) col[i] = getter(*usable[i]);
        try {
            standardize(col);
            return true;
        } catch (const Error&) {
            out.dropped_constant.push_back(label);
            return false;
        }
    };

    std::vector<double> dep;
    if (!standardized([](const RegressionRow& r) { return r.complexity; }, "complexity", dep))
        raise(ErrorCode::InvalidArgument, "complexity regression: dependent variable is constant");

    struct NumericCol {
        std::string name;
        std::vector<double> values;
    };
    std::vector<NumericCol> numerics;
    const std::vector<std::pair<std::string, double (*)(const RegressionRow&)>> numeric_defs = {
        {"n_plaintiffs", [](const RegressionRow& r) { return r.n_plaintiffs; }},
        {"n_defendants", [](const RegressionRow& r) { return r.n_defendants; }},
        {"log_duration", [](const RegressionRow& r) { return r.log_duration; }},
        {"knn10_win_rate", [](const RegressionRow& r) { return r.knn10_win_rate; }},
    };
    for (const auto& [label, getter] : numeric_defs) {
        NumericCol col;
        col.name = label;
        if (standardized(getter, label, col.values)) numerics.push_back(std::move(col));
    }

    struct FactorBlock {
        std::string name;
        const std::vector<std::string>* levels;
        std::string (*get)(const RegressionRow&);
    };
    const std::vector<FactorBlock> factors = {
        {"jurisdiction", &jur_levels, [](const RegressionRow& r) { return r.jurisdiction; }},
        {"case_type", &ct_levels, [](const RegressionRow& r) { return r.case_type; }},
        {"plaintiff_type", &pt_levels, [](const RegressionRow& r) { return r.plaintiff_type; }},
        {"defendant_type", &dt_levels, [](const RegressionRow& r) { return r.defendant_type; }},
    };

    std::vector<std::string> names = {"intercept"};
    std::vector<std::string> blocks = {"intercept"};
    for (const auto& f : factors)
        for (std::size_t l = 1; l < f.levels->size(); ++l) {
            names.push_back(f.name + "=" + (*f.levels)[l]);
            blocks.push_back(f.name);
        }
    for (const auto& c : numerics) {
        names.push_back(c.name);
        blocks.push_back("numeric");
    }

    const auto k = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, k);
    Eigen::VectorXd y(n);
    std::vector<std::string> cluster_ids(usable.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto is = static_cast<std::size_t>(i);
        const RegressionRow& r = *usable[is];
        y[i] = dep[is];
        cluster_ids[is] = r.cluster_id;
        Eigen::Index at = 0;
        X(i, at++) = 1.0;
        for (const auto& f : factors) {
            const std::string v = f.get(r);
            for (std::size_t l = 1; l < f.levels->size(); ++l)
                X(i, at++) = v == (*f.levels)[l] ? 1.0 : 0.0;
        }
        for (const auto& c : numerics) X(i, at++) = c.values[is];
    }

    const auto ols = ols_clustered(X, y, cluster_ids, names);
    out.r2 = ols.r2;
    out.n_obs = ols.n_obs;
    out.n_clusters = ols.n_clusters;
    for (std::size_t i = 0; i < names.size(); ++i)
        out.terms.push_back({names[i], blocks[i], ols.beta[static_cast<Eigen::Index>(i)],
                             ols.se[static_cast<Eigen::Index>(i)],
                             ols.t[static_cast<Eigen::Index>(i)]});
    return out;
}

std::string ComplexityRegressionResult::csv() const {
    std::string out = "term,block,beta,se,t\n";
    for (const auto& t : terms) {
        out += t.name;
        out += ',' + t.block;
        out += ',' + format_double(t.beta);
        out += ',' + format_double(t.se);
        out += ',' + format_double(t.t);
        out += '\n';
    }
    out += "r2,,," + format_double(r2) + ",\n";
    out += "n_obs,,," + std::to_string(n_obs) + ",\n";
    out += "n_clusters,,," + std::to_string(n_clusters) + ",\n";
    return out;
}

std::string ComplexityRegressionResult::text() const {
    auto line = [](const std::string& name, double beta, double se, double t) {
        char buf[160];
        const char* stars = std::abs(t) > 3.29 ? "***" : std::abs(t) > 2.58 ? "**"
                                                 : std::abs(t) > 1.96       ? "*"
                                                                            : "";
        std::snprintf(buf, sizeof(buf), "  %-42s %10.4f  (%.4f)%s\n", name.c_str(), beta, se,
                      stars);
        return std::string(buf);
    };
    std::string out = "Determinants of predictive complexity\n";
    out += "(standardized dependent variable; cluster-robust SEs in parentheses)\n\n";
    std::string current_block;
    for (const auto& t : terms) {
        if (t.block != current_block) {
            current_block = t.block;
            if (current_block == "intercept") {
                out += "Intercept\n";
            } else if (current_block == "numeric") {
                out += "Numeric covariates (standard-deviation units)\n";
            } else {
                std::string ref;
                if (current_block == "jurisdiction") ref = reference_jurisdiction;
                if (current_block == "case_type") ref = reference_case_type;
                if (current_block == "plaintiff_type") ref = reference_plaintiff_type;
                if (current_block == "defendant_type") ref = reference_defendant_type;
                out += current_block + " (reference: " + ref + ")\n";
            }
        }
        out += line(t.name, t.beta, t.se, t.t);
    }
    char tail[160];
    std::snprintf(tail, sizeof(tail),
                  "\nR^2 = %.4f   N = %zu documents   clusters = %zu cases\n", r2, n_obs,
                  n_clusters);
    out += tail;
    out += "significance: * |t|>1.96, ** |t|>2.58, *** |t|>3.29\n";
    return out;
}

}  // namespace litpred
