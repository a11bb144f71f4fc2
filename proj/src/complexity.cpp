// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace litpred {

const char* complexity_measure_name(ComplexityMeasure m) {
    return m == ComplexityMeasure::Entropy ? "entropy" : "one_minus_max";
}

ComplexityMeasure complexity_measure_from_name(const std::string& name) {
    if (name == "entropy") return ComplexityMeasure::Entropy;
    if (name == "one_minus_max") return ComplexityMeasure::OneMinusMax;
    raise(ErrorCode::InvalidArgument, "unknown complexity measure: " + name);
}

namespace {

void check_distribution(const OutcomeProbabilities& p) {
    double sum = 0.0;
    for (double v : p.p) {
        if (v < -1e-9 || !std::isfinite(v))
            raise(ErrorCode::InvalidArgument, "probabilities must be finite and non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        raise(ErrorCode::InvalidArgument,
              "probabilities must sum to 1 within 1e-6, got " + format_double(sum));
}

}  // namespace

double entropy(const OutcomeProbabilities& p) {
    check_distribution(p);
    double h = 0.0;
    for (double v : p.p)
        if (v > 0.0) h -= v * std::log(v);
    return std::max(0.0, h);
}

double one_minus_max(const OutcomeProbabilities& p) {
    check_distribution(p);
    return 1.0 - std::max({p.p[0], p.p[1], p.p[2]});
}

double complexity_score(ComplexityMeasure m, const OutcomeProbabilities& p) {
    return m == ComplexityMeasure::Entropy ? entropy(p) : one_minus_max(p);
}

std::vector<int> complexity_groups(const std::vector<double>& scores, int n_groups) {
    if (n_groups < 1) raise(ErrorCode::InvalidArgument, "n_groups must be >= 1");
    if (static_cast<std::size_t>(n_groups) > scores.size())
        raise(ErrorCode::InvalidArgument, "n_groups exceeds the sample size");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<int> group(scores.size(), 0);
    const std::size_t n = scores.size();
    const std::size_t g = static_cast<std::size_t>(n_groups);
    const std::size_t base = n / g;
    const std::size_t rem = n % g;
    std::size_t at = 0;
    for (std::size_t gi = 0; gi < g; ++gi) {
        const std::size_t len = base + (gi < rem ? 1 : 0);
        for (std::size_t i = 0; i < len; ++i) group[order[at++]] = static_cast<int>(gi);
    }
    return group;
}

namespace {

struct BinIndexer {
    std::vector<int> group;
    int n_bins;
};

BinIndexer equal_freq_bins(const std::vector<double>& x, int n_bins) {
    BinIndexer b;
    b.n_bins = n_bins;
    b.group = complexity_groups(x, n_bins);
    return b;
}

}  // namespace

BinnedCurve binned_mean_curve(const std::vector<double>& x, const std::vector<double>& y,
                              int n_bins, const std::string& x_name, const std::string& y_name) {
    if (x.size() != y.size()) raise(ErrorCode::InvalidArgument, "binned_mean_curve: length mismatch");
    const auto idx = equal_freq_bins(x, n_bins);
    BinnedCurve curve;
    curve.x_name = x_name;
    curve.y_name = y_name;
    curve.points.resize(static_cast<std::size_t>(n_bins));
    std::vector<double> sum(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n_bins), 0.0);
    for (auto& p : curve.points) {
        p.bin_low = std::numeric_limits<double>::infinity();
        p.bin_high = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto g = static_cast<std::size_t>(idx.group[i]);
        auto& p = curve.points[g];
        ++p.count;
        sum[g] += y[i];
        sumsq[g] += y[i] * y[i];
        p.bin_low = std::min(p.bin_low, x[i]);
        p.bin_high = std::max(p.bin_high, x[i]);
    }
    for (std::size_t g = 0; g < curve.points.size(); ++g) {
        auto& p = curve.points[g];
        if (p.count == 0) {
            p.bin_low = p.bin_high = 0.0;
            continue;
        }
        const auto n = static_cast<double>(p.count);
        p.value = sum[g] / n;
        if (p.count > 1) {
            const double var = std::max(0.0, (sumsq[g] - n * p.value * p.value) / (n - 1.0));
            p.stderr_value = std::sqrt(var / n);
        }
    }
    return curve;
}

BinnedCurve binned_rate_curve(const std::vector<double>& x, const std::vector<int>& indicator,
                              int n_bins, const std::string& x_name, const std::string& y_name) {
    if (x.size() != indicator.size())
        raise(ErrorCode::InvalidArgument, "binned_rate_curve: length mismatch");
    const auto idx = equal_freq_bins(x, n_bins);
    BinnedCurve curve;
    curve.x_name = x_name;
    curve.y_name = y_name;
    curve.points.resize(static_cast<std::size_t>(n_bins));
    std::vector<std::size_t> hits(static_cast<std::size_t>(n_bins), 0);
    for (auto& p : curve.points) {
        p.bin_low = std::numeric_limits<double>::infinity();
        p.bin_high = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto g = static_cast<std::size_t>(idx.group[i]);
        auto& p = curve.points[g];
        ++p.count;
        if (indicator[i]) ++hits[g];
        p.bin_low = std::min(p.bin_low, x[i]);
        p.bin_high = std::max(p.bin_high, x[i]);
    }
    for (std::size_t g = 0; g < curve.points.size(); ++g) {
        auto& p = curve.points[g];
        if (p.count == 0) {
            p.bin_low = p.bin_high = 0.0;
            continue;
        }
        const auto n = static_cast<double>(p.count);
        p.value = static_cast<double>(hits[g]) / n;
        p.stderr_value = std::sqrt(std::max(0.0, p.value * (1.0 - p.value) / n));
    }
    return curve;
}

std::string BinnedCurve::csv() const {
    std::string out = "bin_low,bin_high,count," + y_name + ",stderr\n";
    for (const auto& p : points) {
        out += format_double(p.bin_low);
        out += ',' + format_double(p.bin_high);
        out += ',' + std::to_string(p.count);
        out += ',' + format_double(p.value);
        out += ',' + format_double(p.stderr_value);
        out += '\n';
    }
    return out;
}

DisagreementCurve disagreement_curve(const std::vector<int>& baseline_predictions,
                                     const std::vector<int>& full_predictions,
                                     const std::vector<int>& labels,
                                     const std::vector<double>& scores, int n_groups) {
    const std::size_t n = scores.size();
    if (baseline_predictions.size() != n || full_predictions.size() != n || labels.size() != n)
        raise(ErrorCode::InvalidArgument, "disagreement_curve: length mismatch");
    const auto group = complexity_groups(scores, n_groups);
    DisagreementCurve curve;
    curve.points.resize(static_cast<std::size_t>(n_groups));
    std::vector<std::size_t> disagree(static_cast<std::size_t>(n_groups), 0);
    std::vector<std::size_t> hit_b(static_cast<std::size_t>(n_groups), 0);
    std::vector<std::size_t> hit_f(static_cast<std::size_t>(n_groups), 0);
    std::vector<double> score_sum(static_cast<std::size_t>(n_groups), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = static_cast<std::size_t>(group[i]);
        ++curve.points[g].count;
        if (baseline_predictions[i] != full_predictions[i]) ++disagree[g];
        if (baseline_predictions[i] == labels[i]) ++hit_b[g];
        if (full_predictions[i] == labels[i]) ++hit_f[g];
        score_sum[g] += scores[i];
    }
    for (std::size_t g = 0; g < curve.points.size(); ++g) {
        auto& p = curve.points[g];
        p.group = static_cast<int>(g);
        if (p.count == 0) continue;
        const auto c = static_cast<double>(p.count);
        p.disagreement = static_cast<double>(disagree[g]) / c;
        p.accuracy_baseline = static_cast<double>(hit_b[g]) / c;
        p.accuracy_full = static_cast<double>(hit_f[g]) / c;
        p.mean_score = score_sum[g] / c;
    }
    return curve;
}

std::string DisagreementCurve::csv() const {
    std::string out = "group,count,mean_score,disagreement,accuracy_baseline,accuracy_full\n";
    for (const auto& p : points) {
        out += std::to_string(p.group);
        out += ',' + std::to_string(p.count);
        out += ',' + format_double(p.mean_score);
        out += ',' + format_double(p.disagreement);
        out += ',' + format_double(p.accuracy_baseline);
        out += ',' + format_double(p.accuracy_full);
        out += '\n';
    }
    return out;
}

DurationCurves duration_complexity_curve(const std::vector<double>& scores,
                                         const std::vector<double>& elapsed_days,
                                         const std::vector<double>& doc_ordinals, int n_bins) {
    if (scores.size() != elapsed_days.size() || scores.size() != doc_ordinals.size())
        raise(ErrorCode::InvalidArgument, "duration_complexity_curve: length mismatch");
    std::vector<double> log_days(scores.size()), log_idx(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        log_days[i] = std::log1p(elapsed_days[i]);
        log_idx[i] = std::log(std::max(1.0, doc_ordinals[i]));
    }
    DurationCurves out;
    out.by_log_days = binned_mean_curve(log_days, scores, n_bins, "log_days", "mean_complexity");
    out.by_log_doc_index =
        binned_mean_curve(log_idx, scores, n_bins, "log_doc_index", "mean_complexity");
    return out;
}

SettlementCurves settlement_rate_curve(const std::vector<double>& scores,
                                       const std::vector<double>& elapsed_days,
                                       const std::vector<int>& settled, int n_bins) {
    if (scores.size() != elapsed_days.size() || scores.size() != settled.size())
        raise(ErrorCode::InvalidArgument, "settlement_rate_curve: length mismatch");
    std::vector<double> log_days(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) log_days[i] = std::log1p(elapsed_days[i]);
    SettlementCurves out;
    out.by_score = binned_rate_curve(scores, settled, n_bins, "complexity", "settlement_rate");
    out.by_log_days = binned_rate_curve(log_days, settled, n_bins, "log_days", "settlement_rate");
    return out;
}

SlopeEstimate curve_slope(const BinnedCurve& curve) {
    // Count-weighted least squares through the bin means, x = bin midpoint.
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (const auto& p : curve.points) {
        if (p.count == 0) continue;
        const double w = static_cast<double>(p.count);
        const double x = 0.5 * (p.bin_low + p.bin_high);
        sw += w;
        swx += w * x;
        swy += w * p.value;
    }
    if (sw <= 0.0) return {};
    const double mx = swx / sw, my = swy / sw;
    double sxx = 0.0, sxy = 0.0, var_acc = 0.0;
    for (const auto& p : curve.points) {
        if (p.count == 0) continue;
        const double w = static_cast<double>(p.count);
        const double x = 0.5 * (p.bin_low + p.bin_high);
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (p.value - my);
        var_acc += w * w * (x - mx) * (x - mx) * p.stderr_value * p.stderr_value;
    }
    SlopeEstimate est;
    if (sxx <= 0.0) return est;
    est.slope = sxy / sxx;
    est.stderr_value = std::sqrt(var_acc) / sxx;
    return est;
}

void ImportanceAccumulator::add(const std::vector<std::array<double, 3>>& phi) {
    if (phi.size() != sums_.size())
        raise(ErrorCode::InvalidArgument, "attribution width does not match the accumulator");
    for (std::size_t f = 0; f < phi.size(); ++f)
        sums_[f] += std::abs(phi[f][0]) + std::abs(phi[f][1]) + std::abs(phi[f][2]);
    ++n_docs_;
}

void ImportanceAccumulator::merge(const ImportanceAccumulator& other) {
    if (other.sums_.size() != sums_.size())
        raise(ErrorCode::InvalidArgument, "cannot merge accumulators of different widths");
    for (std::size_t f = 0; f < sums_.size(); ++f) sums_[f] += other.sums_[f];
    n_docs_ += other.n_docs_;
}

ImportanceTable ImportanceAccumulator::finalize(const FeatureSchema& schema) const {
    if (schema.width() != sums_.size())
        raise(ErrorCode::InvalidArgument, "schema width does not match the accumulator");
    ImportanceTable table;
    const double denom = n_docs_ > 0 ? static_cast<double>(n_docs_) * 3.0 : 1.0;
    table.features.resize(sums_.size());
    for (std::size_t f = 0; f < sums_.size(); ++f) {
        table.features[f].name = schema.columns[f].name;
        table.features[f].group = schema.columns[f].group;
        table.features[f].mean_abs_shap = sums_[f] / denom;
        const double v = table.features[f].mean_abs_shap;
        switch (schema.columns[f].group) {
            case FeatureGroup::Basic: table.total_basic += v; break;
            case FeatureGroup::Fact: table.total_fact += v; break;
            case FeatureGroup::Actor: table.total_actor += v; break;
        }
        table.grand_total += v;
    }
    std::stable_sort(table.features.begin(), table.features.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) {
                         return a.mean_abs_shap > b.mean_abs_shap;
                     });
    return table;
}

ImportanceTable shap_importance(const std::vector<std::vector<std::array<double, 3>>>& attributions,
                                const FeatureSchema& schema) {
    if (attributions.empty())
        raise(ErrorCode::InvalidArgument, "shap_importance requires at least one document");
    ImportanceAccumulator acc(schema.width());
    for (const auto& phi : attributions) acc.add(phi);
    return acc.finalize(schema);
}

std::string ImportanceTable::csv() const {
    std::string out = "rank,feature,group,mean_abs_shap\n";
    for (std::size_t i = 0; i < features.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',' + features[i].name;
        out += ',' + std::string(feature_group_name(features[i].group));
        out += ',' + format_double(features[i].mean_abs_shap);
        out += '\n';
    }
    out += "group_total,basic,," + format_double(total_basic) + "\n";
    out += "group_total,fact,," + format_double(total_fact) + "\n";
    out += "group_total,actor,," + format_double(total_actor) + "\n";
    out += "group_total,all,," + format_double(grand_total) + "\n";
    return out;
}

}  // namespace litpred
