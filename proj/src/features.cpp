// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include <json.hpp>

namespace litpred {

using nlohmann::json;

const char* feature_kind_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::Numeric: return "numeric";
        case FeatureKind::Indicator: return "indicator";
        case FeatureKind::MissingFlag: return "missing_flag";
    }
    raise(ErrorCode::Internal, "bad feature kind");
}

const char* feature_group_name(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::Basic: return "basic";
        case FeatureGroup::Fact: return "fact";
        case FeatureGroup::Actor: return "actor";
    }
    raise(ErrorCode::Internal, "bad feature group");
}

const char* feature_variant_name(FeatureVariant v) {
    return v == FeatureVariant::Full ? "full" : "basic";
}

FeatureVariant feature_variant_from_name(const std::string& name) {
    if (name == "full") return FeatureVariant::Full;
    if (name == "basic") return FeatureVariant::Basic;
    raise(ErrorCode::InvalidArgument, "unknown feature variant: " + name);
}

const char* actor_kind_name(ActorKind k) {
    switch (k) {
        case ActorKind::Judge: return "judge";
        case ActorKind::PlaintiffFirm: return "plaintiff_firm";
        case ActorKind::DefendantFirm: return "defendant_firm";
    }
    raise(ErrorCode::Internal, "bad actor kind");
}

// ---------------------------------------------------------------------------
// KnnStats / ActorStats
// ---------------------------------------------------------------------------

namespace {

KnnStats stats_over_prefix(const NeighborSet& set, int k) {
    KnnStats s;
    s.k = k;
    s.eligible_count = set.eligible_count;
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(k), set.neighbors.size());
    if (take == 0) {
        s.missing = true;
        return s;
    }
    double counts[3] = {0.0, 0.0, 0.0};
    double dist_sum = 0.0, dist_sq = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
        counts[static_cast<int>(set.neighbors[i].outcome)] += 1.0;
        dist_sum += set.neighbors[i].distance;
        dist_sq += set.neighbors[i].distance * set.neighbors[i].distance;
    }
    const auto n = static_cast<double>(take);
    s.loss_rate = counts[0] / n;
    s.settle_rate = counts[1] / n;
    s.win_rate = counts[2] / n;
    s.mean_distance = dist_sum / n;
    s.distance_std = std::sqrt(std::max(0.0, dist_sq / n - s.mean_distance * s.mean_distance));
    return s;
}

}  // namespace

KnnStats knn_outcome_features(const NeighborSet& set) {
    return stats_over_prefix(set, set.k_requested);
}

ActorIndex ActorIndex::build(const NeighborIndex& index) {
    ActorIndex out;
    for (std::size_t pos = 0; pos < index.size(); ++pos) {
        const auto& e = index.entry(pos);
        out.judges[e.judge_id].push_back(pos);
        out.plaintiff_firms[e.plaintiff_firm_id].push_back(pos);
        out.defendant_firms[e.defendant_firm_id].push_back(pos);
    }
    return out;  // positions ascend, hence resolution days ascend per actor
}

const std::map<std::string, std::vector<std::size_t>>& ActorIndex::by_kind(ActorKind k) const {
    switch (k) {
        case ActorKind::Judge: return judges;
        case ActorKind::PlaintiffFirm: return plaintiff_firms;
        case ActorKind::DefendantFirm: return defendant_firms;
    }
    raise(ErrorCode::Internal, "bad actor kind");
}

ActorStats actor_history_features(const ActorIndex& actors, const NeighborIndex& index,
                                  ActorKind kind, const std::string& actor_id,
                                  Day focal_start_day,
                                  const Eigen::VectorXf& unit_summary_query) {
    ActorStats out;
    const auto& table = actors.by_kind(kind);
    const auto it = table.find(actor_id);
    if (it == table.end()) return out;
    const auto& positions = it->second;

    // Positions are sorted by resolution day; keep the strict-past prefix.
    std::size_t prior = 0;
    while (prior < positions.size() &&
           index.entry(positions[prior]).resolution_day < focal_start_day)
        ++prior;
    out.prior_case_count = static_cast<int>(prior);
    if (prior == 0) return out;

    double wins = 0.0;
    for (std::size_t i = 0; i < prior; ++i)
        if (index.entry(positions[i]).outcome == Outcome::PlaintiffWin) wins += 1.0;
    out.prior_win_rate = wins / static_cast<double>(prior);
    out.prior_missing = false;

    // k = 10 nearest of the prior cases by cosine distance to the focal
    // cumulative summary embedding.
    static thread_local std::vector<std::pair<float, std::size_t>> scored;
    scored.clear();
    scored.reserve(prior);
    for (std::size_t i = 0; i < prior; ++i) {
        const std::size_t pos = positions[i];
        scored.emplace_back(index.entry_distance(pos, unit_summary_query), pos);
    }
    const std::size_t take = std::min<std::size_t>(10, scored.size());
    auto closer = [&](const std::pair<float, std::size_t>& a,
                      const std::pair<float, std::size_t>& b) {
        if (a.first != b.first) return a.first < b.first;
        return index.entry(a.second).case_id < index.entry(b.second).case_id;
    };
    if (take < scored.size())
        std::nth_element(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                         scored.end(), closer);
    double similar_wins = 0.0;
    for (std::size_t i = 0; i < take; ++i)
        if (index.entry(scored[i].second).outcome == Outcome::PlaintiffWin) similar_wins += 1.0;
    out.similar_prior_win_rate = similar_wins / static_cast<double>(take);
    out.similar_missing = false;
    return out;
}

FeatureArtifacts build_feature_artifacts(const CaseCollection& collection, std::uint64_t seed) {
    FeatureArtifacts a;
    a.reducer_summary = fit_reducer(collection.embedding_dim, derive_seed(seed, "reducer-summary"));
    a.reducer_fulltext =
        fit_reducer(collection.embedding_dim, derive_seed(seed, "reducer-fulltext"));
    a.index_summary = build_neighbor_index(collection, EmbeddingSource::Summary);
    a.index_fulltext = build_neighbor_index(collection, EmbeddingSource::Fulltext);
    a.actors = ActorIndex::build(a.index_summary);
    return a;
}

// ---------------------------------------------------------------------------
// Raw feature rows
// ---------------------------------------------------------------------------

namespace {

void fill_raw_rows_for_case(const CaseCollection& collection, std::size_t case_index,
                            const FeatureArtifacts& artifacts, RawFeatureRow* out,
                            const std::vector<int>* only_doc_index) {
    const CaseRecord& c = collection.cases[case_index];
    const auto kept = apply_disposition_cutoff(c);
    const auto dim = static_cast<Eigen::Index>(collection.embedding_dim);
    Eigen::VectorXd acc_summary = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd acc_fulltext = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd cum(dim);

    std::size_t kept_pos = 0;
    std::size_t out_pos = 0;
    for (std::size_t di = 0; di < c.documents.size(); ++di) {
        const DocumentRecord& d = c.documents[di];
        for (Eigen::Index k = 0; k < dim; ++k) {
            acc_summary[k] += static_cast<double>(d.summary_embedding[static_cast<std::size_t>(k)]);
            acc_fulltext[k] +=
                static_cast<double>(d.fulltext_embedding[static_cast<std::size_t>(k)]);
        }
        const bool is_kept = kept_pos < kept.size() && kept[kept_pos] == &d;
        if (!is_kept) continue;
        ++kept_pos;
        if (only_doc_index &&
            !std::binary_search(only_doc_index->begin(), only_doc_index->end(), d.doc_index))
            continue;

        RawFeatureRow& row = out[out_pos++];
        row.case_index = case_index;
        row.doc_index = d.doc_index;
        row.filing_day = d.filing_day;
        row.start_day = c.start_day;
        row.label = c.outcome;
        row.truth_probs = d.truth_probs;

        const double inv = 1.0 / static_cast<double>(d.doc_index);

        cum = acc_summary * inv;
        const Eigen::VectorXd red_s = artifacts.reducer_summary.projection * cum;
        for (int k = 0; k < kReducedDim; ++k)
            row.reduced_summary[static_cast<std::size_t>(k)] = red_s[k];
        const auto set_s = artifacts.index_summary.query(cum, c.case_id, c.start_day,
                                                         kNeighborKs.back());
        const Eigen::VectorXf unit_summary = normalize_to_float(cum);

        cum = acc_fulltext * inv;
        const Eigen::VectorXd red_f = artifacts.reducer_fulltext.projection * cum;
        for (int k = 0; k < kReducedDim; ++k)
            row.reduced_fulltext[static_cast<std::size_t>(k)] = red_f[k];
        const auto set_f = artifacts.index_fulltext.query(cum, c.case_id, c.start_day,
                                                          kNeighborKs.back());

        for (std::size_t ki = 0; ki < kNeighborKs.size(); ++ki) {
            row.knn_summary[ki] = stats_over_prefix(set_s, kNeighborKs[ki]);
            row.knn_fulltext[ki] = stats_over_prefix(set_f, kNeighborKs[ki]);
        }
        row.eligible_count = set_s.eligible_count;

        row.judge = actor_history_features(artifacts.actors, artifacts.index_summary,
                                           ActorKind::Judge, c.judge_id, c.start_day,
                                           unit_summary);
        row.plaintiff_firm =
            actor_history_features(artifacts.actors, artifacts.index_summary,
                                   ActorKind::PlaintiffFirm, c.plaintiff_firm_id, c.start_day,
                                   unit_summary);
        row.defendant_firm =
            actor_history_features(artifacts.actors, artifacts.index_summary,
                                   ActorKind::DefendantFirm, c.defendant_firm_id, c.start_day,
                                   unit_summary);
    }
}

}  // namespace

RawFeatureTable compute_raw_features(const CaseCollection& collection,
                                     const FeatureArtifacts& artifacts, int threads) {
    RawFeatureTable table;
    std::vector<std::size_t> offsets(collection.cases.size() + 1, 0);
    for (std::size_t i = 0; i < collection.cases.size(); ++i)
        offsets[i + 1] = offsets[i] + apply_disposition_cutoff(collection.cases[i]).size();
    table.rows.resize(offsets.back());

    parallel_blocks(collection.cases.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            fill_raw_rows_for_case(collection, i, artifacts, table.rows.data() + offsets[i],
                                   nullptr);
    });
    return table;
}

RawFeatureRow compute_raw_row(const CaseCollection& collection, std::size_t case_index,
                              int doc_index, const FeatureArtifacts& artifacts) {
    const CaseRecord& c = collection.cases.at(case_index);
    const auto kept = apply_disposition_cutoff(c);
    const bool survives = std::any_of(kept.begin(), kept.end(), [&](const DocumentRecord* d) {
        return d->doc_index == doc_index;
    });
    if (!survives)
        raise(ErrorCode::InvalidArgument,
              "document " + std::to_string(doc_index) + " of case " + c.case_id +
                  " does not survive the disposition cutoff");
    RawFeatureRow row;
    const std::vector<int> only = {doc_index};
    fill_raw_rows_for_case(collection, case_index, artifacts, &row, &only);
    return row;
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> sorted_levels(std::set<std::string>&& s) {
    return {s.begin(), s.end()};
}

void push_onehot(FeatureSchema& schema, const std::string& prefix,
                 const std::vector<std::string>& levels, FeatureGroup group) {
    for (const auto& level : levels)
        schema.columns.push_back({prefix + "=" + level, FeatureKind::Indicator, group});
}

int level_of(const std::vector<std::string>& levels, const std::string& value) {
    const auto it = std::lower_bound(levels.begin(), levels.end(), value);
    if (it == levels.end() || *it != value) return -1;
    return static_cast<int>(it - levels.begin());
}

}  // namespace

FeatureSchema fit_schema(const CaseCollection& collection,
                         const std::vector<std::size_t>& training_case_indices,
                         FeatureVariant variant) {
    if (training_case_indices.empty())
        raise(ErrorCode::InvalidArgument, "fit_schema requires a non-empty training set");
    FeatureSchema schema;
    schema.variant = variant;

    std::set<std::string> jur, ct, pt, dt, doc;
    for (std::size_t idx : training_case_indices) {
        const CaseRecord& c = collection.cases.at(idx);
        jur.insert(c.jurisdiction);
        ct.insert(c.case_type);
        pt.insert(c.plaintiff_type);
        dt.insert(c.defendant_type);
        for (const auto* d : apply_disposition_cutoff(c)) doc.insert(d->doc_type);
    }
    schema.jurisdictions = sorted_levels(std::move(jur));
    schema.case_types = sorted_levels(std::move(ct));
    schema.plaintiff_types = sorted_levels(std::move(pt));
    schema.defendant_types = sorted_levels(std::move(dt));
    schema.doc_types = sorted_levels(std::move(doc));

    const auto B = FeatureGroup::Basic;
    push_onehot(schema, "jurisdiction", schema.jurisdictions, B);
    push_onehot(schema, "case_type", schema.case_types, B);
    push_onehot(schema, "plaintiff_type", schema.plaintiff_types, B);
    push_onehot(schema, "defendant_type", schema.defendant_types, B);
    schema.columns.push_back({"n_plaintiffs", FeatureKind::Numeric, B});
    schema.columns.push_back({"n_defendants", FeatureKind::Numeric, B});
    push_onehot(schema, "doc_type", schema.doc_types, B);
    schema.columns.push_back({"liability_admitted", FeatureKind::Indicator, B});
    schema.columns.push_back({"insurance_involved", FeatureKind::Indicator, B});
    schema.columns.push_back({"monetary_request_log", FeatureKind::Numeric, B});
    schema.columns.push_back({"monetary_request_missing", FeatureKind::MissingFlag, B});
    schema.columns.push_back({"elapsed_log_days", FeatureKind::Numeric, B});
    schema.columns.push_back({"doc_ordinal", FeatureKind::Numeric, B});

    if (variant == FeatureVariant::Full) {
        const auto F = FeatureGroup::Fact;
        for (int k = 0; k < kReducedDim; ++k)
            schema.columns.push_back(
                {"summary_component_" + std::to_string(k), FeatureKind::Numeric, F});
        for (int k = 0; k < kReducedDim; ++k)
            schema.columns.push_back(
                {"fulltext_component_" + std::to_string(k), FeatureKind::Numeric, F});
        for (const char* source : {"summary", "fulltext"}) {
            for (int k : kNeighborKs) {
                const std::string base =
                    "knn" + std::to_string(k) + "_" + source + "_";
                schema.columns.push_back({base + "win_rate", FeatureKind::Numeric, F});
                schema.columns.push_back({base + "loss_rate", FeatureKind::Numeric, F});
                schema.columns.push_back({base + "settle_rate", FeatureKind::Numeric, F});
                schema.columns.push_back({base + "mean_distance", FeatureKind::Numeric, F});
                schema.columns.push_back({base + "distance_std", FeatureKind::Numeric, F});
                schema.columns.push_back({base + "missing", FeatureKind::MissingFlag, F});
            }
        }
        schema.columns.push_back({"prior_resolved_count_log", FeatureKind::Numeric, F});

        const auto A = FeatureGroup::Actor;
        for (const char* actor : {"judge", "plaintiff_firm", "defendant_firm"}) {
            const std::string base = std::string(actor) + "_";
            schema.columns.push_back({base + "prior_count_log", FeatureKind::Numeric, A});
            schema.columns.push_back({base + "prior_win_rate", FeatureKind::Numeric, A});
            schema.columns.push_back({base + "prior_missing", FeatureKind::MissingFlag, A});
            schema.columns.push_back({base + "similar10_win_rate", FeatureKind::Numeric, A});
            schema.columns.push_back({base + "similar10_missing", FeatureKind::MissingFlag, A});
        }
    }
    return schema;
}

std::string FeatureSchema::to_json() const {
    json cols = json::array();
    for (const auto& c : columns)
        cols.push_back({{"name", c.name},
                        {"kind", feature_kind_name(c.kind)},
                        {"group", feature_group_name(c.group)}});
    json j;
    j["variant"] = feature_variant_name(variant);
    j["width"] = columns.size();
    j["columns"] = cols;
    j["levels"] = {{"jurisdiction", jurisdictions},
                   {"case_type", case_types},
                   {"plaintiff_type", plaintiff_types},
                   {"defendant_type", defendant_types},
                   {"doc_type", doc_types}};
    return j.dump(2) + "\n";
}

FeatureSchema FeatureSchema::from_json(const std::string& text) {
    const json j = json::parse(text);
    FeatureSchema s;
    s.variant = feature_variant_from_name(j.at("variant").get<std::string>());
    for (const auto& c : j.at("columns")) {
        FeatureColumn col;
        col.name = c.at("name").get<std::string>();
        const std::string kind = c.at("kind").get<std::string>();
        col.kind = kind == "numeric"     ? FeatureKind::Numeric
                   : kind == "indicator" ? FeatureKind::Indicator
                                         : FeatureKind::MissingFlag;
        const std::string group = c.at("group").get<std::string>();
        col.group = group == "basic"  ? FeatureGroup::Basic
                    : group == "fact" ? FeatureGroup::Fact
                                      : FeatureGroup::Actor;
        s.columns.push_back(std::move(col));
    }
    const auto& levels = j.at("levels");
    s.jurisdictions = levels.at("jurisdiction").get<std::vector<std::string>>();
    s.case_types = levels.at("case_type").get<std::vector<std::string>>();
    s.plaintiff_types = levels.at("plaintiff_type").get<std::vector<std::string>>();
    s.defendant_types = levels.at("defendant_type").get<std::vector<std::string>>();
    s.doc_types = levels.at("doc_type").get<std::vector<std::string>>();
    return s;
}

std::uint64_t FeatureSchema::fingerprint() const { return fnv1a64(to_json()); }

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

std::vector<double> encode_row(const FeatureSchema& schema, const CaseRecord& c,
                               const RawFeatureRow& row) {
    std::vector<double> v(schema.width(), 0.0);
    std::size_t at = 0;
    auto onehot = [&](const std::vector<std::string>& levels, const std::string& value) {
        const int idx = level_of(levels, value);
        if (idx >= 0) v[at + static_cast<std::size_t>(idx)] = 1.0;
        at += levels.size();
    };
    auto put = [&](double x) { v[at++] = x; };

    onehot(schema.jurisdictions, c.jurisdiction);
    onehot(schema.case_types, c.case_type);
    onehot(schema.plaintiff_types, c.plaintiff_type);
    onehot(schema.defendant_types, c.defendant_type);
    put(static_cast<double>(c.n_plaintiffs));
    put(static_cast<double>(c.n_defendants));
    const DocumentRecord& d = c.documents.at(static_cast<std::size_t>(row.doc_index - 1));
    onehot(schema.doc_types, d.doc_type);
    put(d.liability_admitted ? 1.0 : 0.0);
    put(d.insurance_involved ? 1.0 : 0.0);
    put(d.monetary_request ? std::log1p(*d.monetary_request) : 0.0);
    put(d.monetary_request ? 0.0 : 1.0);
    put(std::log1p(static_cast<double>(row.filing_day - row.start_day)));
    put(static_cast<double>(row.doc_index));

    if (schema.variant == FeatureVariant::Full) {
        for (double x : row.reduced_summary) put(x);
        for (double x : row.reduced_fulltext) put(x);
        for (const auto* block : {&row.knn_summary, &row.knn_fulltext}) {
            for (const KnnStats& s : *block) {
                put(s.missing ? 0.0 : s.win_rate);
                put(s.missing ? 0.0 : s.loss_rate);
                put(s.missing ? 0.0 : s.settle_rate);
                put(s.missing ? 0.0 : s.mean_distance);
                put(s.missing ? 0.0 : s.distance_std);
                put(s.missing ? 1.0 : 0.0);
            }
        }
        put(std::log1p(static_cast<double>(row.eligible_count)));
        for (const ActorStats* a : {&row.judge, &row.plaintiff_firm, &row.defendant_firm}) {
            put(std::log1p(static_cast<double>(a->prior_case_count)));
            put(a->prior_missing ? 0.0 : a->prior_win_rate);
            put(a->prior_missing ? 1.0 : 0.0);
            put(a->similar_missing ? 0.0 : a->similar_prior_win_rate);
            put(a->similar_missing ? 1.0 : 0.0);
        }
    }
    if (at != v.size()) raise(ErrorCode::Internal, "schema width mismatch during encoding");
    return v;
}

FeatureVector assemble_features(const CaseCollection& collection, std::size_t case_index,
                                int doc_index, const FeatureSchema& schema,
                                const FeatureArtifacts& artifacts) {
    const RawFeatureRow row = compute_raw_row(collection, case_index, doc_index, artifacts);
    FeatureVector out;
    out.case_id = collection.cases.at(case_index).case_id;
    out.doc_index = doc_index;
    out.label = row.label;
    out.values = encode_row(schema, collection.cases.at(case_index), row);
    return out;
}

FeatureMatrix encode_matrix(const FeatureSchema& schema, const CaseCollection& collection,
                            const RawFeatureTable& table,
                            const std::vector<std::size_t>& row_indices, int threads) {
    FeatureMatrix m;
    m.n_rows = row_indices.size();
    m.n_cols = schema.width();
    m.data.assign(m.n_rows * m.n_cols, 0.0);
    m.labels.resize(m.n_rows);
    parallel_blocks(row_indices.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const RawFeatureRow& row = table.rows[row_indices[r]];
            const auto values = encode_row(schema, collection.cases[row.case_index], row);
            for (std::size_t c = 0; c < m.n_cols; ++c) m.data[c * m.n_rows + r] = values[c];
            m.labels[r] = static_cast<int>(row.label);
        }
    });
    return m;
}

// ---------------------------------------------------------------------------
// Binary formats
// ---------------------------------------------------------------------------

namespace {

constexpr char kMatrixMagic[8] = {'L', 'P', 'F', 'M', 0, 0, 0, 1};
constexpr char kRawMagic[8] = {'L', 'P', 'R', 'W', 0, 0, 0, 2};

template <typename T>
void put_pod(std::string& out, const T& v) {
    out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get_pod(const std::string& in, std::size_t& at) {
    if (at + sizeof(T) > in.size()) raise(ErrorCode::Io, "truncated binary file");
    T v;
    std::memcpy(&v, in.data() + at, sizeof(T));
    at += sizeof(T);
    return v;
}

}  // namespace

void write_feature_matrix(const FeatureMatrix& m, const std::string& path) {
    std::string out;
    out.reserve(16 + m.data.size() * sizeof(double));
    out.append(kMatrixMagic, sizeof(kMatrixMagic));
    put_pod<std::uint64_t>(out, m.n_rows);
    put_pod<std::uint64_t>(out, m.n_cols);
    out.append(reinterpret_cast<const char*>(m.data.data()), m.data.size() * sizeof(double));
    out.append(reinterpret_cast<const char*>(m.labels.data()), m.labels.size() * sizeof(int));
    atomic_write_file(path, out);
}

FeatureMatrix read_feature_matrix(const std::string& path) {
    const std::string in = read_text_file(path);
    if (in.size() < 24 || std::memcmp(in.data(), kMatrixMagic, sizeof(kMatrixMagic)) != 0)
        raise(ErrorCode::Io, "not a feature matrix file: " + path);
    std::size_t at = sizeof(kMatrixMagic);
    FeatureMatrix m;
    m.n_rows = get_pod<std::uint64_t>(in, at);
    m.n_cols = get_pod<std::uint64_t>(in, at);
    m.data.resize(m.n_rows * m.n_cols);
    if (at + m.data.size() * sizeof(double) + m.n_rows * sizeof(int) > in.size())
        raise(ErrorCode::Io, "truncated feature matrix file: " + path);
    std::memcpy(m.data.data(), in.data() + at, m.data.size() * sizeof(double));
    at += m.data.size() * sizeof(double);
    m.labels.resize(m.n_rows);
    std::memcpy(m.labels.data(), in.data() + at, m.labels.size() * sizeof(int));
    return m;
}

std::string feature_matrix_csv(const FeatureSchema& schema, const FeatureMatrix& m,
                               std::size_t max_rows) {
    std::string out = "label";
    for (const auto& c : schema.columns) {
        out += ',';
        out += c.name;
    }
    out += '\n';
    const std::size_t rows = std::min(max_rows, m.n_rows);
    for (std::size_t r = 0; r < rows; ++r) {
        out += std::to_string(m.labels[r]);
        for (std::size_t c = 0; c < m.n_cols; ++c) {
            out += ',';
            out += format_double(m.at(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_raw_table(const RawFeatureTable& table, std::uint64_t corpus_hash, std::uint64_t seed,
                     const std::string& path) {
    std::string out;
    out.reserve(64 + table.rows.size() * sizeof(RawFeatureRow));
    out.append(kRawMagic, sizeof(kRawMagic));
    put_pod<std::uint64_t>(out, corpus_hash);
    put_pod<std::uint64_t>(out, seed);
    put_pod<std::uint64_t>(out, table.rows.size());
    for (const auto& row : table.rows) {
        put_pod<std::uint64_t>(out, row.case_index);
        put_pod<std::int32_t>(out, row.doc_index);
        put_pod<std::int32_t>(out, row.filing_day);
        put_pod<std::int32_t>(out, row.start_day);
        put_pod<std::int32_t>(out, static_cast<std::int32_t>(row.label));
        put_pod<std::uint8_t>(out, row.truth_probs ? 1 : 0);
        if (row.truth_probs)
            for (double x : *row.truth_probs) put_pod<double>(out, x);
        for (double x : row.reduced_summary) put_pod<double>(out, x);
        for (double x : row.reduced_fulltext) put_pod<double>(out, x);
        for (const auto* block : {&row.knn_summary, &row.knn_fulltext}) {
            for (const auto& s : *block) {
                put_pod<std::int32_t>(out, s.k);
                put_pod<double>(out, s.win_rate);
                put_pod<double>(out, s.loss_rate);
                put_pod<double>(out, s.settle_rate);
                put_pod<double>(out, s.mean_distance);
                put_pod<double>(out, s.distance_std);
                put_pod<std::uint64_t>(out, s.eligible_count);
                put_pod<std::uint8_t>(out, s.missing ? 1 : 0);
            }
        }
        put_pod<std::uint64_t>(out, row.eligible_count);
        for (const ActorStats* a : {&row.judge, &row.plaintiff_firm, &row.defendant_firm}) {
            put_pod<std::int32_t>(out, a->prior_case_count);
            put_pod<double>(out, a->prior_win_rate);
            put_pod<std::uint8_t>(out, a->prior_missing ? 1 : 0);
            put_pod<double>(out, a->similar_prior_win_rate);
            put_pod<std::uint8_t>(out, a->similar_missing ? 1 : 0);
        }
    }
    atomic_write_file(path, out);
}

std::optional<RawFeatureTable> read_raw_table(const std::string& path, std::uint64_t corpus_hash,
                                              std::uint64_t seed) {
    std::string in;
    try {
        in = read_text_file(path);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (in.size() < 32 || std::memcmp(in.data(), kRawMagic, sizeof(kRawMagic)) != 0)
        return std::nullopt;
    std::size_t at = sizeof(kRawMagic);
    if (get_pod<std::uint64_t>(in, at) != corpus_hash) return std::nullopt;
    if (get_pod<std::uint64_t>(in, at) != seed) return std::nullopt;
    const auto n = get_pod<std::uint64_t>(in, at);
    RawFeatureTable table;
    table.rows.resize(n);
    for (auto& row : table.rows) {
        row.case_index = get_pod<std::uint64_t>(in, at);
        row.doc_index = get_pod<std::int32_t>(in, at);
        row.filing_day = get_pod<std::int32_t>(in, at);
        row.start_day = get_pod<std::int32_t>(in, at);
        row.label = static_cast<Outcome>(get_pod<std::int32_t>(in, at));
        if (get_pod<std::uint8_t>(in, at)) {
            std::array<double, 3> tp{};
            for (auto& x : tp) x = get_pod<double>(in, at);
            row.truth_probs = tp;
        }
        for (auto& x : row.reduced_summary) x = get_pod<double>(in, at);
        for (auto& x : row.reduced_fulltext) x = get_pod<double>(in, at);
        for (auto* block : {&row.knn_summary, &row.knn_fulltext}) {
            for (auto& s : *block) {
                s.k = get_pod<std::int32_t>(in, at);
                s.win_rate = get_pod<double>(in, at);
                s.loss_rate = get_pod<double>(in, at);
                s.settle_rate = get_pod<double>(in, at);
                s.mean_distance = get_pod<double>(in, at);
                s.distance_std = get_pod<double>(in, at);
                s.eligible_count = get_pod<std::uint64_t>(in, at);
                s.missing = get_pod<std::uint8_t>(in, at) != 0;
            }
        }
        row.eligible_count = get_pod<std::uint64_t>(in, at);
        for (ActorStats* a : {&row.judge, &row.plaintiff_firm, &row.defendant_firm}) {
            a->prior_case_count = get_pod<std::int32_t>(in, at);
            a->prior_win_rate = get_pod<double>(in, at);
            a->prior_missing = get_pod<std::uint8_t>(in, at) != 0;
            a->similar_prior_win_rate = get_pod<double>(in, at);
            a->similar_missing = get_pod<std::uint8_t>(in, at) != 0;
        }
    }
    return table;
}

}  // namespace litpred
