// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litpred/embed.hpp"

namespace litpred {

enum class FeatureKind { Numeric, Indicator, MissingFlag };
enum class FeatureGroup { Basic, Fact, Actor };

const char* feature_kind_name(FeatureKind k);
const char* feature_group_name(FeatureGroup g);

enum class FeatureVariant { Full, Basic };
const char* feature_variant_name(FeatureVariant v);
FeatureVariant feature_variant_from_name(const std::string& name);

struct FeatureColumn {
    std::string name;
    FeatureKind kind;
    FeatureGroup group;
};

/// Encoded column layout plus the category dictionaries frozen from the
/// training data. Unseen test-time levels map to an all-zero block.
struct FeatureSchema {
    FeatureVariant variant = FeatureVariant::Full;
    std::vector<FeatureColumn> columns;
    std::vector<std::string> jurisdictions;
    std::vector<std::string> case_types;
    std::vector<std::string> plaintiff_types;
    std::vector<std::string> defendant_types;
    std::vector<std::string> doc_types;

    std::size_t width() const { return columns.size(); }
    std::uint64_t fingerprint() const;
    std::string to_json() const;
    static FeatureSchema from_json(const std::string& text);
};

inline constexpr std::array<int, 3> kNeighborKs = {10, 50, 1000};

/// Outcome statistics over a returned neighbor list.
struct KnnStats {
    int k = 0;
    double win_rate = 0.0;
    double loss_rate = 0.0;
    double settle_rate = 0.0;
    double mean_distance = 0.0;
    double distance_std = 0.0;
    std::size_t eligible_count = 0;
    bool missing = false;
};

KnnStats knn_outcome_features(const NeighborSet& set);

enum class ActorKind { Judge, PlaintiffFirm, DefendantFirm };
const char* actor_kind_name(ActorKind k);

struct ActorStats {
    int prior_case_count = 0;
    double prior_win_rate = 0.0;
    bool prior_missing = true;
    double similar_prior_win_rate = 0.0;
    bool similar_missing = true;
};

/// Per-actor lists of index positions, ascending by resolution day.
struct ActorIndex {
    std::map<std::string, std::vector<std::size_t>> judges;
    std::map<std::string, std::vector<std::size_t>> plaintiff_firms;
    std::map<std::string, std::vector<std::size_t>> defendant_firms;

    static ActorIndex build(const NeighborIndex& index);
    const std::map<std::string, std::vector<std::size_t>>& by_kind(ActorKind k) const;
};

ActorStats actor_history_features(const ActorIndex& actors, const NeighborIndex& index,
                                  ActorKind kind, const std::string& actor_id,
                                  Day focal_start_day, const Eigen::VectorXf& unit_summary_query);

/// Everything needed to featurize a document, all immutable after build.
struct FeatureArtifacts {
    Reducer reducer_summary;
    Reducer reducer_fulltext;
    NeighborIndex index_summary;
    NeighborIndex index_fulltext;
    ActorIndex actors;
};

FeatureArtifacts build_feature_artifacts(const CaseCollection& collection, std::uint64_t seed);

/// Split-independent per-document feature values; categorical levels stay
/// raw so any schema can encode them later.
struct RawFeatureRow {
    std::size_t case_index = 0;
    int doc_index = 0;
    Day filing_day = 0;
    Day start_day = 0;
    Outcome label = Outcome::PlaintiffLoss;
    std::optional<std::array<double, 3>> truth_probs;

    std::array<double, kReducedDim> reduced_summary{};
    std::array<double, kReducedDim> reduced_fulltext{};
    std::array<KnnStats, 3> knn_summary{};
    std::array<KnnStats, 3> knn_fulltext{};
    std::size_t eligible_count = 0;
    ActorStats judge;
    ActorStats plaintiff_firm;
    ActorStats defendant_firm;
};

struct RawFeatureTable {
    std::vector<RawFeatureRow> rows;
};

RawFeatureTable compute_raw_features(const CaseCollection& collection,
                                     const FeatureArtifacts& artifacts, int threads);

/// Raw values for one document (doc_index is the 1-based ordinal).
RawFeatureRow compute_raw_row(const CaseCollection& collection, std::size_t case_index,
                              int doc_index, const FeatureArtifacts& artifacts);

FeatureSchema fit_schema(const CaseCollection& collection,
                         const std::vector<std::size_t>& training_case_indices,
                         FeatureVariant variant);

struct FeatureVector {
    std::string case_id;
    int doc_index = 0;
    Outcome label = Outcome::PlaintiffLoss;
    std::vector<double> values;
};

std::vector<double> encode_row(const FeatureSchema& schema, const CaseRecord& c,
                               const RawFeatureRow& row);

FeatureVector assemble_features(const CaseCollection& collection, std::size_t case_index,
                                int doc_index, const FeatureSchema& schema,
                                const FeatureArtifacts& artifacts);

/// Dense column-major matrix of encoded rows.
struct FeatureMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> data;  // column-major
    std::vector<int> labels;

    double at(std::size_t r, std::size_t c) const { return data[c * n_rows + r]; }
    const double* col(std::size_t c) const { return data.data() + c * n_rows; }
    void get_row(std::size_t r, std::vector<double>& out) const {
        out.resize(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) out[c] = at(r, c);
    }
};

FeatureMatrix encode_matrix(const FeatureSchema& schema, const CaseCollection& collection,
                            const RawFeatureTable& table,
                            const std::vector<std::size_t>& row_indices, int threads);

// Binary export: magic, version, rows, cols, column-major doubles.
void write_feature_matrix(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_matrix(const std::string& path);
std::string feature_matrix_csv(const FeatureSchema& schema, const FeatureMatrix& m,
                               std::size_t max_rows);

// Raw-table cache (internal binary format, versioned).
void write_raw_table(const RawFeatureTable& table, std::uint64_t corpus_hash,
                     std::uint64_t seed, const std::string& path);
std::optional<RawFeatureTable> read_raw_table(const std::string& path, std::uint64_t corpus_hash,
                                              std::uint64_t seed);

}  // namespace litpred
