// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "litpred/corpus.hpp"

namespace litpred {

enum class EmbeddingSource { Summary, Fulltext };

const char* embedding_source_name(EmbeddingSource s);

/// Mean of a case's per-document embeddings over documents 1..doc_index.
struct CumulativeEmbedding {
    std::string case_id;
    int doc_index = 0;
    EmbeddingSource source = EmbeddingSource::Summary;
    Eigen::VectorXd vector;
};

CumulativeEmbedding cumulative_embedding(const CaseRecord& c, int doc_index,
                                         EmbeddingSource source);

/// Seeded Gaussian random projection to eight components.
struct Reducer {
    Eigen::MatrixXd projection;  // 8 x input_dim, entries N(0, 1/8)
    std::uint64_t seed = 0;
    int input_dim = 0;
};

inline constexpr int kReducedDim = 8;

Reducer fit_reducer(int input_dim, std::uint64_t seed);
Eigen::VectorXd apply_reducer(const Reducer& r, const Eigen::VectorXd& v);

/// Cosine distance in [0, 2]; zero-norm inputs are treated as orthogonal.
double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct NeighborIndexEntry {
    std::string case_id;
    Outcome outcome = Outcome::PlaintiffLoss;
    Day resolution_day = 0;
    Day start_day = 0;
    std::string judge_id;
    std::string plaintiff_firm_id;
    std::string defendant_firm_id;
};

struct Neighbor {
    std::size_t position = 0;  // entry position inside the index
    std::string case_id;
    double distance = 0.0;
    Outcome outcome = Outcome::PlaintiffLoss;
};

struct NeighborSet {
    int k_requested = 0;
    std::size_t eligible_count = 0;
    std::vector<Neighbor> neighbors;  // ascending (distance, case_id)
};

/// Immutable index over resolved cases, one entry per case keyed by the
/// cosine geometry of its final cumulative embedding. Entries are stored in
/// (resolution_day, case_id) order so temporal eligibility is a prefix.
class NeighborIndex {
public:
    static NeighborIndex build(const CaseCollection& collection, EmbeddingSource source);

    std::size_t size() const { return entries_.size(); }
    const NeighborIndexEntry& entry(std::size_t pos) const { return entries_[pos]; }
    const std::vector<NeighborIndexEntry>& entries() const { return entries_; }
    EmbeddingSource source() const { return source_; }

    /// Unit-normalized entry vector at a position.
    Eigen::VectorXf entry_vector(std::size_t pos) const { return vectors_.col(static_cast<Eigen::Index>(pos)); }

    /// Number of entries resolved strictly before the focal start day.
    std::size_t eligible_prefix(Day focal_start_day) const;

    std::optional<std::size_t> position_of(const std::string& case_id) const;

    NeighborSet query(const Eigen::VectorXd& query_vector, const std::string& focal_case_id,
                      Day focal_start_day, int k) const;

    /// Distances from a normalized query to every entry in [0, prefix).
    /// Exposed for bulk feature computation; same arithmetic as query().
    void prefix_distances(const Eigen::VectorXf& unit_query, std::size_t prefix,
                          std::vector<float>& out) const;

    /// Cosine distance between one entry and a unit-normalized query.
    float entry_distance(std::size_t pos, const Eigen::VectorXf& unit_query) const {
        return 1.0f - vectors_.col(static_cast<Eigen::Index>(pos)).dot(unit_query);
    }

    std::string snapshot_json() const;

private:
    EmbeddingSource source_ = EmbeddingSource::Summary;
    std::vector<NeighborIndexEntry> entries_;
    Eigen::MatrixXf vectors_;  // dim x n, unit columns
};

NeighborIndex build_neighbor_index(const CaseCollection& collection, EmbeddingSource source);

/// Normalizes to unit length in double precision, then narrows to float.
Eigen::VectorXf normalize_to_float(const Eigen::VectorXd& v);

}  // namespace litpred
