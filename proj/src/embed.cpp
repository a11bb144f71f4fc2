// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/embed.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace litpred {

const char* embedding_source_name(EmbeddingSource s) {
    return s == EmbeddingSource::Summary ? "summary" : "fulltext";
}

CumulativeEmbedding cumulative_embedding(const CaseRecord& c, int doc_index,
                                         EmbeddingSource source) {
    const int n = static_cast<int>(c.documents.size());
    if (doc_index < 1 || doc_index > n)
        raise(ErrorCode::InvalidArgument,
              "doc_index " + std::to_string(doc_index) + " out of range 1.." + std::to_string(n) +
                  " for case " + c.case_id);
    const auto dim = static_cast<Eigen::Index>(
        (source == EmbeddingSource::Summary ? c.documents.front().summary_embedding
                                            : c.documents.front().fulltext_embedding)
            .size());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < doc_index; ++i) {
        const auto& e = source == EmbeddingSource::Summary
                            ? c.documents[static_cast<std::size_t>(i)].summary_embedding
                            : c.documents[static_cast<std::size_t>(i)].fulltext_embedding;
        if (static_cast<Eigen::Index>(e.size()) != dim)
            raise(ErrorCode::Validation, "embedding dimension varies inside case " + c.case_id);
        for (Eigen::Index k = 0; k < dim; ++k) acc[k] += static_cast<double>(e[static_cast<std::size_t>(k)]);
    }
    CumulativeEmbedding out;
    out.case_id = c.case_id;
    out.doc_index = doc_index;
    out.source = source;
    out.vector = acc / static_cast<double>(doc_index);
    return out;
}

Reducer fit_reducer(int input_dim, std::uint64_t seed) {
    if (input_dim < kReducedDim)
        raise(ErrorCode::InvalidArgument,
              "reducer input_dim must be >= " + std::to_string(kReducedDim));
    Reducer r;
    r.seed = seed;
    r.input_dim = input_dim;
    r.projection.resize(kReducedDim, input_dim);
    Rng rng(derive_seed(seed, "reducer"));
    const double scale = 1.0 / std::sqrt(static_cast<double>(kReducedDim));
    // Column-major fill order is part of the determinism contract.
    for (int j = 0; j < input_dim; ++j)
        for (int i = 0; i < kReducedDim; ++i) r.projection(i, j) = rng.normal() * scale;
    return r;
}

Eigen::VectorXd apply_reducer(const Reducer& r, const Eigen::VectorXd& v) {
    if (v.size() != r.projection.cols())
        raise(ErrorCode::InvalidArgument,
              "reducer expects dimension " + std::to_string(r.projection.cols()) + ", got " +
                  std::to_string(v.size()));
    return r.projection * v;
}

double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        raise(ErrorCode::InvalidArgument, "cosine_distance: dimension mismatch");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 1.0;
    const double cosine = a.dot(b) / (na * nb);
    return std::clamp(1.0 - cosine, 0.0, 2.0);
}

Eigen::VectorXf normalize_to_float(const Eigen::VectorXd& v) {
    const double n = v.norm();
    if (n == 0.0) return Eigen::VectorXf::Zero(v.size());
    return (v / n).cast<float>();
}

NeighborIndex NeighborIndex::build(const CaseCollection& collection, EmbeddingSource source) {
    NeighborIndex index;
    index.source_ = source;

    std::vector<std::size_t> order(collection.cases.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = collection.cases[a];
        const auto& cb = collection.cases[b];
        if (ca.disposition_day != cb.disposition_day)
            return ca.disposition_day < cb.disposition_day;
        return ca.case_id < cb.case_id;
    });

    Eigen::Index dim = 0;
    index.entries_.reserve(order.size());
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const auto& c = collection.cases[order[slot]];
        if (c.documents.empty())
            raise(ErrorCode::InvalidArgument,
                  "cannot index case without documents: " + c.case_id);
        const auto cum =
            cumulative_embedding(c, static_cast<int>(c.documents.size()), source);
        if (dim == 0) {
            dim = cum.vector.size();
            index.vectors_.resize(dim, static_cast<Eigen::Index>(order.size()));
        }
        index.vectors_.col(static_cast<Eigen::Index>(slot)) = normalize_to_float(cum.vector);
        index.entries_.push_back({c.case_id, c.outcome, c.disposition_day, c.start_day, c.judge_id,
                                  c.plaintiff_firm_id, c.defendant_firm_id});
    }
    return index;
}

NeighborIndex build_neighbor_index(const CaseCollection& collection, EmbeddingSource source) {
    return NeighborIndex::build(collection, source);
}

std::size_t NeighborIndex::eligible_prefix(Day focal_start_day) const {
    // Entries are sorted by resolution day; find the first entry at or after
    // the focal start.
    std::size_t lo = 0, hi = entries_.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (entries_[mid].resolution_day < focal_start_day)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

std::optional<std::size_t> NeighborIndex::position_of(const std::string& case_id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].case_id == case_id) return i;
    return std::nullopt;
}

void NeighborIndex::prefix_distances(const Eigen::VectorXf& unit_query, std::size_t prefix,
                                     std::vector<float>& out) const {
    out.resize(prefix);
    if (prefix == 0) return;
    Eigen::Map<Eigen::VectorXf> dist(out.data(), static_cast<Eigen::Index>(prefix));
    dist.noalias() =
        -(vectors_.leftCols(static_cast<Eigen::Index>(prefix)).transpose() * unit_query);
    dist.array() += 1.0f;
}

NeighborSet NeighborIndex::query(const Eigen::VectorXd& query_vector,
                                 const std::string& focal_case_id, Day focal_start_day,
                                 int k) const {
    if (k < 1) raise(ErrorCode::InvalidArgument, "k must be >= 1");
    NeighborSet set;
    set.k_requested = k;
    const std::size_t prefix = eligible_prefix(focal_start_day);

    static thread_local std::vector<float> distances;
    prefix_distances(normalize_to_float(query_vector), prefix, distances);

    static thread_local std::vector<std::size_t> positions;
    positions.clear();
    positions.reserve(prefix);
    for (std::size_t i = 0; i < prefix; ++i)
        if (entries_[i].case_id != focal_case_id) positions.push_back(i);
    set.eligible_count = positions.size();

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), positions.size());
    auto closer = [&](std::size_t a, std::size_t b) {
        if (distances[a] != distances[b]) return distances[a] < distances[b];
        return entries_[a].case_id < entries_[b].case_id;
    };
    if (take < positions.size())
        std::nth_element(positions.begin(),
                         positions.begin() + static_cast<std::ptrdiff_t>(take), positions.end(),
                         closer);
    positions.resize(take);
    std::sort(positions.begin(), positions.end(), closer);

    set.neighbors.reserve(take);
    for (std::size_t pos : positions) {
        Neighbor n;
        n.position = pos;
        n.case_id = entries_[pos].case_id;
        n.distance = std::clamp(static_cast<double>(distances[pos]), 0.0, 2.0);
        n.outcome = entries_[pos].outcome;
        set.neighbors.push_back(std::move(n));
    }
    return set;
}

std::string NeighborIndex::snapshot_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : entries_)
        entries.push_back({{"case_id", e.case_id},
                           {"outcome", outcome_name(e.outcome)},
                           {"resolution_day", e.resolution_day},
                           {"start_day", e.start_day},
                           {"judge_id", e.judge_id},
                           {"plaintiff_firm_id", e.plaintiff_firm_id},
                           {"defendant_firm_id", e.defendant_firm_id}});
    nlohmann::json j;
    j["metric"] = "cosine";
    j["source"] = embedding_source_name(source_);
    j["entry_count"] = entries_.size();
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

}  // namespace litpred
