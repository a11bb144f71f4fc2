// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "litpred/common.hpp"

namespace litpred {

// ---------------------------------------------------------------------------
// Outcome label. Integer codes are part of every serialized artifact and
// must never be reordered.
// ---------------------------------------------------------------------------

enum class Outcome : int {
    PlaintiffLoss = 0,
    Settlement = 1,
    PlaintiffWin = 2,
};

inline constexpr int kNumOutcomes = 3;

const char* outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& name);

/// One filing within a case. Days are integer offsets from the corpus epoch.
struct DocumentRecord {
    std::string case_id;
    int doc_index = 0;  // 1-based ordinal within the case
    Day filing_day = 0;
    std::string doc_type;
    bool liability_admitted = false;
    bool insurance_involved = false;
    std::optional<double> monetary_request;
    std::vector<float> summary_embedding;
    std::vector<float> fulltext_embedding;
    std::optional<std::array<double, 3>> truth_probs;
};

struct CaseRecord {
    std::string case_id;
    std::string jurisdiction;
    std::string case_type;
    std::string plaintiff_type;
    std::string defendant_type;
    int n_plaintiffs = 1;
    int n_defendants = 1;
    std::string judge_id;
    std::string plaintiff_firm_id;
    std::string defendant_firm_id;
    Day start_day = 0;
    Day disposition_day = 0;
    Outcome outcome = Outcome::PlaintiffLoss;
    std::vector<DocumentRecord> documents;
};

struct CaseCollection {
    std::vector<CaseRecord> cases;
    int embedding_dim = 0;

    std::size_t total_documents() const {
        std::size_t n = 0;
        for (const auto& c : cases) n += c.documents.size();
        return n;
    }
};

// ---------------------------------------------------------------------------
// Synthetic corpus generation
// ---------------------------------------------------------------------------

enum class SignalPreset {
    PlantedSignal,
    SettlementBargaining,
    DurationSelection,
    Null,
};

const char* preset_name(SignalPreset p);
SignalPreset preset_from_name(const std::string& name);

struct GeneratorConfig {
    std::int64_t n_cases = 0;
    std::array<double, 3> outcome_mix = {0.44, 0.34, 0.22};  // (loss, settle, win)
    double mean_docs_per_case = 8.13;
    int embedding_dim = 384;
    SignalPreset signal_preset = SignalPreset::PlantedSignal;
    std::uint64_t seed = 0;
    // Scale of a per-jurisdiction embedding offset; 0 disables the nuisance.
    double state_shift = 0.0;

    void validate() const;
};

CaseCollection generate_corpus(const GeneratorConfig& config);

// Ground-truth cluster table of the generator for a given mix. Exposed so
// tests can check the exact-mix construction directly.
struct ClusterTable {
    struct Cluster {
        int case_type;
        int merit_bin;  // 0 = negative merit, 1 = non-negative
        double weight;
        std::array<double, 3> probs;
    };
    std::vector<Cluster> clusters;
};

ClusterTable planted_cluster_table(const std::array<double, 3>& mix);

// ---------------------------------------------------------------------------
// Corpus file I/O (JSON Lines, one document per line, case header duplicated)
// ---------------------------------------------------------------------------

void write_corpus(const CaseCollection& collection, const std::string& path);
std::string corpus_to_jsonl(const CaseCollection& collection);
CaseCollection ingest_corpus(const std::string& path);
CaseCollection parse_corpus_jsonl(const std::string& content, const std::string& origin);

// ---------------------------------------------------------------------------
// Disposition cutoff and validation
// ---------------------------------------------------------------------------

/// Documents filed at least seven days before disposition, in filing order.
/// The boundary is inclusive: a gap of exactly seven days is kept.
std::vector<const DocumentRecord*> apply_disposition_cutoff(const CaseRecord& c);

struct ValidationFinding {
    std::string violation_type;
    std::string case_id;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;
    bool clean() const { return findings.empty(); }
    std::string to_json() const;
};

ValidationReport validate_corpus(const CaseCollection& collection);

// Canonical category levels used by the generator.
const std::vector<std::string>& known_states();
const std::vector<std::string>& known_case_types();
const std::vector<std::string>& known_party_types();
const std::vector<std::string>& known_doc_types();

}  // namespace litpred
