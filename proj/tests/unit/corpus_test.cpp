// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <doctest.h>

#include <cmath>
#include <set>

#include "litpred/corpus.hpp"

using namespace litpred;

namespace {

GeneratorConfig small_config(std::int64_t n, std::uint64_t seed, int dim = 16) {
    GeneratorConfig cfg;
    cfg.n_cases = n;
    cfg.embedding_dim = dim;
    cfg.seed = seed;
    return cfg;
}

CaseRecord case_with_days(const std::string& id, const std::vector<Day>& days, Day disposition,
                          Outcome outcome = Outcome::PlaintiffLoss) {
    CaseRecord c;
    c.case_id = id;
    c.jurisdiction = "CA";
    c.case_type = "tort";
    c.plaintiff_type = "individual";
    c.defendant_type = "corporate";
    c.judge_id = "CA-j0";
    c.plaintiff_firm_id = "pf0";
    c.defendant_firm_id = "df0";
    c.outcome = outcome;
    c.start_day = days.front();
    c.disposition_day = disposition;
    for (std::size_t i = 0; i < days.size(); ++i) {
        DocumentRecord d;
        d.case_id = id;
        d.doc_index = static_cast<int>(i) + 1;
        d.filing_day = days[i];
        d.doc_type = i == 0 ? "complaint" : "motion";
        d.summary_embedding = {1.0f, 0.0f};
        d.fulltext_embedding = {0.0f, 1.0f};
        c.documents.push_back(std::move(d));
    }
    return c;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("cluster table reproduces the configured mix exactly") {
    for (const auto& mix : {std::array<double, 3>{0.44, 0.34, 0.22},
                            std::array<double, 3>{0.2, 0.5, 0.3},
                            std::array<double, 3>{0.6, 0.25, 0.15}}) {
        const auto table = planted_cluster_table(mix);
        std::array<double, 3> mean{};
        double total_weight = 0.0;
        for (const auto& c : table.clusters) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                CHECK(c.probs[ks] >= 0.0);
                CHECK(c.probs[ks] <= 1.0);
                mean[ks] += c.weight * c.probs[ks];
                sum += c.probs[ks];
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
            total_weight += c.weight;
        }
        CHECK(std::abs(total_weight - 1.0) < 1e-12);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(mean[static_cast<std::size_t>(k)] - mix[static_cast<std::size_t>(k)]) <
                  1e-9);
    }
}

TEST_CASE("outcome shares and document counts match the defaults at n = 10000") {
    const auto corpus = generate_corpus(small_config(10000, 7));
    std::array<double, 3> shares{};
    for (const auto& c : corpus.cases) shares[static_cast<std::size_t>(c.outcome)] += 1.0;
    for (auto& s : shares) s /= static_cast<double>(corpus.cases.size());
    CHECK(std::abs(shares[0] - 0.44) < 0.02);
    CHECK(std::abs(shares[1] - 0.34) < 0.02);
    CHECK(std::abs(shares[2] - 0.22) < 0.02);

    // Streaming-mean oracle over the emitted records.
    double count = 0.0, mean = 0.0;
    for (const auto& c : corpus.cases) {
        count += 1.0;
        mean += (static_cast<double>(c.documents.size()) - mean) / count;
    }
    CHECK(std::abs(mean - 8.13) < 0.3);
}

TEST_CASE("same seed produces byte-identical corpora") {
    const auto a = generate_corpus(small_config(60, 123, 12));
    const auto b = generate_corpus(small_config(60, 123, 12));
    CHECK(corpus_to_jsonl(a) == corpus_to_jsonl(b));
    const auto c = generate_corpus(small_config(1, 1, 12));
    const auto d = generate_corpus(small_config(1, 1, 12));
    CHECK(corpus_to_jsonl(c) == corpus_to_jsonl(d));
}

TEST_CASE("different seeds differ") {
    const auto a = generate_corpus(small_config(20, 1, 8));
    const auto b = generate_corpus(small_config(20, 2, 8));
    CHECK(corpus_to_jsonl(a) != corpus_to_jsonl(b));
}

TEST_CASE("config validation rejects bad input") {
    GeneratorConfig cfg = small_config(10, 1);
    cfg.outcome_mix = {0.5, 0.5, 0.1};
    CHECK_THROWS_AS(generate_corpus(cfg), Error);
    cfg = small_config(0, 1);
    CHECK_THROWS_AS(generate_corpus(cfg), Error);
    cfg = small_config(10, 1);
    cfg.mean_docs_per_case = 0.3;
    CHECK_THROWS_AS(generate_corpus(cfg), Error);
}

TEST_CASE("ground-truth distributions are recorded and normalized") {
    const auto corpus = generate_corpus(small_config(50, 5, 8));
    for (const auto& c : corpus.cases)
        for (const auto& d : c.documents) {
            REQUIRE(d.truth_probs.has_value());
            const double sum = (*d.truth_probs)[0] + (*d.truth_probs)[1] + (*d.truth_probs)[2];
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
}

TEST_CASE("disposition cutoff keeps the seven-day boundary") {
    SUBCASE("gap of exactly seven days is kept") {
        const auto c = case_with_days("cA", {0, 93, 100}, 100);
        const auto kept = apply_disposition_cutoff(c);
        REQUIRE(kept.size() == 2);
        CHECK(kept[1]->filing_day == 93);
    }
    SUBCASE("gap inside the window is excluded") {
        const auto c = case_with_days("cB", {0, 95, 100}, 100);
        const auto kept = apply_disposition_cutoff(c);
        REQUIRE(kept.size() == 1);
        CHECK(kept[0]->filing_day == 0);
    }
    SUBCASE("brute-force date filter agrees") {
        const auto c = case_with_days("cC", {0, 10, 95, 96, 100}, 100);
        const auto kept = apply_disposition_cutoff(c);
        std::size_t expected = 0;
        for (const auto& d : c.documents)
            if (c.disposition_day - d.filing_day >= 7) ++expected;
        CHECK(kept.size() == expected);
        CHECK(kept.size() == 2);
    }
}

TEST_CASE("corpus file round-trips to an equal collection") {
    const auto corpus = generate_corpus(small_config(25, 99, 8));
    const std::string text = corpus_to_jsonl(corpus);
    const auto back = parse_corpus_jsonl(text, "mem");
    CHECK(back.cases.size() == corpus.cases.size());
    CHECK(back.embedding_dim == corpus.embedding_dim);
    CHECK(corpus_to_jsonl(back) == text);
}

TEST_CASE("ingest rejects a doc_index gap naming case and index") {
    CaseCollection fixture;
    fixture.embedding_dim = 2;
    fixture.cases.push_back(case_with_days("cg", {0, 20, 40}, 40));
    std::string text = corpus_to_jsonl(fixture);
    const std::string needle = "\"case_id\":\"cg\",\"doc_index\":2";
    const auto at = text.find(needle);
    REQUIRE(at != std::string::npos);
    text.replace(at, needle.size(), "\"case_id\":\"cg\",\"doc_index\":9");
    CHECK_THROWS_WITH_AS(parse_corpus_jsonl(text, "mem"),
                         doctest::Contains("case cg missing doc_index 2"), Error);
}

TEST_CASE("ingest rejects duplicates, dimension mismatches and malformed lines") {
    const std::string line =
        R"({"case_id":"cX","doc_index":1,"filing_day":0,"case_type":"tort","jurisdiction":"CA",)"
        R"("plaintiff_type":"individual","defendant_type":"corporate","n_plaintiffs":1,)"
        R"("n_defendants":1,"judge_id":"j","plaintiff_firm_id":"p","defendant_firm_id":"d",)"
        R"("doc_type":"complaint","flags":{"liability_admitted":false,"insurance_involved":false},)"
        R"("monetary_request":null,"summary_embedding":[1.0,0.0],"fulltext_embedding":[0.0,1.0],)"
        R"("outcome":"settlement","disposition_day":30,"truth_probs":null})";
    CHECK_THROWS_WITH_AS(parse_corpus_jsonl(line + "\n" + line + "\n", "mem"),
                         doctest::Contains("duplicate"), Error);

    std::string other = line;
    const auto at = other.find("\"doc_index\":1");
    other.replace(at, 13, "\"doc_index\":2");
    const auto emb = other.find("[1.0,0.0]");
    other.replace(emb, 9, "[1.0,0.0,3.0]");
    CHECK_THROWS_WITH_AS(parse_corpus_jsonl(line + "\n" + other + "\n", "mem"),
                         doctest::Contains("dimension"), Error);

    CHECK_THROWS_WITH_AS(parse_corpus_jsonl("{not json\n", "mem"),
                         doctest::Contains("malformed"), Error);
}

TEST_CASE("hand-written three-case fixture tallies correctly") {
    CaseCollection fixture;
    fixture.embedding_dim = 2;
    fixture.cases.push_back(case_with_days("f1", {0, 20, 40}, 40));
    fixture.cases.push_back(case_with_days("f2", {5, 25}, 25, Outcome::Settlement));
    fixture.cases.push_back(case_with_days("f3", {10}, 10, Outcome::PlaintiffWin));
    const std::string text = corpus_to_jsonl(fixture);
    const auto back = parse_corpus_jsonl(text, "mem");
    CHECK(back.cases.size() == 3);
    CHECK(back.total_documents() == 6);  // 3 + 2 + 1 by hand count
}

TEST_CASE("validate_corpus reports planted violations") {
    auto corpus = generate_corpus(small_config(30, 6, 8));
    CHECK(validate_corpus(corpus).clean());

    SUBCASE("one non-monotone date pair yields exactly one finding") {
        auto broken = corpus;
        auto& c = broken.cases[0];
        REQUIRE(c.documents.size() >= 2);
        c.documents[1].filing_day =
            static_cast<Day>(c.documents[0].filing_day - 5);
        const auto report = validate_corpus(broken);
        REQUIRE(report.findings.size() == 1);
        CHECK(report.findings[0].violation_type == "non_monotone_dates");
        CHECK(report.findings[0].case_id == c.case_id);
    }

    SUBCASE("three planted violations yield three findings") {
        auto broken = corpus;
        std::size_t multi_doc = 0;
        for (std::size_t i = 1; i < broken.cases.size(); ++i)
            if (broken.cases[i].documents.size() >= 2) {
                multi_doc = i;
                break;
            }
        broken.cases[multi_doc].documents[1].doc_index = 7;                 // non-consecutive
        broken.cases[multi_doc + 1].disposition_day =
            static_cast<Day>(broken.cases[multi_doc + 1].start_day - 1);    // before start
        broken.cases[multi_doc + 2].documents[0].summary_embedding.push_back(0.f);  // dim
        const auto report = validate_corpus(broken);
        CHECK(report.findings.size() == 3);
    }
}

TEST_CASE("settlement-bargaining keeps the settle share; duration keeps the doc mean") {
    GeneratorConfig cfg = small_config(4000, 17, 8);
    cfg.signal_preset = SignalPreset::SettlementBargaining;
    const auto bargaining = generate_corpus(cfg);
    double settled = 0.0;
    for (const auto& c : bargaining.cases)
        if (c.outcome == Outcome::Settlement) settled += 1.0;
    CHECK(std::abs(settled / 4000.0 - 0.34) < 0.03);

    cfg.signal_preset = SignalPreset::DurationSelection;
    const auto duration = generate_corpus(cfg);
    const double docs_per_case = static_cast<double>(duration.total_documents()) / 4000.0;
    CHECK(std::abs(docs_per_case - 8.13) < 0.4);
}

TEST_CASE("null preset records the marginal mix as ground truth") {
    GeneratorConfig cfg = small_config(200, 3, 8);
    cfg.signal_preset = SignalPreset::Null;
    const auto corpus = generate_corpus(cfg);
    for (const auto& c : corpus.cases)
        for (const auto& d : c.documents) {
            REQUIRE(d.truth_probs.has_value());
            CHECK((*d.truth_probs)[0] == doctest::Approx(0.44).epsilon(1e-12));
            CHECK((*d.truth_probs)[1] == doctest::Approx(0.34).epsilon(1e-12));
        }
}

}  // TEST_SUITE
