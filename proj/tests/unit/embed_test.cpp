// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "litpred/embed.hpp"

using namespace litpred;

namespace {

CaseRecord random_case(const std::string& id, int n_docs, int dim, Day start, Day disposition,
                       Outcome outcome, Rng& rng) {
    CaseRecord c;
    c.case_id = id;
    c.jurisdiction = "NY";
    c.case_type = "contract";
    c.plaintiff_type = "corporate";
    c.defendant_type = "corporate";
    c.judge_id = "NY-j0";
    c.plaintiff_firm_id = "pf1";
    c.defendant_firm_id = "df1";
    c.outcome = outcome;
    c.start_day = start;
    c.disposition_day = disposition;
    for (int i = 0; i < n_docs; ++i) {
        DocumentRecord d;
        d.case_id = id;
        d.doc_index = i + 1;
        d.filing_day = static_cast<Day>(start + i);
        d.doc_type = "motion";
        d.summary_embedding.resize(static_cast<std::size_t>(dim));
        d.fulltext_embedding.resize(static_cast<std::size_t>(dim));
        for (auto& v : d.summary_embedding) v = static_cast<float>(rng.normal());
        for (auto& v : d.fulltext_embedding) v = static_cast<float>(rng.normal());
        c.documents.push_back(std::move(d));
    }
    return c;
}

CaseCollection random_collection(std::size_t n_cases, int dim, std::uint64_t seed) {
    Rng rng(seed);
    CaseCollection col;
    col.embedding_dim = dim;
    for (std::size_t i = 0; i < n_cases; ++i) {
        const Day start = static_cast<Day>(rng.uniform_int(0, 2000));
        const Day disposition = static_cast<Day>(start + rng.uniform_int(10, 400));
        const auto outcome = static_cast<Outcome>(rng.uniform_int(0, 2));
        col.cases.push_back(random_case("r" + std::to_string(1000 + i),
                                        static_cast<int>(rng.uniform_int(1, 6)), dim, start,
                                        disposition, outcome, rng));
    }
    return col;
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("cumulative embedding is the prefix mean") {
    Rng rng(1);
    const auto c = random_case("c1", 5, 16, 0, 100, Outcome::PlaintiffWin, rng);

    SUBCASE("first document is its own mean") {
        const auto cum = cumulative_embedding(c, 1, EmbeddingSource::Summary);
        for (int k = 0; k < 16; ++k)
            CHECK(cum.vector[k] ==
                  doctest::Approx(c.documents[0].summary_embedding[static_cast<std::size_t>(k)])
                      .epsilon(1e-12));
    }
    SUBCASE("two orthogonal unit vectors average to the midpoint") {
        CaseRecord simple = c;
        simple.documents.resize(2);
        for (auto& d : simple.documents) {
            d.summary_embedding.assign(2, 0.0f);
            d.fulltext_embedding.assign(2, 0.0f);
        }
        simple.documents[0].summary_embedding = {1.0f, 0.0f};
        simple.documents[1].summary_embedding = {0.0f, 1.0f};
        const auto cum = cumulative_embedding(simple, 2, EmbeddingSource::Summary);
        CHECK(cum.vector[0] == doctest::Approx(0.5));
        CHECK(cum.vector[1] == doctest::Approx(0.5));
    }
    SUBCASE("matches an independent summation oracle") {
        const auto cum = cumulative_embedding(c, 4, EmbeddingSource::Fulltext);
        for (int k = 0; k < 16; ++k) {
            double naive = 0.0;
            for (int i = 0; i < 4; ++i)
                naive += static_cast<double>(
                    c.documents[static_cast<std::size_t>(i)]
                        .fulltext_embedding[static_cast<std::size_t>(k)]);
            naive /= 4.0;
            CHECK(std::abs(cum.vector[k] - naive) < 1e-12);
        }
    }
    SUBCASE("out-of-range ordinal is rejected") {
        CHECK_THROWS_AS(cumulative_embedding(c, 0, EmbeddingSource::Summary), Error);
        CHECK_THROWS_AS(cumulative_embedding(c, 6, EmbeddingSource::Summary), Error);
    }
}

TEST_CASE("reducer is a seeded gaussian projection to eight components") {
    SUBCASE("same seed and dimension give identical matrices") {
        const auto a = fit_reducer(64, 3);
        const auto b = fit_reducer(64, 3);
        CHECK(a.projection == b.projection);
        const auto c = fit_reducer(64, 4);
        CHECK(a.projection != c.projection);
    }
    SUBCASE("input dimension below eight is rejected") {
        CHECK_THROWS_AS(fit_reducer(7, 1), Error);
    }
    SUBCASE("column norms average close to one") {
        const auto r = fit_reducer(384, 3);
        double mean_norm = 0.0;
        for (int j = 0; j < 384; ++j) mean_norm += r.projection.col(j).norm();
        mean_norm /= 384.0;
        CHECK(std::abs(mean_norm - 1.0) < 0.1);
    }
    SUBCASE("output has length eight and the map is linear") {
        const auto r = fit_reducer(32, 9);
        Rng rng(5);
        Eigen::VectorXd x(32), y(32);
        for (int i = 0; i < 32; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        CHECK(apply_reducer(r, Eigen::VectorXd::Zero(32)).norm() == 0.0);
        const Eigen::VectorXd lhs = apply_reducer(r, x + y);
        const Eigen::VectorXd rhs = apply_reducer(r, x) + apply_reducer(r, y);
        CHECK(apply_reducer(r, x).size() == 8);
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK_THROWS_AS(apply_reducer(r, Eigen::VectorXd::Zero(31)), Error);
    }
    SUBCASE("pairwise distances survive the 384 to 8 projection") {
        const auto r = fit_reducer(384, 12);
        Rng rng(77);
        std::vector<Eigen::VectorXd> points;
        for (int i = 0; i < 50; ++i) {
            Eigen::VectorXd x(384);
            for (int k = 0; k < 384; ++k) x[k] = rng.normal();
            points.push_back(std::move(x));
        }
        std::size_t within = 0, total = 0;
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                const double original = (points[i] - points[j]).norm();
                const double reduced =
                    (apply_reducer(r, points[i]) - apply_reducer(r, points[j])).norm();
                ++total;
                if (std::abs(reduced - original) / original < 0.6) ++within;
            }
        CHECK(static_cast<double>(within) / static_cast<double>(total) >= 0.9);
    }
}

TEST_CASE("cosine distance is symmetric, bounded and zero on equal vectors") {
    Rng rng(8);
    Eigen::VectorXd a(10), b(10);
    for (int i = 0; i < 10; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
    }
    CHECK(cosine_distance(a, b) == doctest::Approx(cosine_distance(b, a)).epsilon(1e-15));
    CHECK(cosine_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine_distance(a, -a) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cosine_distance(a, b) >= 0.0);
    CHECK(cosine_distance(a, b) <= 2.0);
    CHECK(cosine_distance(Eigen::VectorXd::Zero(10), b) == 1.0);
}

TEST_CASE("neighbor index holds one entry per case keyed by its final embedding") {
    const auto col = random_collection(3, 8, 21);
    const auto index = build_neighbor_index(col, EmbeddingSource::Summary);
    REQUIRE(index.size() == 3);
    for (const auto& c : col.cases) {
        const auto pos = index.position_of(c.case_id);
        REQUIRE(pos.has_value());
        const auto cum =
            cumulative_embedding(c, static_cast<int>(c.documents.size()), EmbeddingSource::Summary);
        const auto expected = normalize_to_float(cum.vector);
        const auto stored = index.entry_vector(*pos);
        for (int k = 0; k < 8; ++k) CHECK(stored[k] == expected[k]);
    }
}

TEST_CASE("self-query finds distance zero when eligibility is disabled") {
    const auto col = random_collection(10, 12, 33);
    const auto index = build_neighbor_index(col, EmbeddingSource::Summary);
    for (const auto& c : col.cases) {
        const auto cum =
            cumulative_embedding(c, static_cast<int>(c.documents.size()), EmbeddingSource::Summary);
        // A far-future focal start makes every entry eligible; a fake focal id
        // keeps the case itself in the candidate set.
        const auto set = index.query(cum.vector, "someone-else", 1 << 20, 1);
        REQUIRE(set.neighbors.size() == 1);
        CHECK(set.neighbors[0].case_id == c.case_id);
        CHECK(set.neighbors[0].distance < 1e-6);
    }
}

TEST_CASE("temporal eligibility excludes cases resolved at or after the focal start") {
    Rng rng(2);
    CaseCollection col;
    col.embedding_dim = 4;
    col.cases.push_back(random_case("early", 2, 4, 0, 39, Outcome::PlaintiffWin, rng));
    col.cases.push_back(random_case("late", 2, 4, 0, 50, Outcome::PlaintiffLoss, rng));
    const auto index = build_neighbor_index(col, EmbeddingSource::Summary);

    Eigen::VectorXd query = Eigen::VectorXd::Ones(4);
    const auto set = index.query(query, "focal", 40, 10);
    CHECK(set.eligible_count == 1);
    REQUIRE(set.neighbors.size() == 1);
    CHECK(set.neighbors[0].case_id == "early");  // resolved day 39 < start 40
}

TEST_CASE("query matches an exhaustive scan oracle on 100 cases") {
    const auto col = random_collection(100, 16, 55);
    const auto index = build_neighbor_index(col, EmbeddingSource::Fulltext);
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd query(16);
        for (int k = 0; k < 16; ++k) query[k] = rng.normal();
        const Day focal_start = static_cast<Day>(rng.uniform_int(0, 2500));
        const auto set = index.query(query, "nobody", focal_start, 10);

        // Oracle: full linear scan with the same float arithmetic, then a
        // total-order sort.
        const auto unit = normalize_to_float(query);
        std::vector<std::pair<float, std::string>> all;
        for (std::size_t pos = 0; pos < index.size(); ++pos) {
            const auto& e = index.entry(pos);
            if (e.resolution_day >= focal_start) continue;
            all.emplace_back(index.entry_distance(pos, unit), e.case_id);
        }
        std::sort(all.begin(), all.end());
        CHECK(set.eligible_count == all.size());
        REQUIRE(set.neighbors.size() == std::min<std::size_t>(10, all.size()));
        for (std::size_t i = 0; i < set.neighbors.size(); ++i) {
            CHECK(set.neighbors[i].case_id == all[i].second);
            // Double-precision cross-check of the float distances.
            const auto pos = index.position_of(all[i].second);
            const auto& c = col.cases[[&] {
                for (std::size_t ci = 0; ci < col.cases.size(); ++ci)
                    if (col.cases[ci].case_id == all[i].second) return ci;
                return std::size_t{0};
            }()];
            const auto cum = cumulative_embedding(c, static_cast<int>(c.documents.size()),
                                                  EmbeddingSource::Fulltext);
            (void)pos;
            CHECK(std::abs(set.neighbors[i].distance - cosine_distance(query, cum.vector)) < 1e-5);
        }
    }
}

TEST_CASE("query results are invariant to collection insertion order") {
    auto col = random_collection(40, 8, 66);
    auto shuffled = col;
    Rng rng(9);
    rng.shuffle(shuffled.cases);
    const auto a = build_neighbor_index(col, EmbeddingSource::Summary);
    const auto b = build_neighbor_index(shuffled, EmbeddingSource::Summary);

    Eigen::VectorXd query(8);
    for (int k = 0; k < 8; ++k) query[k] = rng.normal();
    const auto sa = a.query(query, "x", 1500, 7);
    const auto sb = b.query(query, "x", 1500, 7);
    REQUIRE(sa.neighbors.size() == sb.neighbors.size());
    for (std::size_t i = 0; i < sa.neighbors.size(); ++i) {
        CHECK(sa.neighbors[i].case_id == sb.neighbors[i].case_id);
        CHECK(sa.neighbors[i].distance == sb.neighbors[i].distance);
    }
}

TEST_CASE("empty eligible set yields an empty neighbor list") {
    const auto col = random_collection(5, 8, 11);
    const auto index = build_neighbor_index(col, EmbeddingSource::Summary);
    const auto set = index.query(Eigen::VectorXd::Ones(8), "x", -1000, 5);
    CHECK(set.eligible_count == 0);
    CHECK(set.neighbors.empty());
    CHECK_THROWS_AS(index.query(Eigen::VectorXd::Ones(8), "x", 10, 0), Error);
}

}  // TEST_SUITE
