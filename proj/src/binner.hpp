// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "litpred/features.hpp"

namespace litpred {

// Equal-frequency quantile binning computed once on a training matrix and
// frozen. Bin b holds values v with cuts[b-1] < v <= cuts[b]; the last bin is
// unbounded above. Split "bin <= b" therefore matches "value <= cuts[b]".
struct Binner {
    std::vector<std::vector<double>> cuts;      // per feature, ascending, unique
    std::vector<std::uint8_t> codes;            // column-major, n_rows per feature
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    static Binner build(const FeatureMatrix& X, int max_bins, int threads) {
        Binner b;
        b.n_rows = X.n_rows;
        b.n_cols = X.n_cols;
        b.cuts.resize(X.n_cols);
        b.codes.resize(X.n_rows * X.n_cols);
        parallel_blocks(X.n_cols, threads, [&](std::size_t begin, std::size_t end) {
            std::vector<double> sorted;
            for (std::size_t f = begin; f < end; ++f) {
                const double* col = X.col(f);
                sorted.assign(col, col + X.n_rows);
                std::sort(sorted.begin(), sorted.end());
                auto& cut = b.cuts[f];
                cut.clear();
                const auto n = X.n_rows;
                for (int q = 1; q < max_bins; ++q) {
                    const auto pos = static_cast<std::size_t>(
                        static_cast<std::uint64_t>(q) * n / static_cast<std::uint64_t>(max_bins));
                    if (pos >= n) break;
                    const double v = sorted[pos == 0 ? 0 : pos - 1];
                    if (cut.empty() || v > cut.back()) cut.push_back(v);
                }
                // A cut at or above the maximum would leave the last bin empty.
                while (!cut.empty() && cut.back() >= sorted.back()) cut.pop_back();
                std::uint8_t* out = b.codes.data() + f * n;
                for (std::size_t r = 0; r < n; ++r) out[r] = b.code(f, col[r]);
            }
        });
        return b;
    }

    std::uint8_t code(std::size_t f, double v) const {
        const auto& cut = cuts[f];
        const auto it = std::lower_bound(cut.begin(), cut.end(), v);
        return static_cast<std::uint8_t>(it - cut.begin());
    }

    int bin_count(std::size_t f) const { return static_cast<int>(cuts[f].size()) + 1; }

    const std::uint8_t* col(std::size_t f) const { return codes.data() + f * n_rows; }
};

}  // namespace litpred
