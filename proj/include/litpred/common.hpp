// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace litpred {

using Day = std::int32_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode : int {
    InvalidArgument = 1,
    Io = 2,
    Validation = 3,
    Internal = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// All stochastic components draw from this engine with explicitly coded
// distributions so that a seed pins the byte stream on every platform.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(const void* data, std::size_t n);
inline std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }
std::string fnv1a64_hex(const void* data, std::size_t n);

/// Derives an independent stream seed from a base seed and a component tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t s = base ^ fnv1a64(tag);
    return splitmix64(s);
}

/// xoshiro256++ with explicit distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(bounded(span));
    }

    /// Standard normal via Box-Muller (second draw cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    /// Shifted geometric count >= 1 with the given mean (mean >= 1).
    std::int64_t geometric_count(double mean) {
        if (mean <= 1.0) return 1;
        const double p = 1.0 / mean;  // E[1 + G(p)] = 1/p
        const double u = 1.0 - uniform();
        const auto extra = static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-p)));
        return 1 + std::max<std::int64_t>(0, extra);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    // Lemire's bounded integer rejection method.
    std::uint64_t bounded(std::uint64_t span) {
        if (span == 0) return next_u64();
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * span;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < span) {
            const std::uint64_t threshold = (0 - span) % span;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * span;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::array<std::uint64_t, 4> s_{};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// ---------------------------------------------------------------------------
// Parallel helpers
//
// Work is split into contiguous blocks and every output slot is owned by
// exactly one index, so results are identical for any thread count.
// ---------------------------------------------------------------------------

int resolve_threads(int requested);

void parallel_blocks(std::size_t n, int threads,
                     const std::function<void(std::size_t begin, std::size_t end)>& fn);

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t i)>& fn);

// ---------------------------------------------------------------------------
// Formatting and file helpers
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);
/// Shortest round-trip decimal form of a float.
std::string format_float(float v);

std::string read_text_file(const std::string& path);
/// Writes via a temp file in the same directory followed by rename.
void atomic_write_file(const std::string& path, std::string_view content);
void ensure_parent_dir(const std::string& path);
void ensure_dir(const std::string& path);
std::uint64_t file_fnv64(const std::string& path);
std::uintmax_t file_size_bytes(const std::string& path);

std::string to_hex(std::uint64_t v);

}  // namespace litpred
