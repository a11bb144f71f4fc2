// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/common.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

namespace litpred {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string fnv1a64_hex(const void* data, std::size_t n) { return to_hex(fnv1a64(data, n)); }

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_blocks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    const auto nblocks = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    const std::size_t base = n / nblocks;
    const std::size_t rem = n % nblocks;
    std::vector<std::thread> pool;
    pool.reserve(nblocks);
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t len = base + (b < rem ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&, begin, end]() {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_float(float v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) raise(ErrorCode::Io, "read failure: " + path);
    return ss.str();
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) raise(ErrorCode::Io, "cannot create directory " + path + ": " + ec.message());
}

void ensure_parent_dir(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path() && !p.parent_path().empty()) ensure_dir(p.parent_path().string());
}

void atomic_write_file(const std::string& path, std::string_view content) {
    ensure_parent_dir(path);
    static std::atomic<std::uint64_t> counter{0};
    const std::string tmp =
        path + ".tmp." + std::to_string(counter.fetch_add(1)) + "." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::Io, "cannot open file for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) raise(ErrorCode::Io, "write failure: " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        raise(ErrorCode::Io, "cannot rename " + tmp + " -> " + path + ": " + ec.message());
    }
}

std::uint64_t file_fnv64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot open file for hashing: " + path);
    std::uint64_t h = 0xCBF29CE484222325ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

std::uintmax_t file_size_bytes(const std::string& path) {
    std::error_code ec;
    const auto sz = fs::file_size(path, ec);
    if (ec) raise(ErrorCode::Io, "cannot stat " + path + ": " + ec.message());
    return sz;
}

}  // namespace litpred
