// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#pragma once

#include <chrono>
#include <iostream>
#include <string>

#include "litpred/pipeline.hpp"

namespace litpred {

class StageTimer {
public:
    StageTimer(Manifest* manifest, std::string name, bool verbose)
        : manifest_(manifest), name_(std::move(name)), verbose_(verbose),
          start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const auto ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
                .count();
        if (manifest_) manifest_->record_timing(name_, ms);
        if (verbose_)
            std::cerr << "[litpred] " << name_ << ": " << static_cast<long>(ms) << " ms\n";
    }

private:
    Manifest* manifest_;
    std::string name_;
    bool verbose_;
    std::chrono::steady_clock::time_point start_;
};

inline std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

}  // namespace litpred
