// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

// Command-line front end. Everything substantive happens behind the C API of
// the shared library; this file only assembles a config JSON from flags and
// maps status codes to exit codes (0 ok, 2 validation failure, 1 error).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "litpred/litpred.h"

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string corpus_path;
    std::string preset;
    std::string measure;
    std::int64_t seed = -1;
    std::int64_t n_cases = -1;
    int threads = -1;
    int embedding_dim = -1;
    double state_shift = -1.0;
    int rounds = -1;
    bool no_grid = false;
    bool csv_matrix = false;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (or a manifest)");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--seed", f.seed, "global seed");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    cmd->add_option("--preset", f.preset,
                    "generator preset: planted-signal, settlement-bargaining, "
                    "duration-selection, null");
    cmd->add_option("--n-cases", f.n_cases, "number of generated cases");
    cmd->add_option("--embedding-dim", f.embedding_dim, "embedding dimension");
    cmd->add_option("--state-shift", f.state_shift, "per-state embedding nuisance scale");
    cmd->add_option("--corpus", f.corpus_path, "read the corpus from this JSONL file");
    cmd->add_option("--rounds", f.rounds, "boosting rounds");
    cmd->add_option("--measure", f.measure, "complexity measure: entropy or one_minus_max");
    cmd->add_flag("--no-grid", f.no_grid, "skip the hyperparameter grid search");
    cmd->add_flag("--csv", f.csv_matrix, "also export the feature matrix as CSV");
    cmd->add_flag("-v,--verbose", f.verbose, "print stage timings to stderr");
}

std::string build_config(const CommonFlags& f) {
    json j = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            std::cerr << "error: cannot read config file " << f.config_path << "\n";
            std::exit(1);
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        j = json::parse(ss.str());
        if (j.contains("config")) j = j.at("config");  // accept manifests
    }
    if (f.seed >= 0) j["seed"] = f.seed;
    if (!f.out_dir.empty()) j["out_dir"] = f.out_dir;
    if (f.threads >= 0) j["threads"] = f.threads;
    if (!f.corpus_path.empty()) {
        j["corpus"]["source"] = "file";
        j["corpus"]["path"] = f.corpus_path;
    }
    if (!f.preset.empty()) j["corpus"]["generator"]["signal_preset"] = f.preset;
    if (f.n_cases >= 0) j["corpus"]["generator"]["n_cases"] = f.n_cases;
    if (f.embedding_dim > 0) j["corpus"]["generator"]["embedding_dim"] = f.embedding_dim;
    if (f.state_shift >= 0.0) j["corpus"]["generator"]["state_shift"] = f.state_shift;
    if (f.rounds > 0) j["model"]["booster"]["n_rounds"] = f.rounds;
    if (f.no_grid) j["model"]["grid"] = false;
    if (!f.measure.empty()) j["report"]["measure"] = f.measure;
    if (f.csv_matrix) j["emit_csv_matrix"] = true;
    if (f.verbose) j["verbose"] = true;
    return j.dump();
}

int finish(int status) {
    if (status == LITPRED_OK) return 0;
    std::cerr << "error: " << litpred_last_error() << "\n";
    return status == LITPRED_ERR_VALIDATION ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"litpred: litigation outcome prediction pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(litpred_version()));

    CommonFlags flags;
    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const char*);
    };
    const Sub subs[] = {
        {"generate", "generate a synthetic corpus and write it as JSONL", &litpred_cmd_generate},
        {"ingest", "read, validate and canonicalize an external corpus", &litpred_cmd_ingest},
        {"featurize", "build the feature matrix and schema sidecar", &litpred_cmd_featurize},
        {"train", "grid-search and train the full and basic models", &litpred_cmd_train},
        {"report", "emit the analysis bundle (plot-ready tables)", &litpred_cmd_report},
        {"ablate", "run model and split ablations", &litpred_cmd_ablate},
        {"regress", "fit the complexity-determinants regression", &litpred_cmd_regress},
    };

    for (const auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        add_common(cmd, flags);
        cmd->callback([&flags, run = sub.run]() {
            const std::string config = build_config(flags);
            std::exit(finish(run(config.c_str())));
        });
    }
    auto* validate = app.add_subcommand("validate", "check corpus invariants");
    add_common(validate, flags);
    validate->callback([&flags]() {
        const std::string config = build_config(flags);
        int64_t violations = 0;
        const int status = litpred_cmd_validate(config.c_str(), &violations);
        if (status == LITPRED_OK || status == LITPRED_ERR_VALIDATION)
            std::cout << "violations: " << violations << "\n";
        std::exit(finish(status));
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
