// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/litpred.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "litpred/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

int set_error(const litpred::Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
        case litpred::ErrorCode::InvalidArgument: return LITPRED_ERR_INVALID_ARGUMENT;
        case litpred::ErrorCode::Io: return LITPRED_ERR_IO;
        case litpred::ErrorCode::Validation: return LITPRED_ERR_VALIDATION;
        case litpred::ErrorCode::Internal: return LITPRED_ERR_INTERNAL;
    }
    return LITPRED_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const litpred::Error& e) {
        return set_error(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LITPRED_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return LITPRED_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

litpred::GeneratorConfig generator_from_json_text(const char* text) {
    using nlohmann::json;
    const json j = json::parse(text ? text : "{}");
    litpred::GeneratorConfig g;
    g.n_cases = j.value("n_cases", static_cast<std::int64_t>(1000));
    if (j.contains("outcome_mix")) {
        const auto mix = j.at("outcome_mix").get<std::vector<double>>();
        if (mix.size() != 3)
            litpred::raise(litpred::ErrorCode::InvalidArgument, "outcome_mix must have 3 entries");
        for (int k = 0; k < 3; ++k)
            g.outcome_mix[static_cast<std::size_t>(k)] = mix[static_cast<std::size_t>(k)];
    }
    g.mean_docs_per_case = j.value("mean_docs_per_case", 8.13);
    g.embedding_dim = j.value("embedding_dim", 384);
    g.signal_preset =
        litpred::preset_from_name(j.value("signal_preset", std::string("planted-signal")));
    g.seed = j.value("seed", static_cast<std::uint64_t>(0));
    g.state_shift = j.value("state_shift", 0.0);
    return g;
}

template <typename Cmd>
int run_command(const char* config_json, Cmd&& cmd) {
    return guarded([&]() {
        const auto config = litpred::PipelineConfig::from_json(config_json ? config_json : "{}");
        cmd(config);
        return LITPRED_OK;
    });
}

}  // namespace

struct litpred_corpus {
    litpred::CaseCollection collection;
};

struct litpred_model {
    litpred::ModelHandle handle;
};

extern "C" {

const char* litpred_version(void) { return "0.1.0"; }

const char* litpred_last_error(void) { return g_last_error.c_str(); }

void litpred_string_free(char* s) { delete[] s; }

int litpred_corpus_generate(const char* generator_config_json, litpred_corpus** out) {
    return guarded([&]() {
        if (!out) {
            g_last_error = "out pointer is null";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        const auto config = generator_from_json_text(generator_config_json);
        auto* corpus = new litpred_corpus{litpred::generate_corpus(config)};
        *out = corpus;
        return LITPRED_OK;
    });
}

int litpred_corpus_open(const char* path, litpred_corpus** out) {
    return guarded([&]() {
        if (!out || !path) {
            g_last_error = "null argument";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        auto* corpus = new litpred_corpus{litpred::ingest_corpus(path)};
        *out = corpus;
        return LITPRED_OK;
    });
}

int litpred_corpus_save(const litpred_corpus* corpus, const char* path) {
    return guarded([&]() {
        if (!corpus || !path) {
            g_last_error = "null argument";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        litpred::write_corpus(corpus->collection, path);
        return LITPRED_OK;
    });
}

int litpred_corpus_counts(const litpred_corpus* corpus, int64_t* n_cases, int64_t* n_documents) {
    return guarded([&]() {
        if (!corpus) {
            g_last_error = "null corpus";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        if (n_cases) *n_cases = static_cast<int64_t>(corpus->collection.cases.size());
        if (n_documents) *n_documents = static_cast<int64_t>(corpus->collection.total_documents());
        return LITPRED_OK;
    });
}

int litpred_corpus_validate(const litpred_corpus* corpus, char** report_json,
                            int64_t* n_violations) {
    return guarded([&]() {
        if (!corpus) {
            g_last_error = "null corpus";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        const auto report = litpred::validate_corpus(corpus->collection);
        if (report_json) *report_json = dup_string(report.to_json());
        if (n_violations) *n_violations = static_cast<int64_t>(report.findings.size());
        return LITPRED_OK;
    });
}

void litpred_corpus_free(litpred_corpus* corpus) { delete corpus; }

int litpred_model_open(const char* path, litpred_model** out) {
    return guarded([&]() {
        if (!out || !path) {
            g_last_error = "null argument";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        auto* model =
            new litpred_model{litpred::ModelHandle::from_json(litpred::read_text_file(path))};
        *out = model;
        return LITPRED_OK;
    });
}

int litpred_model_predict(const litpred_model* model, const double* features, size_t n_features,
                          double out_probs[3]) {
    return guarded([&]() {
        if (!model || !features || !out_probs) {
            g_last_error = "null argument";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        const std::vector<double> row(features, features + n_features);
        const auto probs = model->handle.predict_proba(row);
        for (int k = 0; k < 3; ++k) out_probs[k] = probs.p[static_cast<std::size_t>(k)];
        return LITPRED_OK;
    });
}

void litpred_model_free(litpred_model* model) { delete model; }

int litpred_entropy(const double probs[3], double* out) {
    return guarded([&]() {
        if (!probs || !out) {
            g_last_error = "null argument";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        litpred::OutcomeProbabilities p;
        for (int k = 0; k < 3; ++k) p.p[static_cast<std::size_t>(k)] = probs[k];
        *out = litpred::entropy(p);
        return LITPRED_OK;
    });
}

int litpred_one_minus_max(const double probs[3], double* out) {
    return guarded([&]() {
        if (!probs || !out) {
            g_last_error = "null argument";
            return LITPRED_ERR_INVALID_ARGUMENT;
        }
        litpred::OutcomeProbabilities p;
        for (int k = 0; k < 3; ++k) p.p[static_cast<std::size_t>(k)] = probs[k];
        *out = litpred::one_minus_max(p);
        return LITPRED_OK;
    });
}

int litpred_cmd_generate(const char* config_json) {
    return run_command(config_json, litpred::cmd_generate);
}
int litpred_cmd_ingest(const char* config_json) {
    return run_command(config_json, litpred::cmd_ingest);
}
int litpred_cmd_validate(const char* config_json, int64_t* n_violations) {
    return guarded([&]() {
        const auto config = litpred::PipelineConfig::from_json(config_json ? config_json : "{}");
        const auto violations = litpred::cmd_validate(config);
        if (n_violations) *n_violations = static_cast<int64_t>(violations);
        if (violations > 0) {
            g_last_error = "corpus has " + std::to_string(violations) + " invariant violations";
            return LITPRED_ERR_VALIDATION;
        }
        return LITPRED_OK;
    });
}
int litpred_cmd_featurize(const char* config_json) {
    return run_command(config_json, litpred::cmd_featurize);
}
int litpred_cmd_train(const char* config_json) {
    return run_command(config_json, litpred::cmd_train);
}
int litpred_cmd_report(const char* config_json) {
    return run_command(config_json, litpred::cmd_report);
}
int litpred_cmd_ablate(const char* config_json) {
    return run_command(config_json, litpred::cmd_ablate);
}
int litpred_cmd_regress(const char* config_json) {
    return run_command(config_json, litpred::cmd_regress);
}

}  // extern "C"
