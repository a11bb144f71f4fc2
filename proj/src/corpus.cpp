// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 litpred contributors

#include "litpred/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace litpred {

using nlohmann::json;

namespace {

const std::vector<std::string> kStates = {"AZ", "CA", "DE", "FL", "IL", "MA",
                                          "NJ", "NY", "OH", "PA", "TX", "VA"};

// Index order matches the planted cluster table below.
const std::vector<std::string> kCaseTypes = {
    "tort",         "contract",          "employment",          "bankruptcy",
    "business_corporate", "intellectual_property", "property_real_estate"};

const std::vector<std::string> kPartyTypes = {"corporate", "individual", "government",
                                              "multiple_individuals"};

const std::vector<std::string> kDocTypes = {
    "complaint", "motion",      "brief",   "order",    "notice",
    "hearing",   "stipulation", "exhibit", "dismissal", "settlement_agreement",
    "judgment"};

constexpr double kLn3 = 1.0986122886681098;

struct TypeSpec {
    double prob;        // case-type prior
    double merit_mean;  // mean of the latent merit scalar
    int anchor_neg;     // outcome class anchoring the negative-merit bin
    double sharp_neg;
    int anchor_pos;
    double sharp_pos;
};

// P(merit >= 0) equals 0.25 / 0.30 / 0.35 / 0.50 under the listed means.
const TypeSpec kTypeSpecs[7] = {
    {0.14, -0.67448975, 0, 0.80, 2, 0.97},  // tort: sharp, sign flips class
    {0.14, -0.52440051, 0, 0.62, 1, 0.93},  // contract
    {0.15, -0.38532047, 0, 0.57, 2, 0.60},  // employment
    {0.15, 0.0, 1, 0.52, 1, 0.48},          // bankruptcy: settle-leaning both bins
    {0.15, 0.0, 0, 0.08, 2, 0.08},          // business_corporate: near-mix
    {0.14, 0.0, 1, 0.45, 2, 0.28},          // intellectual_property
    {0.13, 0.0, 1, 0.30, 2, 0.20},          // property_real_estate
};

constexpr double kSharpnessCap = 0.97;

double entropy3(const std::array<double, 3>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

double bin_pos_prob(int t) {
    switch (t) {
        case 0: return 0.25;
        case 1: return 0.30;
        case 2: return 0.35;
        default: return 0.50;
    }
}

// Concave settlement weight over normalized base entropy; interior peak.
double settle_weight(double h_norm) {
    return 0.08 + 1.6545 * h_norm - 1.4545 * h_norm * h_norm;
}

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& known_states() { return kStates; }
const std::vector<std::string>& known_case_types() { return kCaseTypes; }
const std::vector<std::string>& known_party_types() { return kPartyTypes; }
const std::vector<std::string>& known_doc_types() { return kDocTypes; }

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::PlaintiffLoss: return "plaintiff_loss";
        case Outcome::Settlement: return "settlement";
        case Outcome::PlaintiffWin: return "plaintiff_win";
    }
    raise(ErrorCode::Internal, "bad outcome value");
}

Outcome outcome_from_name(const std::string& name) {
    if (name == "plaintiff_loss") return Outcome::PlaintiffLoss;
    if (name == "settlement") return Outcome::Settlement;
    if (name == "plaintiff_win") return Outcome::PlaintiffWin;
    raise(ErrorCode::InvalidArgument, "unknown outcome label: " + name);
}

const char* preset_name(SignalPreset p) {
    switch (p) {
        case SignalPreset::PlantedSignal: return "planted-signal";
        case SignalPreset::SettlementBargaining: return "settlement-bargaining";
        case SignalPreset::DurationSelection: return "duration-selection";
        case SignalPreset::Null: return "null";
    }
    raise(ErrorCode::Internal, "bad preset value");
}

SignalPreset preset_from_name(const std::string& name) {
    if (name == "planted-signal") return SignalPreset::PlantedSignal;
    if (name == "settlement-bargaining") return SignalPreset::SettlementBargaining;
    if (name == "duration-selection") return SignalPreset::DurationSelection;
    if (name == "null") return SignalPreset::Null;
    raise(ErrorCode::InvalidArgument, "unknown signal preset: " + name);
}

void GeneratorConfig::validate() const {
    if (n_cases <= 0) raise(ErrorCode::InvalidArgument, "n_cases must be positive");
    double sum = 0.0;
    for (double v : outcome_mix) {
        if (v < 0.0 || v > 1.0)
            raise(ErrorCode::InvalidArgument, "outcome_mix components must lie in [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        raise(ErrorCode::InvalidArgument,
              "outcome_mix must sum to 1 within 1e-9, got " + format_double(sum));
    if (mean_docs_per_case < 1.0)
        raise(ErrorCode::InvalidArgument, "mean_docs_per_case must be >= 1");
    if (embedding_dim <= 0) raise(ErrorCode::InvalidArgument, "embedding_dim must be positive");
    if (state_shift < 0.0) raise(ErrorCode::InvalidArgument, "state_shift must be non-negative");
}

ClusterTable planted_cluster_table(const std::array<double, 3>& mix) {
    // Each cluster interpolates between the configured mix and a pure anchor
    // class: p = (1 - s) * mix + s * e_anchor. Scaling the sharpness mass of
    // each anchor class proportionally to the mix keeps the weighted mean of
    // the table equal to the mix exactly.
    ClusterTable table;
    std::array<double, 3> anchor_mass = {0.0, 0.0, 0.0};
    double total_mass = 0.0;
    for (int t = 0; t < 7; ++t) {
        const auto& ts = kTypeSpecs[t];
        const double beta = bin_pos_prob(t);
        const double w_neg = ts.prob * (1.0 - beta);
        const double w_pos = ts.prob * beta;
        anchor_mass[static_cast<std::size_t>(ts.anchor_neg)] += w_neg * ts.sharp_neg;
        anchor_mass[static_cast<std::size_t>(ts.anchor_pos)] += w_pos * ts.sharp_pos;
        total_mass += w_neg * ts.sharp_neg + w_pos * ts.sharp_pos;
    }
    std::array<double, 3> gamma = {0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        if (mix[ks] > 0.0 && anchor_mass[ks] <= 0.0)
            raise(ErrorCode::Internal, "cluster table lacks an anchor for a requested class");
        gamma[ks] = anchor_mass[ks] > 0.0 ? mix[ks] * total_mass / anchor_mass[ks] : 0.0;
    }
    double max_sharp = 0.0;
    for (int t = 0; t < 7; ++t) {
        const auto& ts = kTypeSpecs[t];
        max_sharp = std::max(max_sharp,
                             ts.sharp_neg * gamma[static_cast<std::size_t>(ts.anchor_neg)]);
        max_sharp = std::max(max_sharp,
                             ts.sharp_pos * gamma[static_cast<std::size_t>(ts.anchor_pos)]);
    }
    if (max_sharp > kSharpnessCap)
        for (auto& g : gamma) g *= kSharpnessCap / max_sharp;

    for (int t = 0; t < 7; ++t) {
        const auto& ts = kTypeSpecs[t];
        const double beta = bin_pos_prob(t);
        for (int bin = 0; bin < 2; ++bin) {
            const int anchor = bin == 0 ? ts.anchor_neg : ts.anchor_pos;
            const double base_sharp = bin == 0 ? ts.sharp_neg : ts.sharp_pos;
            const double s = base_sharp * gamma[static_cast<std::size_t>(anchor)];
            std::array<double, 3> p{};
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                p[ks] = (1.0 - s) * mix[ks] + (k == anchor ? s : 0.0);
                sum += p[ks];
            }
            for (auto& v : p) v /= sum;  // guards rounding; sum is 1 by construction
            table.clusters.push_back(
                {t, bin, ts.prob * (bin == 0 ? 1.0 - beta : beta), p});
        }
    }
    return table;
}

namespace {

struct PresetTables {
    // Final per-cluster outcome distributions after the preset layer.
    std::vector<std::array<double, 3>> probs;
    // Per-cluster document-count and day-gap multipliers (mean-one).
    std::vector<double> doc_factor;
    std::vector<double> gap_factor;
};

PresetTables build_preset_tables(const GeneratorConfig& cfg) {
    const ClusterTable base = planted_cluster_table(cfg.outcome_mix);
    const std::size_t n = base.clusters.size();
    PresetTables out;
    out.probs.resize(n);
    out.doc_factor.assign(n, 1.0);
    out.gap_factor.assign(n, 1.0);

    std::vector<double> h_norm(n);
    for (std::size_t c = 0; c < n; ++c)
        h_norm[c] = entropy3(base.clusters[c].probs) / kLn3;

    switch (cfg.signal_preset) {
        case SignalPreset::PlantedSignal: {
            for (std::size_t c = 0; c < n; ++c) out.probs[c] = base.clusters[c].probs;
            break;
        }
        case SignalPreset::Null: {
            for (std::size_t c = 0; c < n; ++c) out.probs[c] = cfg.outcome_mix;
            break;
        }
        case SignalPreset::SettlementBargaining: {
            double mean_weight = 0.0;
            for (std::size_t c = 0; c < n; ++c)
                mean_weight += base.clusters[c].weight * settle_weight(h_norm[c]);
            const double scale = cfg.outcome_mix[1] > 0.0 && mean_weight > 0.0
                                     ? cfg.outcome_mix[1] / mean_weight
                                     : 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                const auto& p0 = base.clusters[c].probs;
                double ps = std::clamp(settle_weight(h_norm[c]) * scale, 0.02, 0.92);
                const double lw = p0[0] + p0[2];
                const double pl = lw > 0.0 ? (1.0 - ps) * p0[0] / lw : (1.0 - ps) * 0.5;
                out.probs[c] = {pl, ps, 1.0 - ps - pl};
            }
            break;
        }
        case SignalPreset::DurationSelection: {
            double mean_doc = 0.0, mean_gap = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                mean_doc += base.clusters[c].weight * (0.45 + 1.65 * h_norm[c]);
                mean_gap += base.clusters[c].weight * (0.40 + 1.80 * h_norm[c]);
            }
            for (std::size_t c = 0; c < n; ++c) {
                out.probs[c] = base.clusters[c].probs;
                out.doc_factor[c] = (0.45 + 1.65 * h_norm[c]) / mean_doc;
                out.gap_factor[c] = (0.40 + 1.80 * h_norm[c]) / mean_gap;
            }
            break;
        }
    }
    return out;
}

std::vector<float> draw_direction(Rng& rng, int dim, double scale) {
    std::vector<float> v(static_cast<std::size_t>(dim));
    const double s = scale / std::sqrt(static_cast<double>(dim));
    for (auto& x : v) x = static_cast<float>(rng.normal() * s);
    return v;
}

int draw_categorical(Rng& rng, const std::vector<double>& probs) {
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

std::string padded_id(const char* prefix, std::int64_t i, int width) {
    std::string digits = std::to_string(i);
    std::string out(prefix);
    if (static_cast<int>(digits.size()) < width)
        out.append(static_cast<std::size_t>(width) - digits.size(), '0');
    out += digits;
    return out;
}

}  // namespace

CaseCollection generate_corpus(const GeneratorConfig& config) {
    config.validate();
    const int dim = config.embedding_dim;
    Rng rng(derive_seed(config.seed, "corpus-generator"));

    const PresetTables tables = build_preset_tables(config);

    // Latent embedding geometry: one mean per (case_type, merit-bin) cluster
    // and source, plus per-state nuisance directions.
    std::vector<std::vector<float>> cluster_mean_summary, cluster_mean_fulltext;
    for (int c = 0; c < 14; ++c) cluster_mean_summary.push_back(draw_direction(rng, dim, 1.0));
    for (int c = 0; c < 14; ++c) cluster_mean_fulltext.push_back(draw_direction(rng, dim, 1.0));
    std::vector<std::vector<float>> state_dir_summary, state_dir_fulltext;
    for (std::size_t s = 0; s < kStates.size(); ++s)
        state_dir_summary.push_back(draw_direction(rng, dim, 1.0));
    for (std::size_t s = 0; s < kStates.size(); ++s)
        state_dir_fulltext.push_back(draw_direction(rng, dim, 1.0));

    // Actor pools.
    const auto judges_per_state =
        std::max<std::int64_t>(2, config.n_cases / (30 * static_cast<std::int64_t>(kStates.size())));
    const auto n_firms = std::max<std::int64_t>(3, config.n_cases / 18);

    std::vector<double> type_probs;
    for (const auto& ts : kTypeSpecs) type_probs.push_back(ts.prob);
    const std::vector<double> plaintiff_type_probs = {0.30, 0.48, 0.07, 0.15};
    const std::vector<double> defendant_type_probs = {0.52, 0.30, 0.08, 0.10};
    const std::vector<double> mid_doc_type_probs = {0.26, 0.16, 0.18, 0.14, 0.10, 0.08, 0.08};

    const double case_wobble = 0.2;
    const double doc_noise = 0.35;

    CaseCollection out;
    out.embedding_dim = dim;
    out.cases.reserve(static_cast<std::size_t>(config.n_cases));

    for (std::int64_t i = 0; i < config.n_cases; ++i) {
        CaseRecord cr;
        cr.case_id = padded_id("c", i, 6);
        const int t = draw_categorical(rng, type_probs);
        const auto state = static_cast<std::size_t>(rng.uniform_int(0, 11));
        const double merit = kTypeSpecs[t].merit_mean + rng.normal();
        const int bin = merit >= 0.0 ? 1 : 0;
        const auto cluster = static_cast<std::size_t>(t * 2 + bin);

        cr.case_type = kCaseTypes[static_cast<std::size_t>(t)];
        cr.jurisdiction = kStates[state];
        cr.plaintiff_type =
            kPartyTypes[static_cast<std::size_t>(draw_categorical(rng, plaintiff_type_probs))];
        cr.defendant_type =
            kPartyTypes[static_cast<std::size_t>(draw_categorical(rng, defendant_type_probs))];
        cr.n_plaintiffs = static_cast<int>(rng.geometric_count(1.35));
        cr.n_defendants = static_cast<int>(rng.geometric_count(1.5));
        cr.judge_id = cr.jurisdiction + "-j" +
                      std::to_string(rng.uniform_int(0, judges_per_state - 1));
        cr.plaintiff_firm_id = padded_id("pf", rng.uniform_int(0, n_firms - 1), 4);
        cr.defendant_firm_id = padded_id("df", rng.uniform_int(0, n_firms - 1), 4);

        const std::array<double, 3>& truth = tables.probs[cluster];
        {
            const double u = rng.uniform();
            if (u < truth[0])
                cr.outcome = Outcome::PlaintiffLoss;
            else if (u < truth[0] + truth[1])
                cr.outcome = Outcome::Settlement;
            else
                cr.outcome = Outcome::PlaintiffWin;
        }

        const double mean_docs = std::max(1.0, config.mean_docs_per_case * tables.doc_factor[cluster]);
        const auto n_docs = rng.geometric_count(mean_docs);
        cr.start_day = static_cast<Day>(rng.uniform_int(0, 9000));

        const auto case_offset_summary = draw_direction(rng, dim, case_wobble);
        const auto case_offset_fulltext = draw_direction(rng, dim, case_wobble);

        Day day = cr.start_day;
        const double gap_mean = 19.0 * tables.gap_factor[cluster];
        cr.documents.reserve(static_cast<std::size_t>(n_docs));
        for (std::int64_t d = 0; d < n_docs; ++d) {
            DocumentRecord doc;
            doc.case_id = cr.case_id;
            doc.doc_index = static_cast<int>(d + 1);
            if (d > 0) day += static_cast<Day>(rng.geometric_count(std::max(1.0, gap_mean)));
            doc.filing_day = day;
            if (d == 0) {
                doc.doc_type = "complaint";
            } else if (d == n_docs - 1) {
                doc.doc_type = cr.outcome == Outcome::PlaintiffLoss      ? "dismissal"
                               : cr.outcome == Outcome::Settlement       ? "settlement_agreement"
                                                                         : "judgment";
            } else {
                doc.doc_type =
                    kDocTypes[1 + static_cast<std::size_t>(draw_categorical(rng, mid_doc_type_probs))];
            }
            doc.liability_admitted = rng.uniform() < 0.07;
            doc.insurance_involved = rng.uniform() < 0.38;
            if (rng.uniform() < 0.72) {
                const double amount = std::exp(rng.normal() * 1.05 + 11.2);
                doc.monetary_request = std::round(amount * 100.0) / 100.0;
            }
            doc.summary_embedding.resize(static_cast<std::size_t>(dim));
            doc.fulltext_embedding.resize(static_cast<std::size_t>(dim));
            const double noise_scale = doc_noise / std::sqrt(static_cast<double>(dim));
            for (int k = 0; k < dim; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                doc.summary_embedding[ks] = static_cast<float>(
                    cluster_mean_summary[cluster][ks] +
                    config.state_shift * state_dir_summary[state][ks] + case_offset_summary[ks] +
                    rng.normal() * noise_scale);
                doc.fulltext_embedding[ks] = static_cast<float>(
                    cluster_mean_fulltext[cluster][ks] +
                    config.state_shift * state_dir_fulltext[state][ks] + case_offset_fulltext[ks] +
                    rng.normal() * noise_scale);
            }
            doc.truth_probs = truth;
            cr.documents.push_back(std::move(doc));
        }
        cr.disposition_day = cr.documents.back().filing_day;
        out.cases.push_back(std::move(cr));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON Lines serialization
// ---------------------------------------------------------------------------

namespace {

void append_embedding(std::string& line, const std::vector<float>& v) {
    line += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) line += ',';
        line += format_float(v[i]);
    }
    line += ']';
}

void append_document_line(std::string& line, const CaseRecord& c, const DocumentRecord& d) {
    line += "{\"case_id\":\"";
    line += escape_json(c.case_id);
    line += "\",\"doc_index\":";
    line += std::to_string(d.doc_index);
    line += ",\"filing_day\":";
    line += std::to_string(d.filing_day);
    line += ",\"case_type\":\"";
    line += escape_json(c.case_type);
    line += "\",\"jurisdiction\":\"";
    line += escape_json(c.jurisdiction);
    line += "\",\"plaintiff_type\":\"";
    line += escape_json(c.plaintiff_type);
    line += "\",\"defendant_type\":\"";
    line += escape_json(c.defendant_type);
    line += "\",\"n_plaintiffs\":";
    line += std::to_string(c.n_plaintiffs);
    line += ",\"n_defendants\":";
    line += std::to_string(c.n_defendants);
    line += ",\"judge_id\":\"";
    line += escape_json(c.judge_id);
    line += "\",\"plaintiff_firm_id\":\"";
    line += escape_json(c.plaintiff_firm_id);
    line += "\",\"defendant_firm_id\":\"";
    line += escape_json(c.defendant_firm_id);
    line += "\",\"doc_type\":\"";
    line += escape_json(d.doc_type);
    line += "\",\"flags\":{\"liability_admitted\":";
    line += d.liability_admitted ? "true" : "false";
    line += ",\"insurance_involved\":";
    line += d.insurance_involved ? "true" : "false";
    line += "},\"monetary_request\":";
    line += d.monetary_request ? format_double(*d.monetary_request) : "null";
    line += ",\"summary_embedding\":";
    append_embedding(line, d.summary_embedding);
    line += ",\"fulltext_embedding\":";
    append_embedding(line, d.fulltext_embedding);
    line += ",\"outcome\":\"";
    line += outcome_name(c.outcome);
    line += "\",\"disposition_day\":";
    line += std::to_string(c.disposition_day);
    line += ",\"truth_probs\":";
    if (d.truth_probs) {
        line += '[';
        for (int k = 0; k < 3; ++k) {
            if (k) line += ',';
            line += format_double((*d.truth_probs)[static_cast<std::size_t>(k)]);
        }
        line += ']';
    } else {
        line += "null";
    }
    line += "}\n";
}

}  // namespace

std::string corpus_to_jsonl(const CaseCollection& collection) {
    std::string out;
    out.reserve(collection.total_documents() * 256);
    for (const auto& c : collection.cases)
        for (const auto& d : c.documents) append_document_line(out, c, d);
    return out;
}

void write_corpus(const CaseCollection& collection, const std::string& path) {
    ensure_parent_dir(path);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::Io, "cannot open corpus file for writing: " + tmp);
        std::string line;
        line.reserve(1 << 16);
        for (const auto& c : collection.cases) {
            for (const auto& d : c.documents) {
                line.clear();
                append_document_line(line, c, d);
                out.write(line.data(), static_cast<std::streamsize>(line.size()));
            }
        }
        out.flush();
        if (!out) raise(ErrorCode::Io, "write failure: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(ErrorCode::Io, "cannot rename corpus file into place: " + ec.message());
}

namespace {

[[noreturn]] void line_error(const std::string& origin, std::size_t line_no, const std::string& msg) {
    raise(ErrorCode::Validation, origin + ":" + std::to_string(line_no) + ": " + msg);
}

}  // namespace

CaseCollection parse_corpus_jsonl(const std::string& content, const std::string& origin) {
    CaseCollection out;
    std::map<std::string, std::size_t> case_slot;  // case_id -> index in out.cases
    std::set<std::pair<std::string, int>> seen_docs;

    std::size_t pos = 0, line_no = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        ++line_no;
        const std::string_view line(content.data() + pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            line_error(origin, line_no, std::string("malformed JSON line: ") + e.what());
        }
        try {
            const std::string case_id = j.at("case_id").get<std::string>();
            const int doc_index = j.at("doc_index").get<int>();
            if (doc_index < 1) line_error(origin, line_no, "doc_index must be >= 1");
            if (!seen_docs.emplace(case_id, doc_index).second)
                line_error(origin, line_no,
                           "duplicate (case_id, doc_index) = (" + case_id + ", " +
                               std::to_string(doc_index) + ")");

            DocumentRecord d;
            d.case_id = case_id;
            d.doc_index = doc_index;
            d.filing_day = j.at("filing_day").get<Day>();
            d.doc_type = j.at("doc_type").get<std::string>();
            const auto& flags = j.at("flags");
            d.liability_admitted = flags.value("liability_admitted", false);
            d.insurance_involved = flags.value("insurance_involved", false);
            if (!j.at("monetary_request").is_null())
                d.monetary_request = j.at("monetary_request").get<double>();
            for (const auto& x : j.at("summary_embedding"))
                d.summary_embedding.push_back(static_cast<float>(x.get<double>()));
            for (const auto& x : j.at("fulltext_embedding"))
                d.fulltext_embedding.push_back(static_cast<float>(x.get<double>()));
            if (d.summary_embedding.size() != d.fulltext_embedding.size())
                line_error(origin, line_no, "summary/fulltext embedding dimensions differ");
            const int dim = static_cast<int>(d.summary_embedding.size());
            if (dim == 0) line_error(origin, line_no, "empty embedding");
            if (out.embedding_dim == 0) out.embedding_dim = dim;
            if (dim != out.embedding_dim)
                line_error(origin, line_no,
                           "embedding dimension mismatch: expected " +
                               std::to_string(out.embedding_dim) + ", got " + std::to_string(dim));
            if (!j.at("truth_probs").is_null()) {
                std::array<double, 3> tp{};
                const auto& arr = j.at("truth_probs");
                if (arr.size() != 3) line_error(origin, line_no, "truth_probs must have 3 entries");
                for (int k = 0; k < 3; ++k)
                    tp[static_cast<std::size_t>(k)] = arr[static_cast<std::size_t>(k)].get<double>();
                d.truth_probs = tp;
            }

            auto it = case_slot.find(case_id);
            if (it == case_slot.end()) {
                CaseRecord c;
                c.case_id = case_id;
                c.case_type = j.at("case_type").get<std::string>();
                c.jurisdiction = j.at("jurisdiction").get<std::string>();
                c.plaintiff_type = j.at("plaintiff_type").get<std::string>();
                c.defendant_type = j.at("defendant_type").get<std::string>();
                c.n_plaintiffs = j.at("n_plaintiffs").get<int>();
                c.n_defendants = j.at("n_defendants").get<int>();
                c.judge_id = j.at("judge_id").get<std::string>();
                c.plaintiff_firm_id = j.at("plaintiff_firm_id").get<std::string>();
                c.defendant_firm_id = j.at("defendant_firm_id").get<std::string>();
                if (j.at("outcome").is_null() || j.at("disposition_day").is_null())
                    line_error(origin, line_no,
                               "case " + case_id + " lacks outcome/disposition_day; only resolved "
                               "cases are supported");
                c.outcome = outcome_from_name(j.at("outcome").get<std::string>());
                c.disposition_day = j.at("disposition_day").get<Day>();
                it = case_slot.emplace(case_id, out.cases.size()).first;
                out.cases.push_back(std::move(c));
            } else {
                const CaseRecord& c = out.cases[it->second];
                const std::string oc = j.at("outcome").is_null()
                                           ? std::string("null")
                                           : j.at("outcome").get<std::string>();
                if (oc != outcome_name(c.outcome))
                    line_error(origin, line_no,
                               "inconsistent outcome for case " + case_id);
            }
            out.cases[it->second].documents.push_back(std::move(d));
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            line_error(origin, line_no, std::string("bad record: ") + e.what());
        }
    }

    for (auto& c : out.cases) {
        std::sort(c.documents.begin(), c.documents.end(),
                  [](const DocumentRecord& a, const DocumentRecord& b) {
                      return a.doc_index < b.doc_index;
                  });
        for (std::size_t k = 0; k < c.documents.size(); ++k) {
            const int expected = static_cast<int>(k) + 1;
            if (c.documents[k].doc_index != expected)
                raise(ErrorCode::Validation,
                      origin + ": case " + c.case_id + " missing doc_index " +
                          std::to_string(expected));
        }
        c.start_day = c.documents.front().filing_day;
    }
    return out;
}

CaseCollection ingest_corpus(const std::string& path) {
    return parse_corpus_jsonl(read_text_file(path), path);
}

std::vector<const DocumentRecord*> apply_disposition_cutoff(const CaseRecord& c) {
    std::vector<const DocumentRecord*> kept;
    kept.reserve(c.documents.size());
    for (const auto& d : c.documents)
        if (c.disposition_day - d.filing_day >= 7) kept.push_back(&d);
    return kept;
}

ValidationReport validate_corpus(const CaseCollection& collection) {
    ValidationReport report;
    auto add = [&](const std::string& type, const std::string& case_id, const std::string& detail) {
        report.findings.push_back({type, case_id, detail});
    };
    for (const auto& c : collection.cases) {
        if (c.documents.empty()) {
            add("empty_case", c.case_id, "case has no documents");
            continue;
        }
        for (std::size_t k = 0; k < c.documents.size(); ++k) {
            const auto& d = c.documents[k];
            const int expected = static_cast<int>(k) + 1;
            if (d.doc_index != expected)
                add("non_consecutive_index", c.case_id,
                    "expected doc_index " + std::to_string(expected) + ", found " +
                        std::to_string(d.doc_index));
            if (k > 0 && d.filing_day < c.documents[k - 1].filing_day)
                add("non_monotone_dates", c.case_id,
                    "filing_day " + std::to_string(d.filing_day) + " at doc_index " +
                        std::to_string(d.doc_index) + " precedes previous document");
            if (static_cast<int>(d.summary_embedding.size()) != collection.embedding_dim ||
                static_cast<int>(d.fulltext_embedding.size()) != collection.embedding_dim)
                add("embedding_dim_mismatch", c.case_id,
                    "doc_index " + std::to_string(d.doc_index) + " has dimension " +
                        std::to_string(d.summary_embedding.size()) + "/" +
                        std::to_string(d.fulltext_embedding.size()) + ", corpus uses " +
                        std::to_string(collection.embedding_dim));
        }
        if (c.start_day != c.documents.front().filing_day)
            add("start_day_mismatch", c.case_id,
                "start_day " + std::to_string(c.start_day) + " differs from first filing " +
                    std::to_string(c.documents.front().filing_day));
        if (c.disposition_day < c.start_day)
            add("disposition_before_start", c.case_id,
                "disposition_day " + std::to_string(c.disposition_day) + " precedes start_day " +
                    std::to_string(c.start_day));
    }
    return report;
}

std::string ValidationReport::to_json() const {
    json arr = json::array();
    for (const auto& f : findings)
        arr.push_back({{"violation_type", f.violation_type},
                       {"case_id", f.case_id},
                       {"detail", f.detail}});
    json j;
    j["violation_count"] = findings.size();
    j["findings"] = arr;
    return j.dump(2) + "\n";
}

}  // namespace litpred
