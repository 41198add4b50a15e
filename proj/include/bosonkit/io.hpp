// Copyright 2026 The bosonkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bosonkit/detector.hpp"
#include "bosonkit/realistic.hpp"
#include "bosonkit/sampling.hpp"
#include "bosonkit/unitary.hpp"

namespace bosonkit {

using nlohmann::json;

/// Floating-point text output uses 12 significant digits throughout, which is
/// enough to make regression diffs meaningful and round-trips idempotent.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

// ---------------------------------------------------------------------------
// Unitary matrix files: {"dim": N, "entries": [[[re, im], ...], ...]}
// ---------------------------------------------------------------------------

inline json unitary_to_json(const UnitaryMatrix &u) {
    json entries = json::array();
    for (int r = 0; r < u.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < u.dim(); ++c)
            row.push_back({u(r, c).real(), u(r, c).imag()});
        entries.push_back(std::move(row));
    }
    return json{{"dim", u.dim()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix complex_matrix_from_json(const json &j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw parameter_error("matrix file must be an object with \"dim\" and \"entries\"");
    const int dim = j.at("dim").get<int>();
    const json &entries = j.at("entries");
    if (dim < 0 || !entries.is_array() || static_cast<int>(entries.size()) != dim)
        throw shape_error("matrix file: entries do not match dim");
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json &row = entries.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw shape_error("matrix file: row " + std::to_string(r) + " has wrong length");
        for (int c = 0; c < dim; ++c) {
            const json &cell = row.at(c);
            if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() ||
                !cell.at(1).is_number())
                throw parameter_error("matrix file: entries must be [re, im] pairs");
            const double re = cell.at(0).get<double>();
            const double im = cell.at(1).get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw parameter_error("matrix file: non-finite entry rejected");
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

inline void save_unitary(const std::string &path, const UnitaryMatrix &u) {
    std::ofstream stream(path);
    if (!stream) throw parameter_error("cannot open for writing: " + path);
    stream << unitary_to_json(u).dump(2) << '\n';
}

inline ComplexMatrix load_complex_matrix(const std::string &path) {
    std::ifstream stream(path);
    if (!stream) throw parameter_error("cannot open matrix file: " + path);
    json j;
    try {
        stream >> j;
    } catch (const json::exception &e) {
        throw parameter_error("invalid JSON in " + path + ": " + e.what());
    }
    return complex_matrix_from_json(j);
}

inline UnitaryMatrix load_unitary(const std::string &path, double tol = kDefaultUnitarityTol) {
    return validate_unitary(load_complex_matrix(path), tol);
}

// ---------------------------------------------------------------------------
// Distributions: {"input": [...], "outcomes": [{"pattern": [...], "p": x}]}
// ---------------------------------------------------------------------------

inline json distribution_to_json(const OutcomeDistribution &dist) {
    json outcomes = json::array();
    for (const auto &[pattern, p] : dist.entries)
        outcomes.push_back({{"pattern", pattern.counts}, {"p", p}});
    return json{{"input", dist.input.counts}, {"outcomes", std::move(outcomes)}};
}

inline OutcomeDistribution distribution_from_json(const json &j) {
    OutcomeDistribution dist;
    dist.input = Pattern(j.at("input").get<std::vector<int>>());
    dist.n = dist.input.total();
    for (const json &outcome : j.at("outcomes"))
        dist.entries[Pattern(outcome.at("pattern").get<std::vector<int>>())] =
            outcome.at("p").get<double>();
    return dist;
}

/// CSV rows "pattern,p" with space-separated pattern entries.
inline std::string distribution_to_csv(const OutcomeDistribution &dist) {
    std::string out = "pattern,p\n";
    for (const auto &[pattern, p] : dist.entries) {
        std::string cell;
        for (size_t i = 0; i < pattern.counts.size(); ++i) {
            if (i) cell += ' ';
            cell += std::to_string(pattern.counts[i]);
        }
        out += cell + ',' + format_double(p) + '\n';
    }
    return out;
}

inline OutcomeDistribution distribution_from_csv(const std::string &text, Pattern input) {
    OutcomeDistribution dist;
    dist.input = std::move(input);
    dist.n = dist.input.total();
    std::istringstream stream(text);
    std::string line;
    bool first = true;
    while (std::getline(stream, line)) {
        if (first) {  // header
            first = false;
            continue;
        }
        if (line.empty()) continue;
        const size_t comma = line.rfind(',');
        if (comma == std::string::npos) throw parameter_error("bad distribution CSV row: " + line);
        Pattern pattern;
        std::istringstream cells(line.substr(0, comma));
        int value;
        while (cells >> value) pattern.counts.push_back(value);
        dist.entries[pattern] = std::stod(line.substr(comma + 1));
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Detector models
// ---------------------------------------------------------------------------

inline json model_to_json(const DetectorModel &model) {
    json j{{"kind", model_name(model)}};
    std::visit(
        [&](const auto &d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, LossyPNR>) {
                j["eta"] = d.eta;
            } else if constexpr (std::is_same_v<T, OnOffArray>) {
                j["K"] = d.num_detectors;
                j["eta"] = d.eta;
            } else if constexpr (std::is_same_v<T, DeadTimeMono>) {
                j["ratio"] = d.ratio;
                j["eta"] = d.eta;
            } else if constexpr (std::is_same_v<T, DeadTimeExp>) {
                j["ratio"] = d.ratio;
                j["gamma"] = d.gamma;
                j["eta"] = d.eta;
            }
        },
        model);
    return j;
}

inline DetectorModel model_from_json(const json &j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double eta = j.value("eta", 1.0);
    DetectorModel model;
    if (kind == "ideal") {
        model = IdealPNR{};
    } else if (kind == "lossy") {
        model = LossyPNR{eta};
    } else if (kind == "array") {
        model = OnOffArray{j.at("K").get<int>(), eta};
    } else if (kind == "deadtime-mono") {
        model = DeadTimeMono{j.at("ratio").get<double>(), eta};
    } else if (kind == "deadtime-exp") {
        model = DeadTimeExp{j.at("ratio").get<double>(), j.at("gamma").get<double>(), eta};
    } else {
        throw parameter_error("unknown detector kind: " + kind);
    }
    validate_model(model);
    return model;
}

// ---------------------------------------------------------------------------
// Conditional probability tables
// ---------------------------------------------------------------------------

/// CSV with header "k,m,p", one row per entry.
inline std::string cond_prob_table_to_csv(const CondProbTable &table) {
    std::string out = "k,m,p\n";
    for (int k = 0; k <= table.max_k; ++k)
        for (int m = 0; m <= table.max_m; ++m)
            out += std::to_string(k) + ',' + std::to_string(m) + ',' +
                   format_double(table.at(k, m)) + '\n';
    return out;
}

inline json cond_prob_table_to_json(const CondProbTable &table) {
    json values = json::array();
    for (int k = 0; k <= table.max_k; ++k) {
        json row = json::array();
        for (int m = 0; m <= table.max_m; ++m) row.push_back(table.at(k, m));
        values.push_back(std::move(row));
    }
    return json{{"model", model_to_json(table.model)},
                {"max_m", table.max_m},
                {"max_k", table.max_k},
                {"values", std::move(values)}};
}

// ---------------------------------------------------------------------------
// Correction tables
// ---------------------------------------------------------------------------

inline json correction_table_to_json(const CorrectionTable &table) {
    json entries = json::array();
    for (const auto &[id, coefficient] : table.entries)
        entries.push_back({{"identifier", id.parts}, {"coefficient", coefficient}});
    return json{{"model", model_to_json(table.model)},
                {"n", table.n},
                {"entries", std::move(entries)}};
}

// ---------------------------------------------------------------------------
// Sample reports
// ---------------------------------------------------------------------------

inline json sample_report_to_json(const SampleReport &report) {
    json samples = json::array();
    for (const auto &[pattern, count] : report.counts) {
        auto it = report.expected.find(pattern);
        samples.push_back({{"pattern", pattern.counts},
                           {"count", count},
                           {"expected", it == report.expected.end() ? 0.0 : it->second}});
    }
    json j{{"id", report.id},
           {"trials", report.trials},
           {"seed", report.seed},
           {"rng", report.rng},
           {"tv_distance", report.tv_distance},
           {"chi_square",
            {{"statistic", report.chi_square.statistic},
             {"dof", report.chi_square.dof},
             {"p_value", report.chi_square.p_value}}},
           {"samples", std::move(samples)}};
    if (!report.chi_square.pooling_note.empty())
        j["chi_square"]["pooling_note"] = report.chi_square.pooling_note;
    if (report.acceptance) j["acceptance"] = *report.acceptance;
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

/// CSV rows "pattern,count,expected" (expected = probability * trials).
inline std::string sample_report_to_csv(const SampleReport &report) {
    std::string out = "pattern,count,expected\n";
    for (const auto &[pattern, count] : report.counts) {
        auto it = report.expected.find(pattern);
        const double expected =
            it == report.expected.end() ? 0.0 : it->second * report.trials;
        std::string cell;
        for (size_t i = 0; i < pattern.counts.size(); ++i) {
            if (i) cell += ' ';
            cell += std::to_string(pattern.counts[i]);
        }
        out += cell + ',' + std::to_string(count) + ',' + format_double(expected) + '\n';
    }
    return out;
}

}  // namespace bosonkit
