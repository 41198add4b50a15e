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

#include <map>

#include "bosonkit/detector.hpp"
#include "bosonkit/ideal.hpp"

namespace bosonkit {

/// Multiset of the counts >= 2 in a pattern, sorted descending. Counts of 0
/// and 1 never change a correction coefficient (P(0|0) = 1, P(1|1) = eta up
/// to the global loss factor), so this multiset identifies the coefficient.
/// The empty identifier is the collision-free class.
struct ReducedIdentifier {
    std::vector<int> parts;  // descending, every element >= 2

    auto operator<=>(const ReducedIdentifier &) const = default;

    bool empty() const { return parts.empty(); }
    int sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }

    /// "{}", "{2}", "{3,2,2}"
    std::string to_string() const {
        std::string s = "{";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts[i]);
        }
        return s + "}";
    }
};

inline ReducedIdentifier reduced_identifier(const Pattern &p) {
    ReducedIdentifier id;
    for (int c : p.counts)
        if (c >= 2) id.parts.push_back(c);
    std::sort(id.parts.begin(), id.parts.end(), std::greater<>());
    return id;
}

/// C_{k_1...k_N} = prod_i P(k_i|k_i): the factor between the realistic
/// postselected probability of the pattern and its ideal probability.
inline double correction_coefficient(const DetectorModel &model, const Pattern &p) {
    validate_model(model);
    for (int c : p.counts) {
        if (c < 0) throw parameter_error("counts must be nonnegative");
        if (c > max_counts(model, c))
            throw domain_error("count " + std::to_string(c) +
                               " exceeds the detector's outcome range");
    }
    double coefficient = 1.0;
    for (int c : p.counts) coefficient *= diagonal_prob(model, c);
    return coefficient;
}

/// Map from reduced identifier to correction coefficient at a fixed total n.
struct CorrectionTable {
    DetectorModel model;
    int n = 0;
    std::map<ReducedIdentifier, double> entries;
};

namespace detail {

/// Partitions of j into parts >= 2, each partition descending.
inline void partitions_min2(int j, int largest_allowed, std::vector<int> &current,
                            std::vector<std::vector<int>> &out) {
    if (j == 0) {
        out.push_back(current);
        return;
    }
    for (int part = std::min(j, largest_allowed); part >= 2; --part) {
        if (j - part == 1) continue;  // a leftover of 1 can never be completed
        current.push_back(part);
        partitions_min2(j - part, part, current, out);
        current.pop_back();
    }
}

}  // namespace detail

/// Coefficients for every identifier whose elements sum to at most n,
/// including the total-n loss factor eta^n. Identifiers the detector cannot
/// produce (e.g. more clicks than array pixels) get coefficient 0.
inline CorrectionTable correction_table(const DetectorModel &model, int n,
                                        int size_cap = kDefaultSizeCap) {
    validate_model(model);
    if (n < 0) throw parameter_error("photon number must be nonnegative");
    if (n > size_cap) throw size_error("photon number exceeds cap");
    CorrectionTable table;
    table.model = model;
    table.n = n;
    const double eta = detection_efficiency(model);

    std::vector<std::vector<int>> partitions;
    std::vector<int> scratch;
    for (int j = 0; j <= n; ++j) detail::partitions_min2(j, j, scratch, partitions);

    for (const auto &parts : partitions) {
        ReducedIdentifier id;
        id.parts = parts;
        // The identifier fixes the bunched counts; the remaining n - sum
        // photons sit in modes with counts 0 or 1 and contribute eta each.
        double coefficient = pow_int(eta, n - id.sum());
        for (int part : parts) coefficient *= diagonal_prob(model, part);
        table.entries[id] = coefficient;
    }
    return table;
}

/// Full photocounting distribution: the ideal distribution convolved with the
/// per-mode conditional count probabilities,
///   rho_k = sum_m prod_i P(k_i|m_i) P_m.
/// Outcomes range over every reachable count pattern, so totals below n appear.
inline OutcomeDistribution realistic_distribution(const UnitaryMatrix &u, const Pattern &input,
                                                  const DetectorModel &model,
                                                  const QuadratureSpec &quad = {},
                                                  int size_cap = kDefaultSizeCap) {
    validate_model(model);
    const OutcomeDistribution ideal = ideal_distribution(u, input, size_cap);
    const int n = ideal.n;
    const CondProbTable table = make_cond_prob_table(model, n, quad);

    OutcomeDistribution out;
    out.input = input;
    out.n = n;

    const int modes = u.dim();
    Pattern counts;
    counts.counts.assign(modes, 0);
    for (const auto &[photons, probability] : ideal.entries) {
        if (probability == 0.0) continue;
        // Distribute this outcome's mass over all count patterns k <= m.
        auto recurse = [&](auto &&self, int mode, double weight) -> void {
            if (weight == 0.0) return;
            if (mode == modes) {
                out.entries[counts] += weight;
                return;
            }
            const int cap = std::min(photons[mode], table.max_k);
            for (int k = 0; k <= cap; ++k) {
                counts[mode] = k;
                self(self, mode + 1, weight * table.at(k, photons[mode]));
            }
            counts[mode] = 0;
        };
        recurse(recurse, 0, probability);
    }
    return out;
}

/// Postselected probability of a count pattern with total equal to the photon
/// number: correction coefficient times the ideal probability.
inline double postselected_probability(const UnitaryMatrix &u, const Pattern &input,
                                       const DetectorModel &model, const Pattern &counts,
                                       int size_cap = kDefaultSizeCap) {
    if (counts.total() != input.total())
        throw domain_error("postselected probability needs total counts = total photons");
    return correction_coefficient(model, counts) * ideal_probability(u, input, counts, size_cap);
}

/// Probability that the total count equals the injected photon number.
inline double postselection_efficiency(const UnitaryMatrix &u, const Pattern &input,
                                       const DetectorModel &model,
                                       int size_cap = kDefaultSizeCap) {
    validate_model(model);
    const int n = input.total();
    const int per_mode_cap = std::min(n, max_counts(model, n));
    double sum = 0.0;
    for (const Pattern &counts : enumerate_outcomes(n, input.size(), per_mode_cap))
        sum += postselected_probability(u, input, model, counts, size_cap);
    return sum;
}

}  // namespace bosonkit
