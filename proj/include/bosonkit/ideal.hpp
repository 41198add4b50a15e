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

#include "bosonkit/permanent.hpp"
#include "bosonkit/unitary.hpp"

namespace bosonkit {

/// All length-`modes` patterns with the given total, each entry <= per_mode_cap,
/// in lexicographic order.
inline std::vector<Pattern> enumerate_outcomes(int n, int modes, int per_mode_cap) {
    if (n < 0 || modes < 1) throw parameter_error("enumerate_outcomes requires n >= 0, modes >= 1");
    std::vector<Pattern> result;
    Pattern current;
    current.counts.assign(modes, 0);
    auto recurse = [&](auto &&self, int mode, int remaining) -> void {
        if (mode == modes - 1) {
            if (remaining <= per_mode_cap) {
                current[mode] = remaining;
                result.push_back(current);
            }
            return;
        }
        const int cap = std::min(remaining, per_mode_cap);
        for (int c = 0; c <= cap; ++c) {
            current[mode] = c;
            self(self, mode + 1, remaining - c);
        }
    };
    recurse(recurse, 0, n);
    return result;
}

namespace detail {

inline void check_joint_patterns(const UnitaryMatrix &u, const Pattern &input,
                                 const Pattern &output, int size_cap) {
    if (input.size() != u.dim() || output.size() != u.dim())
        throw shape_error("pattern length must equal the interferometer dimension");
    if (input.total() > size_cap)
        throw size_error("total photon number " + std::to_string(input.total()) + " exceeds cap " +
                         std::to_string(size_cap));
    if (input.total() > u.dim())
        throw domain_error("total input photons exceed the mode count");
}

}  // namespace detail

/// Probability of detecting `output` given Fock input `input` through u:
/// |Perm U[output | input]|^2 / (prod m_i! prod n_j!), and exactly 0 when the
/// totals differ (photon-number conservation).
inline double ideal_probability(const UnitaryMatrix &u, const Pattern &input, const Pattern &output,
                                int size_cap = kDefaultSizeCap) {
    detail::check_joint_patterns(u, input, output, size_cap);
    if (output.total() != input.total()) return 0.0;

    const Complex amplitude = permanent(expanded_submatrix(u.matrix(), output, input), size_cap);
    double denom = 1.0;
    for (int c : output.counts) denom *= factorial(c);
    for (int c : input.counts) denom *= factorial(c);
    return std::norm(amplitude) / denom;
}

/// Full output distribution over all patterns with the input's photon total.
inline OutcomeDistribution ideal_distribution(const UnitaryMatrix &u, const Pattern &input,
                                              int size_cap = kDefaultSizeCap) {
    const int n = input.total();
    detail::check_joint_patterns(u, input, input, size_cap);
    OutcomeDistribution dist;
    dist.input = input;
    dist.n = n;
    for (const Pattern &outcome : enumerate_outcomes(n, u.dim(), n))
        dist.entries[outcome] = ideal_probability(u, input, outcome, size_cap);
    return dist;
}

/// Independent oracle for ideal_distribution that never touches a permanent.
///
/// Expands prod_i (sum_j U_ji adag_j)^{n_i} |0> one input mode at a time by
/// multinomial expansion and reads squared amplitudes off the resulting
/// creation-operator polynomial with bosonic normalization.
/// Exponential in the photon number; capped at 7 photons.
inline OutcomeDistribution fock_oracle_distribution(const UnitaryMatrix &u, const Pattern &input) {
    const int n = input.total();
    if (n > 7) throw size_error("fock_oracle_distribution capped at 7 photons");
    detail::check_joint_patterns(u, input, input, kDefaultSizeCap);
    const int modes = u.dim();

    std::map<Pattern, Complex> poly;
    Pattern vacuum;
    vacuum.counts.assign(modes, 0);
    poly[vacuum] = Complex(1.0, 0.0);

    for (int i = 0; i < modes; ++i) {
        const int photons = input[i];
        if (photons == 0) continue;
        std::map<Pattern, Complex> next;
        for (const Pattern &split : enumerate_outcomes(photons, modes, photons)) {
            Complex coeff = factorial(photons);
            for (int j = 0; j < modes; ++j) {
                coeff /= factorial(split[j]);
                for (int p = 0; p < split[j]; ++p) coeff *= u(j, i);
            }
            for (const auto &[occupation, amp] : poly) {
                Pattern merged = occupation;
                for (int j = 0; j < modes; ++j) merged[j] += split[j];
                next[merged] += amp * coeff;
            }
        }
        poly = std::move(next);
    }

    double input_norm = 1.0;
    for (int c : input.counts) input_norm *= factorial(c);

    OutcomeDistribution dist;
    dist.input = input;
    dist.n = n;
    for (const Pattern &outcome : enumerate_outcomes(n, modes, n)) {
        double outcome_norm = 1.0;
        for (int c : outcome.counts) outcome_norm *= factorial(c);
        auto it = poly.find(outcome);
        const Complex amp = it == poly.end() ? Complex(0.0, 0.0) : it->second;
        dist.entries[outcome] = std::norm(amp) * outcome_norm / input_norm;
    }
    return dist;
}

}  // namespace bosonkit
