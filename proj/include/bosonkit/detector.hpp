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

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "bosonkit/deadtime_quadrature.hpp"
#include "bosonkit/math.hpp"
#include "bosonkit/rng.hpp"

namespace bosonkit {

// ---------------------------------------------------------------------------
// Detector models
// ---------------------------------------------------------------------------

/// Perfect photon-number resolution: P(k|m) = delta_km.
struct IdealPNR {};

/// PNR detector with detection efficiency eta (Bernoulli loss per photon).
struct LossyPNR {
    double eta = 1.0;
};

/// Beam split onto K on/off detectors; the outcome is the number that click.
struct OnOffArray {
    int num_detectors = 1;  // K
    double eta = 1.0;
};

/// Pulse counting over a measurement window on monochromatic light, with each
/// pulse followed by a dead interval. ratio = tau_d / tau_m.
struct DeadTimeMono {
    double ratio = 0.0;
    double eta = 1.0;
};

/// Same counter, but the mode has an exponential-decay intensity profile with
/// dimensionless decay rate gamma > 0.
struct DeadTimeExp {
    double ratio = 0.0;
    double gamma = 1.0;
    double eta = 1.0;
};

using DetectorModel = std::variant<IdealPNR, LossyPNR, OnOffArray, DeadTimeMono, DeadTimeExp>;

inline void validate_efficiency(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw parameter_error("efficiency must lie in [0, 1]");
}

inline void validate_model(const DetectorModel &model) {
    std::visit(
        [](const auto &d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, LossyPNR>) {
                validate_efficiency(d.eta);
            } else if constexpr (std::is_same_v<T, OnOffArray>) {
                if (d.num_detectors < 1) throw parameter_error("array needs K >= 1 detectors");
                validate_efficiency(d.eta);
            } else if constexpr (std::is_same_v<T, DeadTimeMono>) {
                if (!(d.ratio >= 0.0 && d.ratio <= 1.0))
                    throw parameter_error("dead-time ratio must lie in [0, 1]");
                validate_efficiency(d.eta);
            } else if constexpr (std::is_same_v<T, DeadTimeExp>) {
                if (!(d.ratio >= 0.0 && d.ratio <= 1.0))
                    throw parameter_error("dead-time ratio must lie in [0, 1]");
                if (!(d.gamma > 0.0))
                    throw parameter_error(
                        "decay rate gamma must be positive (use the monochromatic model for "
                        "gamma = 0)");
                validate_efficiency(d.eta);
            }
        },
        model);
}

inline std::string model_name(const DetectorModel &model) {
    struct Visitor {
        std::string operator()(const IdealPNR &) const { return "ideal"; }
        std::string operator()(const LossyPNR &) const { return "lossy"; }
        std::string operator()(const OnOffArray &) const { return "array"; }
        std::string operator()(const DeadTimeMono &) const { return "deadtime-mono"; }
        std::string operator()(const DeadTimeExp &) const { return "deadtime-exp"; }
    };
    return std::visit(Visitor{}, model);
}

inline double detection_efficiency(const DetectorModel &model) {
    return std::visit(
        [](const auto &d) {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, IdealPNR>) {
                return 1.0;
            } else {
                return d.eta;
            }
        },
        model);
}

/// Number of whole dead-time intervals fitting inside the measurement window.
inline int dead_time_windows(double ratio) {
    if (!(ratio > 0.0)) throw parameter_error("dead_time_windows requires ratio > 0");
    return static_cast<int>(std::floor(1.0 / ratio));
}

/// Adjusting efficiency eta_k = (tau_m - k tau_d) / tau_m, clamped at 0.
inline double adjusting_efficiency(double ratio, int k) {
    return std::max(0.0, 1.0 - k * ratio);
}

/// Largest count the detector can report for m injected photons.
inline int max_counts(const DetectorModel &model, int m) {
    struct Visitor {
        int m;
        int operator()(const IdealPNR &) const { return m; }
        int operator()(const LossyPNR &) const { return m; }
        int operator()(const OnOffArray &d) const { return d.num_detectors; }
        int operator()(const DeadTimeMono &d) const {
            return d.ratio > 0.0 ? dead_time_windows(d.ratio) + 1 : m;
        }
        int operator()(const DeadTimeExp &d) const {
            return d.ratio > 0.0 ? dead_time_windows(d.ratio) + 1 : m;
        }
    };
    return std::visit(Visitor{m}, model);
}

// ---------------------------------------------------------------------------
// Conditional count probabilities P(k|m)
// ---------------------------------------------------------------------------

/// Bernoulli thinning: C(m,k) eta^k (1-eta)^(m-k).
inline double pkm_lossy(double eta, int k, int m) {
    validate_efficiency(eta);
    if (k < 0 || m < 0) throw parameter_error("counts must be nonnegative");
    if (k > m) return 0.0;
    return binomial_pmf(m, k, eta);
}

namespace detail {

// P(k|m) = C(K,k) sum_{j=0}^{k} (-1)^j C(k,j) (1 - eta (K-k+j)/K)^m.
// The terms nearly cancel when K >> m (the sum is a k-th finite difference
// of a slowly varying function), so this form is for moderate K only.
inline double pkm_array_difference_form(int K, double eta, int k, int m) {
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double survive = 1.0 - eta * (static_cast<double>(K - k + j) / K);
        const double term = binomial(k, j) * pow_int(survive, m);
        sum += (j & 1) ? -term : term;
    }
    return binomial(K, k) * sum;
}

// Same diagonal expanded through Stirling numbers of the second kind:
//   P(k|m) = prod_{j<k}(1 - j/K)
//            * sum_{i=k}^{m} (-1)^{i-k} C(m,i) S(i,k) a^{m-i} eta^i K^{k-i},
// with a = 1 - eta (K-k)/K. Every factor is bounded, so the expansion stays
// well conditioned as K grows.
inline double pkm_array_stirling_form(int K, double eta, int k, int m) {
    const double a = 1.0 - eta * (static_cast<double>(K - k) / K);
    double head = 1.0;
    for (int j = 0; j < k; ++j) head *= static_cast<double>(K - j) / K;
    double sum = 0.0;
    for (int i = k; i <= m; ++i) {
        const double term = binomial(m, i) * stirling2(i, k) * pow_int(a, m - i) *
                            pow_int(eta, i) / pow_int(static_cast<double>(K), i - k);
        sum += ((i - k) & 1) ? -term : term;
    }
    return head * sum;
}

}  // namespace detail

/// Array of K on/off detectors: the Fock diagonal of the click POVM.
inline double pkm_array(int num_detectors, double eta, int k, int m) {
    const int K = num_detectors;
    if (K < 1) throw parameter_error("array needs K >= 1 detectors");
    validate_efficiency(eta);
    if (k < 0 || m < 0) throw parameter_error("counts must be nonnegative");
    if (k > K) throw domain_error("an array of " + std::to_string(K) + " detectors cannot give " +
                                  std::to_string(k) + " clicks");
    if (k > m) return 0.0;
    if (K >= 2 * m) return detail::pkm_array_stirling_form(K, eta, k, m);
    return detail::pkm_array_difference_form(K, eta, k, m);
}

namespace detail {

// sum_{l=0}^{j} C(m,l) mu^l (1-mu)^(m-l)
inline double binomial_cdf(int m, int j, double mu) {
    double sum = 0.0;
    for (int l = 0; l <= std::min(j, m); ++l) sum += binomial_pmf(m, l, mu);
    return sum;
}

}  // namespace detail

/// Monochromatic dead-time counter. For k <= K the POVM diagonal telescopes
/// binomial sums at consecutive adjusting efficiencies; the overflow element
/// k = K+1 is fixed by completeness. The adjusting efficiency is clamped at 0,
/// which also covers the exact boundary tau_m / tau_d integer.
inline double pkm_deadtime_mono(double ratio, double eta, int k, int m) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw parameter_error("dead-time ratio must lie in [0, 1]");
    validate_efficiency(eta);
    if (k < 0 || m < 0) throw parameter_error("counts must be nonnegative");
    if (ratio == 0.0) return pkm_lossy(eta, k, m);
    if (k > m) return 0.0;
    const int windows = dead_time_windows(ratio);
    if (k > windows + 1) return 0.0;
    if (k == windows + 1)
        return 1.0 - detail::binomial_cdf(m, windows, eta * adjusting_efficiency(ratio, windows));
    double value = detail::binomial_cdf(m, k, eta * adjusting_efficiency(ratio, k));
    if (k >= 1)
        value -= detail::binomial_cdf(m, k - 1, eta * adjusting_efficiency(ratio, k - 1));
    return value;
}

/// Closed-form diagonal for the exponential-decay mode:
///   P(k|k) = [eta sinh(gamma eta_{k-1} / 2) / sinh(gamma / 2)]^k.
inline double pkk_deadtime_exp_analytic(double ratio, double gamma, double eta, int k) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw parameter_error("dead-time ratio must lie in [0, 1]");
    if (!(gamma > 0.0))
        throw parameter_error("decay rate gamma must be positive (monochromatic path covers 0)");
    validate_efficiency(eta);
    if (k < 0) throw parameter_error("counts must be nonnegative");
    if (k == 0) return 1.0;
    const double adjusted = adjusting_efficiency(ratio, k - 1);
    const double factor = eta * std::sinh(gamma * adjusted / 2.0) / std::sinh(gamma / 2.0);
    return pow_int(factor, k);
}

/// Diagonal P(k|k) for any model; infeasible counts give 0.
/// This is the per-mode factor of every correction coefficient.
inline double diagonal_prob(const DetectorModel &model, int k) {
    if (k < 0) throw parameter_error("counts must be nonnegative");
    struct Visitor {
        int k;
        double operator()(const IdealPNR &) const { return 1.0; }
        double operator()(const LossyPNR &d) const { return pow_int(d.eta, k); }
        double operator()(const OnOffArray &d) const {
            if (k > d.num_detectors) return 0.0;
            double value = 1.0;
            for (int j = 0; j < k; ++j) value *= d.eta * (d.num_detectors - j) / d.num_detectors;
            return value;
        }
        double operator()(const DeadTimeMono &d) const {
            return pow_int(d.eta * adjusting_efficiency(d.ratio, k - 1), k);
        }
        double operator()(const DeadTimeExp &d) const {
            return pkk_deadtime_exp_analytic(d.ratio, d.gamma, d.eta, k);
        }
    };
    return std::visit(Visitor{k}, model);
}

/// P(k|m) for any model. The exponential-mode detector uses the closed form
/// on the diagonal and quadrature off it.
inline double cond_prob(const DetectorModel &model, int k, int m,
                        const QuadratureSpec &quad = {}) {
    if (k < 0 || m < 0) throw parameter_error("counts must be nonnegative");
    struct Visitor {
        int k, m;
        const QuadratureSpec &quad;
        double operator()(const IdealPNR &) const { return k == m ? 1.0 : 0.0; }
        double operator()(const LossyPNR &d) const { return pkm_lossy(d.eta, k, m); }
        double operator()(const OnOffArray &d) const {
            return k > d.num_detectors ? 0.0 : pkm_array(d.num_detectors, d.eta, k, m);
        }
        double operator()(const DeadTimeMono &d) const {
            return pkm_deadtime_mono(d.ratio, d.eta, k, m);
        }
        double operator()(const DeadTimeExp &d) const {
            if (k > m) return 0.0;
            if (k == 0) return pow_int(1.0 - d.eta, m);
            if (k == m) return pkk_deadtime_exp_analytic(d.ratio, d.gamma, d.eta, k);
            return pkm_deadtime_exp(d.ratio, d.gamma, d.eta, k, m, quad);
        }
    };
    return std::visit(Visitor{k, m, quad}, model);
}

// ---------------------------------------------------------------------------
// Conditional probability table
// ---------------------------------------------------------------------------

/// P(k|m) for k = 0..max_counts(model, max_m), m = 0..max_m.
struct CondProbTable {
    DetectorModel model;
    int max_m = 0;
    int max_k = 0;
    std::vector<double> values;  // (max_k+1) rows of (max_m+1), row-major by k

    double at(int k, int m) const {
        if (k < 0 || k > max_k || m < 0 || m > max_m) return 0.0;
        return values[static_cast<size_t>(k) * (max_m + 1) + m];
    }
};

inline CondProbTable make_cond_prob_table(const DetectorModel &model, int max_m,
                                          const QuadratureSpec &quad = {}) {
    validate_model(model);
    if (max_m < 0) throw parameter_error("max_m must be nonnegative");
    CondProbTable table;
    table.model = model;
    table.max_m = max_m;
    table.max_k = std::min(max_counts(model, max_m), std::max(max_m, 0));
    table.values.assign(static_cast<size_t>(table.max_k + 1) * (max_m + 1), 0.0);

    auto set = [&](int k, int m, double p) {
        table.values[static_cast<size_t>(k) * (max_m + 1) + m] = p;
    };
    if (const auto *exp_model = std::get_if<DeadTimeExp>(&model)) {
        for (int k = 0; k <= table.max_k; ++k) {
            if (k == 0) {
                for (int m = 0; m <= max_m; ++m) set(0, m, pow_int(1.0 - exp_model->eta, m));
                continue;
            }
            const auto column = pkm_deadtime_exp_column(exp_model->ratio, exp_model->gamma,
                                                        exp_model->eta, k, max_m, quad);
            for (int m = k; m <= max_m; ++m)
                set(k, m,
                    m == k
                        ? pkk_deadtime_exp_analytic(exp_model->ratio, exp_model->gamma,
                                                    exp_model->eta, k)
                        : column[m]);
        }
    } else {
        for (int k = 0; k <= table.max_k; ++k)
            for (int m = 0; m <= max_m; ++m) set(k, m, cond_prob(model, k, m, quad));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Monte Carlo pulse oracle
// ---------------------------------------------------------------------------

/// Bernoulli estimate with its standard error.
struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    long long hits = 0;
    long long trials = 0;
};

namespace detail {

/// Simulates one detection of m photons and returns the reported count.
template <typename Model>
int simulate_counts(const Model &model, int m, SplitMix64 &rng);

template <>
inline int simulate_counts(const IdealPNR &, int m, SplitMix64 &) {
    return m;
}

template <>
inline int simulate_counts(const LossyPNR &d, int m, SplitMix64 &rng) {
    int survivors = 0;
    for (int i = 0; i < m; ++i) survivors += rng.uniform() < d.eta;
    return survivors;
}

template <>
inline int simulate_counts(const OnOffArray &d, int m, SplitMix64 &rng) {
    std::vector<int> bins;
    bins.reserve(m);
    for (int i = 0; i < m; ++i)
        if (rng.uniform() < d.eta) bins.push_back(rng.uniform_below(d.num_detectors));
    std::sort(bins.begin(), bins.end());
    return static_cast<int>(std::unique(bins.begin(), bins.end()) - bins.begin());
}

inline int sweep_dead_time(std::vector<double> &arrivals, double ratio) {
    std::sort(arrivals.begin(), arrivals.end());
    int pulses = 0;
    double blocked_until = -1.0;
    for (double t : arrivals) {
        if (t >= blocked_until) {
            ++pulses;
            blocked_until = t + ratio;
        }
    }
    return pulses;
}

template <>
inline int simulate_counts(const DeadTimeMono &d, int m, SplitMix64 &rng) {
    std::vector<double> arrivals;
    arrivals.reserve(m);
    for (int i = 0; i < m; ++i)
        if (rng.uniform() < d.eta) arrivals.push_back(rng.uniform());
    return sweep_dead_time(arrivals, d.ratio);
}

template <>
inline int simulate_counts(const DeadTimeExp &d, int m, SplitMix64 &rng) {
    const double em1g = std::expm1(-d.gamma);
    std::vector<double> arrivals;
    arrivals.reserve(m);
    for (int i = 0; i < m; ++i) {
        if (rng.uniform() < d.eta) {
            // inverse CDF of the exponential-decay profile truncated to the window
            arrivals.push_back(-std::log1p(rng.uniform() * em1g) / d.gamma);
        }
    }
    return sweep_dead_time(arrivals, d.ratio);
}

}  // namespace detail

/// Estimates P(k|m) by simulating the physical detection process:
/// thinning, bin assignment, or arrival-time draws with a dead-time sweep.
/// Shards use decorrelated sub-seeds, so the result is deterministic for a
/// fixed (seed, shards) pair.
inline McEstimate pkm_mc_oracle(const DetectorModel &model, int k, int m, long long trials,
                                uint64_t seed, int shards = 1) {
    validate_model(model);
    if (trials < 1) throw parameter_error("trials must be >= 1");
    if (shards < 1) throw parameter_error("shards must be >= 1");
    long long hits = 0;
    long long done = 0;
    for (int shard = 0; shard < shards; ++shard) {
        const long long here = trials / shards + (shard < trials % shards ? 1 : 0);
        SplitMix64 rng(derive_subseed(seed, static_cast<uint64_t>(shard)));
        for (long long t = 0; t < here; ++t) {
            const int counted =
                std::visit([&](const auto &d) { return detail::simulate_counts(d, m, rng); }, model);
            hits += counted == k;
        }
        done += here;
    }
    McEstimate est;
    est.hits = hits;
    est.trials = done;
    est.estimate = static_cast<double>(hits) / done;
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / done);
    return est;
}

}  // namespace bosonkit
