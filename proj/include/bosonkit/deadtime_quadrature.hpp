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
#include <vector>

#include "bosonkit/math.hpp"

namespace bosonkit {

/// Controls the numeric path for the nonmonochromatic dead-time detector.
struct QuadratureSpec {
    /// Absolute accuracy demanded of each conditional probability.
    double abs_tol = 1e-6;
    /// Gauss-Legendre nodes per dimension; 0 picks a count from the decay
    /// rate and integration span (32 for up to three pulses).
    int nodes = 0;
};

namespace detail {

/// Exponential-decay mode profile in window-normalized time u = t / tau_m,
/// with dead-time ratio r = tau_d / tau_m. The intensity integrates to the
/// detection efficiency over the window. Everything is phrased through
/// expm1 so the gamma -> 0 (monochromatic) limit stays exact.
struct ExpDecayMode {
    double r;
    double gamma;
    double eta;
    double em1g;  // expm1(-gamma) < 0

    ExpDecayMode(double r_in, double gamma_in, double eta_in)
        : r(r_in), gamma(gamma_in), eta(eta_in), em1g(std::expm1(-gamma_in)) {}

    double intensity(double u) const { return -eta * gamma * std::exp(-gamma * u) / em1g; }

    double cumulative(double u) const { return eta * std::expm1(-gamma * u) / em1g; }

    /// Mass of the dead window after a pulse at u: Phi(min(u+r, 1)) - Phi(u).
    double dead_window_mass(double u) const {
        const double span = std::min(r, 1.0 - u);
        if (span <= 0.0) return 0.0;
        return eta * std::exp(-gamma * u) * std::expm1(-gamma * span) / em1g;
    }
};

/// Accumulates moments J_p = int prod_i I(t_i) (1 - eta + sum_i D(t_i))^p
/// over the gap-constrained ordered domain, for p = 0..pmax at once.
///
/// The substitution s_i = t_i - (i-1) r turns the constraints
/// 0 <= t_1, t_i + r <= t_{i+1}, t_k <= 1 into the plain ordered simplex
/// 0 <= s_1 <= ... <= s_k <= L with L = 1 - (k-1) r, integrated as nested
/// one-dimensional Gauss-Legendre passes (inner upper bound = next s).
class GapSimplexIntegrator {
  public:
    GapSimplexIntegrator(const ExpDecayMode &mode, int k, int pmax, int nodes)
        : mode_(mode), k_(k), pmax_(pmax) {
        gauss_legendre_unit(nodes, xs_, ws_);
        moments_.assign(pmax + 1, 0.0);
    }

    /// Integrates the outermost variable s_k over [a, b].
    void add_outer_segment(double a, double b) {
        if (!(b > a)) return;
        for (size_t j = 0; j < xs_.size(); ++j) {
            const double s = a + xs_[j] * (b - a);
            descend(k_, s, ws_[j] * (b - a));
        }
    }

    const std::vector<double> &moments() const { return moments_; }

  private:
    void descend(int level, double s, double weight_product, double dead_sum = 0.0) {
        const double t = s + (level - 1) * mode_.r;
        const double w = weight_product * mode_.intensity(t);
        const double d = dead_sum + mode_.dead_window_mass(t);
        if (level == 1) {
            const double base = 1.0 - mode_.eta + d;
            double base_power = 1.0;
            for (int p = 0; p <= pmax_; ++p) {
                moments_[p] += w * base_power;
                base_power *= base;
            }
            return;
        }
        // s_{level-1} runs over [0, s].
        for (size_t j = 0; j < xs_.size(); ++j) descend(level - 1, xs_[j] * s, ws_[j] * s * w, d);
    }

    const ExpDecayMode &mode_;
    int k_;
    int pmax_;
    std::vector<double> xs_, ws_;
    std::vector<double> moments_;
};

inline std::vector<double> gap_simplex_moments(const ExpDecayMode &mode, int k, int pmax,
                                               int nodes) {
    const double span = 1.0 - (k - 1) * mode.r;
    std::vector<double> zero(pmax + 1, 0.0);
    if (span <= 0.0) return zero;

    GapSimplexIntegrator worker(mode, k, pmax, nodes);
    // D(t_k) kinks where the last dead window hits the end of the measurement
    // window, i.e. at s_k = 1 - k r; split there so each piece is analytic.
    const double kink = 1.0 - k * mode.r;
    if (kink > 0.0 && kink < span) {
        worker.add_outer_segment(0.0, kink);
        worker.add_outer_segment(kink, span);
    } else {
        worker.add_outer_segment(0.0, span);
    }
    return worker.moments();
}

/// Node count heuristic: the integrand varies like exp(-gamma u) over a span
/// of length L, so the polynomial degree Gauss-Legendre must resolve scales
/// with gamma L. The total leaf count n^k is capped to keep a single call
/// under ~0.1 s; the spans shrink with k, so accuracy survives the cap.
inline int deadtime_exp_auto_nodes(int k, double gamma, double span) {
    if (k <= 3) return 32;
    int n = static_cast<int>(std::ceil(gamma * span)) + 10;
    n = std::clamp(n, 6, 32);
    while (n > 5 && k * std::log(static_cast<double>(n)) > std::log(2e7)) --n;
    return n;
}

}  // namespace detail

/// P(k|m) for the dead-time detector on an exponential-decay mode, for every
/// m in 0..max_m in one sweep (the integrand is shared; only the power of
/// 1 - Xi differs between m values).
///
/// The Fock diagonal of the POVM is
///   P(k|m) = m!/(m-k)! * int_{T_k} d^k t I_k(t) (1 - Xi_k(t))^(m-k),
/// evaluated here with Xi_k in closed form through the cumulative intensity.
/// Infeasible geometry ((k-1) tau_d > tau_m) gives exactly 0.
///
/// Accuracy is estimated by re-running with one node fewer per dimension;
/// if the estimate misses spec.abs_tol an accuracy_error is thrown carrying
/// the value and the bound.
inline std::vector<double> pkm_deadtime_exp_column(double r, double gamma, double eta, int k,
                                                   int max_m, const QuadratureSpec &spec = {}) {
    if (!(r >= 0.0 && r <= 1.0)) throw parameter_error("dead-time ratio must lie in [0, 1]");
    if (!(gamma > 0.0)) throw parameter_error("decay rate gamma must be positive");
    if (!(eta >= 0.0 && eta <= 1.0)) throw parameter_error("efficiency must lie in [0, 1]");
    if (k < 0 || max_m < 0) throw parameter_error("counts must be nonnegative");

    std::vector<double> column(max_m + 1, 0.0);
    if (k == 0) {
        for (int m = 0; m <= max_m; ++m) column[m] = pow_int(1.0 - eta, m);
        return column;
    }
    if (k > max_m && k > 0) return column;  // triangular: no m with m >= k in range

    const detail::ExpDecayMode mode(r, gamma, eta);
    const double span = 1.0 - (k - 1) * r;
    if (span <= 0.0) return column;
    if (k > 16) throw size_error("dead-time quadrature limited to 16 pulses");

    const int pmax = max_m - k;
    const int nodes = spec.nodes > 0 ? std::max(spec.nodes, 2)
                                     : detail::deadtime_exp_auto_nodes(k, gamma, span);
    const auto moments = detail::gap_simplex_moments(mode, k, pmax, nodes);
    const auto check = detail::gap_simplex_moments(mode, k, pmax, std::max(2, nodes - 1));

    double worst_gap = 0.0;
    for (int m = k; m <= max_m; ++m) {
        double falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= (m - i);
        column[m] = falling * moments[m - k];
        worst_gap = std::max(worst_gap, std::abs(column[m] - falling * check[m - k]));
    }
    if (worst_gap > spec.abs_tol)
        throw accuracy_error("dead-time quadrature missed the requested accuracy", column[max_m],
                             worst_gap);
    return column;
}

/// Single conditional probability through the quadrature path.
inline double pkm_deadtime_exp(double r, double gamma, double eta, int k, int m,
                               const QuadratureSpec &spec = {}) {
    if (m < 0) throw parameter_error("photon number must be nonnegative");
    if (k > m) return 0.0;
    return pkm_deadtime_exp_column(r, gamma, eta, k, m, spec)[m];
}

}  // namespace bosonkit
