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

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bosonkit/errors.hpp"

namespace bosonkit {

/// Hard cap shared by the permanent dimension and the total photon number.
/// 2^20 Ryser terms keep any single evaluation well under a second.
inline constexpr int kDefaultSizeCap = 20;

namespace detail {

inline constexpr int kFactorialTableSize = 65;

inline const std::array<double, kFactorialTableSize> &factorial_table() {
    static const auto table = [] {
        std::array<double, kFactorialTableSize> t{};
        t[0] = 1.0;
        for (int i = 1; i < kFactorialTableSize; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

// Pascal's triangle in double precision; rows 0..64 are exact
// (the largest entry, C(64,32) ~ 1.8e18, is below 2^63).
inline const std::vector<std::vector<double>> &pascal_table() {
    static const auto table = [] {
        std::vector<std::vector<double>> t(65);
        for (int n = 0; n <= 64; ++n) {
            t[n].resize(n + 1);
            t[n][0] = t[n][n] = 1.0;
            for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        return t;
    }();
    return table;
}

// Stirling numbers of the second kind up to n = 32, exact in double.
inline const std::vector<std::vector<double>> &stirling2_table() {
    static const auto table = [] {
        std::vector<std::vector<double>> t(33);
        t[0] = {1.0};
        for (int n = 1; n <= 32; ++n) {
            t[n].assign(n + 1, 0.0);
            for (int k = 1; k <= n; ++k) {
                const double same_k = k <= n - 1 ? t[n - 1][k] : 0.0;
                t[n][k] = k * same_k + t[n - 1][k - 1];
            }
        }
        return t;
    }();
    return table;
}

}  // namespace detail

inline double factorial(int n) {
    if (n < 0 || n >= detail::kFactorialTableSize)
        throw size_error("factorial argument out of table range: " + std::to_string(n));
    return detail::factorial_table()[n];
}

/// Binomial coefficient C(n, k); zero outside the triangle.
inline double binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0.0;
    if (n <= 64) return detail::pascal_table()[n][k];
    // Large n appears only in asymptotic checks (e.g. array K -> infinity).
    double result = 1.0;
    k = std::min(k, n - k);
    for (int i = 0; i < k; ++i) result = result * (n - i) / (i + 1);
    return result;
}

/// Integer power by repeated multiplication; 0^0 = 1.
inline double pow_int(double base, int exponent) {
    double result = 1.0;
    for (int i = 0; i < exponent; ++i) result *= base;
    return result;
}

/// Binomial probability mass C(m, l) mu^l (1-mu)^(m-l).
inline double binomial_pmf(int m, int l, double mu) {
    if (l < 0 || l > m) return 0.0;
    return binomial(m, l) * pow_int(mu, l) * pow_int(1.0 - mu, m - l);
}

/// Stirling number of the second kind S(n, k).
inline double stirling2(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0.0;
    if (n > 32) throw size_error("stirling2 table covers n <= 32");
    return detail::stirling2_table()[n][k];
}

/// Gauss-Legendre nodes and weights on [0, 1].
/// Newton iteration on the Legendre recurrence, seeded with Chebyshev angles.
inline void gauss_legendre_unit(int n, std::vector<double> &nodes, std::vector<double> &weights) {
    nodes.resize(n);
    weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 0.5 * w;
    }
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series for x < a + 1, Lentz continued fraction otherwise.
inline double regularized_gamma_q(double a, double x) {
    if (a <= 0.0) throw parameter_error("regularized_gamma_q requires a > 0");
    if (x < 0.0) throw parameter_error("regularized_gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    const double log_prefix = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        // P(a, x) by series, then Q = 1 - P.
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    // Q(a, x) by modified Lentz continued fraction.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(log_prefix);
}

}  // namespace bosonkit
