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
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bosonkit/math.hpp"
#include "bosonkit/pattern.hpp"
#include "bosonkit/rng.hpp"

namespace bosonkit {

/// Pearson chi-square result against an exact distribution.
struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    /// Set when low-expectation outcomes were pooled into a tail bin.
    std::string pooling_note;
};

/// Outcome of a sampling run, with enough exact reference data to be
/// re-analyzed (postselected, chi-squared) without the original distribution.
struct SampleReport {
    std::string id;
    long long trials = 0;
    uint64_t seed = 0;
    std::string rng = kRngName;
    std::map<Pattern, long long> counts;
    std::map<Pattern, double> expected;  // exact probabilities, same keys and more
    double tv_distance = 0.0;
    ChiSquareResult chi_square;
    /// Present after postselection: fraction of trials kept.
    std::optional<double> acceptance;
    std::string note;
};

/// Walker/Vose alias table: O(1) categorical draws after linear setup.
class AliasSampler {
  public:
    explicit AliasSampler(const std::vector<double> &probabilities) {
        const size_t n = probabilities.size();
        if (n == 0) throw domain_error("cannot sample from an empty distribution");
        prob_.assign(n, 0.0);
        alias_.assign(n, 0);
        std::deque<size_t> small, large;
        std::vector<double> scaled(n);
        for (size_t i = 0; i < n; ++i) {
            scaled[i] = probabilities[i] * n;
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const size_t s = small.front();
            const size_t l = large.front();
            small.pop_front();
            large.pop_front();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (size_t i : large) prob_[i] = 1.0;
        for (size_t i : small) prob_[i] = 1.0;  // rounding leftovers
    }

    size_t draw(SplitMix64 &rng) const {
        const size_t column = static_cast<size_t>(rng.uniform() * prob_.size());
        const size_t i = std::min(column, prob_.size() - 1);
        return rng.uniform() < prob_[i] ? i : alias_[i];
    }

  private:
    std::vector<double> prob_;
    std::vector<size_t> alias_;
};

/// Total variation distance (1/2) sum |empirical - exact| between the
/// frequencies in `counts` (over `trials`) and the exact probabilities.
inline double tv_distance(const std::map<Pattern, long long> &counts, long long trials,
                          const std::map<Pattern, double> &exact) {
    double sum = 0.0;
    for (const auto &[pattern, p] : exact) {
        auto it = counts.find(pattern);
        const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / trials;
        sum += std::abs(freq - p);
    }
    for (const auto &[pattern, c] : counts)
        if (!exact.count(pattern)) sum += static_cast<double>(c) / trials;
    return 0.5 * sum;
}

namespace detail {

/// Pearson statistic with tail pooling at expected count >= 5.
inline ChiSquareResult pearson_chi_square(const std::map<Pattern, long long> &counts,
                                          long long trials,
                                          const std::map<Pattern, double> &exact) {
    struct Bin {
        double expected;
        double observed;
    };
    std::vector<Bin> bins;
    Bin tail{0.0, 0.0};
    int pooled = 0;
    for (const auto &[pattern, p] : exact) {
        auto it = counts.find(pattern);
        const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        const double expected = p * trials;
        if (expected < 5.0) {
            tail.expected += expected;
            tail.observed += observed;
            ++pooled;
        } else {
            bins.push_back({expected, observed});
        }
    }
    ChiSquareResult result;
    if (pooled > 0) {
        // Keep merging the smallest regular bins until the tail is usable.
        std::sort(bins.begin(), bins.end(),
                  [](const Bin &a, const Bin &b) { return a.expected < b.expected; });
        while (tail.expected > 0.0 && tail.expected < 5.0 && !bins.empty()) {
            tail.expected += bins.front().expected;
            tail.observed += bins.front().observed;
            bins.erase(bins.begin());
            ++pooled;
        }
        if (tail.expected > 0.0) bins.push_back(tail);
        result.pooling_note =
            std::to_string(pooled) + " low-expectation outcomes pooled into a tail bin";
    }
    if (bins.size() < 2) {
        result.statistic = 0.0;
        result.dof = 0;
        result.p_value = 1.0;
        return result;
    }
    double statistic = 0.0;
    for (const Bin &bin : bins) {
        const double diff = bin.observed - bin.expected;
        statistic += diff * diff / bin.expected;
    }
    result.statistic = statistic;
    result.dof = static_cast<int>(bins.size()) - 1;
    result.p_value = regularized_gamma_q(result.dof / 2.0, statistic / 2.0);
    return result;
}

}  // namespace detail

/// Pearson goodness-of-fit of a report's counts against an exact distribution.
inline ChiSquareResult chi_square_test(const SampleReport &report,
                                       const OutcomeDistribution &dist) {
    return detail::pearson_chi_square(report.counts, report.trials, dist.entries);
}

/// Draws `trials` i.i.d. outcomes from the exact distribution with the alias
/// method. The distribution must be normalized within 1e-9; the residual is
/// folded onto the largest outcome so the sampler sees exact unit mass.
/// Deterministic for a fixed seed.
inline SampleReport sample(const OutcomeDistribution &dist, long long trials, uint64_t seed) {
    if (dist.entries.empty()) throw domain_error("cannot sample from an empty distribution");
    if (trials < 1) throw parameter_error("trials must be >= 1");

    std::vector<const Pattern *> patterns;
    std::vector<double> probabilities;
    patterns.reserve(dist.entries.size());
    for (const auto &[pattern, p] : dist.entries) {
        if (p < -1e-12) throw domain_error("negative probability in distribution");
        patterns.push_back(&pattern);
        probabilities.push_back(std::max(p, 0.0));
    }
    double total = 0.0;
    for (double p : probabilities) total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw domain_error("distribution is not normalized: total " + std::to_string(total));
    const size_t largest =
        std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin();
    probabilities[largest] += 1.0 - total;

    AliasSampler sampler(probabilities);
    SplitMix64 rng(seed);
    SampleReport report;
    report.id = "input=" + dist.input.to_string() + ";n=" + std::to_string(dist.n) +
                ";outcomes=" + std::to_string(dist.entries.size());
    report.trials = trials;
    report.seed = seed;
    for (long long t = 0; t < trials; ++t) ++report.counts[*patterns[sampler.draw(rng)]];
    report.expected = dist.entries;
    report.tv_distance = tv_distance(report.counts, trials, dist.entries);
    report.chi_square = detail::pearson_chi_square(report.counts, trials, dist.entries);
    return report;
}

/// Keeps only the samples whose total count equals n. The acceptance fraction
/// estimates the postselection efficiency; empirical frequencies and the
/// exact reference are renormalized to the postselected class.
/// Zero accepted samples is flagged in the note, not an error.
inline SampleReport postselect(const SampleReport &report, int n) {
    SampleReport out;
    out.id = report.id + ";postselect=" + std::to_string(n);
    out.seed = report.seed;
    out.rng = report.rng;

    long long kept = 0;
    for (const auto &[pattern, count] : report.counts) {
        if (pattern.total() == n) {
            out.counts[pattern] = count;
            kept += count;
        }
    }
    double exact_mass = 0.0;
    for (const auto &[pattern, p] : report.expected)
        if (pattern.total() == n) exact_mass += p;
    for (const auto &[pattern, p] : report.expected)
        if (pattern.total() == n)
            out.expected[pattern] = exact_mass > 0.0 ? p / exact_mass : 0.0;

    out.trials = kept;
    out.acceptance = report.trials > 0 ? static_cast<double>(kept) / report.trials : 0.0;
    if (kept == 0) {
        out.note = "no samples passed postselection";
        out.tv_distance = 1.0;
        return out;
    }
    out.tv_distance = tv_distance(out.counts, kept, out.expected);
    out.chi_square = detail::pearson_chi_square(out.counts, kept, out.expected);
    return out;
}

}  // namespace bosonkit
