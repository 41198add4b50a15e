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

#include "bosonkit/ideal.hpp"

#include <gtest/gtest.h>

using namespace bosonkit;

namespace {

UnitaryMatrix balanced_splitter() { return beam_splitter(1.0 / std::sqrt(2.0), 0.0); }

Pattern input_with_photons(int modes, int photons) {
    Pattern p;
    p.counts.assign(modes, 0);
    for (int i = 0; i < photons; ++i) p[i % modes] += 1;
    return p;
}

}  // namespace

TEST(EnumerateOutcomes, ExamplesAndCounts) {
    const auto two = enumerate_outcomes(2, 2, 2);
    ASSERT_EQ(two.size(), 3u);
    EXPECT_EQ(two[0], (Pattern{0, 2}));
    EXPECT_EQ(two[1], (Pattern{1, 1}));
    EXPECT_EQ(two[2], (Pattern{2, 0}));

    const auto vacuum = enumerate_outcomes(0, 3, 0);
    ASSERT_EQ(vacuum.size(), 1u);
    EXPECT_EQ(vacuum[0], (Pattern{0, 0, 0}));

    EXPECT_EQ(enumerate_outcomes(3, 3, 3).size(), 10u);  // C(5,2) compositions
    EXPECT_EQ(enumerate_outcomes(3, 3, 1).size(), 1u);   // capped
}

TEST(IdealProbability, HongOuMandelDip) {
    const auto u = balanced_splitter();
    EXPECT_LE(ideal_probability(u, {1, 1}, {1, 1}), 1e-12);
    EXPECT_NEAR(ideal_probability(u, {1, 1}, {2, 0}), 0.5, 1e-12);
    EXPECT_NEAR(ideal_probability(u, {1, 1}, {0, 2}), 0.5, 1e-12);
}

TEST(IdealProbability, VacuumAndConservation) {
    const auto u = haar_random_unitary(4, 11);
    EXPECT_EQ(ideal_probability(u, {0, 0, 0, 0}, {0, 0, 0, 0}), 1.0);
    EXPECT_EQ(ideal_probability(u, {1, 1, 0, 0}, {1, 0, 0, 0}), 0.0);
    EXPECT_EQ(ideal_probability(u, {1, 0, 0, 0}, {1, 1, 0, 0}), 0.0);
}

TEST(IdealProbability, Errors) {
    const auto u = haar_random_unitary(3, 1);
    EXPECT_THROW(ideal_probability(u, {1, 1}, {1, 1, 0}), shape_error);
    EXPECT_THROW(ideal_probability(u, {1, 1, 1, 1}, {1, 1, 1, 1}), shape_error);
    EXPECT_THROW(ideal_probability(u, {2, 2, 0}, {2, 2, 0}), domain_error);
    EXPECT_THROW(ideal_probability(u, {1, 1, 1}, {1, 1, 1}, 2), size_error);
}

TEST(IdealDistribution, BalancedSplitterBunches) {
    const auto dist = ideal_distribution(balanced_splitter(), {1, 1});
    ASSERT_EQ(dist.entries.size(), 3u);
    EXPECT_NEAR(dist.at({2, 0}), 0.5, 1e-12);
    EXPECT_NEAR(dist.at({0, 2}), 0.5, 1e-12);
    EXPECT_LE(dist.at({1, 1}), 1e-12);
    EXPECT_NEAR(dist.total_probability(), 1.0, 1e-12);
}

TEST(IdealDistribution, IdentityIsDelta) {
    const auto u = validate_unitary(ComplexMatrix::identity(3));
    const auto dist = ideal_distribution(u, {1, 0, 1});
    EXPECT_NEAR(dist.at({1, 0, 1}), 1.0, 1e-12);
    EXPECT_NEAR(dist.total_probability(), 1.0, 1e-12);
}

TEST(IdealDistribution, DftThreeSuppressionPattern) {
    // Oracle-computed reference: the balanced three-port suppresses the
    // (2,1,0) permutation class, keeps P(1,1,1) = 1/3 and P(3,0,0) = 2/9.
    const auto u = dft_unitary(3);
    const auto oracle = fock_oracle_distribution(u, {1, 1, 1});
    EXPECT_NEAR(oracle.at({1, 1, 1}), 1.0 / 3.0, 1e-12);
    EXPECT_LE(oracle.at({2, 1, 0}), 1e-12);
    EXPECT_NEAR(oracle.at({3, 0, 0}), 2.0 / 9.0, 1e-12);

    const auto dist = ideal_distribution(u, {1, 1, 1});
    for (const auto &[pattern, p] : dist.entries)
        EXPECT_NEAR(p, oracle.at(pattern), 1e-10) << pattern.to_string();
}

TEST(FockOracle, MatchesKnownSplitterValues) {
    const auto dist = fock_oracle_distribution(balanced_splitter(), {1, 1});
    EXPECT_NEAR(dist.at({2, 0}), 0.5, 1e-12);
    EXPECT_NEAR(dist.at({0, 2}), 0.5, 1e-12);
    EXPECT_LE(dist.at({1, 1}), 1e-12);
    EXPECT_NEAR(dist.total_probability(), 1.0, 1e-12);
}

TEST(FockOracle, DeltaOnIdentity) {
    const auto u = validate_unitary(ComplexMatrix::identity(4));
    const auto dist = fock_oracle_distribution(u, {2, 0, 1, 0});
    EXPECT_NEAR(dist.at({2, 0, 1, 0}), 1.0, 1e-12);
    EXPECT_NEAR(dist.total_probability(), 1.0, 1e-12);
}

TEST(FockOracle, SizeCap) {
    const auto u = validate_unitary(ComplexMatrix::identity(8));
    EXPECT_THROW(fock_oracle_distribution(u, {1, 1, 1, 1, 1, 1, 1, 1}), size_error);
}

TEST(IdealDistribution, MatchesFockOraclePerOutcome) {
    const auto u = haar_random_unitary(4, 21);
    const auto dist = ideal_distribution(u, {1, 1, 0, 0});
    const auto oracle = fock_oracle_distribution(u, {1, 1, 0, 0});
    ASSERT_EQ(dist.entries.size(), oracle.entries.size());
    for (const auto &[pattern, p] : dist.entries)
        EXPECT_NEAR(p, oracle.at(pattern), 1e-10) << pattern.to_string();
}

TEST(IdealDistribution, NormalizationAndOracleAcrossSizes) {
    int seed = 100;
    for (int modes = 2; modes <= 6; ++modes) {
        for (int photons = 1; photons <= std::min(modes, 5); ++photons) {
            const auto u = haar_random_unitary(modes, seed++);
            const auto input = input_with_photons(modes, photons);
            const auto dist = ideal_distribution(u, input);
            EXPECT_NEAR(dist.total_probability(), 1.0, 1e-9)
                << "modes=" << modes << " n=" << photons;
            for (const auto &[pattern, p] : dist.entries) {
                EXPECT_GE(p, 0.0);
                EXPECT_LE(p, 1.0 + 1e-12);
            }
            const auto oracle = fock_oracle_distribution(u, input);
            for (const auto &[pattern, p] : dist.entries)
                EXPECT_NEAR(p, oracle.at(pattern), 1e-10);
        }
    }
}

TEST(IdealDistribution, PermutationCovariance) {
    const auto u = haar_random_unitary(3, 31);
    const Pattern input{1, 1, 0};
    const auto dist = ideal_distribution(u, input);

    // Swap output modes 0 and 2 (rows of U); outcomes permute along.
    ComplexMatrix swapped(3, 3);
    const int relabel[3] = {2, 1, 0};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) swapped(r, c) = u(relabel[r], c);
    const auto dist_swapped = ideal_distribution(validate_unitary(swapped), input);

    for (const auto &[pattern, p] : dist.entries) {
        const Pattern moved{pattern[2], pattern[1], pattern[0]};
        EXPECT_NEAR(dist_swapped.at(moved), p, 1e-12);
    }
}
