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

#include "bosonkit/detector.hpp"

#include <gtest/gtest.h>

using namespace bosonkit;

namespace {

double completeness(const DetectorModel &model, int m, const QuadratureSpec &quad = {}) {
    double sum = 0.0;
    const int top = std::min(m, max_counts(model, m));
    for (int k = 0; k <= top; ++k) sum += cond_prob(model, k, m, quad);
    return sum;
}

}  // namespace

TEST(MaxCounts, PerModel) {
    EXPECT_EQ(max_counts(OnOffArray{4, 1.0}, 9), 4);
    EXPECT_EQ(max_counts(DeadTimeMono{0.3, 1.0}, 9), 4);  // floor(1/0.3) = 3, plus 1
    EXPECT_EQ(max_counts(IdealPNR{}, 7), 7);
    EXPECT_EQ(max_counts(LossyPNR{0.5}, 5), 5);
    EXPECT_EQ(max_counts(DeadTimeExp{0.2, 10.0, 1.0}, 9), 6);
    EXPECT_EQ(max_counts(DeadTimeMono{0.0, 1.0}, 9), 9);  // no dead time: plain lossy
}

TEST(PkmLossy, ClosedForm) {
    EXPECT_DOUBLE_EQ(pkm_lossy(0.37, 1, 1), 0.37);
    EXPECT_DOUBLE_EQ(pkm_lossy(0.37, 0, 3), 0.63 * 0.63 * 0.63);
    for (int m = 0; m <= 5; ++m)
        for (int k = 0; k <= m; ++k) EXPECT_DOUBLE_EQ(pkm_lossy(1.0, k, m), k == m ? 1.0 : 0.0);
    EXPECT_NEAR(pkm_lossy(0.5, 0, 2), 0.25, 1e-15);
    EXPECT_NEAR(pkm_lossy(0.5, 1, 2), 0.5, 1e-15);
    EXPECT_NEAR(pkm_lossy(0.5, 2, 2), 0.25, 1e-15);
    EXPECT_EQ(pkm_lossy(0.5, 3, 2), 0.0);
}

TEST(PkmArray, ClosedFormAndDiagonal) {
    EXPECT_NEAR(pkm_array(4, 1.0, 2, 2), 0.75, 1e-15);  // (eta/K)^k K!/(K-k)!
    EXPECT_NEAR(pkm_array(2, 1.0, 1, 2), 0.5, 1e-15);
    for (int K : {1, 3, 8}) EXPECT_NEAR(pkm_array(K, 1.0, 1, 1), 1.0, 1e-15);
    EXPECT_THROW(pkm_array(3, 1.0, 4, 5), domain_error);

    for (int K : {2, 5}) {
        for (double eta : {0.6, 1.0}) {
            for (int k = 0; k <= K; ++k) {
                const double direct = pkm_array(K, eta, k, k);
                EXPECT_NEAR(direct, diagonal_prob(OnOffArray{K, eta}, k), 1e-14);
            }
        }
    }
}

TEST(PkmArray, Completeness) {
    for (int K : {2, 4, 8}) {
        for (double eta : {0.7, 1.0}) {
            for (int m = 0; m <= 12; ++m)
                EXPECT_NEAR(completeness(OnOffArray{K, eta}, m), 1.0, 1e-9)
                    << "K=" << K << " eta=" << eta << " m=" << m;
        }
    }
}

TEST(PkmArray, LargeArrayDegeneratesToLossy) {
    const int K = 10000;
    // The residual collision probability scales like C(m,2)/K.
    for (double eta : {0.8, 1.0}) {
        for (int m = 0; m <= 4; ++m)
            for (int k = 0; k <= m; ++k)
                EXPECT_NEAR(pkm_array(K, eta, k, m), pkm_lossy(eta, k, m), 1e-3);
        for (int m = 5; m <= 8; ++m) {
            const double gap = 2.0 * binomial(m, 2) / K;
            for (int k = 0; k <= m; ++k)
                EXPECT_NEAR(pkm_array(K, eta, k, m), pkm_lossy(eta, k, m), gap);
        }
    }
}

TEST(PkmArray, DifferenceAndStirlingFormsAgree) {
    // Both evaluations of the same diagonal. The difference form carries
    // ~C(K,k) eps of cancellation noise, so stay at K <= 32 where that noise
    // is well below the comparison tolerance.
    for (double eta : {0.6, 1.0}) {
        for (int m = 1; m <= 8; ++m) {
            for (int K : {8, 16, 32}) {
                for (int k = 0; k <= std::min(m, K); ++k) {
                    const double diff_form = detail::pkm_array_difference_form(K, eta, k, m);
                    const double stirling_form = detail::pkm_array_stirling_form(K, eta, k, m);
                    EXPECT_NEAR(diff_form, stirling_form, 1e-7)
                        << "K=" << K << " k=" << k << " m=" << m;
                }
            }
        }
    }
}

TEST(PkmDeadTimeMono, PaperPlugIn) {
    // P(k|k) = (eta eta_{k-1})^k
    EXPECT_NEAR(pkm_deadtime_mono(0.25, 1.0, 2, 2), 0.5625, 1e-15);
    EXPECT_NEAR(pkm_deadtime_mono(0.25, 0.9, 2, 2), std::pow(0.9 * 0.75, 2), 1e-15);
    EXPECT_NEAR(pkm_deadtime_mono(0.5, 1.0, 2, 2), 0.25, 1e-15);
}

TEST(PkmDeadTimeMono, ZeroDeadTimeIsLossy) {
    for (double eta : {0.4, 1.0})
        for (int m = 0; m <= 8; ++m)
            for (int k = 0; k <= m; ++k)
                EXPECT_DOUBLE_EQ(pkm_deadtime_mono(0.0, eta, k, m), pkm_lossy(eta, k, m));
}

TEST(PkmDeadTimeMono, Completeness) {
    for (double r : {0.1, 0.25, 0.5}) {
        for (double eta : {0.7, 1.0}) {
            for (int m = 0; m <= 12; ++m)
                EXPECT_NEAR(completeness(DeadTimeMono{r, eta}, m), 1.0, 1e-12)
                    << "r=" << r << " m=" << m;
        }
    }
}

TEST(PkmDeadTimeMono, TelescopingPartialSums) {
    // sum_{k=0}^{j} P(k|m) telescopes to the binomial partial sum at eta_j.
    const double eta = 0.85;
    for (double r : {0.2, 0.3}) {
        const int windows = dead_time_windows(r);
        for (int m : {3, 7, 12}) {
            for (int j = 0; j <= windows; ++j) {
                double lhs = 0.0;
                for (int k = 0; k <= j; ++k) lhs += pkm_deadtime_mono(r, eta, k, m);
                double rhs = 0.0;
                const double mu = eta * adjusting_efficiency(r, j);
                for (int l = 0; l <= j; ++l) rhs += binomial_pmf(m, l, mu);
                EXPECT_NEAR(lhs, rhs, 1e-12) << "r=" << r << " m=" << m << " j=" << j;
            }
        }
    }
}

TEST(PkmDeadTimeMono, ExactWindowBoundaryZeroesOverflowElement) {
    // tau_m / tau_d integer: eta_K = 0 and the K+1 element vanishes identically.
    const double r = 0.25;
    const int windows = dead_time_windows(r);
    EXPECT_EQ(windows, 4);
    for (int m = windows + 1; m <= 12; ++m)
        EXPECT_NEAR(pkm_deadtime_mono(r, 1.0, windows + 1, m), 0.0, 1e-15);
}

TEST(PkkDeadTimeExpAnalytic, KnownValues) {
    EXPECT_DOUBLE_EQ(pkk_deadtime_exp_analytic(0.3, 2.5, 0.77, 1), 0.77);
    // [sinh(4)/sinh(5)]^2, frozen from high-precision evaluation
    EXPECT_NEAR(pkk_deadtime_exp_analytic(0.2, 10.0, 1.0, 2), 0.1352567796248722, 1e-15);
    EXPECT_DOUBLE_EQ(pkk_deadtime_exp_analytic(0.2, 10.0, 1.0, 0), 1.0);
    EXPECT_THROW(pkk_deadtime_exp_analytic(0.2, 0.0, 1.0, 1), parameter_error);
    EXPECT_THROW(pkk_deadtime_exp_analytic(0.2, -1.0, 1.0, 1), parameter_error);
}

TEST(PkkDeadTimeExpAnalytic, SmallGammaTendsToMonochromatic) {
    for (int k : {1, 2, 3}) {
        for (double r : {0.1, 0.3}) {
            const double expected = pow_int(0.9 * adjusting_efficiency(r, k - 1), k);
            EXPECT_NEAR(pkk_deadtime_exp_analytic(r, 1e-8, 0.9, k), expected, 1e-6);
        }
    }
}

TEST(DeadTimeExpQuadrature, DiagonalMatchesClosedForm) {
    for (double gamma : {1.0, 10.0}) {
        for (double r : {0.1, 0.2, 0.3}) {
            for (double eta : {0.8, 1.0}) {
                for (int k = 1; k <= 3; ++k) {
                    const double via_integral = pkm_deadtime_exp(r, gamma, eta, k, k);
                    const double analytic = pkk_deadtime_exp_analytic(r, gamma, eta, k);
                    EXPECT_NEAR(via_integral, analytic, 1e-6)
                        << "gamma=" << gamma << " r=" << r << " k=" << k;
                }
            }
        }
    }
}

TEST(DeadTimeExpQuadrature, FrozenOffDiagonalValues) {
    // Reference values from 30-digit adaptive quadrature of the same integrals.
    EXPECT_NEAR(pkm_deadtime_exp(0.2, 10.0, 1.0, 1, 2), 0.8647432203751278, 1e-9);
    EXPECT_NEAR(pkm_deadtime_exp(0.2, 10.0, 1.0, 1, 3), 0.74774691075978105, 1e-9);
    EXPECT_NEAR(pkm_deadtime_exp(0.2, 10.0, 1.0, 2, 3), 0.24979238891677455, 1e-9);
}

TEST(DeadTimeExpQuadrature, SmallGammaMatchesMonochromatic) {
    const double gamma = 1e-6;
    for (double r : {0.25, 0.3}) {
        for (double eta : {0.75, 1.0}) {
            for (int m = 0; m <= 5; ++m) {
                for (int k = 1; k <= std::min(m, max_counts(DeadTimeMono{r, eta}, m)); ++k) {
                    EXPECT_NEAR(pkm_deadtime_exp(r, gamma, eta, k, m),
                                pkm_deadtime_mono(r, eta, k, m), 1e-5)
                        << "r=" << r << " k=" << k << " m=" << m;
                }
            }
        }
    }
}

TEST(DeadTimeExpQuadrature, Completeness) {
    for (double gamma : {1.0, 10.0}) {
        for (double r : {0.1, 0.2}) {
            const auto table = make_cond_prob_table(DeadTimeExp{r, gamma, 1.0}, 8);
            for (int m = 0; m <= 8; ++m) {
                double sum = 0.0;
                for (int k = 0; k <= table.max_k; ++k) sum += table.at(k, m);
                EXPECT_NEAR(sum, 1.0, 1e-5) << "gamma=" << gamma << " r=" << r << " m=" << m;
            }
        }
    }
}

TEST(DeadTimeExpQuadrature, InfeasibleGeometryIsZero) {
    EXPECT_EQ(pkm_deadtime_exp(0.3, 5.0, 1.0, 5, 6), 0.0);  // 4 gaps of 0.3 exceed the window
    EXPECT_EQ(pkm_deadtime_exp(0.2, 5.0, 1.0, 6, 8), 0.0);  // exact boundary, zero measure
}

TEST(DeadTimeExpQuadrature, AccuracyFailureCarriesEstimate) {
    QuadratureSpec strict;
    strict.abs_tol = 1e-15;
    strict.nodes = 3;
    try {
        pkm_deadtime_exp(0.2, 10.0, 1.0, 1, 3, strict);
        FAIL() << "expected accuracy_error";
    } catch (const accuracy_error &e) {
        EXPECT_GT(e.error_bound(), 1e-15);
        EXPECT_GT(e.estimate(), 0.0);
        EXPECT_LT(e.estimate(), 1.0);
    }
}

TEST(CondProb, TriangularAndNonNegativeEverywhere) {
    const std::vector<DetectorModel> models = {
        IdealPNR{},          LossyPNR{0.65},          OnOffArray{4, 0.8},
        DeadTimeMono{0.25, 0.9}, DeadTimeExp{0.2, 3.0, 0.85},
    };
    for (const auto &model : models) {
        for (int m = 0; m <= 8; ++m) {
            const int top = std::min(m + 3, max_counts(model, m));
            for (int k = 0; k <= top; ++k) {
                const double p = cond_prob(model, k, m);
                if (k > m) {
                    EXPECT_EQ(p, 0.0) << model_name(model) << " k=" << k << " m=" << m;
                } else {
                    EXPECT_GE(p, -1e-12) << model_name(model) << " k=" << k << " m=" << m;
                    EXPECT_LE(p, 1.0 + 1e-12);
                }
            }
        }
    }
}

TEST(CondProbTable, ColumnsAreNormalized) {
    const std::vector<DetectorModel> models = {
        LossyPNR{0.8},
        OnOffArray{4, 1.0},
        DeadTimeMono{0.25, 1.0},
        DeadTimeExp{0.2, 10.0, 1.0},
    };
    for (const auto &model : models) {
        const auto table = make_cond_prob_table(model, 8);
        for (int m = 0; m <= table.max_m; ++m) {
            double sum = 0.0;
            for (int k = 0; k <= table.max_k; ++k) sum += table.at(k, m);
            EXPECT_NEAR(sum, 1.0, 1e-5) << model_name(model) << " m=" << m;
        }
    }
}

TEST(McOracle, Deterministic) {
    const DetectorModel model = OnOffArray{4, 1.0};
    const auto a = pkm_mc_oracle(model, 2, 2, 10000, 77);
    const auto b = pkm_mc_oracle(model, 2, 2, 10000, 77);
    EXPECT_EQ(a.hits, b.hits);
    const auto sharded = pkm_mc_oracle(model, 2, 2, 10000, 77, 4);
    const auto sharded2 = pkm_mc_oracle(model, 2, 2, 10000, 77, 4);
    EXPECT_EQ(sharded.hits, sharded2.hits);
}

TEST(McOracle, MatchesAnalyticWithinFourSigma) {
    const long long trials = 1000000;
    struct Case {
        DetectorModel model;
        int k, m;
        double expected;
    };
    const std::vector<Case> cases = {
        {OnOffArray{4, 1.0}, 2, 2, 0.75},
        {OnOffArray{2, 0.8}, 1, 2, pkm_array(2, 0.8, 1, 2)},
        {DeadTimeMono{0.25, 1.0}, 2, 2, 0.5625},
        {DeadTimeMono{0.25, 0.8}, 1, 3, pkm_deadtime_mono(0.25, 0.8, 1, 3)},
        {DeadTimeExp{0.2, 10.0, 1.0}, 2, 2, 0.1352567796248722},
        {DeadTimeExp{0.2, 10.0, 1.0}, 1, 2, pkm_deadtime_exp(0.2, 10.0, 1.0, 1, 2)},
        {LossyPNR{0.6}, 1, 2, 0.48},
    };
    int index = 0;
    for (const auto &c : cases) {
        const auto mc = pkm_mc_oracle(c.model, c.k, c.m, trials, 9000 + index++, 4);
        EXPECT_NEAR(mc.estimate, c.expected, 4.0 * mc.std_error)
            << model_name(c.model) << " k=" << c.k << " m=" << c.m;
    }
}

TEST(DetectorModel, ParameterValidation) {
    EXPECT_THROW(validate_model(LossyPNR{1.2}), parameter_error);
    EXPECT_THROW(validate_model(OnOffArray{0, 0.5}), parameter_error);
    EXPECT_THROW(validate_model(DeadTimeMono{-0.1, 0.5}), parameter_error);
    EXPECT_THROW(validate_model(DeadTimeMono{1.5, 0.5}), parameter_error);
    EXPECT_THROW(validate_model(DeadTimeExp{0.2, 0.0, 0.5}), parameter_error);
    EXPECT_NO_THROW(validate_model(DeadTimeExp{0.0, 4.0, 1.0}));
}
