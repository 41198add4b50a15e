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

#include <Eigen/Dense>
#include <cmath>

#include "bosonkit/matrix.hpp"
#include "bosonkit/rng.hpp"

namespace bosonkit {

inline constexpr double kDefaultUnitarityTol = 1e-10;

/// Interferometer transform. Construction checks max |(U^dagger U - I)_ij|
/// against the tolerance, so holding a UnitaryMatrix implies unitarity.
class UnitaryMatrix {
  public:
    static UnitaryMatrix checked(ComplexMatrix m, double tol = kDefaultUnitarityTol) {
        if (!m.is_square()) throw shape_error("unitary matrix must be square");
        const double residual = unitarity_residual(m);
        if (!(residual <= tol))
            throw unitarity_error("matrix is not unitary: residual " + std::to_string(residual) +
                                      " exceeds tolerance " + std::to_string(tol),
                                  residual);
        return UnitaryMatrix(std::move(m));
    }

    int dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }
    Complex operator()(int r, int c) const { return matrix_(r, c); }

    bool operator==(const UnitaryMatrix &other) const = default;

  private:
    explicit UnitaryMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

/// Validates an arbitrary square matrix as unitary at the given tolerance.
inline UnitaryMatrix validate_unitary(ComplexMatrix m, double tol = kDefaultUnitarityTol) {
    return UnitaryMatrix::checked(std::move(m), tol);
}

/// Two-mode coupler [[t, r e^{i phi}], [-r e^{-i phi}, t]] with r = sqrt(1 - t^2).
/// t = 1/sqrt(2) is the balanced splitter.
inline UnitaryMatrix beam_splitter(double transmittance_amplitude, double phase = 0.0) {
    const double t = transmittance_amplitude;
    if (!(t >= 0.0 && t <= 1.0))
        throw parameter_error("beam splitter transmittance amplitude must lie in [0, 1]");
    const double r = std::sqrt(1.0 - t * t);
    const Complex up = std::polar(r, phase);
    const Complex down = -std::polar(r, -phase);
    return UnitaryMatrix::checked(ComplexMatrix::from_rows({{t, up}, {down, t}}));
}

/// Discrete Fourier transform network: entries exp(2 pi i jk / n) / sqrt(n).
inline UnitaryMatrix dft_unitary(int n) {
    if (n < 1) throw parameter_error("dft_unitary requires n >= 1");
    ComplexMatrix m(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            m(j, k) = std::polar(norm, 2.0 * M_PI * ((static_cast<long long>(j) * k) % n) / n);
    return UnitaryMatrix::checked(m);
}

/// Haar-random unitary: QR of a complex Gaussian matrix, with each column of Q
/// rescaled by the phase of the matching diagonal of R. Without that phase fix
/// the QR output is not Haar distributed. Deterministic for a fixed seed.
inline UnitaryMatrix haar_random_unitary(int n, uint64_t seed) {
    if (n < 1) throw parameter_error("haar_random_unitary requires n >= 1");
    SplitMix64 rng(seed);
    Eigen::MatrixXcd gaussian(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) gaussian(r, c) = Complex(rng.normal(), rng.normal());

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gaussian);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
        const Complex diag = r_factor(c, c);
        const double mag = std::abs(diag);
        q.col(c) *= (mag > 0.0 ? diag / mag : Complex(1.0, 0.0));
    }

    ComplexMatrix out(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out(r, c) = q(r, c);
    return UnitaryMatrix::checked(std::move(out));
}

}  // namespace bosonkit
