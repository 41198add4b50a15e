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

#include <complex>
#include <initializer_list>
#include <vector>

#include "bosonkit/errors.hpp"

namespace bosonkit {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw shape_error("negative matrix extent");
    }

    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
        ComplexMatrix m(static_cast<int>(rows.size()),
                        rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
        int r = 0;
        for (const auto &row : rows) {
            if (static_cast<int>(row.size()) != m.cols_)
                throw shape_error("ragged rows in matrix literal");
            int c = 0;
            for (const Complex &v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(int r, int c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
    const Complex &operator()(int r, int c) const {
        return entries_[static_cast<size_t>(r) * cols_ + c];
    }

    const std::vector<Complex> &entries() const { return entries_; }
    std::vector<Complex> &entries() { return entries_; }

    bool operator==(const ComplexMatrix &other) const = default;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> entries_;
};

/// max_ij |(A^dagger A - I)_ij|
inline double unitarity_residual(const ComplexMatrix &m) {
    if (!m.is_square()) throw shape_error("unitarity residual requires a square matrix");
    const int n = m.rows();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex dot = 0.0;
            for (int k = 0; k < n; ++k) dot += std::conj(m(k, i)) * m(k, j);
            if (i == j) dot -= 1.0;
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

}  // namespace bosonkit
