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
#include <bit>
#include <cstdint>
#include <numeric>

#include "bosonkit/math.hpp"
#include "bosonkit/matrix.hpp"
#include "bosonkit/pattern.hpp"

namespace bosonkit {

/// Row/column multiplicities used to build the expanded submatrix.
using Multiplicities = Pattern;

/// Permanent by Ryser's formula with Gray-code subset iteration, O(2^d d).
///
///   Perm A = (-1)^d sum_{S != {}} (-1)^|S| prod_r sum_{c in S} A[r][c]
///
/// Each Gray step toggles one column in the running row sums.
/// The 0x0 permanent is 1 (empty product).
inline Complex permanent(const ComplexMatrix &m, int dimension_cap = kDefaultSizeCap) {
    if (!m.is_square())
        throw shape_error("permanent requires a square matrix, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
    const int d = m.rows();
    if (d > dimension_cap)
        throw size_error("permanent dimension " + std::to_string(d) + " exceeds cap " +
                         std::to_string(dimension_cap));
    if (d == 0) return Complex(1.0, 0.0);

    std::vector<Complex> row_sums(d, Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    uint64_t previous_gray = 0;
    const uint64_t subsets = uint64_t{1} << d;
    for (uint64_t s = 1; s < subsets; ++s) {
        const uint64_t gray = s ^ (s >> 1);
        const uint64_t changed = gray ^ previous_gray;
        const int column = std::countr_zero(changed);
        if (gray & changed) {
            for (int r = 0; r < d; ++r) row_sums[r] += m(r, column);
        } else {
            for (int r = 0; r < d; ++r) row_sums[r] -= m(r, column);
        }
        previous_gray = gray;

        Complex product(1.0, 0.0);
        for (int r = 0; r < d; ++r) product *= row_sums[r];
        if ((d - std::popcount(gray)) & 1) {
            total -= product;
        } else {
            total += product;
        }
    }
    return total;
}

/// Independent oracle: explicit sum over all column permutations.
/// Factorial time, so the dimension is capped at 9.
inline Complex permanent_naive(const ComplexMatrix &m) {
    if (!m.is_square()) throw shape_error("permanent_naive requires a square matrix");
    const int d = m.rows();
    if (d > 9) throw size_error("permanent_naive capped at dimension 9, got " + std::to_string(d));
    if (d == 0) return Complex(1.0, 0.0);

    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    Complex total(0.0, 0.0);
    do {
        Complex product(1.0, 0.0);
        for (int r = 0; r < d; ++r) product *= m(r, perm[r]);
        total += product;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Matrix whose row (column) indices repeat each mode index with the given
/// multiplicity, ascending. Row r of the result is row i(r) of the source.
inline ComplexMatrix expanded_submatrix(const ComplexMatrix &m, const Multiplicities &row_mult,
                                        const Multiplicities &col_mult) {
    if (row_mult.size() != m.rows() || col_mult.size() != m.cols())
        throw shape_error("multiplicity length does not match matrix extent");
    if (!row_mult.all_nonnegative() || !col_mult.all_nonnegative())
        throw shape_error("multiplicities must be nonnegative");
    const int total = row_mult.total();
    if (total != col_mult.total())
        throw shape_error("row and column multiplicities must have equal totals (" +
                          std::to_string(total) + " vs " + std::to_string(col_mult.total()) + ")");

    std::vector<int> row_index, col_index;
    row_index.reserve(total);
    col_index.reserve(total);
    for (int i = 0; i < row_mult.size(); ++i)
        for (int copy = 0; copy < row_mult[i]; ++copy) row_index.push_back(i);
    for (int j = 0; j < col_mult.size(); ++j)
        for (int copy = 0; copy < col_mult[j]; ++copy) col_index.push_back(j);

    ComplexMatrix out(total, total);
    for (int r = 0; r < total; ++r)
        for (int c = 0; c < total; ++c) out(r, c) = m(row_index[r], col_index[c]);
    return out;
}

}  // namespace bosonkit
