// Copyright 2026 The pureid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pureid/tensor.hpp"

namespace pureid {

/// Dimension of the totally symmetric subspace of (C^d)^{(x)n}: binomial(n+d-1, d-1).
inline std::int64_t symmetrizer_dim(int n, int d) {
    if (n < 1 || d < 1) {
        throw DimensionMismatch("symmetrizer_dim needs n >= 1 and d >= 1");
    }
    // binomial(n+d-1, n), exact at every step
    std::int64_t acc = 1;
    for (int k = 1; k <= n; ++k) {
        acc = acc * (d - 1 + k) / k;
    }
    return acc;
}

inline std::int64_t dim_symmetric(std::int64_t d) { return d * (d + 1) * (d + 2) / 6; }
inline std::int64_t dim_antisymmetric(std::int64_t d) { return d * (d - 1) * (d - 2) / 6; }
inline std::int64_t dim_mixed(std::int64_t d) { return 2 * d * (d * d - 1) / 3; }

/// All permutations of {0..n-1} in lexicographic order, paired with their signs.
inline std::vector<std::pair<Permutation, int>> signed_permutations(int n) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::pair<Permutation, int>> out;
    do {
        out.emplace_back(p, permutation_sign(p));
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Projector onto the totally symmetric subspace of (C^d)^{(x)n}.
template <typename Real = double>
Matrix<Real> symmetric_projector(int n, int d) {
    const auto perms = signed_permutations(n);
    const Index dim = static_cast<Index>(std::pow(d, n));
    Matrix<Real> s = Matrix<Real>::Zero(dim, dim);
    for (const auto& [perm, sign] : perms) {
        s += permutation_operator<Real>(d, n, perm);
    }
    return s / static_cast<Real>(perms.size());
}

namespace detail {
inline std::int64_t dimension_from_trace(double trace, double tolerance, const char* what) {
    const double rounded = std::round(trace);
    if (std::abs(trace - rounded) > tolerance) {
        throw Error(std::string("trace of ") + what + " is not an integer: " +
                    std::to_string(trace));
    }
    return static_cast<std::int64_t>(rounded);
}
} // namespace detail

/// Symmetric, antisymmetric and mixed-symmetry projectors on (C^d)^{(x)3}.
template <typename Real = double>
struct SymmetrySectors {
    int d = 1;
    Matrix<Real> S3;
    Matrix<Real> A3;
    Matrix<Real> M3;
    std::int64_t dimS = 0;
    std::int64_t dimA = 0;
    std::int64_t dimM = 0;
};

template <typename Real = double>
SymmetrySectors<Real> build_sectors(int d) {
    if (d < 1) {
        throw DimensionMismatch("build_sectors needs d >= 1");
    }
    SymmetrySectors<Real> out;
    out.d = d;
    const Index dim = static_cast<Index>(d) * d * d;
    out.S3 = Matrix<Real>::Zero(dim, dim);
    out.A3 = Matrix<Real>::Zero(dim, dim);
    for (const auto& [perm, sign] : signed_permutations(3)) {
        const Matrix<Real> op = permutation_operator<Real>(d, 3, perm);
        out.S3 += op;
        out.A3 += static_cast<Real>(sign) * op;
    }
    out.S3 /= Real(6);
    out.A3 /= Real(6);
    // complement rather than a Young symmetrizer
    out.M3 = Matrix<Real>::Identity(dim, dim) - out.S3 - out.A3;

    const double tol =
        std::max(1e-6, 64.0 * static_cast<double>(std::numeric_limits<Real>::epsilon()) * dim);
    out.dimS = detail::dimension_from_trace(static_cast<double>(out.S3.trace().real()), tol, "S3");
    out.dimA = detail::dimension_from_trace(static_cast<double>(out.A3.trace().real()), tol, "A3");
    out.dimM = detail::dimension_from_trace(static_cast<double>(out.M3.trace().real()), tol, "M3");
    return out;
}

/// Projectors (1 + T(01))/2 and (1 + T(02))/2 on the triple space.
template <typename Real = double>
struct PairSymmetrizer {
    int d = 1;
    Matrix<Real> S01;
    Matrix<Real> S02;
};

template <typename Real = double>
PairSymmetrizer<Real> build_pair_symmetrizers(int d) {
    const Index dim = static_cast<Index>(d) * d * d;
    const Matrix<Real> id = Matrix<Real>::Identity(dim, dim);
    return {d, (id + transposition<Real>(d, 3, 0, 1)) / Real(2),
            (id + transposition<Real>(d, 3, 0, 2)) / Real(2)};
}

/// D = (T(01) - T(02))/2 and A = (T(01) + T(02))/2.
template <typename Real = double>
struct DAOperators {
    Matrix<Real> D;
    Matrix<Real> A;
};

template <typename Real = double>
DAOperators<Real> build_D_A(int d) {
    if (d < 1) {
        throw DimensionMismatch("build_D_A needs d >= 1");
    }
    const Matrix<Real> t01 = transposition<Real>(d, 3, 0, 1);
    const Matrix<Real> t02 = transposition<Real>(d, 3, 0, 2);
    return {(t01 - t02) / Real(2), (t01 + t02) / Real(2)};
}

} // namespace pureid
