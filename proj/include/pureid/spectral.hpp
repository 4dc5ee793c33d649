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
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pureid/tensor.hpp"

namespace pureid {

/// An eigenvalue counts as positive iff it exceeds this.
inline constexpr double kPositiveEigenTolerance = 1e-9;

template <typename Real>
struct SpectralDecomposition {
    RealVector<Real> eigenvalues;  ///< ascending
    Matrix<Real> eigenvectors;     ///< orthonormal columns, same order as eigenvalues

    Index size() const { return eigenvalues.size(); }

    Matrix<Real> reconstruct() const {
        return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
               eigenvectors.adjoint();
    }
};

struct JacobiOptions {
    double hermitian_tolerance = 1e-10;
    /// Sweeps stop once the off-diagonal Frobenius norm drops below this fraction of ||H||_F.
    double off_tolerance = 1e-12;
    int max_sweeps = 100;
};

namespace detail {

/// Cyclic Jacobi on a dense Hermitian block. On return `a` is diagonal and a = v diag v^dagger
/// for the input a.
template <typename Real>
void jacobi_sweeps(Matrix<Real>& a, Matrix<Real>& v, const JacobiOptions& opts) {
    using C = std::complex<Real>;
    const Index n = a.rows();
    v = Matrix<Real>::Identity(n, n);
    const Real norm = a.norm();
    if (n < 2 || norm == Real(0)) {
        return;
    }
    const Real target = static_cast<Real>(opts.off_tolerance) * norm;

    auto off_norm = [&] {
        Real acc = 0;
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) {
                if (i != j) {
                    acc += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(acc);
    };

    for (int sweep = 0;; ++sweep) {
        if (off_norm() <= target) {
            return;
        }
        if (sweep == opts.max_sweeps) {
            throw NoConvergence("Jacobi eigensolver did not converge within " +
                                std::to_string(opts.max_sweeps) + " sweeps (n = " +
                                std::to_string(n) + ")");
        }
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const C apq = a(p, q);
                const Real mag = std::abs(apq);
                if (mag == Real(0)) {
                    continue;
                }
                const Real app = a(p, p).real();
                const Real aqq = a(q, q).real();
                const Real theta = (aqq - app) / (2 * mag);
                Real t = 1 / (std::abs(theta) + std::sqrt(theta * theta + 1));
                if (theta < 0) {
                    t = -t;
                }
                const Real c = 1 / std::sqrt(1 + t * t);
                const Real s = t * c;
                const C phase = apq / mag;
                const C phase_bar = std::conj(phase);

                // columns: A <- A G with G = [[c, s], [-s conj(u), c conj(u)]]
                const Vector<Real> colp = a.col(p);
                a.col(p) = c * colp - (s * phase_bar) * a.col(q);
                a.col(q) = s * colp + (c * phase_bar) * a.col(q);
                // rows: A <- G^dagger A
                const Eigen::Matrix<C, 1, Eigen::Dynamic> rowp = a.row(p);
                a.row(p) = c * rowp - (s * phase) * a.row(q);
                a.row(q) = s * rowp + (c * phase) * a.row(q);

                a(p, q) = C(0);
                a(q, p) = C(0);
                a(p, p) = C(a(p, p).real());
                a(q, q) = C(a(q, q).real());

                const Vector<Real> vp = v.col(p);
                v.col(p) = c * vp - (s * phase_bar) * v.col(q);
                v.col(q) = s * vp + (c * phase_bar) * v.col(q);
            }
        }
    }
}

/// Connected components of the coupling graph |h_ij| > threshold.
template <typename Real>
std::vector<std::vector<Index>> coupled_blocks(const Matrix<Real>& h, Real threshold) {
    const Index n = h.rows();
    std::vector<Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            if (std::abs(h(i, j)) > threshold) {
                const Index ri = find(i);
                const Index rj = find(j);
                if (ri != rj) {
                    parent[std::max(ri, rj)] = std::min(ri, rj);
                }
            }
        }
    }
    std::vector<std::vector<Index>> blocks;
    std::vector<Index> slot(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        const Index r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<Index>(blocks.size());
            blocks.emplace_back();
        }
        blocks[slot[r]].push_back(i);
    }
    return blocks;
}

} // namespace detail

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The matrix is first split into the connected components of its coupling graph (entries
/// below machine epsilon times the largest entry count as zero); each component is
/// diagonalized independently. Permutation-invariant operators on tensor powers are
/// block-diagonal in the occupation-number basis, so this keeps the cost per block small.
template <typename Derived>
SpectralDecomposition<typename Derived::RealScalar>
hermitian_eig(const Eigen::MatrixBase<Derived>& h, const JacobiOptions& opts = {}) {
    using Real = typename Derived::RealScalar;
    if (h.rows() != h.cols()) {
        throw DimensionMismatch("hermitian_eig needs a square matrix");
    }
    const Real defect = hermiticity_defect(h);
    if (!(defect <= static_cast<Real>(opts.hermitian_tolerance))) {
        throw NotHermitian("matrix deviates from its adjoint by " + std::to_string(defect));
    }
    const Index n = h.rows();
    const Matrix<Real> sym = (h + h.adjoint()) / Real(2);
    const Real threshold = std::numeric_limits<Real>::epsilon() * max_abs(sym);

    RealVector<Real> values(n);
    Matrix<Real> vectors = Matrix<Real>::Zero(n, n);
    Index next = 0;
    for (const auto& block : detail::coupled_blocks<Real>(sym, threshold)) {
        const auto m = static_cast<Index>(block.size());
        Matrix<Real> a(m, m);
        for (Index j = 0; j < m; ++j) {
            for (Index i = 0; i < m; ++i) {
                a(i, j) = sym(block[i], block[j]);
            }
        }
        Matrix<Real> v;
        detail::jacobi_sweeps(a, v, opts);
        for (Index k = 0; k < m; ++k, ++next) {
            values(next) = a(k, k).real();
            for (Index i = 0; i < m; ++i) {
                vectors(block[i], next) = v(i, k);
            }
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return values(x) < values(y); });
    SpectralDecomposition<Real> out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = values(order[k]);
        out.eigenvectors.col(k) = vectors.col(order[k]);
    }
    return out;
}

enum class EigenSign { positive, negative, nonnegative, nonpositive };

inline bool sign_selects(EigenSign sign, double lambda, double tol) {
    switch (sign) {
    case EigenSign::positive:
        return lambda > tol;
    case EigenSign::negative:
        return lambda < -tol;
    case EigenSign::nonnegative:
        return lambda >= -tol;
    case EigenSign::nonpositive:
        return lambda <= tol;
    }
    return false;
}

/// Orthogonal projector onto the span of eigenvectors whose eigenvalue satisfies `select`.
template <typename Real, typename Predicate>
Matrix<Real> spectral_projector(const SpectralDecomposition<Real>& s, Predicate&& select) {
    std::vector<Index> chosen;
    for (Index k = 0; k < s.size(); ++k) {
        if (select(s.eigenvalues(k))) {
            chosen.push_back(k);
        }
    }
    const Index n = s.eigenvectors.rows();
    if (chosen.empty()) {
        return Matrix<Real>::Zero(n, n);
    }
    Matrix<Real> basis(n, static_cast<Index>(chosen.size()));
    for (Index k = 0; k < basis.cols(); ++k) {
        basis.col(k) = s.eigenvectors.col(chosen[k]);
    }
    return basis * basis.adjoint();
}

template <typename Real>
Matrix<Real> projector_onto_eigenspace(const SpectralDecomposition<Real>& s, EigenSign sign,
                                       double tol = kPositiveEigenTolerance) {
    if (!(tol > 0)) {
        throw Error("eigenspace tolerance must be positive");
    }
    return spectral_projector(s, [&](Real lambda) {
        return sign_selects(sign, static_cast<double>(lambda), tol);
    });
}

template <typename Real>
Index count_eigenvalues(const SpectralDecomposition<Real>& s, EigenSign sign,
                        double tol = kPositiveEigenTolerance) {
    Index count = 0;
    for (Index k = 0; k < s.size(); ++k) {
        count += sign_selects(sign, static_cast<double>(s.eigenvalues(k)), tol) ? 1 : 0;
    }
    return count;
}

/// Orthonormal basis (as columns) of the range of an orthogonal projector.
template <typename Real>
Matrix<Real> range_basis(const Matrix<Real>& projector) {
    const auto s = hermitian_eig(projector);
    std::vector<Index> chosen;
    for (Index k = 0; k < s.size(); ++k) {
        if (s.eigenvalues(k) > Real(0.5)) {
            chosen.push_back(k);
        }
    }
    Matrix<Real> basis(projector.rows(), static_cast<Index>(chosen.size()));
    for (Index k = 0; k < basis.cols(); ++k) {
        basis.col(k) = s.eigenvectors.col(chosen[k]);
    }
    return basis;
}

} // namespace pureid
