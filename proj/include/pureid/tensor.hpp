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
#include <array>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pureid/errors.hpp"

namespace pureid {

template <typename Real>
using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using Vector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<double>;
using ComplexVector = Vector<double>;

using Index = Eigen::Index;

/// A permutation of {0..n-1}; entry j is the image of j.
using Permutation = std::vector<int>;

/// Largest absolute entry, the norm used for all tolerance checks.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) {
        return 0;
    }
    return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
    return max_abs(m - m.adjoint());
}

template <typename Real>
Matrix<Real> identity(Index n) {
    return Matrix<Real>::Identity(n, n);
}

/// Kronecker product with (A (x) B)[i*n+k, j*n+l] = A[i,j] * B[k,l].
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Result = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Index br = b.rows();
    const Index bc = b.cols();
    Result out(a.rows() * br, a.cols() * bc);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
        }
    }
    return out;
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1>
kron_vec(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Throws InvalidPermutation unless perm is a bijection on {0..n-1}.
inline void check_permutation(std::span<const int> perm) {
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= perm.size() || seen[p]) {
            throw InvalidPermutation("not a bijection on {0.." + std::to_string(perm.size()) +
                                     "-1}");
        }
        seen[p] = true;
    }
}

inline Permutation inverse(std::span<const int> perm) {
    check_permutation(perm);
    Permutation inv(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
        inv[perm[j]] = static_cast<int>(j);
    }
    return inv;
}

/// (p o q)(j) = p(q(j)).
inline Permutation compose(std::span<const int> p, std::span<const int> q) {
    if (p.size() != q.size()) {
        throw InvalidPermutation("composing permutations of different size");
    }
    Permutation r(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        r[j] = p[q[j]];
    }
    return r;
}

inline int permutation_sign(std::span<const int> perm) {
    check_permutation(perm);
    int sign = 1;
    std::vector<bool> visited(perm.size(), false);
    for (std::size_t start = 0; start < perm.size(); ++start) {
        if (visited[start]) {
            continue;
        }
        std::size_t len = 0;
        for (std::size_t j = start; !visited[j]; j = perm[j]) {
            visited[j] = true;
            ++len;
        }
        if (len % 2 == 0) {
            sign = -sign;
        }
    }
    return sign;
}

/// Mixed-radix strides for a factor list, most significant factor first.
inline std::vector<Index> strides_of(std::span<const int> dims) {
    std::vector<Index> s(dims.size());
    Index acc = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
        s[k] = acc;
        acc *= dims[k];
    }
    return s;
}

inline Index product_of(std::span<const int> dims) {
    Index acc = 1;
    for (int d : dims) {
        acc *= d;
    }
    return acc;
}

/// Basis relabelling induced by moving input factor j to output position perm[j].
/// Entry i is the output index of input basis vector i.
inline std::vector<Index> factor_index_map(std::span<const int> dims, std::span<const int> perm) {
    if (dims.size() != perm.size()) {
        throw InvalidPermutation("permutation length differs from factor count");
    }
    check_permutation(perm);
    for (int d : dims) {
        if (d < 1) {
            throw DimensionMismatch("factor dimensions must be positive");
        }
    }
    std::vector<int> out_dims(dims.size());
    for (std::size_t j = 0; j < dims.size(); ++j) {
        out_dims[perm[j]] = dims[j];
    }
    const auto out_strides = strides_of(out_dims);
    const Index total = product_of(dims);

    std::vector<Index> map(static_cast<std::size_t>(total));
    std::vector<int> digits(dims.size(), 0);
    for (Index i = 0; i < total; ++i) {
        Index out = 0;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            out += digits[j] * out_strides[perm[j]];
        }
        map[static_cast<std::size_t>(i)] = out;
        // odometer increment, last factor fastest
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (++digits[k] < dims[k]) {
                break;
            }
            digits[k] = 0;
        }
    }
    return map;
}

/// Unitary 0/1 matrix moving factor j of a tensor product to position perm[j].
template <typename Real = double>
Matrix<Real> permute_factors(std::span<const int> dims, std::span<const int> perm) {
    const auto map = factor_index_map(dims, perm);
    const auto n = static_cast<Index>(map.size());
    Matrix<Real> w = Matrix<Real>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        w(map[static_cast<std::size_t>(i)], i) = Real(1);
    }
    return w;
}

/// Operator on (C^d)^{(x)n} sending |i_0 ... i_{n-1}> to |i_{perm^-1(0)} ... i_{perm^-1(n-1)}>.
template <typename Real = double>
Matrix<Real> permutation_operator(int d, int n, std::span<const int> perm) {
    if (d < 1 || n < 1) {
        throw DimensionMismatch("permutation_operator needs d >= 1 and n >= 1");
    }
    if (perm.size() != static_cast<std::size_t>(n)) {
        throw InvalidPermutation("permutation length " + std::to_string(perm.size()) +
                                 " differs from n = " + std::to_string(n));
    }
    const std::vector<int> dims(static_cast<std::size_t>(n), d);
    return permute_factors<Real>(dims, perm);
}

template <typename Real = double>
Matrix<Real> transposition(int d, int n, int first, int second) {
    Permutation perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm.at(first), perm.at(second));
    return permutation_operator<Real>(d, n, perm);
}

/// W M W^dagger for the permutation matrix W described by `map`, without multiplying.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
conjugate_by_index_map(const Eigen::MatrixBase<Derived>& m, std::span<const Index> map) {
    const Index n = m.rows();
    if (m.cols() != n || static_cast<Index>(map.size()) != n) {
        throw DimensionMismatch("index map does not match operator dimension");
    }
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            out(map[i], map[j]) = m(i, j);
        }
    }
    return out;
}

/// Partial trace over every factor not listed in `keep`; kept factors stay in ascending order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
partial_trace(const Eigen::MatrixBase<Derived>& m, std::span<const int> dims,
              std::span<const int> keep) {
    using Result = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Index total = product_of(dims);
    if (m.rows() != total || m.cols() != total) {
        throw DimensionMismatch("operator dimension " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + " does not match factor product " +
                                std::to_string(total));
    }
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || static_cast<std::size_t>(k) >= dims.size() || kept[k]) {
            throw DimensionMismatch("invalid kept factor " + std::to_string(k));
        }
        kept[k] = true;
    }
    const auto strides = strides_of(dims);

    // offsets[g] lists the flat-index contribution of every digit pattern of factor group g
    auto offsets_for = [&](bool want_kept) {
        std::vector<Index> offs{0};
        for (std::size_t f = 0; f < dims.size(); ++f) {
            if (kept[f] != want_kept) {
                continue;
            }
            std::vector<Index> next;
            next.reserve(offs.size() * dims[f]);
            for (Index o : offs) {
                for (int digit = 0; digit < dims[f]; ++digit) {
                    next.push_back(o + digit * strides[f]);
                }
            }
            offs = std::move(next);
        }
        return offs;
    };
    const auto kept_offsets = offsets_for(true);
    const auto traced_offsets = offsets_for(false);

    const auto nk = static_cast<Index>(kept_offsets.size());
    Result out = Result::Zero(nk, nk);
    for (Index c = 0; c < nk; ++c) {
        for (Index r = 0; r < nk; ++r) {
            typename Derived::Scalar acc(0);
            for (Index t : traced_offsets) {
                acc += m(kept_offsets[r] + t, kept_offsets[c] + t);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

/// Local dimensions of one system shared by two parties; three systems in total.
///
/// The joint space is ordered (0a, 0b, 1a, 1b, 2a, 2b), most significant factor first.
struct HilbertLayout {
    int d_a = 1;
    int d_b = 1;

    HilbertLayout() = default;
    HilbertLayout(int da, int db) : d_a(da), d_b(db) {
        if (da < 1 || db < 1) {
            throw DimensionMismatch("local dimensions must be positive");
        }
    }

    int d() const { return d_a * d_b; }
    Index joint_dim() const { return static_cast<Index>(d()) * d() * d(); }
    Index alice_dim() const { return static_cast<Index>(d_a) * d_a * d_a; }
    Index bob_dim() const { return static_cast<Index>(d_b) * d_b * d_b; }
    std::array<int, 6> factor_dims() const { return {d_a, d_b, d_a, d_b, d_a, d_b}; }

    friend bool operator==(const HilbertLayout&, const HilbertLayout&) = default;
};

/// Partial trace on the six-factor joint space; `keep` indexes (0a, 0b, 1a, 1b, 2a, 2b).
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const HilbertLayout& layout,
                   std::span<const int> keep) {
    const auto dims = layout.factor_dims();
    return partial_trace(m, std::span<const int>(dims), keep);
}

} // namespace pureid
