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

#include <complex>
#include <random>

#include "pureid/random.hpp"
#include "pureid/tensor.hpp"

namespace pureid::testing {

inline ComplexMatrix random_complex(Index rows, Index cols, RandomStream& rng) {
    std::normal_distribution<double> normal(0, 1);
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = {re, im};
        }
    }
    return m;
}

inline ComplexMatrix random_hermitian(Index n, RandomStream& rng) {
    const ComplexMatrix g = random_complex(n, n, rng);
    return (g + g.adjoint()) / 2.0;
}

/// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal divided out.
inline ComplexMatrix random_unitary(Index n, RandomStream& rng) {
    const ComplexMatrix g = random_complex(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < n; ++k) {
        q.col(k) *= r(k, k) / std::abs(r(k, k));
    }
    return q;
}

} // namespace pureid::testing
