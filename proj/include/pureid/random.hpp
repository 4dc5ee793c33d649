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

#include <cmath>
#include <cstdint>
#include <random>

#include "pureid/tensor.hpp"

namespace pureid {

/// The library's random stream. Seeded explicitly; never from the clock.
using RandomStream = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

/// Independent stream for task `index` of a run seeded with `master`.
inline RandomStream derive_stream(std::uint64_t master, std::uint64_t index) {
    const std::uint64_t a = detail::splitmix64(master);
    const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return RandomStream(seq);
}

/// Unit vector of complex amplitudes.
template <typename Real = double>
class PureState {
public:
    PureState() = default;

    /// Normalizes `amplitudes`; throws on a zero vector.
    static PureState normalized(Vector<Real> amplitudes) {
        const Real n = amplitudes.norm();
        if (!(n > Real(0))) {
            throw Error("cannot normalize a zero vector");
        }
        amplitudes /= n;
        return PureState(std::move(amplitudes));
    }

    Index dim() const { return amplitudes_.size(); }
    const Vector<Real>& amplitudes() const { return amplitudes_; }

    friend PureState kron(const PureState& x, const PureState& y) {
        return PureState(kron_vec(x.amplitudes_, y.amplitudes_));
    }

private:
    explicit PureState(Vector<Real> amplitudes) : amplitudes_(std::move(amplitudes)) {}

    Vector<Real> amplitudes_;
};

/// Uniformly distributed unit vector in C^d: 2d standard normals, normalized.
template <typename Real = double, typename Urbg>
PureState<Real> haar_random_state(int d, Urbg& rng) {
    if (d < 1) {
        throw DimensionMismatch("haar_random_state needs d >= 1");
    }
    std::normal_distribution<Real> normal(0, 1);
    Vector<Real> v(d);
    for (int i = 0; i < d; ++i) {
        const Real re = normal(rng);
        const Real im = normal(rng);
        v(i) = std::complex<Real>(re, im);
    }
    // probability zero, but keep the sampler total
    while (v.norm() == Real(0)) {
        for (int i = 0; i < d; ++i) {
            const Real re = normal(rng);
            const Real im = normal(rng);
            v(i) = std::complex<Real>(re, im);
        }
    }
    return PureState<Real>::normalized(std::move(v));
}

} // namespace pureid
