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

#include <cstdint>

#include "pureid/random.hpp"
#include "pureid/spectral.hpp"
#include "pureid/symmetry.hpp"
#include "pureid/tensor.hpp"

namespace pureid {

/// A priori probabilities of the two reference states.
class PriorPair {
public:
    /// Throws InvalidPriors unless both are non-negative and sum to one within 1e-12.
    PriorPair(double eta1, double eta2);

    static PriorPair from_eta1(double eta1);

    double eta1() const { return eta1_; }
    double eta2() const { return eta2_; }
    double difference() const { return eta1_ - eta2_; }
    PriorPair swapped() const { return PriorPair(eta2_, eta1_); }

private:
    double eta1_;
    double eta2_;
};

struct PovmPair {
    ComplexMatrix E1;
    ComplexMatrix E2;
};

struct PovmCheck {
    double completeness_residual = 0;  ///< ||E1 + E2 - 1||_max
    double min_eigenvalue = 0;          ///< over both elements
    double max_eigenvalue = 0;
    bool valid = false;
};

/// Completeness within 1e-10 and every eigenvalue of E1, E2 inside [-1e-9, 1 + 1e-9].
PovmCheck check_povm_pair(const PovmPair& povm);

struct LambdaPair {
    double plus;
    double minus;
};

/// Eigenvalues of Delta on the mixed-symmetry sector: (eta1 - eta2 +- sqrt(1 - eta1 eta2)) / 2.
LambdaPair lambda_pm(const PriorPair& priors);

/// Ascending multiset {eta1 - eta2 (x dimS), 0 (x dimA), lambda_+- (x dimM/2 each)}.
RealVector<double> expected_delta_spectrum(int d, const PriorPair& priors);

/// eta1 S(01) - eta2 S(02) on (C^d)^{(x)3}.
ComplexMatrix delta_operator(int d, const PriorPair& priors);

/// d_1 d_2 = d * d(d+1)/2, the normalization of the averaged success probability.
double success_normalization(int d);

double p_max_closed_form(int d, const PriorPair& priors);

/// eta2 + tr[E1 Delta] / (d_1 d_2). Throws InvalidPovmElement if E1 leaves [0, 1].
double mean_success_probability(const ComplexMatrix& e1, int d, const PriorPair& priors);

/// Same as above with a precomputed Delta, skipping the spectrum check.
double mean_success_probability_unchecked(const ComplexMatrix& e1, const ComplexMatrix& delta,
                                          int d, const PriorPair& priors);

struct GlobalSolution {
    PriorPair priors;
    int d;
    ComplexMatrix delta;
    SpectralDecomposition<double> spectrum;
    double lambda_plus;
    double lambda_minus;
    PovmPair povm;
    Index rank_e1;
    double p_max_spectral;
    double p_max_closed;
};

/// E1 = projector onto the strictly positive eigenspace of Delta, E2 = 1 - E1.
GlobalSolution optimal_global_povm(int d, const PriorPair& priors);

/// ||(1/samples) sum_k rho_k^{(x)n} - S_n / d_n||_max for Haar-random rho_k.
double haar_average_check(int n, int d, std::int64_t samples, RandomStream& rng);

} // namespace pureid
