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

#include "pureid/global.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace pureid {

PriorPair::PriorPair(double eta1, double eta2) : eta1_(eta1), eta2_(eta2) {
    if (!(eta1 >= 0) || !(eta2 >= 0) || !(std::abs(eta1 + eta2 - 1) <= 1e-12)) {
        throw InvalidPriors("priors must be non-negative and sum to 1 (got " +
                            std::to_string(eta1) + ", " + std::to_string(eta2) + ")");
    }
}

PriorPair PriorPair::from_eta1(double eta1) {
    if (!(eta1 >= 0 && eta1 <= 1)) {
        throw InvalidPriors("eta1 must lie in [0, 1] (got " + std::to_string(eta1) + ")");
    }
    return PriorPair(eta1, 1 - eta1);
}

PovmCheck check_povm_pair(const PovmPair& povm) {
    PovmCheck out;
    const Index n = povm.E1.rows();
    if (povm.E2.rows() != n || povm.E1.cols() != n || povm.E2.cols() != n) {
        throw DimensionMismatch("POVM elements have different dimensions");
    }
    out.completeness_residual = max_abs(povm.E1 + povm.E2 - ComplexMatrix::Identity(n, n));
    const auto s1 = hermitian_eig(povm.E1);
    const auto s2 = hermitian_eig(povm.E2);
    out.min_eigenvalue = std::min(s1.eigenvalues.minCoeff(), s2.eigenvalues.minCoeff());
    out.max_eigenvalue = std::max(s1.eigenvalues.maxCoeff(), s2.eigenvalues.maxCoeff());
    out.valid = out.completeness_residual <= 1e-10 && out.min_eigenvalue >= -1e-9 &&
                out.max_eigenvalue <= 1 + 1e-9;
    return out;
}

LambdaPair lambda_pm(const PriorPair& priors) {
    const double root = std::sqrt(1 - priors.eta1() * priors.eta2());
    const double diff = priors.difference();
    return {(diff + root) / 2, (diff - root) / 2};
}

RealVector<double> expected_delta_spectrum(int d, const PriorPair& priors) {
    const auto lambdas = lambda_pm(priors);
    std::vector<double> values;
    values.insert(values.end(), static_cast<std::size_t>(dim_symmetric(d)), priors.difference());
    values.insert(values.end(), static_cast<std::size_t>(dim_antisymmetric(d)), 0.0);
    values.insert(values.end(), static_cast<std::size_t>(dim_mixed(d) / 2), lambdas.plus);
    values.insert(values.end(), static_cast<std::size_t>(dim_mixed(d) / 2), lambdas.minus);
    std::sort(values.begin(), values.end());
    return Eigen::Map<const RealVector<double>>(values.data(), static_cast<Index>(values.size()));
}

ComplexMatrix delta_operator(int d, const PriorPair& priors) {
    const auto pair = build_pair_symmetrizers<double>(d);
    return priors.eta1() * pair.S01 - priors.eta2() * pair.S02;
}

double success_normalization(int d) {
    return static_cast<double>(symmetrizer_dim(1, d)) * static_cast<double>(symmetrizer_dim(2, d));
}

double p_max_closed_form(int d, const PriorPair& priors) {
    if (d < 1) {
        throw DimensionMismatch("p_max_closed_form needs d >= 1");
    }
    const double dd = d;
    return 0.5 + (dd + 2) / (6 * dd) * std::abs(priors.difference()) +
           (dd - 1) / (3 * dd) * std::sqrt(1 - priors.eta1() * priors.eta2());
}

double mean_success_probability_unchecked(const ComplexMatrix& e1, const ComplexMatrix& delta,
                                          int d, const PriorPair& priors) {
    if (e1.rows() != delta.rows() || e1.cols() != delta.cols()) {
        throw DimensionMismatch("POVM element and Delta differ in dimension");
    }
    // tr[E1 Delta] without forming the product
    const double overlap = (e1.transpose().array() * delta.array()).sum().real();
    return priors.eta2() + overlap / success_normalization(d);
}

double mean_success_probability(const ComplexMatrix& e1, int d, const PriorPair& priors) {
    const Index dim = static_cast<Index>(d) * d * d;
    if (e1.rows() != dim || e1.cols() != dim) {
        throw DimensionMismatch("E1 must act on the " + std::to_string(dim) +
                                "-dimensional triple space");
    }
    const auto s = hermitian_eig(e1);
    if (s.eigenvalues.minCoeff() < -1e-9 || s.eigenvalues.maxCoeff() > 1 + 1e-9) {
        throw InvalidPovmElement("spectrum of E1 leaves [0, 1]: [" +
                                 std::to_string(s.eigenvalues.minCoeff()) + ", " +
                                 std::to_string(s.eigenvalues.maxCoeff()) + "]");
    }
    return mean_success_probability_unchecked(e1, delta_operator(d, priors), d, priors);
}

GlobalSolution optimal_global_povm(int d, const PriorPair& priors) {
    if (d < 2) {
        throw DimensionMismatch("optimal_global_povm needs d >= 2");
    }
    ComplexMatrix delta = delta_operator(d, priors);
    auto spectrum = hermitian_eig(delta);
    const auto lambdas = lambda_pm(priors);

    ComplexMatrix e1 = projector_onto_eigenspace(spectrum, EigenSign::positive);
    const Index dim = delta.rows();
    ComplexMatrix e2 = ComplexMatrix::Identity(dim, dim) - e1;

    double positive_sum = 0;
    for (Index k = 0; k < spectrum.size(); ++k) {
        if (spectrum.eigenvalues(k) > kPositiveEigenTolerance) {
            positive_sum += spectrum.eigenvalues(k);
        }
    }
    const Index rank = count_eigenvalues(spectrum, EigenSign::positive);
    const double p_spectral = priors.eta2() + positive_sum / success_normalization(d);

    return GlobalSolution{priors,
                          d,
                          std::move(delta),
                          std::move(spectrum),
                          lambdas.plus,
                          lambdas.minus,
                          PovmPair{std::move(e1), std::move(e2)},
                          rank,
                          p_spectral,
                          p_max_closed_form(d, priors)};
}

double haar_average_check(int n, int d, std::int64_t samples, RandomStream& rng) {
    if (n < 1 || n > 3) {
        throw DimensionMismatch("haar_average_check supports n in {1, 2, 3}");
    }
    if (samples < 1) {
        throw Error("haar_average_check needs at least one sample");
    }
    const Index dim = static_cast<Index>(std::pow(d, n));
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    for (std::int64_t k = 0; k < samples; ++k) {
        const auto psi = haar_random_state(d, rng);
        ComplexVector power = psi.amplitudes();
        for (int j = 1; j < n; ++j) {
            power = kron_vec(power, psi.amplitudes());
        }
        acc.noalias() += power * power.adjoint();
    }
    acc /= static_cast<double>(samples);
    const ComplexMatrix expected =
        symmetric_projector<double>(n, d) / static_cast<double>(symmetrizer_dim(n, d));
    return max_abs(acc - expected);
}

} // namespace pureid
