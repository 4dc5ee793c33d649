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

#include "pureid/locc.hpp"

#include <cmath>
#include <string>

#include "pureid/spectral.hpp"

namespace pureid {

namespace {

// canonical factor j moves to interleaved position kInterleave[j]
constexpr std::array<int, 6> kInterleave = {0, 3, 1, 4, 2, 5};

ComplexMatrix conjugate(const ComplexMatrix& op, const ComplexMatrix& u) {
    return u * op * u.adjoint();
}

/// Projector onto the eigenvalue-`target` eigenspace of `op` restricted to range(sector).
ComplexMatrix sector_eigenprojector(const ComplexMatrix& op, const ComplexMatrix& sector,
                                    double target, Index expected_rank, const char* what) {
    const ComplexMatrix basis = range_basis(sector);
    const ComplexMatrix restricted = basis.adjoint() * op * basis;
    const auto s = hermitian_eig(restricted);
    auto near_target = [&](double lambda) { return std::abs(lambda - target) <= 1e-8; };
    const ComplexMatrix inner = spectral_projector(s, near_target);
    Index rank = 0;
    for (Index k = 0; k < s.size(); ++k) {
        rank += near_target(s.eigenvalues(k)) ? 1 : 0;
    }
    if (rank != expected_rank) {
        throw Error(std::string(what) + ": eigenvalue multiplicity " + std::to_string(rank) +
                    " differs from the expected " + std::to_string(expected_rank));
    }
    return basis * inner * basis.adjoint();
}

} // namespace

std::string_view to_string(Party party) { return party == Party::alice ? "alice" : "bob"; }

InterleaveMap::InterleaveMap(const HilbertLayout& layout)
    : layout_(layout) {
    const auto dims = layout.factor_dims();
    forward_ = factor_index_map(dims, kInterleave);
    backward_.resize(forward_.size());
    for (std::size_t i = 0; i < forward_.size(); ++i) {
        backward_[static_cast<std::size_t>(forward_[i])] = static_cast<Index>(i);
    }
}

ComplexMatrix InterleaveMap::matrix() const {
    const auto dims = layout_.factor_dims();
    return permute_factors<double>(dims, kInterleave);
}

ComplexMatrix InterleaveMap::to_interleaved(const ComplexMatrix& op) const {
    return conjugate_by_index_map(op, forward_);
}

ComplexMatrix InterleaveMap::from_interleaved(const ComplexMatrix& op) const {
    return conjugate_by_index_map(op, backward_);
}

ComplexVector InterleaveMap::to_interleaved(const ComplexVector& v) const {
    if (v.size() != static_cast<Index>(forward_.size())) {
        throw DimensionMismatch("state dimension does not match the layout");
    }
    ComplexVector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        out(forward_[i]) = v(i);
    }
    return out;
}

ComplexVector InterleaveMap::from_interleaved(const ComplexVector& v) const {
    if (v.size() != static_cast<Index>(backward_.size())) {
        throw DimensionMismatch("state dimension does not match the layout");
    }
    ComplexVector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        out(backward_[i]) = v(i);
    }
    return out;
}

InterleaveMap interleave_isomorphism(const HilbertLayout& layout) { return InterleaveMap(layout); }

FactorizationResidual local_factorization_check(const HilbertLayout& layout) {
    const auto joint = build_D_A<double>(layout.d());
    const auto a = build_D_A<double>(layout.d_a);
    const auto b = build_D_A<double>(layout.d_b);
    const InterleaveMap map(layout);
    const ComplexMatrix d_int = map.to_interleaved(joint.D);
    const ComplexMatrix a_int = map.to_interleaved(joint.A);
    return {max_abs(d_int - (kron(a.D, b.A) + kron(a.A, b.D))),
            max_abs(a_int - (kron(a.D, b.D) + kron(a.A, b.A)))};
}

RotationAngle rotation_angle(const PriorPair& priors) {
    const double root = std::sqrt(1 - priors.eta1() * priors.eta2());
    const double c2 = priors.difference() / (2 * root);
    const double s2 = std::sqrt(3.0) / (2 * root);
    return {std::atan2(s2, c2) / 2, c2, s2};
}

ComplexMatrix local_delta(int d, const PriorPair& priors) {
    const auto da = build_D_A<double>(d);
    const double c = priors.difference();
    const Index n = da.D.rows();
    return (c * ComplexMatrix::Identity(n, n) + da.D + c * da.A) / 2.0;
}

ComplexMatrix antisymmetric_branch_operator(int d, const PriorPair& priors) {
    const auto da = build_D_A<double>(d);
    const double c = priors.difference();
    const Index n = da.D.rows();
    return (c * ComplexMatrix::Identity(n, n) - da.D - c * da.A) / 2.0;
}

LocalFamily build_local_family(Party party, int d, const PriorPair& priors) {
    if (priors.eta1() > priors.eta2()) {
        throw InvalidPriors("local family construction assumes eta1 <= eta2");
    }
    LocalFamily f{party, d, build_sectors<double>(d), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {},
                  rotation_angle(priors)};
    auto da = build_D_A<double>(d);
    f.D = std::move(da.D);
    f.A = std::move(da.A);
    f.X1 = (2 / std::sqrt(3.0)) * f.D;
    f.X2 = 2.0 * f.A;
    const double c = std::cos(f.angle.theta);
    const double s = std::sin(f.angle.theta);
    f.Y1 = c * f.X1 + s * f.X2;
    f.Y2 = -s * f.X1 + c * f.X2;

    const ComplexMatrix& m3 = f.sectors.M3;
    const ComplexMatrix y2_mixed = m3 * f.Y2 * m3;
    f.Qplus = (m3 + y2_mixed) / 2.0;
    f.Qminus = (m3 - y2_mixed) / 2.0;
    for (const ComplexMatrix* q : {&f.Qplus, &f.Qminus}) {
        if (max_abs(*q * *q - *q) > 1e-10) {
            throw Error("Q projector is not idempotent");
        }
    }

    f.delta = local_delta(d, priors);
    const auto lambdas = lambda_pm(priors);
    const Index half = static_cast<Index>(f.sectors.dimM / 2);
    f.Pplus = sector_eigenprojector(f.delta, m3, lambdas.plus, half, "P+");
    f.Pminus = sector_eigenprojector(f.delta, m3, lambdas.minus, half, "P-");
    return f;
}

LocalFamily exchange_references(const LocalFamily& family) {
    const ComplexMatrix t12 = transposition<double>(family.d, 3, 1, 2);
    LocalFamily out = family;
    for (ComplexMatrix* op : {&out.sectors.S3, &out.sectors.A3, &out.sectors.M3, &out.D, &out.A,
                              &out.X1, &out.X2, &out.Y1, &out.Y2, &out.delta, &out.Pplus,
                              &out.Pminus, &out.Qplus, &out.Qminus}) {
        *op = conjugate(*op, t12);
    }
    return out;
}

LoccPovm build_E1_locc(const HilbertLayout& layout, const PriorPair& priors) {
    const bool mirrored = priors.eta1() > priors.eta2();
    const PriorPair working = mirrored ? priors.swapped() : priors;

    LocalFamily alice = build_local_family(Party::alice, layout.d_a, working);
    LocalFamily bob = build_local_family(Party::bob, layout.d_b, working);
    if (mirrored) {
        alice = exchange_references(alice);
        bob = exchange_references(bob);
    }

    const std::array<ComplexMatrix, 6> alice_factors = {
        alice.sectors.S3, alice.sectors.A3, alice.Pplus, alice.Pminus, alice.Qplus, alice.Qminus};
    const std::array<ComplexMatrix, 6> bob_factors = {
        bob.Pplus, bob.Pminus, bob.sectors.S3, bob.sectors.A3, bob.Qminus, bob.Qplus};

    const InterleaveMap map(layout);
    const Index n = layout.joint_dim();
    std::array<ComplexMatrix, 6> summands;
    ComplexMatrix guess_element = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < 6; ++k) {
        summands[k] = map.from_interleaved(kron(alice_factors[k], bob_factors[k]));
        guess_element += summands[k];
    }
    ComplexMatrix complement = ComplexMatrix::Identity(n, n) - guess_element;

    LoccPovm out{layout,
                 priors,
                 mirrored,
                 mirrored ? 2 : 1,
                 std::move(alice),
                 std::move(bob),
                 alice_factors,
                 bob_factors,
                 std::move(summands),
                 {},
                 {}};
    if (mirrored) {
        out.E1L = std::move(complement);
        out.E2L = std::move(guess_element);
    } else {
        out.E1L = std::move(guess_element);
        out.E2L = std::move(complement);
    }
    return out;
}

DimIdentity dim_identity_check(const HilbertLayout& layout) {
    const std::int64_t sa = dim_symmetric(layout.d_a);
    const std::int64_t aa = dim_antisymmetric(layout.d_a);
    const std::int64_t ma = dim_mixed(layout.d_a);
    const std::int64_t sb = dim_symmetric(layout.d_b);
    const std::int64_t ab = dim_antisymmetric(layout.d_b);
    const std::int64_t mb = dim_mixed(layout.d_b);
    DimIdentity out{dim_mixed(layout.d()), {sa * mb, ma * sb, aa * mb, ma * ab, ma * mb / 2}, false};
    // compare doubled sides so the half term stays integral
    out.holds = 2 * out.lhs == 2 * (out.terms[0] + out.terms[1] + out.terms[2] + out.terms[3]) +
                                   ma * mb;
    return out;
}

BranchReport branch_contribution_report(const HilbertLayout& layout, const PriorPair& priors) {
    if (priors.eta1() > priors.eta2()) {
        throw InvalidPriors("branch contributions are defined for eta1 <= eta2");
    }
    const auto locc = build_E1_locc(layout, priors);
    const ComplexMatrix delta = delta_operator(layout.d(), priors);
    BranchReport out{};
    for (std::size_t k = 0; k < 6; ++k) {
        out.traces[k] = (locc.summands[k].transpose().array() * delta.array()).sum().real();
    }
    out.sa_total = out.traces[0] + out.traces[1] + out.traces[2] + out.traces[3];
    out.mm_total = out.traces[4] + out.traces[5];

    const double lp = lambda_pm(priors).plus;
    const auto& sa = locc.alice.sectors;
    const auto& sb = locc.bob.sectors;
    out.sa_expected = lp / 2 *
                      static_cast<double>(sa.dimS * sb.dimM + sa.dimA * sb.dimM +
                                          sa.dimM * sb.dimS + sa.dimM * sb.dimA);
    out.mm_expected = lp / 4 * static_cast<double>(sa.dimM * sb.dimM);
    return out;
}

LoccCertificate certify_locc(const LoccPovm& locc, const GlobalSolution& global) {
    if (global.d != locc.layout.d()) {
        throw DimensionMismatch("global solution and LOCC POVM act on different spaces");
    }
    LoccCertificate out{};
    out.trace_locc = (locc.E1L.transpose().array() * global.delta.array()).sum().real();
    out.trace_global = 0;
    for (Index k = 0; k < global.spectrum.size(); ++k) {
        if (global.spectrum.eigenvalues(k) > kPositiveEigenTolerance) {
            out.trace_global += global.spectrum.eigenvalues(k);
        }
    }
    out.discrepancy = std::abs(out.trace_locc - out.trace_global);
    const double norm = success_normalization(global.d);
    out.p_locc = locc.priors.eta2() + out.trace_locc / norm;
    out.p_global = locc.priors.eta2() + out.trace_global / norm;
    out.hermiticity_defect = hermiticity_defect(locc.E1L);
    out.idempotency_defect = max_abs(locc.E1L * locc.E1L - locc.E1L);
    out.povm = check_povm_pair(PovmPair{locc.E1L, locc.E2L});
    return out;
}

} // namespace pureid
