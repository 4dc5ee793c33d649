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

#include <cmath>
#include <numbers>
#include <vector>

#include <catch_amalgamated.hpp>

#include "pureid/global.hpp"
#include "pureid/locc.hpp"
#include "pureid/spectral.hpp"

using namespace pureid;

namespace {

struct LayoutCase {
    int d_a;
    int d_b;
};

} // namespace

TEST_CASE("interleave map on trivial layouts", "[locc][interleave]") {
    const InterleaveMap trivial(HilbertLayout(1, 1));
    CHECK(max_abs(trivial.matrix() - ComplexMatrix::Identity(1, 1)) == 0.0);
    // with one trivial party the regrouping changes nothing
    const InterleaveMap one_sided(HilbertLayout(1, 3));
    CHECK(max_abs(one_sided.matrix() - ComplexMatrix::Identity(27, 27)) == 0.0);
}

TEST_CASE("interleave map is a unitary permutation", "[locc][interleave]") {
    for (auto [da, db] : {LayoutCase{2, 2}, LayoutCase{2, 3}, LayoutCase{3, 2}}) {
        const HilbertLayout layout(da, db);
        const InterleaveMap map(layout);
        const ComplexMatrix w = map.matrix();
        const Index n = layout.joint_dim();
        CHECK(max_abs(w * w.adjoint() - ComplexMatrix::Identity(n, n)) == 0.0);
        // the matrix and the index map describe the same operation
        const ComplexMatrix probe = ComplexMatrix::Random(n, n);
        CHECK(max_abs(map.to_interleaved(probe) - w * probe * w.adjoint()) < 1e-14);
        CHECK(max_abs(map.from_interleaved(map.to_interleaved(probe)) - probe) == 0.0);
        const ComplexVector v = ComplexVector::Random(n);
        CHECK((map.to_interleaved(v) - w * v).norm() < 1e-14);
        CHECK((map.from_interleaved(map.to_interleaved(v)) - v).norm() == 0.0);
    }
}

TEST_CASE("interleaving factorizes joint transpositions", "[locc][interleave]") {
    for (auto [da, db] : {LayoutCase{2, 2}, LayoutCase{2, 3}}) {
        const HilbertLayout layout(da, db);
        const InterleaveMap map(layout);
        const int d = layout.d();
        const ComplexMatrix t01 = map.to_interleaved(transposition(d, 3, 0, 1));
        CHECK(max_abs(t01 - kron(transposition(da, 3, 0, 1), transposition(db, 3, 0, 1))) == 0.0);

        const auto joint = build_pair_symmetrizers(d);
        const auto a = build_pair_symmetrizers(da);
        const auto b = build_pair_symmetrizers(db);
        const Index na = a.S01.rows();
        const Index nb = b.S01.rows();
        // S(01) = (1 + T_a T_b) / 2 with T = 2S - 1 on each side
        const ComplexMatrix ta = 2.0 * a.S01 - ComplexMatrix::Identity(na, na);
        const ComplexMatrix tb = 2.0 * b.S01 - ComplexMatrix::Identity(nb, nb);
        const ComplexMatrix s01 = map.to_interleaved(joint.S01);
        CHECK(max_abs(s01 - (ComplexMatrix::Identity(na * nb, na * nb) + kron(ta, tb)) / 2.0) < 1e-14);
        CHECK(std::abs(s01.trace() - joint.S01.trace()) < 1e-12);
    }
}

TEST_CASE("local factorization of D and A", "[locc][factorization]") {
    for (auto [da, db] : {LayoutCase{2, 2}, LayoutCase{2, 3}, LayoutCase{1, 2}, LayoutCase{1, 3}, LayoutCase{3, 1}}) {
        const auto r = local_factorization_check(HilbertLayout(da, db));
        CHECK(r.d_residual <= 1e-10);
        CHECK(r.a_residual <= 1e-10);
    }
}

TEST_CASE("rotation angle", "[locc][angle]") {
    const auto half = rotation_angle(PriorPair::from_eta1(0.5));
    CHECK(half.cos2theta == Catch::Approx(0.0).margin(1e-15));
    CHECK(half.sin2theta == Catch::Approx(1.0).margin(1e-15));
    CHECK(half.theta == Catch::Approx(std::numbers::pi / 4).margin(1e-15));

    const auto skewed = rotation_angle(PriorPair::from_eta1(0.3));
    CHECK(skewed.cos2theta == Catch::Approx(-0.225018).margin(1e-6));
    CHECK(skewed.sin2theta == Catch::Approx(0.974355).margin(1e-6));
    CHECK(std::cos(2 * skewed.theta) == Catch::Approx(skewed.cos2theta).margin(1e-14));
    CHECK(std::sin(2 * skewed.theta) == Catch::Approx(skewed.sin2theta).margin(1e-14));

    for (int k = 0; k <= 10; ++k) {
        const auto a = rotation_angle(PriorPair::from_eta1(k / 10.0));
        CHECK(a.cos2theta * a.cos2theta + a.sin2theta * a.sin2theta == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("X and Y operators on the mixed sector", "[locc][family]") {
    for (int d : {2, 3}) {
        for (double eta1 : {0.1, 0.3, 0.5}) {
            const auto f = build_local_family(Party::alice, d, PriorPair::from_eta1(eta1));
            const ComplexMatrix& m = f.sectors.M3;
            CHECK(max_abs(m * f.X1 * f.X1 * m - m) <= 1e-10);
            CHECK(max_abs(m * f.X2 * f.X2 * m - m) <= 1e-10);
            CHECK(max_abs(m * (f.X1 * f.X2 + f.X2 * f.X1) * m) <= 1e-10);
            CHECK(max_abs(m * f.Y1 * f.Y1 * m - m) <= 1e-10);
            CHECK(max_abs(m * f.Y2 * f.Y2 * m - m) <= 1e-10);
            CHECK(max_abs(m * (f.Y1 * f.Y2 + f.Y2 * f.Y1) * m) <= 1e-10);
        }
    }
}

TEST_CASE("Q projectors", "[locc][family]") {
    const auto priors = PriorPair::from_eta1(0.3);
    for (auto [d, rank] : {std::pair{2, 2}, std::pair{3, 8}}) {
        const auto f = build_local_family(Party::bob, d, priors);
        CHECK(std::abs(f.Qplus.trace().real() - rank) <= 1e-10);
        CHECK(std::abs(f.Qminus.trace().real() - rank) <= 1e-10);
        CHECK(max_abs(f.Qplus * f.Qminus) <= 1e-10);
        CHECK(max_abs(f.Qplus + f.Qminus - f.sectors.M3) <= 1e-10);
        // the cross term tr[Q Y1] vanishes and Y1 exchanges the two halves
        CHECK(std::abs((f.Qplus * f.Y1).trace()) <= 1e-10);
        CHECK(std::abs((f.Qminus * f.Y1).trace()) <= 1e-10);
        CHECK(max_abs(f.Y1 * f.Qminus * f.Y1 - f.Qplus) <= 1e-10);
    }
}

TEST_CASE("P projectors split the mixed sector", "[locc][family]") {
    for (int d : {2, 3}) {
        for (double eta1 : {0.0, 0.3, 0.5}) {
            const auto priors = PriorPair::from_eta1(eta1);
            const auto f = build_local_family(Party::alice, d, priors);
            const auto l = lambda_pm(priors);
            CHECK(max_abs(f.Pplus + f.Pminus - f.sectors.M3) <= 1e-10);
            CHECK(max_abs(f.Pplus * f.Pplus - f.Pplus) <= 1e-10);
            CHECK(max_abs(f.delta * f.Pplus - l.plus * f.Pplus) <= 1e-10);
            CHECK(max_abs(f.delta * f.Pminus - l.minus * f.Pminus) <= 1e-10);
        }
    }
}

TEST_CASE("local family requires eta1 <= eta2", "[locc][family]") {
    CHECK_THROWS_AS(build_local_family(Party::alice, 2, PriorPair::from_eta1(0.6)), InvalidPriors);
}

TEST_CASE("dimension identity", "[locc][dims]") {
    const auto a = dim_identity_check(HilbertLayout(2, 2));
    CHECK(a.lhs == 40);
    CHECK(a.terms == std::array<std::int64_t, 5>{16, 16, 0, 0, 8});
    CHECK(a.holds);

    const auto b = dim_identity_check(HilbertLayout(2, 3));
    CHECK(b.lhs == 140);
    CHECK(b.terms == std::array<std::int64_t, 5>{64, 40, 0, 4, 32});
    CHECK(b.holds);

    for (int da = 1; da <= 6; ++da) {
        for (int db = 1; db <= 6; ++db) {
            CHECK(dim_identity_check(HilbertLayout(da, db)).holds);
        }
    }
}

TEST_CASE("LOCC element attains the global optimum", "[locc][certificate]") {
    struct Case {
        int d_a;
        int d_b;
        double eta1;
    };
    for (const auto& c : {Case{2, 2, 0.3}, Case{2, 3, 0.1}, Case{2, 3, 0.5}, Case{1, 2, 0.5},
                          Case{2, 2, 0.0}, Case{2, 2, 1.0}, Case{2, 2, 0.7}, Case{3, 2, 0.8}}) {
        const HilbertLayout layout(c.d_a, c.d_b);
        const auto priors = PriorPair::from_eta1(c.eta1);
        const auto locc = build_E1_locc(layout, priors);
        const auto global = optimal_global_povm(layout.d(), priors);
        const auto cert = certify_locc(locc, global);
        INFO("d_a=" << c.d_a << " d_b=" << c.d_b << " eta1=" << c.eta1);
        CHECK(cert.discrepancy <= 1e-9);
        CHECK(std::abs(cert.p_locc - p_max_closed_form(layout.d(), priors)) <= 1e-9);
        CHECK(cert.idempotency_defect <= 1e-10);
        CHECK(cert.hermiticity_defect <= 1e-12);
        CHECK(cert.povm.valid);
        CHECK(locc.mirrored == (c.eta1 > 0.5));
        CHECK(locc.summand_label == (locc.mirrored ? 2 : 1));
    }
}

TEST_CASE("summands are mutually orthogonal product projectors", "[locc][structure]") {
    const HilbertLayout layout(2, 3);
    const auto priors = PriorPair::from_eta1(0.3);
    const auto locc = build_E1_locc(layout, priors);
    const InterleaveMap map(layout);
    for (std::size_t i = 0; i < 6; ++i) {
        // each summand is a Kronecker product across the cut
        CHECK(max_abs(map.to_interleaved(locc.summands[i]) -
                      kron(locc.alice_factors[i], locc.bob_factors[i])) == 0.0);
        CHECK(max_abs(locc.summands[i] * locc.summands[i] - locc.summands[i]) <= 1e-10);
        for (std::size_t j = i + 1; j < 6; ++j) {
            CHECK(max_abs(locc.summands[i] * locc.summands[j]) <= 1e-10);
        }
    }
}

TEST_CASE("diagonal form of Delta on the LOCC sectors", "[locc][structure]") {
    // Delta is diagonal with respect to the split by each party's symmetry sector, so its
    // compression onto S_a (x) M_b equals the projector times the local P-structure.
    const HilbertLayout layout(2, 2);
    const auto priors = PriorPair::from_eta1(0.3);
    const auto locc = build_E1_locc(layout, priors);
    const InterleaveMap map(layout);
    const ComplexMatrix delta = map.to_interleaved(delta_operator(layout.d(), priors));
    const auto& a = locc.alice;
    const auto& b = locc.bob;
    const auto l = lambda_pm(priors);
    CHECK(max_abs(kron(a.sectors.S3, b.Pplus) * delta - l.plus * kron(a.sectors.S3, b.Pplus)) <= 1e-10);
    CHECK(max_abs(kron(a.sectors.S3, b.Pminus) * delta - l.minus * kron(a.sectors.S3, b.Pminus)) <= 1e-10);
    CHECK(max_abs(kron(a.Pplus, b.sectors.S3) * delta - l.plus * kron(a.Pplus, b.sectors.S3)) <= 1e-10);
    // Delta restricted to S_a (x) S_b is eta1 - eta2
    const ComplexMatrix ss = kron(a.sectors.S3, b.sectors.S3);
    CHECK(max_abs(ss * delta * ss - priors.difference() * ss) <= 1e-10);
}

TEST_CASE("branch contributions", "[locc][branches]") {
    const auto r = branch_contribution_report(HilbertLayout(2, 2), PriorPair::from_eta1(0.5));
    CHECK(r.mm_total == Catch::Approx(std::sqrt(3.0)).margin(1e-10));
    CHECK(r.sa_total == Catch::Approx(4 * std::sqrt(3.0)).margin(1e-10));
    CHECK(r.mm_expected == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
    CHECK(r.sa_expected == Catch::Approx(4 * std::sqrt(3.0)).margin(1e-12));
    CHECK(r.traces[1] == Catch::Approx(0.0).margin(1e-12));  // empty antisymmetric sector
    CHECK(r.traces[3] == Catch::Approx(0.0).margin(1e-12));

    const auto skewed = branch_contribution_report(HilbertLayout(2, 3), PriorPair::from_eta1(0.3));
    CHECK(skewed.sa_total == Catch::Approx(skewed.sa_expected).margin(1e-9));
    CHECK(skewed.mm_total == Catch::Approx(skewed.mm_expected).margin(1e-9));
    CHECK_THROWS_AS(branch_contribution_report(HilbertLayout(2, 2), PriorPair::from_eta1(0.7)), InvalidPriors);
}

TEST_CASE("antisymmetric branch operator is the partial trace over Alice", "[locc][branches]") {
    const HilbertLayout layout(3, 2);
    const auto priors = PriorPair::from_eta1(0.3);
    const InterleaveMap map(layout);
    const ComplexMatrix delta = map.to_interleaved(delta_operator(layout.d(), priors));
    const auto sa = build_sectors(3);
    const Index nb = 8;
    const ComplexMatrix weighted = kron(sa.A3, ComplexMatrix::Identity(nb, nb)) * delta;
    const std::vector<int> dims = {3, 3, 3, 2, 2, 2};
    const std::vector<int> keep = {3, 4, 5};
    const ComplexMatrix reduced = partial_trace(weighted, dims, keep) / static_cast<double>(sa.dimA);
    const ComplexMatrix direct = antisymmetric_branch_operator(2, priors);
    CHECK(max_abs(reduced - direct) <= 1e-10);

    // its mixed-sector eigenvalues are the P-eigenvalues with the roles exchanged
    const auto s = hermitian_eig(direct);
    const auto l = lambda_pm(priors);
    const double c = priors.difference();
    const double r = std::sqrt(1 - priors.eta1() * priors.eta2());
    int hits_plus = 0;
    int hits_minus = 0;
    for (Index k = 0; k < s.size(); ++k) {
        hits_plus += std::abs(s.eigenvalues(k) - (c + r) / 2) < 1e-10 ? 1 : 0;
        hits_minus += std::abs(s.eigenvalues(k) - (c - r) / 2) < 1e-10 ? 1 : 0;
    }
    CHECK(hits_plus == 2);
    CHECK(hits_minus == 2);
    CHECK(l.plus == Catch::Approx((c + r) / 2).margin(1e-15));
}

TEST_CASE("mirror construction swaps the role of the two elements", "[locc][mirror]") {
    const HilbertLayout layout(2, 2);
    const auto forward = build_E1_locc(layout, PriorPair::from_eta1(0.3));
    const auto mirror = build_E1_locc(layout, PriorPair::from_eta1(0.7));
    const ComplexMatrix t12 =
        InterleaveMap(layout).from_interleaved(kron(transposition(2, 3, 1, 2), transposition(2, 3, 1, 2)));
    // exchanging the reference systems maps E1 at (0.3, 0.7) to E2 at (0.7, 0.3)
    CHECK(max_abs(t12 * forward.E1L * t12 - mirror.E2L) <= 1e-10);
    const Index n = layout.joint_dim();
    CHECK(max_abs(mirror.E1L + mirror.E2L - ComplexMatrix::Identity(n, n)) == 0.0);
}
