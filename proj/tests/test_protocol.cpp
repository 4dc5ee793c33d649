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
#include <vector>

#include <catch_amalgamated.hpp>

#include "pureid/global.hpp"
#include "pureid/locc.hpp"
#include "pureid/protocol.hpp"

using namespace pureid;

namespace {

double expectation(const ComplexMatrix& op, const PureState<>& s) {
    return s.amplitudes().dot(op * s.amplitudes()).real();
}

} // namespace

TEST_CASE("instance labels follow the priors", "[protocol][instance]") {
    const HilbertLayout layout(2, 2);
    auto rng = derive_stream(41, 0);
    for (int k = 0; k < 1000; ++k) {
        REQUIRE(prepare_instance(layout, PriorPair::from_eta1(1.0), rng).true_label == 1);
    }
    const auto priors = PriorPair::from_eta1(0.3);
    const int n = 100000;
    int ones = 0;
    for (int k = 0; k < n; ++k) {
        ones += prepare_instance(HilbertLayout(1, 2), priors, rng).true_label == 1 ? 1 : 0;
    }
    CHECK(std::abs(static_cast<double>(ones) / n - 0.3) <= 0.005);
}

TEST_CASE("instance states", "[protocol][instance]") {
    const HilbertLayout layout(2, 3);
    auto rng = derive_stream(42, 0);
    for (int k = 0; k < 20; ++k) {
        const auto inst = prepare_instance(layout, PriorPair::from_eta1(0.5), rng);
        CHECK(inst.joint_state.dim() == 216);
        CHECK(std::abs(inst.joint_state.amplitudes().norm() - 1) < 1e-12);
        CHECK(std::abs(inst.reference1.amplitudes().norm() - 1) < 1e-12);
        const auto& input = inst.true_label == 1 ? inst.reference1 : inst.reference2;
        const auto rebuilt = kron(kron(input, inst.reference1), inst.reference2);
        CHECK((rebuilt.amplitudes() - inst.joint_state.amplitudes()).norm() == 0.0);
    }
}

TEST_CASE("projective measurement on a basis state", "[protocol][measure]") {
    auto rng = derive_stream(43, 0);
    ComplexVector e0 = ComplexVector::Zero(3);
    e0(0) = 1;
    const auto state = PureState<>::normalized(e0);
    const ComplexMatrix p0 = e0 * e0.adjoint();
    const std::vector<ComplexMatrix> projectors = {p0, ComplexMatrix::Identity(3, 3) - p0};
    CHECK(projective_measurement_defect(projectors) == 0.0);
    for (int k = 0; k < 100; ++k) {
        const auto r = projective_measure(state, projectors, rng);
        REQUIRE(r.outcome == 0);
        REQUIRE(r.probability == Catch::Approx(1.0));
    }
}

TEST_CASE("projective measurement on an unbiased superposition", "[protocol][measure]") {
    auto rng = derive_stream(44, 0);
    const auto state = PureState<>::normalized(ComplexVector::Ones(2));
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1;
    const std::vector<ComplexMatrix> projectors = {p0, ComplexMatrix::Identity(2, 2) - p0};
    const int n = 10000;
    int zeros = 0;
    for (int k = 0; k < n; ++k) {
        const auto r = projective_measure(state, projectors, rng);
        zeros += r.outcome == 0 ? 1 : 0;
        CHECK(std::abs(std::abs(r.state.amplitudes()(r.outcome)) - 1) < 1e-12);
    }
    CHECK(std::abs(zeros - n / 2.0) <= 3 * std::sqrt(n * 0.25));
}

TEST_CASE("branch sampling skips negligible branches", "[protocol][measure]") {
    auto rng = derive_stream(45, 0);
    const std::vector<double> probabilities = {0.0, 1.0, 1e-18};
    for (int k = 0; k < 1000; ++k) {
        REQUIRE(sample_branch(probabilities, rng) == 1);
    }
    const std::vector<double> empty = {0.0, 1e-20};
    CHECK_THROWS_AS(sample_branch(empty, rng), DegenerateOutcome);
}

TEST_CASE("global protocol statistics", "[protocol][global]") {
    const HilbertLayout layout(2, 2);
    const auto half = monte_carlo(Mode::global, layout, PriorPair::from_eta1(0.5), 100000, 7);
    CHECK(half.reference_p == Catch::Approx(0.716506).margin(1e-6));
    CHECK(std::abs(half.z_score) <= 3);
    const auto skewed = monte_carlo(Mode::global, layout, PriorPair::from_eta1(0.3), 100000, 8);
    CHECK(skewed.reference_p == Catch::Approx(0.822205).margin(1e-6));
    CHECK(std::abs(skewed.z_score) <= 3);
    const auto certain = monte_carlo(Mode::global, layout, PriorPair::from_eta1(0.0), 2000, 9);
    CHECK(certain.successes == certain.trials);
}

TEST_CASE("LOCC protocol statistics", "[protocol][locc]") {
    const HilbertLayout layout(2, 2);
    const auto half = monte_carlo(Mode::locc, layout, PriorPair::from_eta1(0.5), 100000, 10);
    CHECK(std::abs(half.z_score) <= 3);
    const auto skewed = monte_carlo(Mode::locc, layout, PriorPair::from_eta1(0.3), 100000, 7);
    CHECK(std::abs(skewed.z_score) <= 3);
    const auto mirrored = monte_carlo(Mode::locc, layout, PriorPair::from_eta1(0.7), 100000, 11);
    CHECK(std::abs(mirrored.z_score) <= 3);
    const auto certain = monte_carlo(Mode::locc, layout, PriorPair::from_eta1(0.0), 1000, 12);
    CHECK(certain.empirical_p == 1.0);
    const auto sure_one = monte_carlo(Mode::locc, layout, PriorPair::from_eta1(1.0), 1000, 13);
    CHECK(sure_one.empirical_p == 1.0);
}

TEST_CASE("global and LOCC runs agree", "[protocol][locc]") {
    const HilbertLayout layout(2, 3);
    const auto priors = PriorPair::from_eta1(0.4);
    const auto g = monte_carlo(Mode::global, layout, priors, 20000, 14);
    const auto l = monte_carlo(Mode::locc, layout, priors, 20000, 15);
    const double combined = std::sqrt(g.std_error * g.std_error + l.std_error * l.std_error);
    CHECK(std::abs(g.empirical_p - l.empirical_p) <= 4 * combined);
}

TEST_CASE("LOCC guess frequency on a fixed state matches the element", "[protocol][locc]") {
    auto rng = derive_stream(46, 0);
    for (double eta1 : {0.3, 0.7}) {
        const HilbertLayout layout(2, 2);
        const auto priors = PriorPair::from_eta1(eta1);
        const auto locc = build_E1_locc(layout, priors);
        for (int s = 0; s < 5; ++s) {
            const auto state = haar_random_state(layout.joint_dim(), rng);
            const double p1 = expectation(locc.E1L, state);
            const int n = 20000;
            int guess1 = 0;
            for (int k = 0; k < n; ++k) {
                guess1 += run_locc_on_state(state, 1, locc, rng).guess == 1 ? 1 : 0;
            }
            const double sigma = std::sqrt(p1 * (1 - p1) / n);
            CHECK(std::abs(static_cast<double>(guess1) / n - p1) <= 4 * sigma + 1e-12);
        }
    }
}

TEST_CASE("conditional Q statistics on the mixed-mixed branch", "[protocol][locc]") {
    // compare the empirical frequency of (Q+, Q-) given (M, M) with the direct expectation
    // ratio <Q+ (x) Q-> / <M (x) M>, pooled over 100 random states
    const HilbertLayout layout(2, 2);
    const auto locc = build_E1_locc(layout, PriorPair::from_eta1(0.3));
    const InterleaveMap map(layout);
    const ComplexMatrix qpm = map.from_interleaved(kron(locc.alice.Qplus, locc.bob.Qminus));
    const ComplexMatrix mm = map.from_interleaved(kron(locc.alice.sectors.M3, locc.bob.sectors.M3));
    auto rng = derive_stream(47, 0);
    double expected = 0;
    double variance = 0;
    int observed = 0;
    for (int s = 0; s < 100; ++s) {
        const auto state = haar_random_state(layout.joint_dim(), rng);
        const double ratio = expectation(qpm, state) / expectation(mm, state);
        const int runs = 400;
        int hits = 0;
        int mixed = 0;
        for (int k = 0; k < runs; ++k) {
            const auto rec = run_locc_on_state(state, 1, locc, rng);
            if (rec.transcript.size() == 4) {
                ++mixed;
                hits += (rec.transcript[2].outcome == 0 && rec.transcript[3].outcome == 1) ? 1 : 0;
            }
        }
        expected += mixed * ratio;
        variance += mixed * ratio * (1 - ratio);
        observed += hits;
    }
    CHECK(std::abs(observed - expected) <= 4 * std::sqrt(variance));
}

TEST_CASE("transcripts are well formed", "[protocol][transcript]") {
    const HilbertLayout layout(2, 3);
    const auto locc = build_E1_locc(layout, PriorPair::from_eta1(0.3));
    auto rng = derive_stream(48, 0);
    for (int k = 0; k < 2000; ++k) {
        const auto inst = prepare_instance(layout, locc.priors, rng);
        const auto rec = run_locc(inst, locc, rng);
        REQUIRE(rec.transcript.size() >= 2);
        REQUIRE(rec.transcript[0].party == Party::alice);
        REQUIRE(rec.transcript[0].measurement == "symmetry");
        REQUIRE(rec.transcript[1].party == Party::bob);
        REQUIRE(rec.transcript[1].measurement == "symmetry");
        // Alice's qubit triples have no antisymmetric sector
        REQUIRE(rec.transcript[0].outcome_name != "A");
        const int mixed = (rec.transcript[0].outcome_name == "M" ? 1 : 0) +
                          (rec.transcript[1].outcome_name == "M" ? 1 : 0);
        const std::size_t expected_size = mixed == 2 ? 4 : mixed == 1 ? 3 : 2;
        REQUIRE(rec.transcript.size() == expected_size);
        if (mixed == 1) {
            const auto& p = rec.transcript[2];
            REQUIRE(p.measurement == "P");
            REQUIRE(p.party == (rec.transcript[0].outcome_name == "M" ? Party::alice : Party::bob));
        }
        if (mixed == 2) {
            REQUIRE(rec.transcript[2].measurement == "Q");
            REQUIRE(rec.transcript[2].party == Party::alice);
            REQUIRE(rec.transcript[3].party == Party::bob);
        }
        REQUIRE((rec.guess == 1 || rec.guess == 2));
        REQUIRE(rec.success == (rec.guess == inst.true_label));
    }
}

TEST_CASE("global trial records", "[protocol][transcript]") {
    const HilbertLayout layout(2, 2);
    const auto priors = PriorPair::from_eta1(0.5);
    const auto sol = optimal_global_povm(4, priors);
    auto rng = derive_stream(49, 0);
    const auto rec = run_global(prepare_instance(layout, priors, rng), sol, rng);
    REQUIRE(rec.transcript.size() == 1);
    CHECK(rec.transcript[0].measurement == "global");
    const auto other = optimal_global_povm(6, priors);
    CHECK_THROWS_AS(run_global(prepare_instance(layout, priors, rng), other, rng), DimensionMismatch);
}

TEST_CASE("runs are reproducible and independent of the worker count", "[protocol][determinism]") {
    const HilbertLayout layout(2, 2);
    const auto priors = PriorPair::from_eta1(0.3);
    for (auto mode : {Mode::global, Mode::locc}) {
        const auto a = monte_carlo(mode, layout, priors, 3000, 5, 1);
        const auto b = monte_carlo(mode, layout, priors, 3000, 5, 3);
        const auto c = monte_carlo(mode, layout, priors, 3000, 5, 0);
        CHECK(a.successes == b.successes);
        CHECK(a.successes == c.successes);
    }
}

TEST_CASE("single trial summaries", "[protocol][summary]") {
    const auto r = monte_carlo(Mode::locc, HilbertLayout(2, 2), PriorPair::from_eta1(0.5), 1, 3);
    CHECK((r.empirical_p == 0.0 || r.empirical_p == 1.0));
    CHECK(r.std_error == 0.0);
    CHECK(summarize(Mode::global, 10, 10, 1.0).z_score == 0.0);
    CHECK(std::isinf(summarize(Mode::global, 10, 10, 0.9).z_score));
    CHECK_THROWS(monte_carlo(Mode::global, HilbertLayout(2, 2), PriorPair::from_eta1(0.5), 0, 3));
}

TEST_CASE("exact per-instance success", "[protocol][exact]") {
    const HilbertLayout layout(2, 2);
    const auto priors = PriorPair::from_eta1(0.3);
    const auto sol = optimal_global_povm(4, priors);
    const auto locc = build_E1_locc(layout, priors);
    const auto small = exact_success(sol.povm.E1, layout, priors, 2000, 21);
    const auto large = exact_success(sol.povm.E1, layout, priors, 8000, 21);
    CHECK(std::abs(large.mean - 0.822205) <= 4 * large.std_error);
    // the standard error shrinks like one over the square root of the budget
    CHECK(large.std_error / small.std_error == Catch::Approx(0.5).margin(0.1));
    const auto via_locc = exact_success(locc.E1L, layout, priors, 8000, 21);
    CHECK(std::abs(via_locc.mean - 0.822205) <= 4 * via_locc.std_error);
    CHECK_THROWS_AS(exact_success(sol.povm.E1, HilbertLayout(2, 3), priors, 10, 1), DimensionMismatch);
}
