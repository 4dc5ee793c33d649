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

#include "pureid/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <thread>

namespace pureid {

namespace {

constexpr double kNegligibleBranch = 1e-14;

using RowMajorMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Measures one party's projectors on the bipartite amplitude matrix and collapses it.
int measure_local(Party party, std::span<const ComplexMatrix* const> projectors,
                  ComplexMatrix& psi, RandomStream& rng) {
    std::vector<ComplexMatrix> branches;
    std::vector<double> probabilities;
    branches.reserve(projectors.size());
    for (const ComplexMatrix* p : projectors) {
        branches.push_back(party == Party::alice ? ComplexMatrix(*p * psi)
                                                 : ComplexMatrix(psi * p->transpose()));
        probabilities.push_back(branches.back().squaredNorm());
    }
    const int k = sample_branch(probabilities, rng);
    psi = branches[k] / std::sqrt(probabilities[k]);
    return k;
}

constexpr std::array<const char*, 3> kSymmetryNames = {"S", "A", "M"};
constexpr std::array<const char*, 2> kPNames = {"P+", "P-"};
constexpr std::array<const char*, 2> kQNames = {"Q+", "Q-"};

} // namespace

std::string_view to_string(Mode mode) { return mode == Mode::global ? "global" : "locc"; }

Instance prepare_instance(const HilbertLayout& layout, const PriorPair& priors,
                          RandomStream& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const int label = uniform(rng) < priors.eta1() ? 1 : 2;
    auto phi1 = haar_random_state(layout.d(), rng);
    auto phi2 = haar_random_state(layout.d(), rng);
    const PureState<>& input = label == 1 ? phi1 : phi2;
    auto joint = kron(kron(input, phi1), phi2);
    return Instance{layout, label, std::move(phi1), std::move(phi2), std::move(joint)};
}

int sample_branch(std::span<const double> probabilities, RandomStream& rng) {
    std::vector<bool> allowed(probabilities.size(), true);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (;;) {
        double total = 0;
        for (std::size_t k = 0; k < probabilities.size(); ++k) {
            if (allowed[k]) {
                total += probabilities[k];
            }
        }
        if (!(total >= kNegligibleBranch)) {
            throw DegenerateOutcome("every measurement branch has negligible probability");
        }
        const double u = uniform(rng) * total;
        double acc = 0;
        std::size_t pick = probabilities.size();
        for (std::size_t k = 0; k < probabilities.size(); ++k) {
            if (!allowed[k]) {
                continue;
            }
            acc += probabilities[k];
            pick = k;
            if (u < acc) {
                break;
            }
        }
        if (probabilities[pick] >= kNegligibleBranch) {
            return static_cast<int>(pick);
        }
        allowed[pick] = false;
    }
}

MeasurementResult projective_measure(const PureState<>& state,
                                     std::span<const ComplexMatrix> projectors,
                                     RandomStream& rng) {
    std::vector<ComplexVector> branches;
    std::vector<double> probabilities;
    for (const auto& p : projectors) {
        if (p.rows() != state.dim() || p.cols() != state.dim()) {
            throw DimensionMismatch("projector dimension does not match the state");
        }
        branches.push_back(p * state.amplitudes());
        probabilities.push_back(branches.back().squaredNorm());
    }
    const int k = sample_branch(probabilities, rng);
    return {k, probabilities[k], PureState<>::normalized(std::move(branches[k]))};
}

double projective_measurement_defect(std::span<const ComplexMatrix> projectors) {
    if (projectors.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    const Index n = projectors.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    double defect = 0;
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        sum += projectors[i];
        for (std::size_t j = i + 1; j < projectors.size(); ++j) {
            defect = std::max(defect, max_abs(projectors[i] * projectors[j]));
        }
    }
    return std::max(defect, max_abs(sum - ComplexMatrix::Identity(n, n)));
}

TrialRecord run_global(const Instance& instance, const GlobalSolution& solution,
                       RandomStream& rng) {
    if (instance.layout.d() != solution.d) {
        throw DimensionMismatch("instance and solution use different dimensions");
    }
    // the optimal elements are complementary projectors, so Born-rule sampling applies
    const ComplexVector& psi = instance.joint_state.amplitudes();
    const double p1 = psi.dot(solution.povm.E1 * psi).real();
    const double p2 = psi.dot(solution.povm.E2 * psi).real();
    const std::array<double, 2> probabilities = {std::max(0.0, p1), std::max(0.0, p2)};
    const int outcome = sample_branch(probabilities, rng);
    const int guess = outcome + 1;
    return TrialRecord{instance.true_label,
                       {TranscriptEntry{Party::alice, "global", outcome, outcome == 0 ? "E1" : "E2"}},
                       guess,
                       guess == instance.true_label};
}

TrialRecord run_locc_on_state(const PureState<>& state, int true_label, const LoccPovm& locc,
                              RandomStream& rng) {
    const auto& layout = locc.layout;
    if (state.dim() != layout.joint_dim()) {
        throw DimensionMismatch("state does not live on the LOCC layout");
    }
    const InterleaveMap map(layout);
    const ComplexVector v = map.to_interleaved(state.amplitudes());
    ComplexMatrix psi = Eigen::Map<const RowMajorMatrix>(v.data(), layout.alice_dim(),
                                                         layout.bob_dim());

    TrialRecord record{true_label, {}, 0, false};
    const LocalFamily* families[2] = {&locc.alice, &locc.bob};
    int symmetry[2] = {0, 0};
    for (int who = 0; who < 2; ++who) {
        const auto& f = *families[who];
        const std::array<const ComplexMatrix*, 3> sectors = {&f.sectors.S3, &f.sectors.A3,
                                                             &f.sectors.M3};
        symmetry[who] = measure_local(f.party, sectors, psi, rng);
        record.transcript.push_back(
            {f.party, "symmetry", symmetry[who], kSymmetryNames[symmetry[who]]});
    }

    constexpr int kS = 0;
    constexpr int kA = 1;
    constexpr int kM = 2;
    bool pattern = false;
    if (symmetry[0] == kM && symmetry[1] == kM) {
        int q[2] = {0, 0};
        for (int who = 0; who < 2; ++who) {
            const auto& f = *families[who];
            const std::array<const ComplexMatrix*, 2> qs = {&f.Qplus, &f.Qminus};
            q[who] = measure_local(f.party, qs, psi, rng);
            record.transcript.push_back({f.party, "Q", q[who], kQNames[q[who]]});
        }
        // the element holds Q+ (x) Q- and Q- (x) Q+: opposite signs
        pattern = q[0] != q[1];
    } else if (symmetry[0] == kM || symmetry[1] == kM) {
        const int mixed = symmetry[0] == kM ? 0 : 1;
        const int other = symmetry[1 - mixed];
        const auto& f = *families[mixed];
        const std::array<const ComplexMatrix*, 2> ps = {&f.Pplus, &f.Pminus};
        const int p = measure_local(f.party, ps, psi, rng);
        record.transcript.push_back({f.party, "P", p, kPNames[p]});
        pattern = (other == kS && p == 0) || (other == kA && p == 1);
    }

    record.guess = pattern ? locc.summand_label : 3 - locc.summand_label;
    record.success = record.guess == true_label;
    return record;
}

TrialRecord run_locc(const Instance& instance, const LoccPovm& locc, RandomStream& rng) {
    if (!(instance.layout == locc.layout)) {
        throw DimensionMismatch("instance layout differs from the LOCC layout");
    }
    return run_locc_on_state(instance.joint_state, instance.true_label, locc, rng);
}

RunSummary summarize(Mode mode, std::int64_t trials, std::int64_t successes, double reference_p) {
    if (trials < 1) {
        throw Error("a run needs at least one trial");
    }
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    double z = 0;
    if (se > 0) {
        z = (p - reference_p) / se;
    } else if (p != reference_p) {
        z = p > reference_p ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
    }
    return RunSummary{mode, trials, successes, p, se, reference_p, z};
}

RunSummary monte_carlo(Mode mode, const HilbertLayout& layout, const PriorPair& priors,
                       std::int64_t trials, std::uint64_t seed, unsigned workers) {
    if (trials < 1) {
        throw Error("monte_carlo needs at least one trial");
    }
    std::optional<GlobalSolution> global;
    std::optional<LoccPovm> locc;
    if (mode == Mode::global) {
        global.emplace(optimal_global_povm(layout.d(), priors));
    } else {
        locc.emplace(build_E1_locc(layout, priors));
    }

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, trials));

    std::vector<std::int64_t> successes(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::int64_t i = w; i < trials; i += workers) {
                auto rng = derive_stream(seed, static_cast<std::uint64_t>(i));
                const auto instance = prepare_instance(layout, priors, rng);
                const auto record = mode == Mode::global ? run_global(instance, *global, rng)
                                                         : run_locc(instance, *locc, rng);
                successes[w] += record.success ? 1 : 0;
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::int64_t total = 0;
    for (auto s : successes) {
        total += s;
    }
    return summarize(mode, trials, total, p_max_closed_form(layout.d(), priors));
}

ExactEstimate exact_success(const ComplexMatrix& e1, const HilbertLayout& layout,
                            const PriorPair& priors, std::int64_t instances, std::uint64_t seed) {
    if (instances < 2) {
        throw Error("exact_success needs at least two instances");
    }
    if (e1.rows() != layout.joint_dim()) {
        throw DimensionMismatch("E1 does not act on the layout's joint space");
    }
    double sum = 0;
    double sum_sq = 0;
    for (std::int64_t i = 0; i < instances; ++i) {
        auto rng = derive_stream(seed, static_cast<std::uint64_t>(i));
        const auto phi1 = haar_random_state(layout.d(), rng);
        const auto phi2 = haar_random_state(layout.d(), rng);
        const ComplexVector first = kron(kron(phi1, phi1), phi2).amplitudes();
        const ComplexVector second = kron(kron(phi2, phi1), phi2).amplitudes();
        const double guess1_on_1 = first.dot(e1 * first).real();
        const double guess1_on_2 = second.dot(e1 * second).real();
        const double s = priors.eta1() * guess1_on_1 + priors.eta2() * (1 - guess1_on_2);
        sum += s;
        sum_sq += s * s;
    }
    const double n = static_cast<double>(instances);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    return {instances, mean, std::sqrt(var / n)};
}

} // namespace pureid
