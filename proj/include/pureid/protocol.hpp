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
#include <span>
#include <string>
#include <vector>

#include "pureid/global.hpp"
#include "pureid/locc.hpp"
#include "pureid/random.hpp"

namespace pureid {

/// One identification instance: input copy of reference `true_label`, then both references.
struct Instance {
    HilbertLayout layout;
    int true_label;
    PureState<> reference1;
    PureState<> reference2;
    PureState<> joint_state;  ///< |phi> (x) |phi1> (x) |phi2>, canonical order
};

/// References are Haar-random on C^d; the label is 1 with probability eta1.
Instance prepare_instance(const HilbertLayout& layout, const PriorPair& priors,
                          RandomStream& rng);

struct MeasurementResult {
    int outcome;
    double probability;
    PureState<> state;  ///< collapsed
};

/// Draws a branch index with the given probabilities. A draw that lands on a branch with
/// probability below 1e-14 is redrawn among the remaining branches; throws DegenerateOutcome
/// when no branch qualifies.
int sample_branch(std::span<const double> probabilities, RandomStream& rng);

/// Born-rule measurement. The projectors must be mutually orthogonal and sum to 1.
MeasurementResult projective_measure(const PureState<>& state,
                                     std::span<const ComplexMatrix> projectors,
                                     RandomStream& rng);

/// Residual of completeness and of pairwise orthogonality for a projector set.
double projective_measurement_defect(std::span<const ComplexMatrix> projectors);

struct TranscriptEntry {
    Party party;
    std::string measurement;  ///< "symmetry", "P" or "Q"
    int outcome;
    std::string outcome_name;  ///< S/A/M, P+/P-, Q+/Q-
};

struct TrialRecord {
    int true_label;
    std::vector<TranscriptEntry> transcript;
    int guess;
    bool success;
};

TrialRecord run_global(const Instance& instance, const GlobalSolution& solution,
                       RandomStream& rng);

/// The sequential LOCC protocol (Alice measures first in every round).
TrialRecord run_locc(const Instance& instance, const LoccPovm& locc, RandomStream& rng);

/// Same protocol on an arbitrary joint state (canonical order); `true_label` only scores it.
TrialRecord run_locc_on_state(const PureState<>& state, int true_label, const LoccPovm& locc,
                              RandomStream& rng);

enum class Mode { global, locc };

std::string_view to_string(Mode mode);

struct RunSummary {
    Mode mode;
    std::int64_t trials;
    std::int64_t successes;
    double empirical_p;
    double std_error;
    double reference_p;
    double z_score;
};

RunSummary summarize(Mode mode, std::int64_t trials, std::int64_t successes, double reference_p);

/// Trial i uses derive_stream(seed, i), so the summary does not depend on `workers`.
/// workers == 0 picks the hardware concurrency.
RunSummary monte_carlo(Mode mode, const HilbertLayout& layout, const PriorPair& priors,
                       std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

struct ExactEstimate {
    std::int64_t instances;
    double mean;
    double std_error;
};

/// Averages eta1 <phi1 phi1 phi2|E1|...> + eta2 <phi2 phi1 phi2|1 - E1|...> over sampled
/// reference pairs, with no measurement sampling.
ExactEstimate exact_success(const ComplexMatrix& e1, const HilbertLayout& layout,
                            const PriorPair& priors, std::int64_t instances, std::uint64_t seed);

} // namespace pureid
