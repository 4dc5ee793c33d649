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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pureid/global.hpp"
#include "pureid/symmetry.hpp"
#include "pureid/tensor.hpp"

namespace pureid {

enum class Party { alice, bob };

std::string_view to_string(Party party);

/// Regroups the joint space from (0a, 0b, 1a, 1b, 2a, 2b) to (0a, 1a, 2a, 0b, 1b, 2b), so that
/// Alice-local and Bob-local operators become plain Kronecker factors.
class InterleaveMap {
public:
    explicit InterleaveMap(const HilbertLayout& layout);

    const HilbertLayout& layout() const { return layout_; }

    /// The unitary W with W |canonical> = |interleaved>.
    ComplexMatrix matrix() const;

    ComplexMatrix to_interleaved(const ComplexMatrix& op) const;
    ComplexMatrix from_interleaved(const ComplexMatrix& op) const;
    ComplexVector to_interleaved(const ComplexVector& v) const;
    ComplexVector from_interleaved(const ComplexVector& v) const;

    std::span<const Index> forward() const { return forward_; }

private:
    HilbertLayout layout_;
    std::vector<Index> forward_;  ///< canonical index -> interleaved index
    std::vector<Index> backward_;
};

InterleaveMap interleave_isomorphism(const HilbertLayout& layout);

struct FactorizationResidual {
    double d_residual;  ///< ||D - (D_a A_b + A_a D_b)||_max
    double a_residual;  ///< ||A - (D_a D_b + A_a A_b)||_max
};

FactorizationResidual local_factorization_check(const HilbertLayout& layout);

struct RotationAngle {
    double theta;
    double cos2theta;
    double sin2theta;
};

RotationAngle rotation_angle(const PriorPair& priors);

/// (eta1 - eta2 + D + (eta1 - eta2) A) / 2 on (C^d)^{(x)3}.
ComplexMatrix local_delta(int d, const PriorPair& priors);

/// (eta1 - eta2 - D - (eta1 - eta2) A) / 2, the operator a party faces when the other
/// found the antisymmetric sector.
ComplexMatrix antisymmetric_branch_operator(int d, const PriorPair& priors);

/// Every operator one party needs for the local protocol, all on (C^{d_k})^{(x)3}.
struct LocalFamily {
    Party party;
    int d;
    SymmetrySectors<double> sectors;
    ComplexMatrix D;
    ComplexMatrix A;
    ComplexMatrix X1;
    ComplexMatrix X2;
    ComplexMatrix Y1;
    ComplexMatrix Y2;
    ComplexMatrix delta;   ///< the local Delta whose mixed-sector eigenspaces define P+-
    ComplexMatrix Pplus;   ///< lambda_+ eigenspace of delta inside the mixed sector
    ComplexMatrix Pminus;  ///< lambda_- eigenspace of delta inside the mixed sector
    ComplexMatrix Qplus;   ///< +1 eigenspace of Y2 inside the mixed sector
    ComplexMatrix Qminus;  ///< -1 eigenspace of Y2 inside the mixed sector
    RotationAngle angle;
};

/// Requires eta1 <= eta2.
LocalFamily build_local_family(Party party, int d, const PriorPair& priors);

/// Conjugates every operator of the family by the local exchange of systems 1 and 2.
LocalFamily exchange_references(const LocalFamily& family);

inline constexpr std::array<std::string_view, 6> kLoccTermNames = {
    "S3a*P+b", "A3a*P-b", "P+a*S3b", "P-a*A3b", "Q+a*Q-b", "Q-a*Q+b"};

/// The separable guess element and its complement.
///
/// The six summands are Kronecker products of Alice and Bob projectors (in the interleaved
/// order) and sum to the element that triggers guess `summand_label`. With eta1 <= eta2 that
/// label is 1; otherwise the reference systems are exchanged, the construction runs with
/// swapped priors, and the summands build E2.
struct LoccPovm {
    HilbertLayout layout;
    PriorPair priors;
    bool mirrored;
    int summand_label;
    LocalFamily alice;
    LocalFamily bob;
    std::array<ComplexMatrix, 6> alice_factors;
    std::array<ComplexMatrix, 6> bob_factors;
    std::array<ComplexMatrix, 6> summands;  ///< canonical order
    ComplexMatrix E1L;
    ComplexMatrix E2L;
};

LoccPovm build_E1_locc(const HilbertLayout& layout, const PriorPair& priors);

struct DimIdentity {
    std::int64_t lhs;                 ///< dim V_M of the joint d = d_a d_b
    std::array<std::int64_t, 5> terms;  ///< S_a M_b, M_a S_b, A_a M_b, M_a A_b, M_a M_b / 2
    bool holds;
};

DimIdentity dim_identity_check(const HilbertLayout& layout);

struct BranchReport {
    std::array<double, 6> traces;  ///< tr[summand * Delta] per term
    double sa_total;
    double sa_expected;
    double mm_total;
    double mm_expected;
};

/// Requires eta1 <= eta2.
BranchReport branch_contribution_report(const HilbertLayout& layout, const PriorPair& priors);

struct LoccCertificate {
    double trace_locc;    ///< tr[E1L Delta]
    double trace_global;  ///< tr[P+ Delta], sum of positive eigenvalues
    double discrepancy;
    double p_locc;
    double p_global;
    double hermiticity_defect;
    double idempotency_defect;
    PovmCheck povm;
};

LoccCertificate certify_locc(const LoccPovm& locc, const GlobalSolution& global);

} // namespace pureid
