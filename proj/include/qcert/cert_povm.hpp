#pragma once

#include <string>
#include <vector>

#include "qcert/cert_states.hpp"
#include "qcert/numrange.hpp"

namespace qcert {

/// Certification of the von Neumann measurement pair (P_1, P_U).
struct PovmCertProblem {
    UnitaryOperator u;  // alternative hypothesis P_U
    double delta = 0.0;
    long copies = 1;

    PovmCertProblem(UnitaryOperator u_in, double delta_in, long copies_in = 1);
};

/// Result of maximizing nu(U E) over diagonal unitaries E. E is gauge-fixed
/// so its first diagonal entry is 1. For d = 2 the single phase is found by
/// dense scan plus local refinement and the optimum is certified to tol_opt;
/// for d >= 3 multistart descent cannot certify global optimality and the
/// result carries certified = false ("uncertified optimum").
struct PhaseOptimum {
    UnitaryOperator e0;
    double nu_star = 0.0;
    bool certified = false;
};

PhaseOptimum optimize_e0(const UnitaryOperator& u, const Config& cfg = default_config());

struct DiamondDistance {
    double value = 0.0;
    bool certified = false;
};

/// ||P_U - P_1||_diamond = 2 sqrt(1 - nu_star^2).
DiamondDistance diamond_distance_povm(const UnitaryOperator& u,
                                      const Config& cfg = default_config());

/// Minimized type-II error max_E nu_{sqrt(1-delta)}(UE)^2, computed at the
/// nu-maximizing E0 (nu_q is increasing in nu at fixed q).
double p2_povm(const UnitaryOperator& u, double delta,
               const Config& cfg = default_config());

/// Discriminator state rho_0 for the branch with positive nu: a mixture of
/// equal superpositions of the extreme-pair eigenvectors of U*e0 over
/// equispaced relative phases, with weights chosen so that, entrywise,
/// <i|rho_0 U e0|i> = c <i|rho_0|i> (c the midpoint of the extreme
/// eigenvalues) and <i|(Ue0)^dagger rho_0 (Ue0)|i> = <i|rho_0|i>. Throws
/// "discriminator feasibility failure" when no mixture meets tol_feas.
DensityOperator construct_rho0(const UnitaryOperator& u, const UnitaryOperator& e0,
                               const Config& cfg = default_config());

/// Full certification strategy following the optimal protocol: entangled
/// input on d^2, measurement of the first factor, label-conditioned binary
/// effects.
struct DephasedStrategy {
    UnitaryOperator e0;
    DensityOperator rho0;
    PureState input;                         // sum_i sqrt(rho0)|i> (x) |i>
    std::vector<Effect> conditional_effects;  // index = label
    double p2 = 0.0;
    double p1 = 0.0;
    std::vector<std::string> flags;
};

DephasedStrategy assemble_povm_strategy(const PovmCertProblem& p,
                                        const Config& cfg = default_config());

/// N parallel uses: the single-copy optimal phases tensorize, so the value
/// follows from the spread of U*e0 via the tensor-power spread identity.
double p2_povm_parallel(const UnitaryOperator& u, double delta, long n,
                        const Config& cfg = default_config());

/// Feasibility solve for the perfect-discrimination branch: a density
/// operator with diag(rho U) = 0, found by alternating projections between
/// the PSD cone and the affine constraint set.
DensityOperator zero_diagonal_discriminator(const UnitaryOperator& u,
                                            const Config& cfg = default_config());

}  // namespace qcert
