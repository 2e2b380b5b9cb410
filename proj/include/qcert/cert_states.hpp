#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcert/qmat.hpp"

namespace qcert {

/// Two-point certification of pure states: H0 is |psi>, H1 is |phi>, type-I
/// error bounded by delta, with `copies` parallel uses.
struct StateCertProblem {
    PureState psi;
    PureState phi;
    double delta = 0.0;
    long copies = 1;

    StateCertProblem(PureState psi_in, PureState phi_in, double delta_in,
                     long copies_in = 1);
};

struct StateStrategy {
    Effect effect;  // accepts H0
    double p2 = 0.0;
    double p1 = 0.0;
    std::vector<std::string> flags;
};

/// Minimized type-II error for overlap m = |<psi|phi>| at significance delta:
/// 0 when m <= sqrt(delta), else (m sqrt(1-delta) - sqrt(1-m^2) sqrt(delta))^2.
double p2_states(double overlap_m, double delta);

/// Optimal accepting effect for a single-copy problem. For copies > 1 the
/// problem is first expanded into tensor powers (subject to the dimension
/// cap). A global phase is applied to phi so the overlap is real nonnegative
/// before the closed-form construction.
StateStrategy optimal_state_measurement(const StateCertProblem& p,
                                        const Config& cfg = default_config());

/// N parallel copies: p2_states(m^n, delta).
double p2_states_parallel(double overlap_m, double delta, long n);

/// Smallest N with m^N <= sqrt(delta); nullopt when no finite N works.
std::optional<long> min_copies_perfect_states(double overlap_m, double delta);

}  // namespace qcert
