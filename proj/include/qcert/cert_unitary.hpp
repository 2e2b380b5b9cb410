#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcert/numrange.hpp"

namespace qcert {

/// Certification of the unitary channel pair (Phi_1, Phi_U); the general
/// two-unitary problem reduces to this by pre-multiplying with V^dagger.
struct UnitaryCertProblem {
    UnitaryOperator u;  // alternative hypothesis
    double delta = 0.0;
    long copies = 1;

    UnitaryCertProblem(UnitaryOperator u_in, double delta_in, long copies_in = 1);
};

struct UnitaryStrategy {
    PureState input;  // optimal entanglement-free input state
    Effect effect;    // accepts H0
    double p2 = 0.0;
    double p1 = 0.0;
    std::vector<std::string> flags;
};

/// Minimized type-II error: nu_{sqrt(1-delta)}(U)^2.
double p2_unitary(const UnitaryOperator& u, double delta,
                  const Config& cfg = default_config());

/// Optimal input state and measurement. The input state does not depend on
/// delta: the equal superposition of the extreme-pair eigenvectors when the
/// numerical range misses the origin, otherwise a probability-vector
/// superposition placing <psi_0|U|psi_0> at zero. For copies > 1 the tensor
/// power is materialized first (subject to the dimension cap).
UnitaryStrategy optimal_unitary_strategy(const UnitaryCertProblem& p,
                                         const Config& cfg = default_config());

/// N parallel uses, via the spread identity for tensor powers.
double p2_unitary_parallel(const UnitaryOperator& u, double delta, long n,
                           const Config& cfg = default_config());

/// Smallest N achieving perfect certification, ceil(2 arccos(sqrt(delta)) /
/// Theta); nullopt when Theta = 0 and delta < 1.
std::optional<long> min_copies_perfect_unitary(const UnitaryOperator& u, double delta,
                                               const Config& cfg = default_config());

/// Symmetric-discrimination error floor (1 - sqrt(1 - nu(U)^2)) / 2 from the
/// Helstrom bound on the diamond distance of the two channels.
double helstrom_error_unitary(const UnitaryOperator& u,
                              const Config& cfg = default_config());

/// Probability weights over eigenvalues expressing 0 as a convex combination
/// of at most three of them (plane Caratheodory). Requires the spread to
/// cover at least a half-circle. Exposed for the strategy construction and
/// its tests.
std::vector<double> zero_combination_weights(const std::vector<double>& phases,
                                             int idx_min, int idx_max);

}  // namespace qcert
