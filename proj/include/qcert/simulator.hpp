#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "qcert/cert_povm.hpp"
#include "qcert/cert_states.hpp"
#include "qcert/cert_unitary.hpp"

namespace qcert {

using CertProblem = std::variant<StateCertProblem, UnitaryCertProblem, PovmCertProblem>;
using Strategy = std::variant<StateStrategy, UnitaryStrategy, DephasedStrategy>;

enum class Truth { H0, H1 };

struct ErrorPair {
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Exact error rates of a strategy, computed by full density-matrix
/// contraction of the protocol. No closed-form shortcut from the
/// certification modules is reused, so this is an independent check of the
/// analytic values.
ErrorPair exact_errors(const CertProblem& problem, const Strategy& strategy,
                       const Config& cfg = default_config());

/// Monte-Carlo run under a single truth. Per-shot randomness comes from a
/// stream derived as (seed, shot index), so the report is reproducible and
/// independent of evaluation order. Confidence half-widths use the normal
/// approximation with z = 4.
struct SimReport {
    double exact_p1 = 0.0;
    double exact_p2 = 0.0;
    Truth truth = Truth::H0;
    long shots = 0;
    std::optional<double> empirical_p1;
    std::optional<double> empirical_p2;
    std::optional<double> ci_halfwidth_p1;
    std::optional<double> ci_halfwidth_p2;
    std::uint64_t seed = 0;
    std::string generator;
};

SimReport run_protocol(const CertProblem& problem, const Strategy& strategy,
                       Truth truth, long shots, std::uint64_t seed,
                       const Config& cfg = default_config());

/// Neyman-Pearson grid oracle at qubit scale: minimum of <phi|Omega|phi>
/// over a dense parameterization of all 2x2 effects subject to
/// <psi|Omega|psi> >= 1 - delta. `resolution` is the final angular grid step
/// reached by successive refinement.
double brute_force_best_p2(const PureState& psi, const PureState& phi, double delta,
                           double resolution = 1e-4);

}  // namespace qcert
