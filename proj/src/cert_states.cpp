#include "qcert/cert_states.hpp"

#include <cmath>

namespace qcert {

namespace {

void check_range(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
}

Vector kron_power(const Vector& v, long n, const Config& cfg) {
    Matrix m = v;
    Matrix p = tensor_power(m, n, cfg);
    return Vector(p.col(0));
}

}  // namespace

StateCertProblem::StateCertProblem(PureState psi_in, PureState phi_in, double delta_in,
                                   long copies_in)
    : psi(std::move(psi_in)), phi(std::move(phi_in)), delta(delta_in), copies(copies_in) {
    if (psi.dim() != phi.dim()) {
        throw ValidationError("state certification: dimensions differ");
    }
    check_range(delta, "delta");
    if (copies < 1) {
        throw ValidationError("state certification: copies must be >= 1");
    }
}

double p2_states(double overlap_m, double delta) {
    check_range(overlap_m, "overlap");
    check_range(delta, "delta");
    double root_delta = std::sqrt(delta);
    if (overlap_m <= root_delta) return 0.0;
    double value = overlap_m * std::sqrt(1.0 - delta) -
                   std::sqrt(std::max(0.0, 1.0 - overlap_m * overlap_m)) * root_delta;
    return value * value;
}

StateStrategy optimal_state_measurement(const StateCertProblem& p, const Config& cfg) {
    Vector psi = p.psi.amplitudes();
    Vector phi = p.phi.amplitudes();
    if (p.copies > 1) {
        psi = kron_power(psi, p.copies, cfg);
        phi = kron_power(phi, p.copies, cfg);
    }
    const Eigen::Index d = psi.size();
    const double delta = p.delta;

    std::vector<std::string> flags;

    // Rotate phi so the overlap is real nonnegative; the closed-form
    // measurement assumes a real overlap.
    Complex overlap = (psi.adjoint() * phi)(0, 0);
    double m = std::abs(overlap);
    if (m > 1e-300) {
        phi *= std::conj(overlap) / m;
    }

    Vector omega;
    if (m >= 1.0 - 1e-12) {
        // Colinear states: phi - m psi vanishes, so orthogonalize the first
        // canonical basis vector that is not parallel to psi.
        Vector perp;
        for (Eigen::Index k = 0; k < d; ++k) {
            Vector cand = Vector::Zero(d);
            cand(k) = 1.0;
            cand -= psi * (psi.adjoint() * cand)(0, 0);
            if (cand.norm() > 0.5) {
                perp = cand / cand.norm();
                break;
            }
        }
        omega = std::sqrt(1.0 - delta) * psi - std::sqrt(delta) * perp;
        flags.push_back("degenerate: identical states");
    } else if (m <= std::sqrt(delta)) {
        Vector tilde = psi - (phi.adjoint() * psi)(0, 0) * phi;
        omega = tilde / tilde.norm();
    } else {
        Vector tilde = phi - (psi.adjoint() * phi)(0, 0) * psi;
        Vector perp = tilde / tilde.norm();
        omega = std::sqrt(1.0 - delta) * psi - std::sqrt(delta) * perp;
    }

    Effect effect = Effect::projector(omega / omega.norm(), cfg);
    double p1 = 1.0 - (psi.adjoint() * effect.matrix() * psi)(0, 0).real();
    double p2 = (phi.adjoint() * effect.matrix() * phi)(0, 0).real();
    p1 = std::max(0.0, p1);
    p2 = std::max(0.0, p2);

    if (p1 > delta + cfg.tol_prob) {
        throw SolverError("state strategy violates the significance bound");
    }
    return StateStrategy{std::move(effect), p2, p1, std::move(flags)};
}

double p2_states_parallel(double overlap_m, double delta, long n) {
    check_range(overlap_m, "overlap");
    check_range(delta, "delta");
    if (n < 1) {
        throw ValidationError("copies must be >= 1");
    }
    return p2_states(std::pow(overlap_m, static_cast<double>(n)), delta);
}

std::optional<long> min_copies_perfect_states(double overlap_m, double delta) {
    check_range(overlap_m, "overlap");
    check_range(delta, "delta");
    double root_delta = std::sqrt(delta);
    if (overlap_m <= root_delta) return 1;
    if (overlap_m >= 1.0) return std::nullopt;   // identical states, delta < 1
    if (root_delta <= 0.0) return std::nullopt;  // m^N > 0 for every finite N

    double ratio = std::log(root_delta) / std::log(overlap_m);
    long n = std::max(1L, static_cast<long>(std::ceil(ratio - 1e-9)));
    while (std::pow(overlap_m, static_cast<double>(n)) > root_delta + 1e-15) ++n;
    while (n > 1 &&
           std::pow(overlap_m, static_cast<double>(n - 1)) <= root_delta + 1e-15) {
        --n;
    }
    return n;
}

}  // namespace qcert
