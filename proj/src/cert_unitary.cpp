#include "qcert/cert_unitary.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qcert/cert_states.hpp"

namespace qcert {

namespace {

void check_delta(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw ValidationError("delta must lie in [0, 1]");
    }
}

// Spread of the N-fold tensor power. Sum phases fill [0, N*Theta] on a grid
// no coarser than Theta, so the covering arc is N*Theta until it wraps; any
// wrapped configuration already covers at least a half-circle.
double tensor_power_spread(double theta, long n) {
    double total = theta * static_cast<double>(n);
    return std::min(total, 2.0 * M_PI);
}

}  // namespace

UnitaryCertProblem::UnitaryCertProblem(UnitaryOperator u_in, double delta_in,
                                       long copies_in)
    : u(std::move(u_in)), delta(delta_in), copies(copies_in) {
    check_delta(delta);
    if (copies < 1) {
        throw ValidationError("unitary certification: copies must be >= 1");
    }
}

double p2_unitary(const UnitaryOperator& u, double delta, const Config& cfg) {
    check_delta(delta);
    double nu_q = nu_q_unitary(u, std::sqrt(1.0 - delta), cfg);
    return nu_q * nu_q;
}

std::vector<double> zero_combination_weights(const std::vector<double>& phases,
                                             int idx_min, int idx_max) {
    const int n = static_cast<int>(phases.size());
    std::vector<Complex> lambda(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        lambda[static_cast<size_t>(i)] = std::polar(1.0, phases[static_cast<size_t>(i)]);
    }
    std::vector<double> weights(static_cast<size_t>(n), 0.0);

    // Antipodal pairs first, preferring the extreme pair.
    std::vector<std::pair<int, int>> pairs;
    pairs.emplace_back(idx_min, idx_max);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    for (auto [i, j] : pairs) {
        if (i == j) continue;
        if (std::abs(lambda[static_cast<size_t>(i)] + lambda[static_cast<size_t>(j)]) < 1e-9) {
            weights[static_cast<size_t>(i)] = 0.5;
            weights[static_cast<size_t>(j)] = 0.5;
            return weights;
        }
    }

    // Triangles containing the origin, preferring those built on the extreme
    // pair, then lexicographic.
    std::vector<std::array<int, 3>> triples;
    for (int k = 0; k < n; ++k) {
        if (k == idx_min || k == idx_max) continue;
        std::array<int, 3> t{idx_min, idx_max, k};
        std::sort(t.begin(), t.end());
        triples.push_back(t);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) triples.push_back({i, j, k});
        }
    }

    for (const auto& t : triples) {
        Complex a = lambda[static_cast<size_t>(t[0])];
        Complex b = lambda[static_cast<size_t>(t[1])];
        Complex c = lambda[static_cast<size_t>(t[2])];
        // Solve w_a (a - c) + w_b (b - c) = -c for barycentric coordinates.
        double m00 = (a - c).real(), m01 = (b - c).real();
        double m10 = (a - c).imag(), m11 = (b - c).imag();
        double det = m00 * m11 - m01 * m10;
        if (std::abs(det) < 1e-12) continue;
        double wa = (-c.real() * m11 + c.imag() * m01) / det;
        double wb = (c.real() * m10 - c.imag() * m00) / det;
        double wc = 1.0 - wa - wb;
        if (wa < -1e-10 || wb < -1e-10 || wc < -1e-10) continue;
        weights[static_cast<size_t>(t[0])] = std::max(0.0, wa);
        weights[static_cast<size_t>(t[1])] = std::max(0.0, wb);
        weights[static_cast<size_t>(t[2])] = std::max(0.0, wc);
        double total = 0.0;
        for (double w : weights) total += w;
        for (double& w : weights) w /= total;
        return weights;
    }
    throw SolverError("zero combination: origin not covered by eigenvalue hull");
}

UnitaryStrategy optimal_unitary_strategy(const UnitaryCertProblem& p, const Config& cfg) {
    UnitaryOperator u = p.u;
    if (p.copies > 1) {
        u = UnitaryOperator(tensor_power(p.u.matrix(), p.copies, cfg), cfg);
    }
    const int d = u.dim();

    UnitaryEigensystem eig = eig_unitary(u, cfg);
    SpectralSpread spread = spread_of_phases(eig.phases);

    Vector psi0(d);
    if (spread.theta >= M_PI - 1e-12) {
        // 0 lies in W(U): superpose with weights placing <psi|U|psi> at zero.
        std::vector<double> weights =
            zero_combination_weights(eig.phases, spread.idx_min, spread.idx_max);
        psi0.setZero();
        for (int j = 0; j < d; ++j) {
            psi0 += std::sqrt(weights[static_cast<size_t>(j)]) * eig.vectors.col(j);
        }
    } else {
        psi0 = (eig.vectors.col(spread.idx_min) + eig.vectors.col(spread.idx_max)) /
               std::sqrt(2.0);
    }
    psi0 /= psi0.norm();

    PureState input(psi0, cfg);
    PureState output(u.matrix() * psi0, cfg);
    StateStrategy conditional =
        optimal_state_measurement(StateCertProblem(input, output, p.delta), cfg);

    return UnitaryStrategy{std::move(input), std::move(conditional.effect),
                           conditional.p2, conditional.p1,
                           std::move(conditional.flags)};
}

double p2_unitary_parallel(const UnitaryOperator& u, double delta, long n,
                           const Config& cfg) {
    check_delta(delta);
    if (n < 1) {
        throw ValidationError("copies must be >= 1");
    }
    double theta = spectral_spread(u, cfg).theta;
    double m = nu_from_spread(tensor_power_spread(theta, n));
    return p2_states(m, delta);
}

std::optional<long> min_copies_perfect_unitary(const UnitaryOperator& u, double delta,
                                               const Config& cfg) {
    check_delta(delta);
    double theta = spectral_spread(u, cfg).theta;
    double target = 2.0 * std::acos(std::sqrt(delta));
    if (theta < 1e-12) {
        if (target <= 1e-12) return 1;
        return std::nullopt;
    }
    long n = std::max(1L, static_cast<long>(std::ceil(target / theta - 1e-9)));
    while (static_cast<double>(n) * theta < target - 1e-9) ++n;
    while (n > 1 && static_cast<double>(n - 1) * theta >= target - 1e-9) --n;
    return n;
}

double helstrom_error_unitary(const UnitaryOperator& u, const Config& cfg) {
    double nu = nu_unitary(u, cfg);
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - nu * nu)));
}

}  // namespace qcert
