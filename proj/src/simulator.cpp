#include "qcert/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qcert/rng.hpp"

namespace qcert {

namespace {

Matrix measure_first_factor(const VonNeumannMeasurement& m, const Matrix& rho,
                            const Config& cfg) {
    const int d = m.dim();
    const Eigen::Index total = rho.rows();
    if (total % d != 0) {
        throw ValidationError("dimension factorization mismatch");
    }
    const Eigen::Index d_aux = total / d;
    Matrix identity = Matrix::Identity(d_aux, d_aux);
    Matrix out = Matrix::Zero(total, total);
    for (int label = 0; label < d; ++label) {
        Matrix bra = Vector::Unit(d, label) * m.effect_vector(label).adjoint();
        Matrix kraus = tensor_product(bra, identity, cfg);
        out += kraus * rho * kraus.adjoint();
    }
    return out;
}

struct PovmContext {
    Matrix u_eff;
    Vector joint;
    Matrix omega;  // block-diagonal accepting effect on the joint space
};

PovmContext povm_context(const PovmCertProblem& problem, const DephasedStrategy& strategy,
                         const Config& cfg) {
    PovmContext ctx;
    ctx.u_eff = problem.copies > 1 ? tensor_power(problem.u.matrix(), problem.copies, cfg)
                                   : problem.u.matrix();
    const int d = static_cast<int>(ctx.u_eff.rows());
    if (strategy.input.dim() != d * d ||
        strategy.conditional_effects.size() != static_cast<size_t>(d)) {
        throw ValidationError("dim mismatch between measurement problem and strategy");
    }
    ctx.joint = strategy.input.amplitudes();
    ctx.omega = Matrix::Zero(static_cast<Eigen::Index>(d) * d,
                             static_cast<Eigen::Index>(d) * d);
    for (int label = 0; label < d; ++label) {
        Matrix block = Matrix::Zero(d, d);
        block(label, label) = 1.0;
        ctx.omega += tensor_product(block, strategy.conditional_effects[static_cast<size_t>(label)].matrix(), cfg);
    }
    return ctx;
}

ErrorPair exact_state(const StateCertProblem& problem, const StateStrategy& strategy,
                      const Config& cfg) {
    Vector psi = problem.psi.amplitudes();
    Vector phi = problem.phi.amplitudes();
    if (problem.copies > 1) {
        psi = tensor_power(psi, problem.copies, cfg);
        phi = tensor_power(phi, problem.copies, cfg);
    }
    if (strategy.effect.dim() != psi.size()) {
        throw ValidationError("dim mismatch between state problem and strategy");
    }
    Matrix rho0 = psi * psi.adjoint();
    Matrix rho1 = phi * phi.adjoint();
    const Matrix& omega = strategy.effect.matrix();
    double p1 = 1.0 - (omega * rho0).trace().real();
    double p2 = (omega * rho1).trace().real();
    return ErrorPair{std::max(0.0, p1), std::max(0.0, p2)};
}

ErrorPair exact_unitary(const UnitaryCertProblem& problem, const UnitaryStrategy& strategy,
                        const Config& cfg) {
    Matrix u = problem.copies > 1 ? tensor_power(problem.u.matrix(), problem.copies, cfg)
                                  : problem.u.matrix();
    if (strategy.input.dim() != u.rows() || strategy.effect.dim() != u.rows()) {
        throw ValidationError("dim mismatch between unitary problem and strategy");
    }
    Vector in = strategy.input.amplitudes();
    Matrix rho_in = in * in.adjoint();
    Matrix rho0 = rho_in;                      // identity channel output
    Matrix rho1 = u * rho_in * u.adjoint();    // alternative channel output
    const Matrix& omega = strategy.effect.matrix();
    double p1 = 1.0 - (omega * rho0).trace().real();
    double p2 = (omega * rho1).trace().real();
    return ErrorPair{std::max(0.0, p1), std::max(0.0, p2)};
}

ErrorPair exact_povm(const PovmCertProblem& problem, const DephasedStrategy& strategy,
                     const Config& cfg) {
    PovmContext ctx = povm_context(problem, strategy, cfg);
    const int d = static_cast<int>(ctx.u_eff.rows());
    Matrix rho_in = ctx.joint * ctx.joint.adjoint();
    Matrix out0 =
        measure_first_factor(VonNeumannMeasurement::computational(d), rho_in, cfg);
    Matrix out1 = measure_first_factor(
        VonNeumannMeasurement(UnitaryOperator(ctx.u_eff, cfg)), rho_in, cfg);
    double p1 = 1.0 - (ctx.omega * out0).trace().real();
    double p2 = (ctx.omega * out1).trace().real();
    return ErrorPair{std::max(0.0, p1), std::max(0.0, p2)};
}

struct ShotModel {
    // Cumulative label distribution; empty for problems without a label stage.
    std::vector<double> label_cdf;
    // Accept probability per label (or the single accept probability).
    std::vector<double> accept;
};

ShotModel shot_model(const CertProblem& problem, const Strategy& strategy, Truth truth,
                     const Config& cfg) {
    ShotModel model;
    if (std::holds_alternative<StateCertProblem>(problem)) {
        const auto& p = std::get<StateCertProblem>(problem);
        const auto& s = std::get<StateStrategy>(strategy);
        Vector state = truth == Truth::H0 ? p.psi.amplitudes() : p.phi.amplitudes();
        if (p.copies > 1) state = tensor_power(state, p.copies, cfg);
        model.accept.push_back(
            std::clamp((state.adjoint() * s.effect.matrix() * state)(0, 0).real(), 0.0, 1.0));
    } else if (std::holds_alternative<UnitaryCertProblem>(problem)) {
        const auto& p = std::get<UnitaryCertProblem>(problem);
        const auto& s = std::get<UnitaryStrategy>(strategy);
        Matrix u = p.copies > 1 ? tensor_power(p.u.matrix(), p.copies, cfg) : p.u.matrix();
        Vector out = truth == Truth::H0 ? s.input.amplitudes()
                                        : Vector(u * s.input.amplitudes());
        model.accept.push_back(
            std::clamp((out.adjoint() * s.effect.matrix() * out)(0, 0).real(), 0.0, 1.0));
    } else {
        const auto& p = std::get<PovmCertProblem>(problem);
        const auto& s = std::get<DephasedStrategy>(strategy);
        PovmContext ctx = povm_context(p, s, cfg);
        const int d = static_cast<int>(ctx.u_eff.rows());
        VonNeumannMeasurement measurement =
            truth == Truth::H0 ? VonNeumannMeasurement::computational(d)
                               : VonNeumannMeasurement(UnitaryOperator(ctx.u_eff, cfg));
        double cumulative = 0.0;
        for (int label = 0; label < d; ++label) {
            auto [prob, v] = conditional_component(measurement, ctx.joint, label);
            cumulative += prob;
            model.label_cdf.push_back(cumulative);
            double acc = 0.0;
            if (prob > cfg.tol_prob) {
                const Matrix& gamma =
                    s.conditional_effects[static_cast<size_t>(label)].matrix();
                acc = std::clamp((v.adjoint() * gamma * v)(0, 0).real() / prob, 0.0, 1.0);
            }
            model.accept.push_back(acc);
        }
        model.label_cdf.back() = std::max(model.label_cdf.back(), 1.0);
    }
    return model;
}

void check_kind_match(const CertProblem& problem, const Strategy& strategy) {
    bool ok = (std::holds_alternative<StateCertProblem>(problem) &&
               std::holds_alternative<StateStrategy>(strategy)) ||
              (std::holds_alternative<UnitaryCertProblem>(problem) &&
               std::holds_alternative<UnitaryStrategy>(strategy)) ||
              (std::holds_alternative<PovmCertProblem>(problem) &&
               std::holds_alternative<DephasedStrategy>(strategy));
    if (!ok) {
        throw ValidationError("strategy kind does not match problem kind");
    }
}

}  // namespace

ErrorPair exact_errors(const CertProblem& problem, const Strategy& strategy,
                       const Config& cfg) {
    check_kind_match(problem, strategy);
    if (std::holds_alternative<StateCertProblem>(problem)) {
        return exact_state(std::get<StateCertProblem>(problem),
                           std::get<StateStrategy>(strategy), cfg);
    }
    if (std::holds_alternative<UnitaryCertProblem>(problem)) {
        return exact_unitary(std::get<UnitaryCertProblem>(problem),
                             std::get<UnitaryStrategy>(strategy), cfg);
    }
    return exact_povm(std::get<PovmCertProblem>(problem),
                      std::get<DephasedStrategy>(strategy), cfg);
}

SimReport run_protocol(const CertProblem& problem, const Strategy& strategy, Truth truth,
                       long shots, std::uint64_t seed, const Config& cfg) {
    if (shots < 1) {
        throw ValidationError("shots must be >= 1");
    }
    check_kind_match(problem, strategy);

    ErrorPair exact = exact_errors(problem, strategy, cfg);
    ShotModel model = shot_model(problem, strategy, truth, cfg);

    long accepted = 0;
    for (long shot = 0; shot < shots; ++shot) {
        SplitMix64 gen = SplitMix64::stream(seed, static_cast<std::uint64_t>(shot));
        size_t label = 0;
        if (!model.label_cdf.empty()) {
            double u = gen.next_double();
            label = static_cast<size_t>(
                std::lower_bound(model.label_cdf.begin(), model.label_cdf.end(), u) -
                model.label_cdf.begin());
            label = std::min(label, model.label_cdf.size() - 1);
        }
        if (gen.next_double() < model.accept[label]) ++accepted;
    }

    SimReport report;
    report.exact_p1 = exact.p1;
    report.exact_p2 = exact.p2;
    report.truth = truth;
    report.shots = shots;
    report.seed = seed;
    report.generator = SplitMix64::name();

    double n = static_cast<double>(shots);
    if (truth == Truth::H0) {
        double rate = static_cast<double>(shots - accepted) / n;
        report.empirical_p1 = rate;
        report.ci_halfwidth_p1 = 4.0 * std::sqrt(rate * (1.0 - rate) / n);
    } else {
        double rate = static_cast<double>(accepted) / n;
        report.empirical_p2 = rate;
        report.ci_halfwidth_p2 = 4.0 * std::sqrt(rate * (1.0 - rate) / n);
    }
    return report;
}

double brute_force_best_p2(const PureState& psi, const PureState& phi, double delta,
                           double resolution) {
    if (psi.dim() != 2 || phi.dim() != 2) {
        throw ValidationError("brute force oracle: dimension must be 2");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw ValidationError("delta must lie in [0, 1]");
    }
    if (!(resolution > 0.0)) {
        throw ValidationError("resolution must be positive");
    }
    const Vector& vp = psi.amplitudes();
    const Vector& vf = phi.amplitudes();
    const double r = 1.0 - delta;

    // For a fixed eigenbasis {n, n_perp} the effect is diag(a, b); the bound
    // minimization over (a, b) in the unit square with one halfplane
    // constraint is solved exactly on its vertex candidates.
    auto best_for_basis = [&](double theta, double beta) {
        Complex n0 = std::cos(theta / 2.0);
        Complex n1 = std::polar(std::sin(theta / 2.0), beta);
        Vector n(2), np(2);
        n << n0, n1;
        np << -std::conj(n1), std::conj(n0);
        double kn = std::norm((n.adjoint() * vp)(0, 0));
        double kp = std::norm((np.adjoint() * vp)(0, 0));
        double cn = std::norm((n.adjoint() * vf)(0, 0));
        double cp = std::norm((np.adjoint() * vf)(0, 0));

        double best = cn + cp;  // a = b = 1, always feasible
        auto try_point = [&](double a, double b) {
            if (a < -1e-12 || a > 1.0 + 1e-12 || b < -1e-12 || b > 1.0 + 1e-12) return;
            if (kn * a + kp * b < r - 1e-12) return;
            best = std::min(best, cn * a + cp * b);
        };
        try_point(0.0, 0.0);
        try_point(1.0, 0.0);
        try_point(0.0, 1.0);
        if (kn > 1e-15) {
            try_point(r / kn, 0.0);
            try_point((r - kp) / kn, 1.0);
        }
        if (kp > 1e-15) {
            try_point(0.0, r / kp);
            try_point(1.0, (r - kn) / kp);
        }
        return best;
    };

    double best_value = std::numeric_limits<double>::infinity();
    double best_theta = 0.0, best_beta = 0.0;
    double step_theta = M_PI / 180.0;
    double step_beta = 2.0 * M_PI / 360.0;
    for (int i = 0; i <= 180; ++i) {
        for (int j = 0; j < 360; ++j) {
            double theta = i * step_theta;
            double beta = j * step_beta;
            double value = best_for_basis(theta, beta);
            if (value < best_value) {
                best_value = value;
                best_theta = theta;
                best_beta = beta;
            }
        }
    }

    while (step_theta > resolution || step_beta > resolution) {
        step_theta /= 10.0;
        step_beta /= 10.0;
        double t0 = best_theta, b0 = best_beta;
        for (int i = -20; i <= 20; ++i) {
            for (int j = -20; j <= 20; ++j) {
                double theta = std::clamp(t0 + i * step_theta, 0.0, M_PI);
                double beta = b0 + j * step_beta;
                double value = best_for_basis(theta, beta);
                if (value < best_value) {
                    best_value = value;
                    best_theta = theta;
                    best_beta = beta;
                }
            }
        }
    }
    return best_value;
}

}  // namespace qcert
