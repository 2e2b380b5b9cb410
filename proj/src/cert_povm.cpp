#include "qcert/cert_povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qcert/optim.hpp"

namespace qcert {

namespace {

constexpr double kZeroNuCutoff = 1e-9;  // ||.||_diamond = 2 iff nu = 0

Matrix diagonal_from_phases(int d, const RealVector& phi) {
    Matrix e = Matrix::Zero(d, d);
    e(0, 0) = 1.0;
    for (int i = 1; i < d; ++i) {
        e(i, i) = std::polar(1.0, phi(i - 1));
    }
    return e;
}

struct SpreadPoint {
    double spread = 0.0;
    RealVector gradient;  // d/dphi_i of the spread, i = 1..d-1
    UnitaryEigensystem eig;
    SpectralSpread arc;
};

// Spread of U*E(phi) together with its derivative. Eigenphases respond to
// the diagonal phases with rate |<i|x_j>|^2, so the spread gradient is the
// entrywise magnitude mismatch of the two extreme eigenvectors.
SpreadPoint spread_point(const Matrix& u, const RealVector& phi, const Config& cfg) {
    const int d = static_cast<int>(u.rows());
    SpreadPoint out;
    Matrix v = u * diagonal_from_phases(d, phi);
    out.eig = eig_unitary(UnitaryOperator(v, cfg), cfg);
    out.arc = spread_of_phases(out.eig.phases);
    out.spread = out.arc.theta;
    out.gradient.resize(d - 1);
    for (int i = 1; i < d; ++i) {
        double lo = std::norm(out.eig.vectors(i, out.arc.idx_min));
        double hi = std::norm(out.eig.vectors(i, out.arc.idx_max));
        out.gradient(i - 1) = hi - lo;
    }
    return out;
}

double spread_only(const Matrix& u, const RealVector& phi, const Config& cfg) {
    const int d = static_cast<int>(u.rows());
    Matrix v = u * diagonal_from_phases(d, phi);
    return spectral_spread(UnitaryOperator(v, cfg), cfg).theta;
}

// Drive the stationarity system gradient(phi) = 0 to machine precision:
// a few descent steps to settle into the basin, then damped Newton with a
// finite-difference Jacobian of the analytic gradient.
RealVector polish_phases(const Matrix& u, RealVector phi, const Config& cfg) {
    const int n = static_cast<int>(phi.size());
    if (n == 0) return phi;

    for (int iter = 0; iter < 200; ++iter) {
        SpreadPoint p = spread_point(u, phi, cfg);
        if (p.gradient.cwiseAbs().maxCoeff() < 1e-10) break;
        double step = 0.5;
        while (step > 1e-14 &&
               spread_only(u, phi - step * p.gradient, cfg) >= p.spread) {
            step *= 0.5;
        }
        if (step <= 1e-14) break;
        phi -= step * p.gradient;
    }

    const double h = 1e-6;
    for (int iter = 0; iter < 60; ++iter) {
        RealVector g = spread_point(u, phi, cfg).gradient;
        double gn = g.cwiseAbs().maxCoeff();
        if (gn < 1e-13) break;
        RealMatrix jac(n, n);
        for (int j = 0; j < n; ++j) {
            RealVector lo = phi, hi = phi;
            lo(j) -= h;
            hi(j) += h;
            jac.col(j) = (spread_point(u, hi, cfg).gradient -
                          spread_point(u, lo, cfg).gradient) /
                         (2.0 * h);
        }
        Eigen::PartialPivLU<RealMatrix> lu(jac);
        RealVector dphi = lu.solve(g);
        if (!dphi.allFinite()) break;
        double s = 1.0;
        while (s > 1e-12 &&
               spread_point(u, phi - s * dphi, cfg).gradient.cwiseAbs().maxCoeff() >= gn) {
            s *= 0.5;
        }
        if (s <= 1e-12) break;
        phi -= s * dphi;
    }
    return phi;
}

}  // namespace

PovmCertProblem::PovmCertProblem(UnitaryOperator u_in, double delta_in, long copies_in)
    : u(std::move(u_in)), delta(delta_in), copies(copies_in) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw ValidationError("delta must lie in [0, 1]");
    }
    if (copies < 1) {
        throw ValidationError("measurement certification: copies must be >= 1");
    }
    if (u.dim() < 2) {
        throw ValidationError("measurement certification: dimension must be >= 2");
    }
}

PhaseOptimum optimize_e0(const UnitaryOperator& u, const Config& cfg) {
    const int d = u.dim();
    const Matrix& m = u.matrix();

    if (d == 1) {
        return PhaseOptimum{UnitaryOperator::identity(1), 1.0, true};
    }

    RealVector best_phi;
    double best_spread = std::numeric_limits<double>::infinity();
    auto consider = [&](const RealVector& phi) {
        double s = spread_only(m, phi, cfg);
        if (s < best_spread) {
            best_spread = s;
            best_phi = phi;
        }
    };

    if (d == 2) {
        const int n_scan = 8192;
        RealVector phi(1);
        for (int k = 0; k < n_scan; ++k) {
            phi(0) = 2.0 * M_PI * k / n_scan;
            consider(phi);
        }
    } else {
        const int n_params = d - 1;
        std::vector<RealVector> starts;
        starts.push_back(RealVector::Zero(n_params));

        if (n_params <= 4) {
            const int per_axis = (n_params <= 2) ? 16 : 8;
            long total = 1;
            for (int i = 0; i < n_params; ++i) total *= per_axis;
            for (long idx = 0; idx < total; ++idx) {
                RealVector phi(n_params);
                long rem = idx;
                for (int i = 0; i < n_params; ++i) {
                    phi(i) = 2.0 * M_PI * (rem % per_axis) / per_axis;
                    rem /= per_axis;
                }
                consider(phi);
            }
            starts.push_back(best_phi);
        }
        SplitMix64 gen = SplitMix64::stream(0x0E05EEDULL, static_cast<std::uint64_t>(d));
        for (int t = 0; t < 12; ++t) {
            RealVector phi(n_params);
            for (int i = 0; i < n_params; ++i) phi(i) = 2.0 * M_PI * gen.next_double();
            starts.push_back(phi);
        }

        for (const RealVector& start : starts) {
            SimplexOptions opts;
            opts.initial_step = 0.7;
            opts.step_tol = 1e-10;
            opts.max_iterations = 3000;
            SimplexResult r = nelder_mead(
                [&](const RealVector& x) { return spread_only(m, x, cfg); }, start, opts);
            consider(r.x);
        }
    }

    best_phi = polish_phases(m, best_phi, cfg);
    consider(best_phi);

    Matrix e = diagonal_from_phases(d, best_phi);
    double nu_star = nu_from_spread(best_spread);
    return PhaseOptimum{UnitaryOperator(e, cfg), nu_star, d <= 2};
}

DiamondDistance diamond_distance_povm(const UnitaryOperator& u, const Config& cfg) {
    PhaseOptimum opt = optimize_e0(u, cfg);
    double value = 2.0 * std::sqrt(std::max(0.0, 1.0 - opt.nu_star * opt.nu_star));
    return DiamondDistance{value, opt.certified};
}

double p2_povm(const UnitaryOperator& u, double delta, const Config& cfg) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw ValidationError("delta must lie in [0, 1]");
    }
    PhaseOptimum opt = optimize_e0(u, cfg);
    double nu_q = nu_q_from_nu(opt.nu_star, std::sqrt(1.0 - delta));
    return nu_q * nu_q;
}

DensityOperator construct_rho0(const UnitaryOperator& u, const UnitaryOperator& e0,
                               const Config& cfg) {
    if (u.dim() != e0.dim()) {
        throw ValidationError("dim mismatch between unitary and phase matrix");
    }
    const int d = u.dim();
    Matrix v = u.matrix() * e0.matrix();

    UnitaryEigensystem eig = eig_unitary(UnitaryOperator(v, cfg), cfg);
    SpectralSpread arc = spread_of_phases(eig.phases);
    double nu = nu_from_spread(arc.theta);
    if (nu <= kZeroNuCutoff) {
        throw ValidationError("construct_rho0 requires nu(U e0) > 0");
    }
    Vector x1 = eig.vectors.col(arc.idx_min);
    Vector xd = eig.vectors.col(arc.idx_max);
    Complex c = 0.5 * (eig.eigenvalue(arc.idx_min) + eig.eigenvalue(arc.idx_max));

    const int n_phases = 8 * d;
    std::vector<Vector> candidates;
    candidates.reserve(static_cast<size_t>(n_phases));
    for (int k = 0; k < n_phases; ++k) {
        double phase = 2.0 * M_PI * k / n_phases;
        Vector psi = (x1 + std::polar(1.0, phase) * xd) / std::sqrt(2.0);
        candidates.push_back(std::move(psi));
    }

    // Linear conditions on the mixture: per basis index, the equal-ratio
    // condition (complex) and the norm-match condition (real), plus unit
    // trace.
    const int rows = 3 * d + 1;
    RealMatrix a(rows, n_phases);
    RealVector b = RealVector::Zero(rows);
    b(rows - 1) = 1.0;
    for (int k = 0; k < n_phases; ++k) {
        const Vector& psi = candidates[static_cast<size_t>(k)];
        Vector vpsi_row = v.adjoint() * psi;  // conj of <psi|V|i> per entry
        for (int i = 0; i < d; ++i) {
            Complex pi = psi(i);
            Complex ratio = pi * std::conj(vpsi_row(i)) - c * pi * std::conj(pi);
            a(2 * i, k) = ratio.real();
            a(2 * i + 1, k) = ratio.imag();
            double mapped = std::norm(vpsi_row(i));
            a(2 * d + i, k) = mapped - std::norm(pi);
        }
        a(rows - 1, k) = 1.0;
    }

    auto mixture = [&](const RealVector& w) {
        Matrix rho = Matrix::Zero(d, d);
        for (int k = 0; k < n_phases; ++k) {
            if (w(k) <= 0.0) continue;
            const Vector& psi = candidates[static_cast<size_t>(k)];
            rho += w(k) * (psi * psi.adjoint());
        }
        double tr = rho.trace().real();
        if (tr <= 0.0) {
            throw SolverError("discriminator feasibility failure: empty mixture");
        }
        return Matrix(rho / tr);
    };

    auto residual_of = [&](const Matrix& rho) {
        double res = 0.0;
        Matrix rv = rho * v;
        Matrix vrv = v.adjoint() * rho * v;
        for (int i = 0; i < d; ++i) {
            res = std::max(res, std::abs(rv(i, i) - c * rho(i, i)));
            res = std::max(res, std::abs(vrv(i, i).real() - rho(i, i).real()));
        }
        return res;
    };

    RealVector uniform = RealVector::Constant(n_phases, 1.0 / n_phases);
    Matrix rho = mixture(uniform);
    if (residual_of(rho) >= cfg.tol_feas) {
        RealVector w = nnls(a, b);
        if (w.maxCoeff() <= 0.0) {
            throw SolverError("discriminator feasibility failure");
        }
        rho = mixture(w);
        if (residual_of(rho) >= cfg.tol_feas) {
            throw SolverError("discriminator feasibility failure: residual " +
                              std::to_string(residual_of(rho)));
        }
    }
    return DensityOperator(rho, cfg);
}

DensityOperator zero_diagonal_discriminator(const UnitaryOperator& u, const Config& cfg) {
    const int d = u.dim();
    const Matrix& m = u.matrix();

    // Real linear functionals on the Hermitian space: unit trace plus the
    // real and imaginary parts of every diagonal entry of rho*U.
    std::vector<Matrix> functionals;
    std::vector<double> targets;
    functionals.push_back(Matrix::Identity(d, d));
    targets.push_back(1.0);
    for (int i = 0; i < d; ++i) {
        Matrix proj = Matrix::Zero(d, d);
        proj(i, i) = 1.0;
        Matrix a = m * proj;
        functionals.push_back(0.5 * (a + a.adjoint()));
        targets.push_back(0.0);
        functionals.push_back((a - a.adjoint()) / Complex(0.0, 2.0));
        targets.push_back(0.0);
    }
    const int n_con = static_cast<int>(functionals.size());
    RealMatrix gram(n_con, n_con);
    for (int p = 0; p < n_con; ++p) {
        for (int q = 0; q < n_con; ++q) {
            gram(p, q) = (functionals[static_cast<size_t>(p)] *
                          functionals[static_cast<size_t>(q)])
                             .trace()
                             .real();
        }
    }
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> gram_solve(gram);

    auto project_affine = [&](const Matrix& x) {
        RealVector r(n_con);
        for (int p = 0; p < n_con; ++p) {
            r(p) = (x * functionals[static_cast<size_t>(p)]).trace().real() -
                   targets[static_cast<size_t>(p)];
        }
        RealVector alpha = gram_solve.solve(r);
        Matrix out = x;
        for (int p = 0; p < n_con; ++p) {
            out -= alpha(p) * functionals[static_cast<size_t>(p)];
        }
        return out;
    };

    auto project_psd = [&](const Matrix& x) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()));
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        return Matrix(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
    };

    Matrix x = Matrix::Identity(d, d) / static_cast<double>(d);
    Matrix correction = Matrix::Zero(d, d);
    const double tol = 0.1 * cfg.tol_feas;
    for (int iter = 0; iter < 20000; ++iter) {
        Matrix y = project_psd(x + correction);
        correction = x + correction - y;
        x = project_affine(y);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() >= -tol) break;
    }

    Matrix rho = project_psd(x);
    rho /= rho.trace().real();
    double res = (rho * m).diagonal().cwiseAbs().maxCoeff();
    if (res > cfg.tol_feas) {
        throw SolverError("discriminator feasibility failure: diag residual " +
                          std::to_string(res));
    }
    return DensityOperator(rho, cfg);
}

namespace {

Vector purification_of(const Matrix& sqrt_rho) {
    const int d = static_cast<int>(sqrt_rho.rows());
    Vector joint(d * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            joint(static_cast<Eigen::Index>(j) * d + i) = sqrt_rho(j, i);
        }
    }
    joint /= joint.norm();
    return joint;
}

}  // namespace

DephasedStrategy assemble_povm_strategy(const PovmCertProblem& p, const Config& cfg) {
    PhaseOptimum opt = optimize_e0(p.u, cfg);

    Matrix u_eff = p.u.matrix();
    Matrix e_eff = opt.e0.matrix();
    if (p.copies > 1) {
        u_eff = tensor_power(u_eff, p.copies, cfg);
        e_eff = tensor_power(e_eff, p.copies, cfg);
        long joint_dim = static_cast<long>(u_eff.rows()) * u_eff.rows();
        if (joint_dim > cfg.dim_cap) {
            throw ValidationError("dimension limit: joint input dimension " +
                                  std::to_string(joint_dim) + " exceeds cap");
        }
    }
    UnitaryOperator u_n(u_eff, cfg);
    UnitaryOperator e_n(e_eff, cfg);
    const int d = u_n.dim();

    double theta_single = spectral_spread(
        UnitaryOperator(p.u.matrix() * opt.e0.matrix(), cfg), cfg).theta;
    double nu_eff = nu_from_spread(
        std::min(theta_single * static_cast<double>(p.copies), 2.0 * M_PI));

    std::vector<std::string> flags;
    if (!opt.certified) flags.push_back("uncertified optimum");

    DensityOperator rho0 = (nu_eff <= kZeroNuCutoff)
                               ? zero_diagonal_discriminator(u_n, cfg)
                               : construct_rho0(u_n, e_n, cfg);

    Matrix s = psd_sqrt(rho0, cfg);
    Vector joint = purification_of(s);
    PureState input(joint, cfg);

    VonNeumannMeasurement null_measurement = VonNeumannMeasurement::computational(d);
    VonNeumannMeasurement alt_measurement{u_n};

    std::vector<Effect> effects;
    effects.reserve(static_cast<size_t>(d));
    double accept_h0 = 0.0;
    double accept_h1 = 0.0;
    for (int label = 0; label < d; ++label) {
        auto [prob0, v] = conditional_component(null_measurement, joint, label);
        auto [prob1, w] = conditional_component(alt_measurement, joint, label);
        if (prob0 < cfg.tol_prob) {
            effects.push_back(Effect::zero(d));
            continue;
        }
        Vector v_hat = v / std::sqrt(prob0);
        Effect gamma = Effect::zero(d);
        if (nu_eff <= kZeroNuCutoff || prob1 < cfg.tol_prob) {
            gamma = Effect::projector(v_hat, cfg);
        } else {
            PureState cond_h0(v_hat, cfg);
            PureState cond_h1(w / std::sqrt(prob1), cfg);
            StateStrategy conditional = optimal_state_measurement(
                StateCertProblem(cond_h0, cond_h1, p.delta), cfg);
            for (const std::string& f : conditional.flags) {
                if (std::find(flags.begin(), flags.end(), f) == flags.end()) {
                    flags.push_back(f);
                }
            }
            gamma = std::move(conditional.effect);
        }
        accept_h0 += (v.adjoint() * gamma.matrix() * v)(0, 0).real();
        accept_h1 += (w.adjoint() * gamma.matrix() * w)(0, 0).real();
        effects.push_back(std::move(gamma));
    }

    double p1 = std::max(0.0, 1.0 - accept_h0);
    double p2 = std::max(0.0, accept_h1);
    if (p1 > p.delta + cfg.tol_prob) {
        throw SolverError("measurement strategy violates the significance bound");
    }
    return DephasedStrategy{std::move(e_n), std::move(rho0),   std::move(input),
                            std::move(effects), p2, p1, std::move(flags)};
}

double p2_povm_parallel(const UnitaryOperator& u, double delta, long n,
                        const Config& cfg) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw ValidationError("delta must lie in [0, 1]");
    }
    if (n < 1) {
        throw ValidationError("copies must be >= 1");
    }
    PhaseOptimum opt = optimize_e0(u, cfg);
    double theta = spectral_spread(
        UnitaryOperator(u.matrix() * opt.e0.matrix(), cfg), cfg).theta;
    double spread_n = std::min(theta * static_cast<double>(n), 2.0 * M_PI);
    return p2_states(nu_from_spread(spread_n), delta);
}

}  // namespace qcert
