#include "qcert/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qcert {

const Config& default_config() {
    static const Config cfg{};
    return cfg;
}

namespace {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw ValidationError(std::string(what) + ": entries must be finite");
    }
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw ValidationError(std::string(what) + ": matrix must be square");
    }
}

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw SolverError("eigensolver failure");
    }
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw SolverError("eigensolver failure");
    }
    return es.eigenvalues().maxCoeff();
}

// Rotate a vector's global phase so its largest-magnitude entry is real
// positive. Gives a deterministic representative of the ray.
void canonicalize_phase(Eigen::Ref<Vector> v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double a = std::abs(v(i));
        if (a > best + 1e-15) {
            best = a;
            imax = i;
        }
    }
    if (best > 0.0) {
        v *= std::conj(v(imax)) / std::abs(v(imax));
    }
}

bool lex_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
}

}  // namespace

PureState::PureState(Vector amplitudes, const Config& cfg) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1) {
        throw ValidationError("pure state: empty amplitude vector");
    }
    if (!amp_.allFinite()) {
        throw ValidationError("pure state: entries must be finite");
    }
    double n2 = amp_.squaredNorm();
    if (std::abs(n2 - 1.0) > cfg.tol_norm) {
        throw ValidationError("pure state: squared norm " + std::to_string(n2) +
                              " is not 1");
    }
}

PureState PureState::basis(int dim, int k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return PureState(std::move(v));
}

UnitaryOperator::UnitaryOperator(Matrix u, const Config& cfg) : u_(std::move(u)) {
    require_square(u_, "unitary");
    require_finite(u_, "unitary");
    Matrix defect = u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols());
    double err = defect.cwiseAbs().maxCoeff();
    if (err > cfg.tol_unit) {
        throw ValidationError("unitary: U^dagger U deviates from identity by " +
                              std::to_string(err));
    }
}

UnitaryOperator UnitaryOperator::identity(int dim) {
    return UnitaryOperator(Matrix::Identity(dim, dim));
}

DensityOperator::DensityOperator(Matrix m, const Config& cfg) : m_(std::move(m)) {
    require_square(m_, "density operator");
    require_finite(m_, "density operator");
    if (hermiticity_defect(m_) > cfg.tol_herm) {
        throw ValidationError("density operator: not Hermitian");
    }
    if (min_eigenvalue_hermitian(m_) < -cfg.tol_psd) {
        throw ValidationError("density operator: not PSD");
    }
    if (std::abs(m_.trace().real() - 1.0) > cfg.tol_norm ||
        std::abs(m_.trace().imag()) > cfg.tol_norm) {
        throw ValidationError("density operator: trace is not 1");
    }
}

DensityOperator DensityOperator::from_pure(const PureState& psi, const Config& cfg) {
    const Vector& a = psi.amplitudes();
    return DensityOperator(a * a.adjoint(), cfg);
}

Effect::Effect(Matrix m, const Config& cfg) : m_(std::move(m)) {
    require_square(m_, "effect");
    require_finite(m_, "effect");
    if (hermiticity_defect(m_) > cfg.tol_herm) {
        throw ValidationError("effect: not Hermitian");
    }
    if (min_eigenvalue_hermitian(m_) < -cfg.tol_psd) {
        throw ValidationError("effect: not PSD");
    }
    if (max_eigenvalue_hermitian(m_) > 1.0 + cfg.tol_psd) {
        throw ValidationError("effect: exceeds identity");
    }
}

Effect Effect::zero(int dim) { return Effect(Matrix::Zero(dim, dim)); }

Effect Effect::identity(int dim) { return Effect(Matrix::Identity(dim, dim)); }

Effect Effect::projector(const Vector& unit_vector, const Config& cfg) {
    double n = unit_vector.norm();
    if (std::abs(n - 1.0) > 1e-9) {
        throw ValidationError("effect projector: vector is not normalized");
    }
    return Effect(unit_vector * unit_vector.adjoint(), cfg);
}

VonNeumannMeasurement::VonNeumannMeasurement(UnitaryOperator basis)
    : basis_(std::move(basis)) {}

VonNeumannMeasurement VonNeumannMeasurement::computational(int dim) {
    return VonNeumannMeasurement(UnitaryOperator::identity(dim));
}

Matrix tensor_product(const Matrix& a, const Matrix& b, const Config& cfg) {
    long rows = a.rows() * b.rows();
    long cols = a.cols() * b.cols();
    if (rows > cfg.dim_cap || cols > cfg.dim_cap) {
        throw ValidationError("dimension limit: tensor product of " +
                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " and " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()) + " exceeds cap " +
                              std::to_string(cfg.dim_cap));
    }
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix tensor_power(const Matrix& a, long n, const Config& cfg) {
    if (n < 1) {
        throw ValidationError("tensor power: exponent must be >= 1");
    }
    Matrix out = a;
    for (long k = 1; k < n; ++k) {
        out = tensor_product(out, a, cfg);
    }
    return out;
}

Vector tensor_power(const Vector& v, long n, const Config& cfg) {
    Matrix column = v;
    return Vector(tensor_power(column, n, cfg).col(0));
}

UnitaryEigensystem eig_unitary(const UnitaryOperator& u, const Config& cfg) {
    const Matrix& m = u.matrix();
    const int d = u.dim();

    // The Schur form of a normal matrix is diagonal, and the Schur basis is
    // orthonormal to machine precision even across degenerate subspaces.
    Eigen::ComplexSchur<Matrix> schur(m, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw SolverError("eigensolver failure");
    }

    std::vector<double> phases(static_cast<size_t>(d));
    Matrix vectors = schur.matrixU();
    for (int j = 0; j < d; ++j) {
        Complex lambda = schur.matrixT()(j, j);
        if (std::abs(std::abs(lambda) - 1.0) > cfg.tol_eig) {
            throw SolverError("eigensolver failure: eigenvalue off the unit circle");
        }
        double phase = std::arg(lambda);
        if (phase <= -M_PI) phase = M_PI;  // atan2(-0, -1) lands on -pi
        phases[static_cast<size_t>(j)] = phase;
        canonicalize_phase(vectors.col(j));
    }

    std::vector<int> order(static_cast<size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        double pa = phases[static_cast<size_t>(a)];
        double pb = phases[static_cast<size_t>(b)];
        if (std::abs(pa - pb) > 1e-15) return pa < pb;
        return lex_less(vectors.col(a), vectors.col(b));
    });

    UnitaryEigensystem out;
    out.phases.resize(static_cast<size_t>(d));
    out.vectors.resize(d, d);
    for (int j = 0; j < d; ++j) {
        out.phases[static_cast<size_t>(j)] = phases[static_cast<size_t>(order[static_cast<size_t>(j)])];
        out.vectors.col(j) = vectors.col(order[static_cast<size_t>(j)]);
    }

    Matrix recon = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        recon += out.eigenvalue(j) * (out.vectors.col(j) * out.vectors.col(j).adjoint());
    }
    if ((recon - m).cwiseAbs().maxCoeff() > cfg.tol_eig) {
        throw SolverError("eigensolver failure: reconstruction residual too large");
    }
    return out;
}

Matrix psd_sqrt(const Matrix& hermitian_psd, const Config& cfg) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hermitian_psd + hermitian_psd.adjoint()));
    if (es.info() != Eigen::Success) {
        throw SolverError("eigensolver failure");
    }
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -cfg.tol_psd) {
            throw ValidationError("not PSD: eigenvalue " + std::to_string(ev(i)));
        }
        ev(i) = std::sqrt(std::max(0.0, ev(i)));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix psd_sqrt(const DensityOperator& rho, const Config& cfg) {
    return psd_sqrt(rho.matrix(), cfg);
}

DensityOperator apply_measurement_channel(const VonNeumannMeasurement& m,
                                          const DensityOperator& rho,
                                          const Config& cfg) {
    if (m.dim() != rho.dim()) {
        throw ValidationError("dim mismatch: measurement dimension " +
                              std::to_string(m.dim()) + " vs state dimension " +
                              std::to_string(rho.dim()));
    }
    const int d = m.dim();
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        Vector u = m.effect_vector(i);
        out(i, i) = (u.adjoint() * rho.matrix() * u)(0, 0).real();
    }
    return DensityOperator(out, cfg);
}

std::pair<double, Vector> conditional_component(const VonNeumannMeasurement& m,
                                                const Vector& joint, int label) {
    const int d = m.dim();
    if (joint.size() % d != 0) {
        throw ValidationError("dimension factorization mismatch");
    }
    const int d_aux = static_cast<int>(joint.size()) / d;
    Vector u = m.effect_vector(label);
    Vector v = Vector::Zero(d_aux);
    for (int k = 0; k < d; ++k) {
        v += std::conj(u(k)) * joint.segment(static_cast<Eigen::Index>(k) * d_aux, d_aux);
    }
    return {v.squaredNorm(), std::move(v)};
}

std::vector<ConditionalOutcome> extended_measure_and_condition(
    const VonNeumannMeasurement& m, const PureState& joint, const Config& cfg) {
    const int d = m.dim();
    if (joint.dim() % d != 0) {
        throw ValidationError("dimension factorization mismatch: joint dimension " +
                              std::to_string(joint.dim()) +
                              " is not a multiple of measurement dimension " +
                              std::to_string(d));
    }
    std::vector<ConditionalOutcome> out;
    for (int i = 0; i < d; ++i) {
        auto [p, v] = conditional_component(m, joint.amplitudes(), i);
        if (p < cfg.tol_prob) continue;
        Matrix cond = (v * v.adjoint()) / p;
        out.push_back(ConditionalOutcome{i, p, DensityOperator(std::move(cond), cfg)});
    }
    return out;
}

}  // namespace qcert
