#pragma once

#include <vector>

#include "qcert/types.hpp"

namespace qcert {

/// Normalized pure state |psi>.
class PureState {
  public:
    explicit PureState(Vector amplitudes, const Config& cfg = default_config());

    int dim() const { return static_cast<int>(amp_.size()); }
    const Vector& amplitudes() const { return amp_; }

    /// Canonical basis vector |k>.
    static PureState basis(int dim, int k);

  private:
    Vector amp_;
};

/// Unitary operator, U^dagger U = 1 within tol_unit.
class UnitaryOperator {
  public:
    explicit UnitaryOperator(Matrix u, const Config& cfg = default_config());

    int dim() const { return static_cast<int>(u_.rows()); }
    const Matrix& matrix() const { return u_; }

    static UnitaryOperator identity(int dim);

  private:
    Matrix u_;
};

/// Density operator: Hermitian, PSD within tol_psd, unit trace.
class DensityOperator {
  public:
    explicit DensityOperator(Matrix m, const Config& cfg = default_config());

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

    static DensityOperator from_pure(const PureState& psi,
                                     const Config& cfg = default_config());

  private:
    Matrix m_;
};

/// Measurement effect: Hermitian with 0 <= E <= 1 within tol_psd.
class Effect {
  public:
    explicit Effect(Matrix m, const Config& cfg = default_config());

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

    static Effect zero(int dim);
    static Effect identity(int dim);
    /// Rank-one projector |v><v| onto a unit vector.
    static Effect projector(const Vector& unit_vector,
                            const Config& cfg = default_config());

  private:
    Matrix m_;
};

/// Von Neumann measurement P_U: rank-one projective measurement in the basis
/// given by the columns of a unitary.
class VonNeumannMeasurement {
  public:
    explicit VonNeumannMeasurement(UnitaryOperator basis);

    int dim() const { return basis_.dim(); }
    const UnitaryOperator& basis() const { return basis_; }
    Vector effect_vector(int i) const { return basis_.matrix().col(i); }

    static VonNeumannMeasurement computational(int dim);

  private:
    UnitaryOperator basis_;
};

/// Kronecker product. Throws "dimension limit" when either resulting
/// dimension exceeds cfg.dim_cap.
Matrix tensor_product(const Matrix& a, const Matrix& b,
                      const Config& cfg = default_config());

/// n-fold Kronecker power, subject to the same dimension cap.
Matrix tensor_power(const Matrix& a, long n, const Config& cfg = default_config());
Vector tensor_power(const Vector& v, long n, const Config& cfg = default_config());

/// Spectral decomposition of a unitary. Phases lie in (-pi, pi], sorted
/// ascending; exact ties are broken by lexicographic order of the
/// phase-canonicalized eigenvector entries. Within a degenerate subspace the
/// eigenvector basis is solver-dependent; callers must not rely on it.
struct UnitaryEigensystem {
    std::vector<double> phases;  // ascending in (-pi, pi]
    Matrix vectors;              // column j corresponds to phases[j]

    Complex eigenvalue(int j) const {
        return std::polar(1.0, phases[static_cast<size_t>(j)]);
    }
    PureState eigenvector(int j) const { return PureState(vectors.col(j)); }
};

UnitaryEigensystem eig_unitary(const UnitaryOperator& u,
                               const Config& cfg = default_config());

/// Hermitian PSD square root S with S*S = rho. Eigenvalues within -tol_psd of
/// zero are clipped before the root; anything lower throws "not PSD".
Matrix psd_sqrt(const DensityOperator& rho, const Config& cfg = default_config());
Matrix psd_sqrt(const Matrix& hermitian_psd, const Config& cfg = default_config());

/// The measure-and-prepare channel rho -> sum_i <u_i|rho|u_i> |i><i|.
DensityOperator apply_measurement_channel(const VonNeumannMeasurement& m,
                                          const DensityOperator& rho,
                                          const Config& cfg = default_config());

struct ConditionalOutcome {
    int label;
    double probability;
    DensityOperator state;  // normalized conditional on the ancilla factor
};

/// Measure the first tensor factor of a joint pure state and return the
/// label distribution with normalized conditional ancilla states, computed
/// by direct contraction of the joint vector. Labels with probability below
/// tol_prob are omitted.
std::vector<ConditionalOutcome> extended_measure_and_condition(
    const VonNeumannMeasurement& m, const PureState& joint,
    const Config& cfg = default_config());

/// Unnormalized conditional ancilla vector (<u_label| (x) 1)|joint> together
/// with its squared norm. Shared contraction primitive for strategies and
/// the simulation oracle.
std::pair<double, Vector> conditional_component(const VonNeumannMeasurement& m,
                                                const Vector& joint, int label);

}  // namespace qcert
