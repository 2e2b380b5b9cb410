#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances and limits shared across the library. Every entry is
/// overridable per call; the defaults leave double-precision headroom at the
/// dimensions this library targets.
struct Config {
    double tol_norm = 1e-10;  // state normalization, trace
    double tol_herm = 1e-10;  // Hermiticity
    double tol_unit = 1e-8;   // unitarity
    double tol_eig = 1e-8;    // eigendecomposition residuals
    double tol_psd = 1e-9;    // positive semidefiniteness
    double tol_prob = 1e-12;  // probabilities and error rates
    double tol_geo = 1e-6;    // geometric comparisons of range sets
    double tol_opt = 1e-7;    // phase-optimization certification
    double tol_feas = 1e-8;   // discriminator feasibility residual
    int dim_cap = 4096;       // largest allowed matrix dimension
};

const Config& default_config();

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Inputs that violate a contract: bad dimensions, malformed files,
/// out-of-range parameters, broken invariants.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Numerical procedures that did not reach their target: eigensolver
/// failure, support point failure, discriminator feasibility failure.
class SolverError : public Error {
  public:
    explicit SolverError(const std::string& what) : Error(what) {}
};

}  // namespace qcert
