#pragma once

#include <vector>

#include "qcert/qmat.hpp"

namespace qcert {

enum class RangeKind { HullPolygon, SampledBoundary };

/// Polygonal or sampled description of a (q-)numerical range together with
/// its distance to the origin.
struct RangeSet {
    RangeKind kind = RangeKind::HullPolygon;
    double q = 1.0;
    std::vector<Complex> points;  // hull vertices (CCW) or boundary samples
    double dist_to_zero = 0.0;
};

/// Angular width of the smallest arc containing all eigenphases, plus the
/// indices (into eig_unitary order) of the arc's endpoints.
struct SpectralSpread {
    double theta = 0.0;
    int idx_min = 0;  // arc start (phase of lambda_1)
    int idx_max = 0;  // arc end (phase of lambda_d)
};

SpectralSpread spectral_spread(const UnitaryOperator& u,
                               const Config& cfg = default_config());

/// Spread of a raw phase list (phases in (-pi, pi]); returns (theta, arc
/// start index, arc end index) against the sorted order of the input.
SpectralSpread spread_of_phases(const std::vector<double>& phases);

/// nu(U) = min |z| over the numerical range: cos(theta/2) when the
/// eigenphases fit in an open half-circle, 0 otherwise.
double nu_unitary(const UnitaryOperator& u, const Config& cfg = default_config());
double nu_from_spread(double theta);

/// Convex hull of the eigenvalues (the numerical range of a normal matrix),
/// with dist_to_zero = nu(U).
RangeSet hull_of_unitary(const UnitaryOperator& u, const Config& cfg = default_config());

/// Distance from the q-numerical range of a unitary to the origin, via the
/// closed form in terms of nu(U).
double nu_q_unitary(const UnitaryOperator& u, double q,
                    const Config& cfg = default_config());

/// Scalar core: distance to zero of W_q given m = nu(U).
double nu_q_from_nu(double nu, double q);

/// Support-function sampling of the boundary of W_q(X). For each of n_dirs
/// equispaced direction angles, the returned sample maximizes the projection
/// onto that direction. dist_to_zero is estimated from the sampled support
/// function (0 when every sampled half-plane contains the origin).
RangeSet wq_boundary_samples(const Matrix& x, double q, int n_dirs,
                             const Config& cfg = default_config());

/// Monotone-chain convex hull, CCW orientation.
std::vector<Complex> convex_hull(std::vector<Complex> points);

/// Distance from a point to a convex polygon (0 when inside). Accepts
/// degenerate polygons with one or two vertices.
double hull_distance(const std::vector<Complex>& hull_ccw, Complex p);

}  // namespace qcert
