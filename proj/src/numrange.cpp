#include "qcert/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcert/optim.hpp"
#include "qcert/rng.hpp"

namespace qcert {

SpectralSpread spread_of_phases(const std::vector<double>& phases) {
    const int n = static_cast<int>(phases.size());
    if (n == 0) {
        throw ValidationError("spectral spread: empty phase list");
    }
    if (n == 1) {
        return SpectralSpread{0.0, 0, 0};
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return phases[static_cast<size_t>(a)] < phases[static_cast<size_t>(b)];
    });

    double max_gap = -1.0;
    int gap_at = 0;
    for (int k = 0; k < n; ++k) {
        double lo = phases[static_cast<size_t>(order[static_cast<size_t>(k)])];
        double hi = (k + 1 < n)
                        ? phases[static_cast<size_t>(order[static_cast<size_t>(k + 1)])]
                        : phases[static_cast<size_t>(order[0])] + 2.0 * M_PI;
        double gap = hi - lo;
        if (gap > max_gap + 1e-15) {
            max_gap = gap;
            gap_at = k;
        }
    }
    SpectralSpread out;
    out.theta = std::max(0.0, 2.0 * M_PI - max_gap);
    out.idx_min = order[static_cast<size_t>((gap_at + 1) % n)];
    out.idx_max = order[static_cast<size_t>(gap_at)];
    return out;
}

SpectralSpread spectral_spread(const UnitaryOperator& u, const Config& cfg) {
    return spread_of_phases(eig_unitary(u, cfg).phases);
}

double nu_from_spread(double theta) { return std::max(0.0, std::cos(theta / 2.0)); }

double nu_unitary(const UnitaryOperator& u, const Config& cfg) {
    return nu_from_spread(spectral_spread(u, cfg).theta);
}

double nu_q_from_nu(double nu, double q) {
    double s = std::sqrt(std::max(0.0, 1.0 - q * q));
    if (nu <= s) return 0.0;
    double value = q * nu - s * std::sqrt(std::max(0.0, 1.0 - nu * nu));
    return std::max(0.0, value);
}

double nu_q_unitary(const UnitaryOperator& u, double q, const Config& cfg) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ValidationError("nu_q: q must lie in [0, 1]");
    }
    return nu_q_from_nu(nu_unitary(u, cfg), q);
}

RangeSet hull_of_unitary(const UnitaryOperator& u, const Config& cfg) {
    UnitaryEigensystem eig = eig_unitary(u, cfg);
    SpectralSpread spread = spread_of_phases(eig.phases);

    std::vector<double> sorted_phases = eig.phases;  // eig_unitary sorts ascending
    std::vector<Complex> vertices;
    for (double phase : sorted_phases) {
        Complex z = std::polar(1.0, phase);
        if (!vertices.empty() && std::abs(z - vertices.back()) < 1e-9) continue;
        vertices.push_back(z);
    }
    if (vertices.size() > 2 && std::abs(vertices.front() - vertices.back()) < 1e-9) {
        vertices.pop_back();
    }

    RangeSet out;
    out.kind = RangeKind::HullPolygon;
    out.q = 1.0;
    out.points = std::move(vertices);
    out.dist_to_zero = nu_from_spread(spread.theta);
    return out;
}

namespace {

// Chart of the projective sphere around a base state: 2d-2 real parameters
// spanning the tangent directions orthogonal to the base ray.
struct SphereChart {
    Vector base;
    Matrix complement;  // d x (d-1), orthonormal, orthogonal to base

    explicit SphereChart(Vector b) : base(std::move(b)) {
        const Eigen::Index d = base.size();
        Matrix m(d, d + 1);
        m.col(0) = base;
        m.block(0, 1, d, d) = Matrix::Identity(d, d);
        Eigen::HouseholderQR<Matrix> qr(m);
        Matrix q = qr.householderQ();
        complement = q.block(0, 1, d, d - 1);
    }

    Vector state(const RealVector& y) const {
        const Eigen::Index k = complement.cols();
        Vector v = base;
        for (Eigen::Index j = 0; j < k; ++j) {
            v += Complex(y(2 * j), y(2 * j + 1)) * complement.col(j);
        }
        return v / v.norm();
    }
};

Vector random_state(SplitMix64& gen, int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) {
        // Box-Muller from the pinned generator keeps starts reproducible.
        double u1 = std::max(gen.next_double(), 1e-300);
        double u2 = gen.next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        v(i) = Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
    return v / v.norm();
}

struct SupportEvaluation {
    double value;
    Complex point;
};

SupportEvaluation support_at(const Matrix& x, double q, double s, double t,
                             const Vector& psi) {
    Complex diag = (psi.adjoint() * (x * psi))(0, 0);
    Vector w = x.adjoint() * psi;
    double orth2 = std::max(0.0, w.squaredNorm() - std::norm(diag));
    double orth = std::sqrt(orth2);
    Complex dir = std::polar(1.0, t);
    Complex z = q * diag + s * orth * dir;
    return SupportEvaluation{(std::conj(dir) * z).real(), z};
}

}  // namespace

RangeSet wq_boundary_samples(const Matrix& x, double q, int n_dirs, const Config& cfg) {
    if (x.rows() != x.cols() || x.rows() < 2) {
        throw ValidationError("w_q sampling: matrix must be square with dimension >= 2");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ValidationError("w_q sampling: q must lie in [0, 1]");
    }
    if (n_dirs < 8) {
        throw ValidationError("w_q sampling: need at least 8 directions");
    }
    const int d = static_cast<int>(x.rows());
    const double s = std::sqrt(std::max(0.0, 1.0 - q * q));
    const int n_starts = 32;
    const int chart_dim = 2 * d - 2;

    RangeSet out;
    out.kind = RangeKind::SampledBoundary;
    out.q = q;
    out.points.reserve(static_cast<size_t>(n_dirs));

    double min_support = std::numeric_limits<double>::infinity();
    Vector warm;

    for (int k = 0; k < n_dirs; ++k) {
        const double t = 2.0 * M_PI * k / n_dirs;

        double best_value = -std::numeric_limits<double>::infinity();
        Vector best_psi;
        bool any_converged = false;

        for (int start = 0; start < n_starts; ++start) {
            Vector base;
            if (start == 0 && warm.size() == d) {
                base = warm;
            } else {
                SplitMix64 gen = SplitMix64::stream(
                    0x77715EEDULL, static_cast<std::uint64_t>(k) * 1000 +
                                       static_cast<std::uint64_t>(start));
                base = random_state(gen, d);
            }
            SphereChart chart(base);
            auto objective = [&](const RealVector& y) {
                return -support_at(x, q, s, t, chart.state(y)).value;
            };
            SimplexOptions opts;
            opts.initial_step = 0.4;
            opts.step_tol = 1e-9;
            opts.max_iterations = 2500;
            SimplexResult r = nelder_mead(objective, RealVector::Zero(chart_dim), opts);
            any_converged = any_converged || r.converged;
            if (-r.value > best_value) {
                best_value = -r.value;
                best_psi = chart.state(r.x);
            }
        }

        if (!any_converged) {
            throw SolverError("support point failure at direction " + std::to_string(k));
        }

        SupportEvaluation eval = support_at(x, q, s, t, best_psi);
        out.points.push_back(eval.point);
        min_support = std::min(min_support, eval.value);
        warm = best_psi;
    }

    out.dist_to_zero = std::max(0.0, -min_support);
    (void)cfg;
    return out;
}

std::vector<Complex> convex_hull(std::vector<Complex> points) {
    auto less = [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(points.begin(), points.end(), less);
    points.erase(std::unique(points.begin(), points.end(),
                             [](const Complex& a, const Complex& b) {
                                 return std::abs(a - b) < 1e-12;
                             }),
                 points.end());
    const size_t n = points.size();
    if (n <= 2) return points;

    auto cross = [](const Complex& o, const Complex& a, const Complex& b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };

    std::vector<Complex> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

namespace {

double segment_distance(Complex a, Complex b, Complex p) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 < 1e-300) return std::abs(p - a);
    double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

double hull_distance(const std::vector<Complex>& hull_ccw, Complex p) {
    const size_t n = hull_ccw.size();
    if (n == 0) {
        throw ValidationError("hull distance: empty hull");
    }
    if (n == 1) return std::abs(p - hull_ccw[0]);
    if (n == 2) return segment_distance(hull_ccw[0], hull_ccw[1], p);

    bool inside = true;
    for (size_t i = 0; i < n; ++i) {
        Complex a = hull_ccw[i];
        Complex b = hull_ccw[(i + 1) % n];
        double cross = (b.real() - a.real()) * (p.imag() - a.imag()) -
                       (b.imag() - a.imag()) * (p.real() - a.real());
        if (cross < 0) {
            inside = false;
            break;
        }
    }
    if (inside) return 0.0;

    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        best = std::min(best, segment_distance(hull_ccw[i], hull_ccw[(i + 1) % n], p));
    }
    return best;
}

}  // namespace qcert
