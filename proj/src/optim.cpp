#include "qcert/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qcert {

SimplexResult nelder_mead(const std::function<double(const RealVector&)>& f,
                          const RealVector& start, const SimplexOptions& opts) {
    const int n = static_cast<int>(start.size());
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<RealVector> xs;
    std::vector<double> fs;
    xs.reserve(static_cast<size_t>(n) + 1);
    xs.push_back(start);
    for (int i = 0; i < n; ++i) {
        RealVector v = start;
        v(i) += opts.initial_step;
        xs.push_back(std::move(v));
    }
    fs.resize(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);

    std::vector<size_t> order(xs.size());
    SimplexResult result;
    for (result.iterations = 0; result.iterations < opts.max_iterations;
         ++result.iterations) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return fs[a] < fs[b]; });

        double diameter = 0.0;
        for (size_t i = 1; i < xs.size(); ++i) {
            diameter = std::max(diameter, (xs[order[i]] - xs[order[0]]).norm());
        }
        if (diameter < opts.step_tol) {
            result.converged = true;
            break;
        }

        const size_t best = order[0];
        const size_t worst = order.back();
        const size_t second_worst = order[order.size() - 2];

        RealVector centroid = RealVector::Zero(n);
        for (size_t i = 0; i + 1 < order.size(); ++i) centroid += xs[order[i]];
        centroid /= static_cast<double>(n);

        RealVector reflected = centroid + alpha * (centroid - xs[worst]);
        double fr = f(reflected);
        if (fr < fs[best]) {
            RealVector expanded = centroid + gamma * (reflected - centroid);
            double fe = f(expanded);
            if (fe < fr) {
                xs[worst] = std::move(expanded);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(reflected);
                fs[worst] = fr;
            }
        } else if (fr < fs[second_worst]) {
            xs[worst] = std::move(reflected);
            fs[worst] = fr;
        } else {
            RealVector contracted = centroid + rho * (xs[worst] - centroid);
            double fc = f(contracted);
            if (fc < fs[worst]) {
                xs[worst] = std::move(contracted);
                fs[worst] = fc;
            } else {
                for (size_t i = 1; i < order.size(); ++i) {
                    size_t j = order[i];
                    xs[j] = xs[best] + sigma * (xs[j] - xs[best]);
                    fs[j] = f(xs[j]);
                }
            }
        }
    }

    size_t best = 0;
    for (size_t i = 1; i < fs.size(); ++i) {
        if (fs[i] < fs[best]) best = i;
    }
    result.x = xs[best];
    result.value = fs[best];
    return result;
}

RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iterations) {
    const int n = static_cast<int>(a.cols());
    RealVector w = RealVector::Zero(n);
    std::vector<bool> passive(static_cast<size_t>(n), false);
    RealVector residual = b;

    auto solve_passive = [&](const std::vector<int>& idx) -> RealVector {
        RealMatrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
        return ap.colPivHouseholderQr().solve(b);
    };

    for (int iter = 0; iter < max_iterations; ++iter) {
        RealVector grad = a.transpose() * residual;
        int best = -1;
        double best_grad = 1e-12;
        for (int j = 0; j < n; ++j) {
            if (!passive[static_cast<size_t>(j)] && grad(j) > best_grad) {
                best_grad = grad(j);
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<size_t>(best)] = true;

        for (int inner = 0; inner < max_iterations; ++inner) {
            std::vector<int> idx;
            for (int j = 0; j < n; ++j) {
                if (passive[static_cast<size_t>(j)]) idx.push_back(j);
            }
            RealVector z = solve_passive(idx);
            bool ok = true;
            for (Eigen::Index k = 0; k < z.size(); ++k) {
                if (z(k) <= 0.0) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                w.setZero();
                for (size_t k = 0; k < idx.size(); ++k) w(idx[k]) = z(static_cast<Eigen::Index>(k));
                break;
            }
            double step = 1.0;
            for (size_t k = 0; k < idx.size(); ++k) {
                double zk = z(static_cast<Eigen::Index>(k));
                double wk = w(idx[k]);
                if (zk <= 0.0 && wk - zk > 0.0) {
                    step = std::min(step, wk / (wk - zk));
                }
            }
            for (size_t k = 0; k < idx.size(); ++k) {
                double zk = z(static_cast<Eigen::Index>(k));
                double wk = w(idx[k]);
                double updated = wk + step * (zk - wk);
                w(idx[k]) = updated;
                if (updated <= 1e-14) {
                    w(idx[k]) = 0.0;
                    passive[static_cast<size_t>(idx[k])] = false;
                }
            }
        }
        residual = b - a * w;
    }
    return w;
}

}  // namespace qcert
