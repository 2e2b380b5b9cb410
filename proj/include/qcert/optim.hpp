#pragma once

#include <functional>

#include <Eigen/Dense>

#include "qcert/types.hpp"

namespace qcert {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

struct SimplexResult {
    RealVector x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct SimplexOptions {
    double initial_step = 0.3;
    double step_tol = 1e-9;  // simplex diameter at convergence
    int max_iterations = 2000;
};

/// Nelder-Mead simplex descent, minimizing f.
SimplexResult nelder_mead(const std::function<double(const RealVector&)>& f,
                          const RealVector& start, const SimplexOptions& opts = {});

/// Lawson-Hanson nonnegative least squares: minimize ||A w - b|| over w >= 0.
RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iterations = 200);

}  // namespace qcert
