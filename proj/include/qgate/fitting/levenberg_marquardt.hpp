// Copyright 2026 The qgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Levenberg-Marquardt for small dense least-squares problems.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgate/errors.hpp"

namespace qgate {

struct LmOptions {
    int max_iter = 500;
    double lambda0 = 1e-3;
    double step_tol = 1e-10;      // relative parameter step
    double gradient_tol = 1e-12;  // |J^T r|
};

struct LmResult {
    Eigen::VectorXd x;
    Eigen::MatrixXd jtj;               // at the solution
    double objective = 0.0;            // sum of squared residuals
    std::vector<double> accepted_objectives;
    int iterations = 0;
};

/// Minimizes |r(x)|^2. `residual(x)` returns r, `jacobian(x)` returns dr/dx.
/// Damping is multiplied by 10 on a rejected step and divided by 10 on an
/// accepted one.
template <class Residual, class Jacobian>
LmResult levenberg_marquardt(Residual&& residual, Jacobian&& jacobian, Eigen::VectorXd x,
                             const LmOptions& opts = {}) {
    Eigen::VectorXd r = residual(x);
    double cost = r.squaredNorm();
    detail::require(std::isfinite(cost), "levenberg_marquardt: non-finite initial objective");
    double lambda = opts.lambda0;
    LmResult out;
    out.accepted_objectives.push_back(cost);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        const Eigen::MatrixXd j = jacobian(x);
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        if (g.norm() < opts.gradient_tol) {
            out.iterations = iter - 1;
            out.x = x;
            out.jtj = jtj;
            out.objective = cost;
            return out;
        }
        for (;;) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd trial = x + step;
            const Eigen::VectorXd r_trial = residual(trial);
            const double c_trial = r_trial.squaredNorm();
            if (std::isfinite(c_trial) && c_trial <= cost) {
                const bool small = step.norm() <= opts.step_tol * (x.norm() + opts.step_tol);
                x = trial;
                r = r_trial;
                cost = c_trial;
                lambda = std::max(lambda / 10.0, 1e-15);
                out.accepted_objectives.push_back(cost);
                if (small) {
                    out.iterations = iter;
                    out.x = x;
                    const Eigen::MatrixXd jf = jacobian(x);
                    out.jtj = jf.transpose() * jf;
                    out.objective = cost;
                    return out;
                }
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e16) {
                // No descent direction left at working precision.
                out.iterations = iter;
                out.x = x;
                out.jtj = jtj;
                out.objective = cost;
                return out;
            }
        }
    }
    throw ConvergenceError("levenberg_marquardt: no convergence in " + std::to_string(opts.max_iter) +
                           " iterations");
}

}  // namespace qgate
