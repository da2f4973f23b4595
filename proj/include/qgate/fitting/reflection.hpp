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

// Extraction of the radiative rate and Rabi rate from reflection spectra.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qgate/fitting/bloch.hpp"
#include "qgate/fitting/levenberg_marquardt.hpp"

namespace qgate {

struct ReflectionFixed {
    double gamma_1 = 0.0;
    double gamma_2 = 0.0;
    double p_g_th = 1.0;
    double p_e_th = 0.0;

    BlochParams with(double gamma_a, double omega_a) const {
        return {gamma_1, gamma_2, gamma_a, omega_a, p_g_th, p_e_th};
    }
};

struct ReflectionFit {
    double gamma_a = 0.0;
    double omega_a = 0.0;
    double sigma_gamma_a = 0.0;  // 1 sigma from the covariance
    double sigma_omega_a = 0.0;
    double residual = 0.0;       // sum of |R_model - R_data|^2
    Complex scale;               // complex gain divided out of the data
    int iterations = 0;
    int normalization_passes = 0;
    std::vector<double> objective_history;  // accepted LM objectives, last pass
};

namespace detail {

// Indices of the 10% of points with the largest |delta| (at least one).
inline std::vector<std::size_t> far_detuned(std::span<const ReflectionPoint> pts) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(pts[a].delta) > std::abs(pts[b].delta); });
    idx.resize(std::max<std::size_t>(1, pts.size() / 10));
    return idx;
}

}  // namespace detail

/// Fits (gamma_a, omega_a) with gamma_1, gamma_2 and the thermal populations
/// held fixed.
///
/// The unknown complex gain of the chain is first divided out using the
/// far-detuned points. Because R is not exactly 1 there, the gain is then
/// re-estimated against the fitted model on the same points and the fit is
/// repeated until the gain stops changing.
inline ReflectionFit fit_reflection(std::span<const ReflectionPoint> points, const ReflectionFixed& fixed,
                                    double gamma_a0, double omega_a0, const LmOptions& opts = {}) {
    detail::require(points.size() >= 8, "fit_reflection: need at least 8 points");
    detail::require(gamma_a0 > 0.0 && omega_a0 > 0.0, "fit_reflection: initial guesses must be positive");
    fixed.with(gamma_a0, omega_a0).validate();
    double max_delta = 0.0;
    for (const auto& p : points) {
        detail::require(std::isfinite(p.delta) && std::isfinite(p.r.real()) && std::isfinite(p.r.imag()),
                        "fit_reflection: non-finite point");
        max_delta = std::max(max_delta, std::abs(p.delta));
    }
    detail::require(max_delta >= 10.0 * fixed.gamma_2, "fit_reflection: detuning span must reach 10 gamma_2");

    const auto top = detail::far_detuned(points);
    Complex raw_top = 0.0;
    for (std::size_t i : top) raw_top += points[i].r;
    raw_top /= static_cast<double>(top.size());
    detail::require(std::abs(raw_top) > 0.0, "fit_reflection: far-detuned reference vanishes");

    const std::size_t n = points.size();
    Eigen::Vector2d x(std::log(gamma_a0), std::log(omega_a0));
    Complex scale = raw_top;
    ReflectionFit fit;
    constexpr int kMaxPasses = 50;
    for (int pass = 1; pass <= kMaxPasses; ++pass) {
        std::vector<Complex> data(n);
        for (std::size_t i = 0; i < n; ++i) data[i] = points[i].r / scale;

        auto residual = [&](const Eigen::VectorXd& p) {
            const BlochParams bp = fixed.with(std::exp(p[0]), std::exp(p[1]));
            Eigen::VectorXd r(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
                const Complex d = reflection_model(bp, points[i].delta) - data[i];
                r[2 * i] = d.real();
                r[2 * i + 1] = d.imag();
            }
            return r;
        };
        auto jacobian = [&](const Eigen::VectorXd& p) {
            const BlochParams bp = fixed.with(std::exp(p[0]), std::exp(p[1]));
            Eigen::MatrixXd j(2 * n, 2);
            for (std::size_t i = 0; i < n; ++i) {
                const double delta = points[i].delta;
                const Complex one_minus_r = 1.0 - reflection_model(bp, delta);
                const Complex d_gamma = -one_minus_r;
                const Complex d_omega = one_minus_r * 2.0 * bp.gamma_2 * bp.omega_a * bp.omega_a /
                                        detail::bloch_denominator(bp, delta);
                j(2 * i, 0) = d_gamma.real();
                j(2 * i + 1, 0) = d_gamma.imag();
                j(2 * i, 1) = d_omega.real();
                j(2 * i + 1, 1) = d_omega.imag();
            }
            return j;
        };

        const LmResult lm = levenberg_marquardt(residual, jacobian, Eigen::VectorXd(x), opts);
        x = lm.x;
        fit.iterations += lm.iterations;
        fit.objective_history = lm.accepted_objectives;
        fit.residual = lm.objective;
        fit.normalization_passes = pass;

        const BlochParams bp = fixed.with(std::exp(x[0]), std::exp(x[1]));
        Complex model_top = 0.0;
        for (std::size_t i : top) model_top += reflection_model(bp, points[i].delta);
        model_top /= static_cast<double>(top.size());
        const Complex next = raw_top / model_top;
        const bool settled = std::abs(next - scale) <= 1e-13 * std::abs(scale);
        scale = next;
        if (settled) break;
    }

    fit.gamma_a = std::exp(x[0]);
    fit.omega_a = std::exp(x[1]);
    fit.scale = scale;

    // Covariance of the log-parameters, s^2 (J^T J)^-1, mapped to linear scale.
    {
        const BlochParams bp = fixed.with(fit.gamma_a, fit.omega_a);
        Eigen::MatrixXd j(2 * n, 2);
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = points[i].delta;
            const Complex model = reflection_model(bp, delta);
            sse += std::norm(model - points[i].r / scale);
            const Complex omr = 1.0 - model;
            const Complex d_omega = omr * 2.0 * bp.gamma_2 * bp.omega_a * bp.omega_a / detail::bloch_denominator(bp, delta);
            j(2 * i, 0) = -omr.real();
            j(2 * i + 1, 0) = -omr.imag();
            j(2 * i, 1) = d_omega.real();
            j(2 * i + 1, 1) = d_omega.imag();
        }
        fit.residual = sse;
        const double dof = static_cast<double>(2 * n) - 2.0;
        const Eigen::Matrix2d cov = (sse / dof) * (j.transpose() * j).inverse();
        fit.sigma_gamma_a = fit.gamma_a * std::sqrt(std::max(cov(0, 0), 0.0));
        fit.sigma_omega_a = fit.omega_a * std::sqrt(std::max(cov(1, 1), 0.0));
    }
    return fit;
}

}  // namespace qgate
