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

// Steady state of a continuously driven qubit and its reflection coefficient.

#pragma once

#include <cmath>
#include <complex>

#include "qgate/dynamics/qubit.hpp"
#include "qgate/errors.hpp"

namespace qgate {

struct ReflectionPoint {
    double delta = 0.0;  // rad/s, drive minus qubit frequency
    Complex r;
};

struct BlochParams {
    double gamma_1 = 0.0;  // 1/s
    double gamma_2 = 0.0;  // 1/s
    double gamma_a = 0.0;  // rad/s
    double omega_a = 0.0;  // rad/s
    double p_g_th = 1.0;
    double p_e_th = 0.0;

    static BlochParams from_constants(const ExperimentConstants& c, double omega_a) {
        BlochParams p{1.0 / c.t1, 1.0 / (2.0 * c.t1) + 1.0 / c.t_phi, c.gamma_a, omega_a, c.p_g_th, c.p_e_th};
        p.validate();
        return p;
    }

    void validate() const {
        detail::require(gamma_1 > 0.0 && gamma_2 > 0.0 && gamma_a > 0.0 && omega_a >= 0.0,
                        "BlochParams: rates must be positive");
        detail::require(gamma_2 >= 0.5 * gamma_1 * (1.0 - 1e-12), "BlochParams: gamma_2 must be at least gamma_1 / 2");
        detail::require(p_g_th >= 0.0 && p_e_th >= 0.0 && p_g_th + p_e_th <= 1.0 + 1e-9,
                        "BlochParams: invalid thermal populations");
    }

    double polarization() const { return p_g_th - p_e_th; }
    double alpha_in() const { return omega_a / (2.0 * std::sqrt(gamma_a)); }
};

namespace detail {

inline double bloch_denominator(const BlochParams& p, double delta) {
    return p.gamma_1 * (p.gamma_2 * p.gamma_2 + delta * delta) + p.gamma_2 * p.omega_a * p.omega_a;
}

}  // namespace detail

inline Complex steady_state_sigma_minus(const BlochParams& p, double delta) {
    p.validate();
    const Complex num = p.polarization() * p.omega_a * p.gamma_1 * Complex(p.gamma_2, -delta);
    return num / (2.0 * detail::bloch_denominator(p, delta));
}

inline Complex reflection_model(const BlochParams& p, double delta) {
    p.validate();
    const Complex num = p.polarization() * p.gamma_a * p.gamma_1 * Complex(p.gamma_2, -delta);
    return 1.0 - num / detail::bloch_denominator(p, delta);
}

}  // namespace qgate
