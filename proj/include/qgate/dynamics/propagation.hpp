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

// Forward (Lindblad) and backward (adjoint Lindblad) propagation of the
// qubit density and effect matrices under a resonant drive.
//
// Rotating frame at the qubit frequency, zero detuning:
//   H(t) = i (Omega(t)/2) (sigma_+ - sigma_-) = -(Omega(t)/2) sigma_y,
// which rotates the Bloch vector from -z towards +x so that the
// absorbed-energy rate is (Omega/2) <sigma_x>.

#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "qgate/dynamics/pulse.hpp"
#include "qgate/dynamics/qubit.hpp"
#include "qgate/errors.hpp"

namespace qgate {

inline Matrix2 drive_hamiltonian(double omega) { return (-0.5 * omega) * pauli::sigma_y(); }

/// D[L](rho) = L rho L^dag - 1/2 {L^dag L, rho}
inline Matrix2 dissipator(const Matrix2& l, const Matrix2& rho) {
    const Matrix2 ld = l.adjoint();
    const Matrix2 ldl = ld * l;
    return l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
}

/// D*[L](E) = L^dag E L - 1/2 {L^dag L, E}
inline Matrix2 adjoint_dissipator(const Matrix2& l, const Matrix2& e) {
    const Matrix2 ld = l.adjoint();
    const Matrix2 ldl = ld * l;
    return ld * e * l - 0.5 * (ldl * e + e * ldl);
}

inline Matrix2 lindblad_derivative(const Matrix2& rho, double omega, const QubitRates& rates) {
    const Matrix2 h = drive_hamiltonian(omega);
    const Complex minus_i(0.0, -1.0);
    Matrix2 d = minus_i * (h * rho - rho * h);
    d += 0.5 * rates.gamma_phi * dissipator(pauli::sigma_z(), rho);
    d += rates.gamma_down() * dissipator(pauli::sigma_minus(), rho);
    d += rates.gamma_up() * dissipator(pauli::sigma_plus(), rho);
    return d;
}

inline Matrix2 lindblad_derivative(const DensityMatrix& rho, double omega, const QubitRates& rates) {
    return lindblad_derivative(rho.matrix(), omega, rates);
}

/// dE/dt = -i[H, E] - (gamma_phi/2) D*[sz](E) - gamma_down D*[s-](E) - gamma_up D*[s+](E).
/// Integrated backwards in time from the readout.
inline Matrix2 adjoint_derivative(const Matrix2& e, double omega, const QubitRates& rates) {
    const Matrix2 h = drive_hamiltonian(omega);
    const Complex minus_i(0.0, -1.0);
    Matrix2 d = minus_i * (h * e - e * h);
    d -= 0.5 * rates.gamma_phi * adjoint_dissipator(pauli::sigma_z(), e);
    d -= rates.gamma_down() * adjoint_dissipator(pauli::sigma_minus(), e);
    d -= rates.gamma_up() * adjoint_dissipator(pauli::sigma_plus(), e);
    return d;
}

inline Matrix2 adjoint_derivative(const EffectMatrix& e, double omega, const QubitRates& rates) {
    return adjoint_derivative(e.matrix(), omega, rates);
}

namespace detail {

template <class Rhs>
Matrix2 rk4_step(const Matrix2& y, double t, double h, const DriveSpec& spec, const QubitRates& rates, Rhs rhs) {
    const double om0 = spec.rabi(t);
    const double om_half = spec.rabi(t + 0.5 * h);
    const double om1 = spec.rabi(t + h);
    const Matrix2 k1 = rhs(y, om0, rates);
    const Matrix2 k2 = rhs(y + (0.5 * h) * k1, om_half, rates);
    const Matrix2 k3 = rhs(y + (0.5 * h) * k2, om_half, rates);
    const Matrix2 k4 = rhs(y + h * k3, om1, rates);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void require_pulse_grid(const DriveSpec& spec, const TimeGrid& grid) {
    spec.validate();
    detail::require(grid.n_steps >= 16 && grid.n_steps % 2 == 0, "propagation: invalid time grid");
    detail::require(std::abs(grid.t0) <= 1e-12 * spec.duration &&
                        std::abs(grid.t1 - spec.duration) <= 1e-12 * spec.duration,
                    "propagation: time grid must span [0, t_d]");
}

inline std::string step_diagnostic(const char* what, int step, const TimeGrid& grid, double min_eig) {
    std::ostringstream os;
    os << what << " left the positive cone at step " << step << " (t = " << grid.time(step) * 1e9
       << " ns): min eigenvalue " << min_eig << "; dt = " << grid.dt() * 1e9 << " ns with n_steps = " << grid.n_steps
       << ", increase n_steps";
    return os.str();
}

}  // namespace detail

/// Fixed-step RK4 integration of the Lindblad equation over the grid.
/// Each stored state is re-symmetrized and renormalized to unit trace.
inline std::vector<DensityMatrix> propagate_forward(const DensityMatrix& rho0, const DriveSpec& spec,
                                                    const QubitRates& rates, const TimeGrid& grid) {
    rates.validate();
    detail::require_pulse_grid(spec, grid);
    std::vector<DensityMatrix> out;
    out.reserve(grid.size());
    out.push_back(rho0);
    Matrix2 y = rho0.matrix();
    const double h = grid.dt();
    for (int i = 0; i < grid.n_steps; ++i) {
        y = detail::rk4_step(y, grid.time(i), h, spec, rates,
                             [](const Matrix2& m, double om, const QubitRates& r) { return lindblad_derivative(m, om, r); });
        y = detail::hermitian_part(y);
        y /= y.trace().real();
        const double min_eig = detail::min_eigenvalue(y);
        if (!detail::all_finite(y) || min_eig < -kPositivitySlack) {
            throw PropagationError(detail::step_diagnostic("density matrix", i + 1, grid, min_eig));
        }
        out.push_back(DensityMatrix::from_matrix(y));
    }
    return out;
}

/// Backward-propagated effect matrices on the forward grid.
///
/// effects[i] may carry an arbitrary positive scale; the physical effect
/// matrix is scale[i] * effects[i]. Weak values are scale-free.
struct EffectTrajectory {
    std::vector<EffectMatrix> effects;
    std::vector<double> scale;
    int rescale_count = 0;

    std::size_t size() const { return effects.size(); }
    Matrix2 physical(std::size_t i) const { return scale[i] * effects[i].matrix(); }
};

/// RK4 integration of the adjoint equation from t_d down to 0. With
/// rescale set, E is multiplied by a positive factor whenever max|E|
/// leaves [0.5, 2]; the accumulated factor is recorded in scale.
inline EffectTrajectory propagate_backward(const EffectMatrix& e_terminal, const DriveSpec& spec,
                                           const QubitRates& rates, const TimeGrid& grid, bool rescale = true) {
    rates.validate();
    detail::require_pulse_grid(spec, grid);
    EffectTrajectory traj;
    traj.effects.resize(grid.size());
    traj.scale.assign(grid.size(), 1.0);
    traj.effects[grid.n_steps] = e_terminal;
    Matrix2 y = e_terminal.matrix();
    double scale = 1.0;
    const double h = -grid.dt();
    for (int i = grid.n_steps; i > 0; --i) {
        y = detail::rk4_step(y, grid.time(i), h, spec, rates,
                             [](const Matrix2& m, double om, const QubitRates& r) { return adjoint_derivative(m, om, r); });
        y = detail::hermitian_part(y);
        const double max_abs = y.cwiseAbs().maxCoeff();
        if (rescale && max_abs > 0.0 && (max_abs < 0.5 || max_abs > 2.0)) {
            y /= max_abs;
            scale *= max_abs;
            ++traj.rescale_count;
        }
        const double min_eig = detail::min_eigenvalue(y);
        if (!detail::all_finite(y) || min_eig < -kPositivitySlack * std::max(1.0, y.cwiseAbs().maxCoeff())) {
            throw PropagationError(detail::step_diagnostic("effect matrix", i - 1, grid, min_eig));
        }
        traj.effects[i - 1] = EffectMatrix::from_matrix(y);
        traj.scale[i - 1] = scale;
    }
    return traj;
}

}  // namespace qgate
