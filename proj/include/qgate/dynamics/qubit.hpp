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

// Two-level state and effect matrices in the (|g>, |e>) basis.
//
// Convention: index 0 is |g>, index 1 is |e>, sigma_z|e> = +|e>,
// sigma_- = |g><e| and sigma_- = (sigma_x - i sigma_y) / 2.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>

#include "qgate/errors.hpp"

namespace qgate {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kPositivitySlack = 1e-9;
inline constexpr double kPostSelectionFloor = 1e-12;

namespace pauli {

inline Matrix2 identity() { return Matrix2::Identity(); }

inline Matrix2 sigma_minus() {
    Matrix2 m = Matrix2::Zero();
    m(0, 1) = 1.0;
    return m;
}

inline Matrix2 sigma_plus() {
    Matrix2 m = Matrix2::Zero();
    m(1, 0) = 1.0;
    return m;
}

inline Matrix2 sigma_x() { return sigma_minus() + sigma_plus(); }

inline Matrix2 sigma_y() { return Complex(0.0, 1.0) * (sigma_minus() - sigma_plus()); }

inline Matrix2 sigma_z() {
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}

inline Matrix2 projector_g() {
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = 1.0;
    return m;
}

inline Matrix2 projector_e() {
    Matrix2 m = Matrix2::Zero();
    m(1, 1) = 1.0;
    return m;
}

}  // namespace pauli

/// Post-selection tag: the readout outcome a trajectory is conditioned on.
enum class Outcome { kGround = 0, kExcited = 1, kNone = 2 };

inline std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::kGround: return "g";
        case Outcome::kExcited: return "e";
        case Outcome::kNone: return "none";
    }
    return "?";
}

inline Outcome parse_outcome(std::string_view s) {
    if (s == "g") return Outcome::kGround;
    if (s == "e") return Outcome::kExcited;
    if (s == "none") return Outcome::kNone;
    throw InvalidArgument("unknown post-selection '" + std::string(s) + "' (expected g, e or none)");
}

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

namespace detail {

inline double hermiticity_defect(const Matrix2& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline Matrix2 hermitian_part(const Matrix2& m) { return 0.5 * (m + m.adjoint()); }

// Eigenvalues of a Hermitian 2x2 matrix in closed form.
inline double min_eigenvalue(const Matrix2& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return 0.5 * (a + d) - half_gap;
}

inline double max_eigenvalue(const Matrix2& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    return 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
}

inline bool all_finite(const Matrix2& m) {
    for (int i = 0; i < 4; ++i) {
        if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Qubit density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    DensityMatrix() : m_(pauli::projector_g()) {}

    static DensityMatrix from_matrix(const Matrix2& m) {
        detail::require(detail::all_finite(m), "DensityMatrix: non-finite element");
        detail::require(detail::hermiticity_defect(m) <= kHermiticityTolerance, "DensityMatrix: not Hermitian");
        detail::require(std::abs(m.trace() - 1.0) <= kTraceTolerance, "DensityMatrix: trace differs from 1");
        detail::require(detail::min_eigenvalue(m) >= -kPositivitySlack, "DensityMatrix: negative eigenvalue");
        return DensityMatrix(detail::hermitian_part(m));
    }

    static DensityMatrix ground() { return DensityMatrix(pauli::projector_g()); }
    static DensityMatrix excited() { return DensityMatrix(pauli::projector_e()); }

    /// |psi><psi| for psi = a|g> + b|e>, normalized internally.
    static DensityMatrix pure(Complex a, Complex b) {
        const double norm = std::norm(a) + std::norm(b);
        detail::require(norm > 0.0, "DensityMatrix::pure: zero vector");
        Eigen::Vector2cd v(a, b);
        v /= std::sqrt(norm);
        return DensityMatrix(v * v.adjoint());
    }

    const Matrix2& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    double expectation(const Matrix2& op) const { return (op * m_).trace().real(); }

    BlochVector bloch() const {
        return {2.0 * m_(1, 0).real(), -2.0 * m_(1, 0).imag(), (m_(1, 1) - m_(0, 0)).real()};
    }

    double population_e() const { return m_(1, 1).real(); }
    double population_g() const { return m_(0, 0).real(); }
    double purity() const { return (m_ * m_).trace().real(); }
    double min_eigenvalue() const { return detail::min_eigenvalue(m_); }

private:
    explicit DensityMatrix(const Matrix2& m) : m_(m) {}

    Matrix2 m_;
};

/// Effect matrix of the past quantum state: Hermitian and positive
/// semidefinite, defined up to a positive scale.
class EffectMatrix {
public:
    EffectMatrix() : m_(Matrix2::Identity()) {}

    static EffectMatrix from_matrix(const Matrix2& m) {
        detail::require(detail::all_finite(m), "EffectMatrix: non-finite element");
        detail::require(detail::hermiticity_defect(m) <= kHermiticityTolerance, "EffectMatrix: not Hermitian");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        detail::require(detail::min_eigenvalue(m) >= -kPositivitySlack * scale, "EffectMatrix: negative eigenvalue");
        return EffectMatrix(detail::hermitian_part(m));
    }

    static EffectMatrix identity() { return EffectMatrix(Matrix2::Identity()); }

    const Matrix2& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    double min_eigenvalue() const { return detail::min_eigenvalue(m_); }
    double max_eigenvalue() const { return detail::max_eigenvalue(m_); }
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

    EffectMatrix scaled(double factor) const {
        detail::require(factor > 0.0, "EffectMatrix::scaled: factor must be positive");
        return EffectMatrix(factor * m_);
    }

private:
    explicit EffectMatrix(const Matrix2& m) : m_(m) {}

    Matrix2 m_;
};

/// Relaxation and dephasing rates of the qubit.
///
/// gamma_1 is the total energy relaxation rate; it includes the radiative
/// rate gamma_a into the measured line. The thermal populations split
/// gamma_1 into upward and downward rates.
struct QubitRates {
    double gamma_1 = 0.0;    // 1/s
    double gamma_phi = 0.0;  // 1/s
    double gamma_a = 0.0;    // rad/s
    double p_g_th = 1.0;
    double p_e_th = 0.0;

    static QubitRates make(double gamma_1, double gamma_phi, double gamma_a, double p_g_th, double p_e_th) {
        QubitRates r{gamma_1, gamma_phi, gamma_a, p_g_th, p_e_th};
        r.validate();
        return r;
    }

    /// Decoherence-free qubit whose only relaxation is emission into the line.
    static QubitRates radiative_only(double gamma_a) { return make(gamma_a, 0.0, gamma_a, 1.0, 0.0); }

    /// All rates zero (unitary evolution, no emission term in the flux).
    static QubitRates none() { return make(0.0, 0.0, 0.0, 1.0, 0.0); }

    void validate() const {
        detail::require(std::isfinite(gamma_1) && gamma_1 >= 0.0, "QubitRates: gamma_1 must be >= 0");
        detail::require(std::isfinite(gamma_phi) && gamma_phi >= 0.0, "QubitRates: gamma_phi must be >= 0");
        detail::require(std::isfinite(gamma_a) && gamma_a >= 0.0, "QubitRates: gamma_a must be >= 0");
        detail::require(gamma_a <= gamma_1 * (1.0 + 1e-12), "QubitRates: gamma_a must not exceed gamma_1");
        detail::require(p_e_th >= 0.0 && p_e_th < 0.5, "QubitRates: p_e_th must lie in [0, 0.5)");
        detail::require(p_g_th > 0.0 && p_g_th <= 1.0 && p_g_th + p_e_th <= 1.0 + 1e-12,
                        "QubitRates: invalid thermal populations");
    }

    double gamma_up() const { return p_e_th / (p_g_th + p_e_th) * gamma_1; }
    double gamma_down() const { return gamma_1 - gamma_up(); }
};

/// Recorded device constants of the reference experiment.
///
/// Only gamma_a, T1, T_phi, t_d, w, the thermal populations and the
/// readout fidelities enter the simulations; the cavity parameters are
/// carried for reference.
struct ExperimentConstants {
    double omega_q = 2.0 * kPi * 4.81e9;
    double omega_r = 2.0 * kPi * 7.69e9;
    double chi = 2.0 * kPi * 4.5e6;
    double kappa = 2.0 * kPi * 12e6;
    double anharmonicity = 2.0 * kPi * 150e6;
    double t1 = 5.5e-6;
    double t_phi = 2.4e-6;
    double gamma_a = 2.0 * kPi * 20e3;
    double t_d = 400e-9;
    double t_ro = 704e-9;
    double w = 10e-9;
    double p_g_th = 0.892;
    double p_e_th = 0.088;
    double p_f_th = 0.02;
    double f_g = 0.985;
    double f_e = 0.867;

    void validate() const {
        for (double v : {omega_q, omega_r, chi, kappa, anharmonicity, t1, t_phi, gamma_a, t_d, t_ro, w}) {
            detail::require(std::isfinite(v) && v > 0.0, "ExperimentConstants: rates and durations must be > 0");
        }
        detail::require(std::abs(p_g_th + p_e_th + p_f_th - 1.0) <= 1e-6,
                        "ExperimentConstants: thermal populations must sum to 1");
    }

    QubitRates rates() const { return QubitRates::make(1.0 / t1, 1.0 / t_phi, gamma_a, p_g_th, p_e_th); }
    double gamma_a_t_d() const { return gamma_a * t_d; }
};

/// Uniform time grid with an even number of intervals.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    int n_steps = 0;

    static TimeGrid make(double t0, double t1, int n_steps) {
        detail::require(t1 > t0, "TimeGrid: t1 must exceed t0");
        detail::require(n_steps >= 16, "TimeGrid: n_steps must be >= 16");
        detail::require(n_steps % 2 == 0, "TimeGrid: n_steps must be even");
        return TimeGrid{t0, t1, n_steps};
    }

    double dt() const { return (t1 - t0) / n_steps; }
    double time(int i) const { return i == n_steps ? t1 : t0 + dt() * i; }
    std::size_t size() const { return static_cast<std::size_t>(n_steps) + 1; }
};

inline DensityMatrix thermal_state(double p_e_th) {
    detail::require(p_e_th >= 0.0 && p_e_th <= 1.0, "thermal_state: probability outside [0, 1]");
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = 1.0 - p_e_th;
    m(1, 1) = p_e_th;
    return DensityMatrix::from_matrix(m);
}

/// Effect matrix at the readout time for a post-selected outcome with
/// the given readout fidelities; identity when not post-selecting.
inline EffectMatrix terminal_effect(Outcome outcome, double f_g, double f_e) {
    detail::require(f_g >= 0.5 && f_g <= 1.0, "terminal_effect: F_g outside [0.5, 1]");
    detail::require(f_e >= 0.5 && f_e <= 1.0, "terminal_effect: F_e outside [0.5, 1]");
    Matrix2 m = Matrix2::Zero();
    switch (outcome) {
        case Outcome::kGround:
            m(0, 0) = f_g;
            m(1, 1) = 1.0 - f_g;
            break;
        case Outcome::kExcited:
            m(0, 0) = 1.0 - f_e;
            m(1, 1) = f_e;
            break;
        case Outcome::kNone:
            m = Matrix2::Identity();
            break;
    }
    return EffectMatrix::from_matrix(m);
}

/// Tr[E O rho] / Tr[E rho].
inline Complex weak_value(const Matrix2& op, const DensityMatrix& rho, const EffectMatrix& effect) {
    const Complex denominator = (effect.matrix() * rho.matrix()).trace();
    if (!(std::abs(denominator) > kPostSelectionFloor)) {
        throw IncompatiblePostSelection("incompatible post-selection: Tr[E rho] = " +
                                        std::to_string(std::abs(denominator)));
    }
    return (effect.matrix() * op * rho.matrix()).trace() / denominator;
}

}  // namespace qgate
