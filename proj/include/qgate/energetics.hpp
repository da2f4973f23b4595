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

// Drive-pulse energy observables computed from propagated (rho, E) pairs:
// outgoing photon flux with and without post-selection, integrated photon
// numbers and Delta n sweeps over the rotation angle.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgate/dynamics/propagation.hpp"
#include "qgate/dynamics/pulse.hpp"
#include "qgate/dynamics/qubit.hpp"
#include "qgate/numeric.hpp"

namespace qgate {

/// Outgoing photon flux without post-selection:
/// alpha_in^2 - (Omega_a/2) <sigma_x> + gamma_a (1 + <sigma_z>) / 2.
inline double flux_unconditioned(double alpha_in, const DensityMatrix& rho, const QubitRates& rates) {
    detail::require(alpha_in >= 0.0, "flux_unconditioned: alpha_in must be >= 0");
    const double omega = 2.0 * std::sqrt(rates.gamma_a) * alpha_in;
    const BlochVector b = rho.bloch();
    return alpha_in * alpha_in - 0.5 * omega * b.x + rates.gamma_a * 0.5 * (1.0 + b.z);
}

/// Post-selected mean outgoing amplitude alpha_in - sqrt(gamma_a) <sigma_->_w.
/// The real part is the measured amplitude; the imaginary part is
/// -sqrt(gamma_a) Im of the weak value.
inline Complex amplitude_postselected(double alpha_in, const DensityMatrix& rho, const EffectMatrix& e,
                                      const QubitRates& rates) {
    const Complex wv = weak_value(pauli::sigma_minus(), rho, e);
    return alpha_in - std::sqrt(rates.gamma_a) * wv;
}

/// Post-selected outgoing photon flux:
/// |alpha_in|^2 - Omega_a Re[<sigma_->_w] + gamma_a Tr[E s- rho s+] / Tr[E rho].
inline double flux_postselected(double alpha_in, const DensityMatrix& rho, const EffectMatrix& e,
                                const QubitRates& rates) {
    const Complex wv = weak_value(pauli::sigma_minus(), rho, e);
    const Matrix2& em = e.matrix();
    const Matrix2& r = rho.matrix();
    const Complex denominator = (em * r).trace();
    const Complex emission = (em * pauli::sigma_minus() * r * pauli::sigma_plus()).trace() / denominator;
    const double omega = 2.0 * std::sqrt(rates.gamma_a) * alpha_in;
    return alpha_in * alpha_in - omega * wv.real() + rates.gamma_a * emission.real();
}

struct FluxTrace {
    TimeGrid grid;
    std::vector<double> flux;  // photons/s at each grid point
    Outcome postselect = Outcome::kNone;
};

/// Photons carried by a flux trace (composite Simpson).
inline double integrate_photon_number(const FluxTrace& trace) {
    detail::require(trace.flux.size() == trace.grid.size(), "integrate_photon_number: trace/grid size mismatch");
    return simpson(trace.flux, trace.grid.dt());
}

struct EnergyBudget {
    double n_in = 0.0;
    double n_out = 0.0;
    double delta_n = 0.0;
    double theta = 0.0;
    Outcome postselect = Outcome::kNone;
};

/// Everything needed to simulate one gate: rates, initial state, readout
/// fidelities and pulse parameters.
struct GateConfig {
    QubitRates rates;
    double p_e_initial = 0.0;
    double f_g = 1.0;
    double f_e = 1.0;
    double t_d = 400e-9;
    double w = 10e-9;
    PulseShape shape = PulseShape::kGaussianEdged;
    int n_steps = 4096;

    static GateConfig from_constants(const ExperimentConstants& c, int n_steps = 4096) {
        c.validate();
        GateConfig g;
        g.rates = c.rates();
        g.p_e_initial = c.p_e_th;
        g.f_g = c.f_g;
        g.f_e = c.f_e;
        g.t_d = c.t_d;
        g.w = c.w;
        g.n_steps = n_steps;
        return g;
    }

    /// Decoherence-free qubit (radiative decay only), ground-state start,
    /// perfect readout.
    static GateConfig ideal(double gamma_a, double t_d, double w, int n_steps = 4096) {
        GateConfig g;
        g.rates = QubitRates::radiative_only(gamma_a);
        g.t_d = t_d;
        g.w = w;
        g.n_steps = n_steps;
        return g;
    }

    TimeGrid grid() const { return TimeGrid::make(0.0, t_d, n_steps); }
    DriveSpec drive(double theta) const { return drive_for_theta(theta, rates.gamma_a, t_d, w, shape); }
};

/// Forward state and one backward effect trajectory per outcome for a single
/// rotation angle.
struct GateRun {
    double theta = 0.0;
    DriveSpec drive;
    TimeGrid grid;
    std::vector<double> alpha_in;
    std::vector<DensityMatrix> rho;
    std::array<EffectTrajectory, 3> effects;  // indexed by Outcome

    const EffectTrajectory& effect(Outcome o) const { return effects[static_cast<int>(o)]; }
    double n_in() const { return simpson(squared(alpha_in), grid.dt()); }

    /// Flux trace for one post-selection; throws IncompatiblePostSelection if
    /// the outcome is impossible at some grid point.
    FluxTrace flux(Outcome o, const QubitRates& rates) const {
        FluxTrace trace{grid, std::vector<double>(grid.size()), o};
        const EffectTrajectory& e = effect(o);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            trace.flux[i] = o == Outcome::kNone ? flux_unconditioned(alpha_in[i], rho[i], rates)
                                                : flux_postselected(alpha_in[i], rho[i], e.effects[i], rates);
        }
        return trace;
    }

    /// Tr[E_x(t) rho(t)] with the physical (unscaled) effect matrix.
    double outcome_probability(Outcome o, std::size_t i) const {
        return (effect(o).physical(i) * rho[i].matrix()).trace().real();
    }

private:
    static std::vector<double> squared(const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * v[i];
        return out;
    }
};

inline GateRun simulate_gate(double theta, const GateConfig& cfg) {
    GateRun run;
    run.theta = theta;
    run.drive = cfg.drive(theta);
    run.grid = cfg.grid();
    run.alpha_in.resize(run.grid.size());
    for (std::size_t i = 0; i < run.grid.size(); ++i) {
        run.alpha_in[i] = run.drive.envelope(run.grid.time(static_cast<int>(i)));
    }
    run.rho = propagate_forward(thermal_state(cfg.p_e_initial), run.drive, cfg.rates, run.grid);
    for (Outcome o : {Outcome::kGround, Outcome::kExcited, Outcome::kNone}) {
        run.effects[static_cast<int>(o)] =
            propagate_backward(terminal_effect(o, cfg.f_g, cfg.f_e), run.drive, cfg.rates, run.grid);
    }
    return run;
}

/// One rotation angle of a Delta n sweep. A budget is empty when its
/// post-selection failed; the reason is kept in errors.
struct SweepPoint {
    double theta = 0.0;
    double n_in = 0.0;
    std::array<std::optional<EnergyBudget>, 3> budgets;  // indexed by Outcome
    std::array<std::string, 3> errors;
    double p_g = 0.0;  // Tr[|g><g| rho(t_d)]
    double p_e = 0.0;  // Tr[|e><e| rho(t_d)]
    double p_g_readout = 0.0;  // Tr[E_g(t_d) rho(t_d)] with finite fidelity
    double p_e_readout = 0.0;

    const std::optional<EnergyBudget>& budget(Outcome o) const { return budgets[static_cast<int>(o)]; }
};

inline SweepPoint sweep_point(double theta, const GateConfig& cfg) {
    SweepPoint point;
    point.theta = theta;
    GateRun run;
    try {
        detail::require(std::isfinite(theta) && theta >= 0.0, "delta_n_sweep: theta must be >= 0");
        run = simulate_gate(theta, cfg);
    } catch (const Error& err) {
        point.errors.fill(err.what());
        return point;
    }
    point.n_in = run.n_in();
    const std::size_t last = run.grid.size() - 1;
    point.p_g = run.rho[last].population_g();
    point.p_e = run.rho[last].population_e();
    point.p_g_readout = run.outcome_probability(Outcome::kGround, last);
    point.p_e_readout = run.outcome_probability(Outcome::kExcited, last);
    for (Outcome o : {Outcome::kGround, Outcome::kExcited, Outcome::kNone}) {
        try {
            const double n_out = integrate_photon_number(run.flux(o, cfg.rates));
            point.budgets[static_cast<int>(o)] = EnergyBudget{point.n_in, n_out, n_out - point.n_in, theta, o};
        } catch (const Error& err) {
            point.errors[static_cast<int>(o)] = err.what();
        }
    }
    return point;
}

/// Delta n for every rotation angle and post-selection. Angles are
/// independent and evaluated in parallel; failures are reported per point.
inline std::vector<SweepPoint> delta_n_sweep(std::span<const double> thetas, const GateConfig& cfg) {
    detail::require(!thetas.empty(), "delta_n_sweep: empty theta list");
    cfg.rates.validate();
    return parallel_map(thetas, [&cfg](double theta) { return sweep_point(theta, cfg); });
}

/// Evenly spaced angles 0, step, ..., up to theta_max inclusive.
inline std::vector<double> theta_range(double theta_max, int steps) {
    detail::require(steps >= 1, "theta_range: need at least one step");
    detail::require(theta_max >= 0.0, "theta_range: theta_max must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        out[i] = steps == 1 ? theta_max : theta_max * i / (steps - 1);
    }
    return out;
}

/// Purity 1 - 2 |lambda_g lambda_e|^2 (1 - |<psi_e|psi_g>|^2) of the qubit
/// after it has become entangled with the drive.
inline double purity_bound(Complex lambda_g, Complex lambda_e, Complex overlap) {
    detail::require(std::abs(std::norm(lambda_g) + std::norm(lambda_e) - 1.0) <= 1e-9,
                    "purity_bound: |lambda_g|^2 + |lambda_e|^2 must equal 1");
    detail::require(std::abs(overlap) <= 1.0 + 1e-12, "purity_bound: |overlap| must be <= 1");
    const double cross = std::norm(lambda_g * lambda_e);
    return 1.0 - 2.0 * cross * (1.0 - std::norm(overlap));
}

}  // namespace qgate
