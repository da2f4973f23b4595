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

// Subcommand implementations of the qgate tool. Each returns a process exit
// code; argument parsing lives in tools/qgate.cpp.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qgate/calibration/mixture.hpp"
#include "qgate/calibration/power.hpp"
#include "qgate/calibration/readout.hpp"
#include "qgate/energetics.hpp"
#include "qgate/fitting/reflection.hpp"
#include "qgate/io/config.hpp"
#include "qgate/io/csv.hpp"
#include "qgate/synthetic.hpp"
#include "qgate/toy_model.hpp"

namespace qgate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMissingInput = 2;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Runs body and maps exceptions to exit codes with a message on err.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        body();
        return kExitOk;
    } catch (const io::MissingFile& e) {
        err << "error: " << e.what() << '\n';
        return kExitMissingInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

struct SimulatePowerArgs {
    io::RunConfig config;
    double theta = kPi;
    Outcome postselect = Outcome::kNone;
    std::string out;
    std::string dynamics_out;  // optional Bloch / effect / weak-value trace
};

/// One gate: flux traces for all three post-selections. A post-selection
/// that is impossible at some time is written as NaN.
inline void simulate_power(const SimulatePowerArgs& a, std::ostream& log) {
    const GateConfig cfg = a.config.gate();
    const GateRun run = simulate_gate(a.theta, cfg);
    std::array<std::vector<double>, 3> flux;
    for (Outcome o : {Outcome::kGround, Outcome::kExcited, Outcome::kNone}) {
        try {
            flux[static_cast<int>(o)] = run.flux(o, cfg.rates).flux;
        } catch (const IncompatiblePostSelection& e) {
            log << "warning: post-selection " << to_string(o) << " impossible: " << e.what() << '\n';
            flux[static_cast<int>(o)].assign(run.grid.size(), kNaN);
        }
    }
    const double shift = a.config.delay_ns;
    {
        io::CsvWriter csv(a.out, {"t_ns", "flux_none", "flux_g", "flux_e"});
        for (std::size_t i = 0; i < run.grid.size(); ++i) {
            csv.row({run.grid.time(static_cast<int>(i)) * 1e9 + shift, flux[2][i], flux[0][i], flux[1][i]});
        }
    }
    if (!a.dynamics_out.empty()) {
        io::CsvWriter csv(a.dynamics_out, {"t_ns", "sx", "sy", "sz", "E_gg", "E_ee", "Re_wv_sminus", "Im_wv_sminus"});
        const EffectTrajectory& e = run.effect(a.postselect);
        for (std::size_t i = 0; i < run.grid.size(); ++i) {
            const BlochVector b = run.rho[i].bloch();
            const Matrix2 ep = e.physical(i);
            Complex wv(kNaN, kNaN);
            try {
                wv = weak_value(pauli::sigma_minus(), run.rho[i], e.effects[i]);
            } catch (const IncompatiblePostSelection&) {
            }
            csv.row({run.grid.time(static_cast<int>(i)) * 1e9 + shift, b.x, b.y, b.z, ep(0, 0).real(), ep(1, 1).real(),
                     wv.real(), wv.imag()});
        }
    }
    const auto budget = [&](Outcome o) {
        const auto& f = flux[static_cast<int>(o)];
        if (std::isnan(f.front())) return kNaN;
        return simpson(f, run.grid.dt()) - run.n_in();
    };
    log << "theta/pi = " << a.theta / kPi << "  n_in = " << run.n_in() << "  dn_" << to_string(a.postselect) << " = "
        << budget(a.postselect) << '\n';
}

struct SweepArgs {
    io::RunConfig config;
    std::string out;
};

inline void sweep_delta_n(const SweepArgs& a, std::ostream& log) {
    const auto thetas = theta_range(a.config.theta_max, a.config.sweep_steps);
    const auto points = delta_n_sweep(thetas, a.config.gate());
    io::CsvWriter csv(a.out, {"theta_over_pi", "n_in", "dn_none", "dn_g", "dn_e", "p_g", "p_e"});
    std::size_t failures = 0;
    for (const auto& p : points) {
        auto dn = [&](Outcome o) { return p.budget(o) ? p.budget(o)->delta_n : kNaN; };
        for (const auto& e : p.errors) failures += e.empty() ? 0 : 1;
        csv.row({p.theta / kPi, p.n_in, dn(Outcome::kNone), dn(Outcome::kGround), dn(Outcome::kExcited), p.p_g, p.p_e});
    }
    log << points.size() << " angles, " << failures << " failed post-selections\n";
}

struct ToyArgs {
    io::RunConfig config;
    double theta = 1.6 * kPi;
    std::string out;
};

inline void toy_distributions(const ToyArgs& a, std::ostream& log) {
    const ToyParams params = ToyParams::from_theta(a.theta, a.config.constants.gamma_a_t_d(), a.config.convention);
    const FockVector psi = coherent_state(params.n_in, default_truncation(params.n_in));
    const auto [g, e] = measurement_operators(params, psi);
    const auto prior = psi.distribution();
    const std::vector<double> none(prior.size(), kNaN);
    const auto pg = g.defined() ? g.post_state->distribution() : none;
    const auto pe = e.defined() ? e.post_state->distribution() : none;
    io::CsvWriter csv(a.out, {"n", "p_prior", "p_given_g", "p_given_e"});
    for (std::size_t n = 0; n < prior.size(); ++n) csv.row({static_cast<double>(n), prior[n], pg[n], pe[n]});
    log << "n_in = " << params.n_in << "  P(g) = " << g.probability << "  <n>_g = " << g.mean_n
        << "  <n>_e = " << e.mean_n << '\n';
}

struct ToyBackactionArgs {
    io::RunConfig config;
    double theta_min = 0.5 * kPi;
    double theta_max = 24.0 * kPi;
    int steps = 236;
    std::string out;
};

inline void toy_backaction(const ToyBackactionArgs& a, std::ostream& log) {
    detail::require(a.theta_min > 0.0 && a.theta_max >= a.theta_min, "toy-backaction: need 0 < theta_min <= theta_max");
    std::vector<double> thetas(static_cast<std::size_t>(std::max(a.steps, 1)));
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        thetas[i] = thetas.size() == 1 ? a.theta_min
                                       : a.theta_min + (a.theta_max - a.theta_min) * i / (thetas.size() - 1);
    }
    const auto pts = backaction_difference(thetas, a.config.constants.gamma_a_t_d(), a.config.convention);
    io::CsvWriter csv(a.out, {"theta_over_pi", "dn_g", "dn_e_shifted_rescaled", "difference"});
    for (const auto& p : pts) csv.row({p.theta / kPi, p.dn_g, p.dn_e_shifted_rescaled, p.difference});
    log << pts.size() << " angles, last difference = " << pts.back().difference << '\n';
}

struct FitReflectionArgs {
    io::RunConfig config;
    std::string in;
    std::string out;
    double gamma_a0 = 0.0;  // 0: use the configured gamma_a
    double omega_a0 = 2.0 * kPi * 20e3;
};

inline void fit_reflection_cmd(const FitReflectionArgs& a, std::ostream& log) {
    const io::Table t = io::read_csv(a.in, {"delta_hz", "re_r", "im_r"});
    const std::size_t cd = t.column("delta_hz"), cr = t.column("re_r"), ci = t.column("im_r");
    std::vector<ReflectionPoint> pts;
    for (const auto& row : t.rows) pts.push_back({2.0 * kPi * row[cd], Complex(row[cr], row[ci])});
    const ExperimentConstants& c = a.config.constants;
    const ReflectionFixed fixed{1.0 / c.t1, 1.0 / (2.0 * c.t1) + 1.0 / c.t_phi, c.p_g_th, c.p_e_th};
    const ReflectionFit fit =
        fit_reflection(pts, fixed, a.gamma_a0 > 0.0 ? a.gamma_a0 : c.gamma_a, a.omega_a0);
    nlohmann::json j = {
        {"gamma_a", fit.gamma_a},
        {"gamma_a_over_2pi_hz", fit.gamma_a / (2.0 * kPi)},
        {"sigma_gamma_a", fit.sigma_gamma_a},
        {"omega_a", fit.omega_a},
        {"omega_a_over_2pi_hz", fit.omega_a / (2.0 * kPi)},
        {"sigma_omega_a", fit.sigma_omega_a},
        {"residual", fit.residual},
        {"scale", {fit.scale.real(), fit.scale.imag()}},
        {"iterations", fit.iterations},
        {"points", pts.size()},
    };
    write_json(a.out, j);
    log << "gamma_a/2pi = " << fit.gamma_a / (2.0 * kPi) << " Hz  omega_a/2pi = " << fit.omega_a / (2.0 * kPi)
        << " Hz\n";
}

struct CalibrateReadoutArgs {
    std::string in;
    std::string out;
    int components = 3;
    double radius_factor = 1.5;
    std::uint64_t seed = 0;
};

inline std::vector<IQSample> read_iq(const std::string& path) {
    const io::Table t = io::read_csv(path, {"i_volts", "q_volts"});
    const std::size_t ci = t.column("i_volts"), cq = t.column("q_volts");
    std::vector<IQSample> s;
    s.reserve(t.rows.size());
    for (const auto& row : t.rows) s.push_back({row[ci], row[cq]});
    return s;
}

inline void calibrate_readout(const CalibrateReadoutArgs& a, std::ostream& log) {
    const auto samples = read_iq(a.in);
    const MixtureModel model = em_fit(samples, a.components, {a.seed});
    const ClassificationSummary s = summarize_classification(model, samples, a.radius_factor);
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : model.components) {
        comps.push_back({{"label", to_string(c.label)},
                         {"center", {c.center.real(), c.center.imag()}},
                         {"weight", c.weight}});
    }
    nlohmann::json j = {
        {"sigma", model.sigma()},
        {"components", comps},
        {"iterations", model.iterations},
        {"restarts", model.restarts},
        {"labels_consistent", model.labels_consistent},
        {"radius_factor", a.radius_factor},
        {"overlap_warning", s.overlap_warning},
        {"rejection_fraction", s.rejected_fraction()},
        {"circle_fraction", {{"g", s.circle_fraction[0]}, {"e", s.circle_fraction[1]}, {"f", s.circle_fraction[2]}}},
        {"sector_fraction", {{"g", s.sector_fraction[0]}, {"e", s.sector_fraction[1]}, {"f", s.sector_fraction[2]}}},
    };
    // Fidelities need P("x"|x) from a repeated-readout calibration; the
    // sector and circle fractions give P(x) and P("x").
    write_json(a.out, j);
    if (s.overlap_warning) log << "warning: classification circles overlap\n";
    log << "rejected " << s.rejected_fraction() << " of " << samples.size() << " records\n";
}

struct CalibratePowerArgs {
    std::string in;
    std::string sidecar;
    std::string out;
};

inline PowerRecord read_power_record(const std::string& csv_path, const std::string& sidecar,
                                     std::vector<double>* t_ns = nullptr) {
    const io::Table t = io::read_csv(csv_path, {"t_ns", "p_raw_W"});
    PowerRecord rec;
    for (const auto& row : t.rows) {
        rec.p_raw.push_back(row[t.column("p_raw_W")]);
        if (t_ns) t_ns->push_back(row[t.column("t_ns")]);
    }
    for (const auto& [k, v] : io::read_key_values(sidecar)) {
        const double x = io::parse_double(v, k);
        if (k == "p_vac") rec.p_vac = x;
        else if (k == "p_ref") rec.p_ref = x;
        else if (k == "p_c_plus_vac") rec.p_c_plus_vac = x;
        else if (k == "omega_a") rec.omega_a = x;
        else if (k == "gamma_a") rec.gamma_a = x;
        else throw InvalidArgument("unknown sidecar key '" + k + "'");
    }
    return rec;
}

inline void calibrate_power(const CalibratePowerArgs& a, std::ostream& log) {
    std::vector<double> t_ns;
    const PowerRecord rec = read_power_record(a.in, a.sidecar, &t_ns);
    const auto flux = power_to_flux(rec);
    io::CsvWriter csv(a.out, {"t_ns", "flux"});
    for (std::size_t i = 0; i < flux.size(); ++i) csv.row({t_ns[i], flux[i]});
    log << "gain = " << rec.gain() << " W s\n";
}

struct GenSyntheticArgs {
    io::RunConfig config;
    std::string kind;  // iq, readout, reflection, decay, power
    std::uint64_t seed = 0;
    std::string out;
    std::size_t samples = 100000;
    double noise = 0.0;
};

inline void gen_synthetic(const GenSyntheticArgs& a, std::ostream& log) {
    const ExperimentConstants& c = a.config.constants;
    if (a.kind == "iq" || a.kind == "readout") {
        synthetic::ReadoutChain chain;
        chain.populations = {c.p_g_th, c.p_e_th, c.p_f_th};
        chain.t1 = c.t1;
        chain.t_ro = c.t_ro;
        chain.p_g_th = c.p_g_th;
        chain.p_e_th = c.p_e_th;
        synthetic::LabelledSamples s;
        if (a.kind == "iq") {
            const auto z = chain.centers();
            const std::array<double, 3> w{c.p_g_th, c.p_e_th, c.p_f_th};
            s = synthetic::gaussian_clusters(z, w, chain.sigma, a.samples, a.seed);
        } else {
            s = synthetic::paper_like_readout(chain, a.samples, a.seed);
        }
        io::CsvWriter csv(a.out, {"i_volts", "q_volts"});
        for (const auto& x : s.samples) csv.row({x.i, x.q});
    } else if (a.kind == "reflection") {
        const BlochParams p = BlochParams::from_constants(c, 2.0 * kPi * 30e3);
        const auto deltas = synthetic::detuning_grid(2.0 * kPi * 1e6, 101);
        const auto pts = synthetic::reflection_data(p, deltas, std::polar(0.8, 0.3), a.noise, a.seed);
        io::CsvWriter csv(a.out, {"delta_hz", "re_r", "im_r"});
        for (const auto& pt : pts) csv.row({pt.delta / (2.0 * kPi), pt.r.real(), pt.r.imag()});
    } else if (a.kind == "decay") {
        std::vector<double> waits;
        for (int i = 0; i < 20; ++i) waits.push_back(i * 1e-6);
        const auto pts = synthetic::conditional_decay_data(waits, c.t1, c.p_g_th, 0.696, 0.0, a.noise, a.seed);
        io::CsvWriter csv(a.out, {"t_w_ns", "p_gg"});
        for (const auto& pt : pts) csv.row({pt.t_w * 1e9, pt.probability});
    } else if (a.kind == "power") {
        GateConfig cfg = a.config.gate();
        const GateRun run = simulate_gate(kPi, cfg);
        const auto flux = run.flux(Outcome::kNone, cfg.rates).flux;
        const DetectionChain chain{1e-19, 2e-12, 1e-13, run.drive.rabi(0.5 * c.t_d), c.gamma_a};
        const PowerRecord rec = flux_to_power(flux, chain);
        {
            io::CsvWriter csv(a.out, {"t_ns", "p_raw_W"});
            for (std::size_t i = 0; i < flux.size(); ++i) csv.row({run.grid.time(static_cast<int>(i)) * 1e9, rec.p_raw[i]});
        }
        std::ofstream side(a.out + ".sidecar");
        if (!side) throw Error("cannot open output file: " + a.out + ".sidecar");
        side.precision(17);
        side << "p_vac = " << rec.p_vac << "\np_ref = " << rec.p_ref << "\np_c_plus_vac = " << rec.p_c_plus_vac
             << "\nomega_a = " << rec.omega_a << "\ngamma_a = " << rec.gamma_a << '\n';
    } else {
        throw InvalidArgument("unknown synthetic kind '" + a.kind + "' (iq, readout, reflection, decay, power)");
    }
    log << "wrote " << a.kind << " data to " << a.out << '\n';
}

}  // namespace qgate::cli
