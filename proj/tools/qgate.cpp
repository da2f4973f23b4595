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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qgate/cli/commands.hpp"

namespace {

using namespace qgate;

// Options shared by every subcommand that reads a run configuration.
struct Common {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double delay_ns = 0.0;
    bool delay_set = false;
    std::string convention;

    io::RunConfig load() const {
        io::RunConfig cfg = config_path.empty() ? io::RunConfig{} : io::load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (delay_set) cfg.delay_ns = delay_ns;
        if (!convention.empty()) cfg.convention = parse_phase_convention(convention);
        return cfg;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value configuration file");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&c](std::uint64_t s) { c.seed = s, c.seed_set = true; }, "64-bit RNG seed");
    cmd->add_option_function<double>(
        "--delay-ns", [&c](double d) { c.delay_ns = d, c.delay_set = true; }, "time shift applied to output t_ns");
    cmd->add_option("--convention", c.convention, "toy-model phase convention: rabi or main_text");
}

CLI::Option* add_angle(CLI::App* cmd, const std::string& name, double& target, const std::string& help) {
    return cmd->add_option_function<std::string>(
        name, [&target](const std::string& s) { target = io::parse_angle(s); }, help + " (accepts 1.6pi)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qgate: energetics of a driven qubit gate"};
    app.require_subcommand(1);
    Common common;
    int code = cli::kExitOk;
    std::ostream& err = std::cerr;

    cli::SimulatePowerArgs sp;
    std::string postselect = "none";
    auto* simulate = app.add_subcommand("simulate-power", "flux traces for one rotation angle");
    add_common(simulate, common);
    add_angle(simulate, "--theta", sp.theta, "rotation angle");
    simulate->add_option("--postselect", postselect, "g, e or none")->check(CLI::IsMember({"g", "e", "none"}));
    simulate->add_option("--out", sp.out, "output CSV")->required();
    simulate->add_option("--dynamics-out", sp.dynamics_out, "optional Bloch/effect/weak-value CSV");
    simulate->callback([&] {
        code = cli::guarded(err, [&] {
            sp.config = common.load();
            sp.postselect = parse_outcome(postselect);
            cli::simulate_power(sp, std::cout);
        });
    });

    cli::SweepArgs sw;
    std::optional<double> theta_max;
    std::optional<int> steps;
    auto* sweep = app.add_subcommand("sweep-delta-n", "Delta n versus rotation angle");
    add_common(sweep, common);
    sweep->add_option_function<std::string>(
        "--theta-max", [&](const std::string& s) { theta_max = io::parse_angle(s); }, "largest angle (default 6pi)");
    sweep->add_option_function<int>("--steps", [&](int s) { steps = s; }, "number of angles (default 121)");
    sweep->add_option("--out", sw.out, "output CSV")->required();
    sweep->callback([&] {
        code = cli::guarded(err, [&] {
            sw.config = common.load();
            if (theta_max) sw.config.theta_max = *theta_max;
            if (steps) sw.config.sweep_steps = *steps;
            cli::sweep_delta_n(sw, std::cout);
        });
    });

    cli::ToyArgs toy;
    auto* dist = app.add_subcommand("toy-distributions", "post-selected photon-number distributions");
    add_common(dist, common);
    add_angle(dist, "--theta", toy.theta, "rotation angle");
    dist->add_option("--out", toy.out, "output CSV")->required();
    dist->callback([&] {
        code = cli::guarded(err, [&] {
            toy.config = common.load();
            cli::toy_distributions(toy, std::cout);
        });
    });

    cli::ToyBackactionArgs ba;
    auto* back = app.add_subcommand("toy-backaction", "backaction difference versus rotation angle");
    add_common(back, common);
    add_angle(back, "--theta-min", ba.theta_min, "smallest angle");
    add_angle(back, "--theta-max", ba.theta_max, "largest angle");
    back->add_option("--steps", ba.steps, "number of angles");
    back->add_option("--out", ba.out, "output CSV")->required();
    back->callback([&] {
        code = cli::guarded(err, [&] {
            ba.config = common.load();
            cli::toy_backaction(ba, std::cout);
        });
    });

    cli::FitReflectionArgs fr;
    auto* fit = app.add_subcommand("fit-reflection", "fit gamma_a and omega_a to a reflection spectrum");
    add_common(fit, common);
    fit->add_option("--in", fr.in, "CSV with delta_hz, re_r, im_r")->required();
    fit->add_option("--out", fr.out, "output JSON")->required();
    fit->add_option("--gamma-a0", fr.gamma_a0, "initial gamma_a in rad/s");
    fit->add_option("--omega-a0", fr.omega_a0, "initial omega_a in rad/s");
    fit->callback([&] {
        code = cli::guarded(err, [&] {
            fr.config = common.load();
            cli::fit_reflection_cmd(fr, std::cout);
        });
    });

    cli::CalibrateReadoutArgs cr;
    auto* cal = app.add_subcommand("calibrate-readout", "mixture fit and classification of IQ records");
    add_common(cal, common);
    cal->add_option("--in", cr.in, "CSV with i_volts, q_volts")->required();
    cal->add_option("--out", cr.out, "output JSON")->required();
    cal->add_option("--components", cr.components, "mixture components (1 to 3)");
    cal->add_option("--radius", cr.radius_factor, "acceptance radius in units of sigma");
    cal->callback([&] {
        code = cli::guarded(err, [&] {
            cr.seed = common.load().seed;
            cli::calibrate_readout(cr, std::cout);
        });
    });

    cli::CalibratePowerArgs cp;
    auto* power = app.add_subcommand("calibrate-power", "convert averaged power to photon flux");
    power->add_option("--in", cp.in, "CSV with t_ns, p_raw_W")->required();
    power->add_option("--sidecar", cp.sidecar, "key = value scalars (default: <in>.sidecar)");
    power->add_option("--out", cp.out, "output CSV")->required();
    power->callback([&] {
        code = cli::guarded(err, [&] {
            if (cp.sidecar.empty()) cp.sidecar = cp.in + ".sidecar";
            cli::calibrate_power(cp, std::cout);
        });
    });

    cli::GenSyntheticArgs gs;
    auto* gen = app.add_subcommand("gen-synthetic", "write synthetic input data with known ground truth");
    add_common(gen, common);
    gen->add_option("--kind", gs.kind, "iq, readout, reflection, decay or power")->required();
    gen->add_option("--out", gs.out, "output CSV")->required();
    gen->add_option("--samples", gs.samples, "number of IQ records");
    gen->add_option("--noise", gs.noise, "additive noise standard deviation");
    gen->callback([&] {
        code = cli::guarded(err, [&] {
            gs.config = common.load();
            gs.seed = gs.config.seed;
            cli::gen_synthetic(gs, std::cout);
        });
    });

    CLI11_PARSE(app, argc, argv);
    return code;
}
