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

// Plain-text key = value run configuration.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "qgate/dynamics/pulse.hpp"
#include "qgate/dynamics/qubit.hpp"
#include "qgate/energetics.hpp"
#include "qgate/io/csv.hpp"
#include "qgate/toy_model.hpp"

namespace qgate::io {

/// Parses an angle in radians; accepts plain numbers, "pi" and "<x>pi".
inline double parse_angle(std::string_view text) {
    std::string s = trim(text);
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        std::string factor = trim(s.substr(0, s.size() - 2));
        if (!factor.empty() && factor.back() == '*') factor = trim(factor.substr(0, factor.size() - 1));
        if (factor.empty()) return kPi;
        if (factor == "-") return -kPi;
        return parse_double(factor, "angle") * kPi;
    }
    return parse_double(s, "angle");
}

inline PulseShape parse_pulse_shape(std::string_view s) {
    if (s == "gaussian") return PulseShape::kGaussianEdged;
    if (s == "square") return PulseShape::kSquare;
    throw InvalidArgument("unknown pulse shape '" + std::string(s) + "' (expected gaussian or square)");
}

inline bool parse_bool(std::string_view s) {
    if (s == "true" || s == "on" || s == "1") return true;
    if (s == "false" || s == "off" || s == "0") return false;
    throw InvalidArgument("expected a boolean, got '" + std::string(s) + "'");
}

struct RunConfig {
    ExperimentConstants constants;
    double theta_max = 6.0 * kPi;
    int sweep_steps = 121;  // pi/20 spacing over [0, 6 pi]
    int n_steps = 4096;
    std::uint64_t seed = 0;
    PhaseConvention convention = PhaseConvention::kRabiAngle;
    PulseShape shape = PulseShape::kGaussianEdged;
    double delay_ns = 0.0;
    bool decoherence = true;  // false: radiative decay only, ground start, perfect readout

    GateConfig gate() const {
        constants.validate();
        GateConfig g = decoherence ? GateConfig::from_constants(constants, n_steps)
                                   : GateConfig::ideal(constants.gamma_a, constants.t_d, constants.w, n_steps);
        g.shape = shape;
        return g;
    }

    /// Applies one key = value assignment; unknown keys are rejected.
    void set(const std::string& key, const std::string& value) {
        auto num = [&] { return parse_double(value, key); };
        static const std::map<std::string, double ExperimentConstants::*> scalars = {
            {"omega_q", &ExperimentConstants::omega_q}, {"omega_r", &ExperimentConstants::omega_r},
            {"chi", &ExperimentConstants::chi},         {"kappa", &ExperimentConstants::kappa},
            {"anharmonicity", &ExperimentConstants::anharmonicity},
            {"t1", &ExperimentConstants::t1},           {"t_phi", &ExperimentConstants::t_phi},
            {"gamma_a", &ExperimentConstants::gamma_a}, {"t_d", &ExperimentConstants::t_d},
            {"t_ro", &ExperimentConstants::t_ro},       {"w", &ExperimentConstants::w},
            {"p_g_th", &ExperimentConstants::p_g_th},   {"p_e_th", &ExperimentConstants::p_e_th},
            {"p_f_th", &ExperimentConstants::p_f_th},   {"f_g", &ExperimentConstants::f_g},
            {"f_e", &ExperimentConstants::f_e},
        };
        if (auto it = scalars.find(key); it != scalars.end()) {
            constants.*(it->second) = num();
        } else if (key == "theta_max") {
            theta_max = parse_angle(value);
        } else if (key == "sweep_steps") {
            sweep_steps = static_cast<int>(num());
        } else if (key == "n_steps") {
            n_steps = static_cast<int>(num());
        } else if (key == "seed") {
            seed = std::stoull(value);
        } else if (key == "phase_convention") {
            convention = parse_phase_convention(value);
        } else if (key == "pulse_shape") {
            shape = parse_pulse_shape(value);
        } else if (key == "delay_ns") {
            delay_ns = num();
        } else if (key == "decoherence") {
            decoherence = parse_bool(value);
        } else {
            throw InvalidArgument("unknown configuration key '" + key + "'");
        }
    }
};

/// Reads key = value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

inline RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    for (const auto& [k, v] : read_key_values(path)) cfg.set(k, v);
    cfg.constants.validate();
    return cfg;
}

}  // namespace qgate::io
