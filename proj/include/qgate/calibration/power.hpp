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

// Conversion of averaged detected power into photon flux at the sample.

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "qgate/dynamics/qubit.hpp"
#include "qgate/errors.hpp"

namespace qgate {

struct PowerRecord {
    std::vector<double> p_raw;  // W, one value per time bin
    double p_vac = 0.0;         // W, amplifier noise with all inputs off
    double p_ref = 0.0;         // W, far-detuned reference drive
    double p_c_plus_vac = 0.0;  // W, crosstalk plus noise
    double omega_a = 0.0;       // rad/s
    double gamma_a = 0.0;       // rad/s

    void validate() const {
        detail::require(omega_a > 0.0 && gamma_a > 0.0, "PowerRecord: omega_a and gamma_a must be positive");
        detail::require(p_ref > p_c_plus_vac, "PowerRecord: p_ref must exceed crosstalk plus noise");
        for (double p : p_raw) detail::require(std::isfinite(p), "PowerRecord: non-finite p_raw");
    }

    double p_c() const { return p_c_plus_vac - p_vac; }
    // Incoming drive flux |alpha_in|^2 implied by the calibrated Rabi rate.
    double alpha_in_squared() const { return omega_a * omega_a / (4.0 * gamma_a); }
    // Reference power with crosstalk and noise removed, G |alpha_in|^2.
    double reference_signal() const { return p_ref - p_c() - p_vac; }
    double gain() const { return reference_signal() / alpha_in_squared(); }
};

/// Photon flux n_m(t) = (P_raw(t) - P_vac) / G with G fixed by the reference.
inline std::vector<double> power_to_flux(const PowerRecord& rec) {
    rec.validate();
    const double denom = rec.reference_signal();
    if (!(denom > 0.0)) throw InvalidArgument("power_to_flux: non-positive reference signal");
    const double prefactor = rec.alpha_in_squared();
    std::vector<double> flux(rec.p_raw.size());
    for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = prefactor * (rec.p_raw[i] - rec.p_vac) / denom;
    return flux;
}

/// Amplitude analog: alpha_m(t) = (I + iQ) / sqrt(G).
inline std::vector<Complex> iq_to_amplitude(std::span<const Complex> iq, const PowerRecord& rec) {
    rec.validate();
    const double denom = rec.reference_signal();
    if (!(denom > 0.0)) throw InvalidArgument("iq_to_amplitude: non-positive reference signal");
    const double prefactor = rec.omega_a / (2.0 * std::sqrt(rec.gamma_a)) / std::sqrt(denom);
    std::vector<Complex> out(iq.size());
    for (std::size_t i = 0; i < iq.size(); ++i) out[i] = prefactor * iq[i];
    return out;
}

/// Amplification chain producing the averaged powers.
struct DetectionChain {
    double gain = 1.0;       // W per (photon/s)
    double p_vac = 0.0;      // W
    double p_c = 0.0;        // W
    double omega_a = 0.0;    // rad/s
    double gamma_a = 0.0;    // rad/s
};

/// Forward model of the record that a flux trace would produce.
inline PowerRecord flux_to_power(std::span<const double> flux, const DetectionChain& chain) {
    detail::require(chain.gain > 0.0, "flux_to_power: gain must be positive");
    PowerRecord rec;
    rec.p_vac = chain.p_vac;
    rec.p_c_plus_vac = chain.p_c + chain.p_vac;
    rec.omega_a = chain.omega_a;
    rec.gamma_a = chain.gamma_a;
    rec.p_ref = chain.gain * rec.alpha_in_squared() + chain.p_c + chain.p_vac;
    rec.p_raw.resize(flux.size());
    for (std::size_t i = 0; i < flux.size(); ++i) rec.p_raw[i] = chain.gain * flux[i] + chain.p_vac;
    rec.validate();
    return rec;
}

inline std::vector<Complex> amplitude_to_iq(std::span<const Complex> alpha, const DetectionChain& chain) {
    std::vector<Complex> out(alpha.size());
    const double s = std::sqrt(chain.gain);
    for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = s * alpha[i];
    return out;
}

}  // namespace qgate
