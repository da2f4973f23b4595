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

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qgate/dynamics/qubit.hpp"
#include "qgate/errors.hpp"
#include "qgate/numeric.hpp"

namespace qgate {

enum class PulseShape { kGaussianEdged, kSquare };

inline constexpr std::size_t kEnvelopeQuadratureIntervals = 4096;

/// Resonant drive pulse. The incoming field amplitude alpha_in(t) is the
/// envelope, in sqrt(photons/s); the Rabi rate is 2 sqrt(gamma_a) alpha_in.
struct DriveSpec {
    double amplitude = 0.0;   // A
    double edge_width = 0.0;  // w, s
    double duration = 0.0;    // t_d, s
    double gamma_a = 0.0;     // rad/s
    PulseShape shape = PulseShape::kGaussianEdged;

    void validate() const {
        detail::require(std::isfinite(amplitude) && amplitude >= 0.0, "DriveSpec: amplitude must be >= 0");
        detail::require(duration > 0.0, "DriveSpec: duration must be > 0");
        detail::require(gamma_a >= 0.0, "DriveSpec: gamma_a must be >= 0");
        if (shape == PulseShape::kGaussianEdged) {
            detail::require(edge_width > 0.0, "DriveSpec: edge width must be > 0");
            detail::require(duration >= 4.0 * edge_width, "DriveSpec: t_d < 4w, the Gaussian edges overlap");
        }
    }

    double envelope(double t) const;
    double rabi(double t) const { return 2.0 * std::sqrt(gamma_a) * envelope(t); }

    /// Rotation angle 2 sqrt(gamma_a) * integral of the envelope.
    double theta() const;

    /// Mean photon number of the incoming pulse, integral of alpha_in^2.
    double photon_number() const;
};

namespace detail {

// Envelope for unit amplitude; t is assumed inside [0, t_d].
inline double unit_envelope(double t, double t_d, double w, PulseShape shape) {
    if (shape == PulseShape::kSquare) {
        return 1.0;
    }
    // exp(-(t - t_c)^2 / (2 w^2 / (8 ln 2)))
    const double inv_var = 8.0 * std::numbers::ln2 / (2.0 * w * w);
    if (t <= 2.0 * w) {
        const double u = t - 2.0 * w;
        return std::exp(-u * u * inv_var);
    }
    if (t_d - t <= 2.0 * w) {
        const double u = t - t_d + 2.0 * w;
        return std::exp(-u * u * inv_var);
    }
    return 1.0;
}

inline double unit_envelope_area(double t_d, double w, PulseShape shape) {
    return simpson([&](double t) { return unit_envelope(t, t_d, w, shape); }, 0.0, t_d,
                   kEnvelopeQuadratureIntervals);
}

}  // namespace detail

/// Gaussian-edged square envelope: Gaussian rise centred at 2w, flat top
/// at A, mirrored Gaussian fall over the last 2w.
inline double pulse_envelope(const DriveSpec& spec, double t) {
    spec.validate();
    const double slack = 1e-12 * spec.duration;
    if (!(t >= -slack && t <= spec.duration + slack)) {
        throw InvalidArgument("pulse_envelope: t = " + std::to_string(t) + " outside [0, t_d]");
    }
    t = std::clamp(t, 0.0, spec.duration);
    return spec.amplitude * detail::unit_envelope(t, spec.duration, spec.edge_width, spec.shape);
}

inline double DriveSpec::envelope(double t) const { return pulse_envelope(*this, t); }

inline double DriveSpec::theta() const {
    validate();
    return 2.0 * std::sqrt(gamma_a) * amplitude * detail::unit_envelope_area(duration, edge_width, shape);
}

inline double DriveSpec::photon_number() const {
    validate();
    return amplitude * amplitude *
           simpson(
               [&](double t) {
                   const double f = detail::unit_envelope(t, duration, edge_width, shape);
                   return f * f;
               },
               0.0, duration, kEnvelopeQuadratureIntervals);
}

/// Amplitude A for which the pulse rotates the qubit by theta.
inline double amplitude_for_theta(double theta, double gamma_a, double t_d, double w,
                                  PulseShape shape = PulseShape::kGaussianEdged) {
    detail::require(std::isfinite(theta) && theta >= 0.0, "amplitude_for_theta: theta must be >= 0");
    detail::require(gamma_a > 0.0, "amplitude_for_theta: gamma_a must be > 0");
    DriveSpec probe{1.0, w, t_d, gamma_a, shape};
    probe.validate();
    if (theta == 0.0) {
        return 0.0;
    }
    return theta / (2.0 * std::sqrt(gamma_a) * detail::unit_envelope_area(t_d, w, shape));
}

inline DriveSpec drive_for_theta(double theta, double gamma_a, double t_d, double w,
                                 PulseShape shape = PulseShape::kGaussianEdged) {
    return DriveSpec{amplitude_for_theta(theta, gamma_a, t_d, w, shape), w, t_d, gamma_a, shape};
}

}  // namespace qgate
