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

// Seeded generators of synthetic measurement records with known ground truth.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qgate/calibration/mixture.hpp"
#include "qgate/calibration/power.hpp"
#include "qgate/calibration/readout.hpp"
#include "qgate/fitting/bloch.hpp"

namespace qgate::synthetic {

struct LabelledSamples {
    std::vector<IQSample> samples;
    std::vector<StateLabel> truth;  // state at the start of the readout
};

/// Isotropic Gaussian clusters with the given centres and weights.
inline LabelledSamples gaussian_clusters(std::span<const Complex> centers, std::span<const double> weights,
                                         double sigma, std::size_t n, std::uint64_t seed) {
    detail::require(centers.size() == weights.size() && !centers.empty() && centers.size() <= 3,
                    "gaussian_clusters: need 1 to 3 centres with matching weights");
    detail::require(sigma > 0.0, "gaussian_clusters: sigma must be positive");
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    std::normal_distribution<double> noise(0.0, sigma);
    LabelledSamples out;
    out.samples.reserve(n);
    out.truth.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int c = pick(rng);
        const double i = centers[c].real() + noise(rng);
        const double q = centers[c].imag() + noise(rng);
        out.samples.push_back({i, q});
        out.truth.push_back(static_cast<StateLabel>(c));
    }
    return out;
}

/// Readout of a transmon that may jump during the integration window.
struct ReadoutChain {
    std::array<double, 3> populations{0.892, 0.088, 0.02};  // g, e, f at the start of the readout
    double sigma = 1e-3;        // V
    double separation = 6.0;    // |z_e - z_g| in units of sigma
    double t1 = 5.5e-6;         // s
    double t_ro = 704e-9;       // s
    double p_e_th = 0.088;      // sets the upward rate
    double p_g_th = 0.892;

    std::array<Complex, 3> centers() const {
        const double d = separation * sigma;
        return {Complex(0.0, 0.0), Complex(d, 0.0), d * std::polar(1.0, kPi / 3.0)};
    }
};

/// Records whose pointer state moves to the new centre if the qubit jumps
/// during the readout; the integrated record interpolates linearly between
/// the two centres according to the time spent in each state. g <-> e jumps
/// follow the thermal rates, f decays to e at 2/T1.
inline LabelledSamples paper_like_readout(const ReadoutChain& chain, std::size_t n, std::uint64_t seed) {
    detail::require(chain.sigma > 0.0 && chain.t1 > 0.0 && chain.t_ro > 0.0, "paper_like_readout: invalid chain");
    const double norm = chain.p_g_th + chain.p_e_th;
    const double gamma_up = chain.p_e_th / norm / chain.t1;
    const double gamma_down = chain.p_g_th / norm / chain.t1;
    const std::array<double, 3> rate{gamma_up, gamma_down, 2.0 / chain.t1};
    const std::array<int, 3> target{1, 0, 1};
    const auto z = chain.centers();

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(chain.populations.begin(), chain.populations.end());
    std::normal_distribution<double> noise(0.0, chain.sigma);
    LabelledSamples out;
    out.samples.reserve(n);
    out.truth.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int s = pick(rng);
        Complex mean = z[s];
        if (rate[s] > 0.0) {
            std::exponential_distribution<double> jump(rate[s]);
            const double frac = std::min(jump(rng) / chain.t_ro, 1.0);
            mean = frac * z[s] + (1.0 - frac) * z[target[s]];
        }
        out.samples.push_back({mean.real() + noise(rng), mean.imag() + noise(rng)});
        out.truth.push_back(static_cast<StateLabel>(s));
    }
    return out;
}

/// Reflection spectrum seen through a chain with complex gain, plus
/// circular complex Gaussian noise with E|n|^2 = noise_sigma^2, i.e.
/// noise_sigma / sqrt(2) per quadrature.
inline std::vector<ReflectionPoint> reflection_data(const BlochParams& params, std::span<const double> deltas,
                                                    Complex gain, double noise_sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<ReflectionPoint> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        Complex r = gain * reflection_model(params, d);
        if (noise_sigma > 0.0) r += noise_sigma * std::sqrt(0.5) * Complex(noise(rng), noise(rng));
        out.push_back({d, r});
    }
    return out;
}

/// Uniform detuning grid over [-span, span] (rad/s).
inline std::vector<double> detuning_grid(double span, int points) {
    detail::require(points >= 2 && span > 0.0, "detuning_grid: invalid grid");
    std::vector<double> d(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) d[i] = -span + 2.0 * span * i / (points - 1);
    return d;
}

/// Repeated-readout conditional probabilities with additive Gaussian noise.
inline std::vector<DecayPoint> conditional_decay_data(std::span<const double> waits, double t1, double p_g_th,
                                                      double p_gg0, double p_ge0, double noise_sigma,
                                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<DecayPoint> out;
    out.reserve(waits.size());
    for (double t : waits) {
        double p = conditional_outcome_model(t, t1, p_g_th, p_gg0, p_ge0);
        if (noise_sigma > 0.0) p += noise_sigma * noise(rng);
        out.push_back({t, p});
    }
    return out;
}

/// Per-batch T1 values scattered around t1_mean.
inline std::vector<T1Batch> t1_batches(std::size_t count, double t1_mean, double t1_spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> spread(t1_mean, t1_spread);
    std::vector<T1Batch> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = {static_cast<int>(i), spread(rng)};
    return out;
}

}  // namespace qgate::synthetic
