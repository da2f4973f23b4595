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

// Readout fidelities and relaxation models for repeated-readout calibration.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "qgate/errors.hpp"

namespace qgate {

/// Bayes' rule: P(state | outcome) = P(outcome | state) P(state) / P(outcome).
inline double readout_fidelity(double p_outcome_given_state, double p_state, double p_outcome) {
    auto in_unit = [](double p) { return p > 0.0 && p <= 1.0; };
    detail::require(p_outcome > 0.0, "readout_fidelity: P(outcome) must be positive");
    detail::require(in_unit(p_outcome_given_state) && in_unit(p_state) && in_unit(p_outcome),
                    "readout_fidelity: probabilities must lie in (0, 1]");
    return p_outcome_given_state * p_state / p_outcome;
}

/// Probability of finding the qubit again in the state it was heralded in
/// after waiting t_w, relaxing towards the thermal population p_th.
inline double t1_repeat_probability(double t_w, double t1, double p_th) {
    detail::require(t_w >= 0.0, "t1_repeat_probability: t_w must be non-negative");
    detail::require(t1 > 0.0, "t1_repeat_probability: T1 must be positive");
    detail::require(p_th >= 0.0 && p_th <= 1.0, "t1_repeat_probability: p_th must be a probability");
    return (1.0 - p_th) * std::exp(-t_w / t1) + p_th;
}

/// P("g" | heralded g)(t_w) for a qubit relaxing during the wait.
inline double conditional_outcome_model(double t_w, double t1, double p_g_th, double p_gg0, double p_ge0) {
    for (double p : {p_g_th, p_gg0, p_ge0}) {
        detail::require(p >= 0.0 && p <= 1.0, "conditional_outcome_model: probabilities must lie in [0, 1]");
    }
    const double p_g = t1_repeat_probability(t_w, t1, p_g_th);
    return p_g * p_gg0 + (1.0 - p_g) * p_ge0;
}

struct DecayPoint {
    double t_w = 0.0;  // s
    double probability = 0.0;
};

struct ConditionalFit {
    double p_gg0 = 0.0;
    double p_ge0 = 0.0;
    double residual_rms = 0.0;
};

/// Least-squares fit of (P_gg0, P_ge0) in the box [0, 1]^2 with T1 and
/// p_g_th held fixed.
///
/// The model is linear in both parameters, so the box-constrained optimum
/// is found exactly by checking the interior stationary point, the four
/// edges and the four corners.
inline ConditionalFit fit_conditional_model(std::span<const DecayPoint> data, double t1, double p_g_th) {
    detail::require(data.size() >= 4, "fit_conditional_model: need at least 4 points");
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -t_min;
    for (const auto& d : data) {
        detail::require(std::isfinite(d.t_w) && std::isfinite(d.probability), "fit_conditional_model: non-finite data");
        t_min = std::min(t_min, d.t_w);
        t_max = std::max(t_max, d.t_w);
    }
    detail::require(t_max - t_min >= 2.0 * t1, "fit_conditional_model: data must span at least 2 T1");

    // y = a x + b (1 - x), x = p_g(t_w).
    std::vector<double> x(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) x[i] = t1_repeat_probability(data[i].t_w, t1, p_g_th);
    auto sse = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double r = a * x[i] + b * (1.0 - x[i]) - data[i].probability;
            s += r * r;
        }
        return s;
    };
    double sxx = 0.0, syy = 0.0, sxy = 0.0, sxd = 0.0, syd = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double u = x[i], v = 1.0 - x[i], d = data[i].probability;
        sxx += u * u;
        syy += v * v;
        sxy += u * v;
        sxd += u * d;
        syd += v * d;
    }
    auto clamp01 = [](double p) { return std::clamp(p, 0.0, 1.0); };

    std::vector<std::array<double, 2>> candidates;
    const double det = sxx * syy - sxy * sxy;
    if (det > 1e-14 * sxx * syy) {
        candidates.push_back({(sxd * syy - syd * sxy) / det, (syd * sxx - sxd * sxy) / det});
    }
    for (double b : {0.0, 1.0}) {
        if (sxx > 0.0) candidates.push_back({clamp01((sxd - b * sxy) / sxx), b});
    }
    for (double a : {0.0, 1.0}) {
        if (syy > 0.0) candidates.push_back({a, clamp01((syd - a * sxy) / syy)});
    }
    for (double a : {0.0, 1.0}) {
        for (double b : {0.0, 1.0}) candidates.push_back({a, b});
    }

    ConditionalFit best;
    double best_sse = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        if (c[0] < 0.0 || c[0] > 1.0 || c[1] < 0.0 || c[1] > 1.0) continue;
        const double s = sse(c[0], c[1]);
        if (s < best_sse) {
            best_sse = s;
            best.p_gg0 = c[0];
            best.p_ge0 = c[1];
        }
    }
    best.residual_rms = std::sqrt(best_sse / static_cast<double>(data.size()));
    return best;
}

/// One batch of repeated-readout records with its fitted T1.
struct T1Batch {
    int index = 0;
    double t1 = 0.0;  // s
};

/// Keeps batches whose T1 lies within [t1_center - half_width, t1_center + half_width].
inline std::vector<T1Batch> select_batches(std::span<const T1Batch> batches, double t1_center = 5.5e-6,
                                           double half_width = 0.3e-6) {
    detail::require(half_width >= 0.0, "select_batches: half width must be non-negative");
    std::vector<T1Batch> kept;
    for (const auto& b : batches) {
        if (std::abs(b.t1 - t1_center) <= half_width) kept.push_back(b);
    }
    return kept;
}

/// Inverts t1_repeat_probability for T1 given the mean repeat probability
/// of one batch at a single wait time.
inline double t1_from_repeat_probability(double p_repeat, double t_w, double p_th) {
    detail::require(t_w > 0.0, "t1_from_repeat_probability: t_w must be positive");
    detail::require(p_repeat > p_th && p_repeat < 1.0, "t1_from_repeat_probability: p_repeat must lie in (p_th, 1)");
    return -t_w / std::log((p_repeat - p_th) / (1.0 - p_th));
}

}  // namespace qgate
