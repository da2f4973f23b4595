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

// Gaussian mixture model of single-shot readout records in the IQ plane.
// All components share one isotropic standard deviation sigma_iq.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgate/dynamics/qubit.hpp"
#include "qgate/errors.hpp"

namespace qgate {

/// One demodulated readout record.
struct IQSample {
    double i = 0.0;  // V
    double q = 0.0;  // V

    Complex z() const { return {i, q}; }
};

enum class StateLabel { kG = 0, kE = 1, kF = 2, kRejected = 3 };

inline std::string_view to_string(StateLabel l) {
    switch (l) {
        case StateLabel::kG: return "g";
        case StateLabel::kE: return "e";
        case StateLabel::kF: return "f";
        case StateLabel::kRejected: return "rejected";
    }
    return "?";
}

struct GaussianComponent {
    Complex center;
    double sigma = 0.0;  // shared isotropic std per quadrature
    double weight = 0.0;
    StateLabel label = StateLabel::kG;
};

struct MixtureModel {
    std::vector<GaussianComponent> components;  // ordered g, e, f
    std::vector<double> log_likelihood_trace;    // per-sample log-likelihood after each iteration
    int iterations = 0;
    int restarts = 0;
    bool labels_consistent = true;  // f projects beyond g along the g -> e axis

    double sigma() const { return components.empty() ? 0.0 : components.front().sigma; }

    const GaussianComponent& component(StateLabel l) const {
        for (const auto& c : components) {
            if (c.label == l) return c;
        }
        throw InvalidArgument("MixtureModel: no component labelled " + std::string(to_string(l)));
    }
};

struct EmOptions {
    std::uint64_t seed = 0;
    int max_iter = 500;
    double tol = 1e-9;
    int starts = 8;  // independent seedings; the highest final likelihood wins
};

namespace detail {

struct EmState {
    std::vector<Complex> centers;
    std::vector<double> weights;
    double variance = 0.0;
};

inline double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// k-means++ seeding.
inline EmState seed_em(std::span<const IQSample> samples, int k, std::mt19937_64& rng) {
    const std::size_t n = samples.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    EmState s;
    s.centers.push_back(samples[pick(rng)].z());
    std::vector<double> d2(n);
    while (static_cast<int>(s.centers.size()) < k) {
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Complex& c : s.centers) best = std::min(best, std::norm(samples[i].z() - c));
            d2[i] = best;
        }
        std::discrete_distribution<std::size_t> draw(d2.begin(), d2.end());
        s.centers.push_back(samples[draw(rng)].z());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& c : s.centers) best = std::min(best, std::norm(samples[i].z() - c));
        total += best;
    }
    s.variance = std::max(total / (2.0 * static_cast<double>(n)), 1e-300);
    s.weights.assign(k, 1.0 / k);
    return s;
}

// Fills resp (n x k, row-major) and returns the mean log-likelihood.
inline double e_step(std::span<const IQSample> samples, const EmState& s, std::vector<double>& resp) {
    const std::size_t k = s.centers.size();
    const double log_norm = -std::log(2.0 * kPi * s.variance);
    std::vector<double> logp(k);
    double ll = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            logp[j] = std::log(s.weights[j]) + log_norm - std::norm(samples[i].z() - s.centers[j]) / (2.0 * s.variance);
        }
        const double lse = log_sum_exp(logp);
        ll += lse;
        for (std::size_t j = 0; j < k; ++j) resp[i * k + j] = std::exp(logp[j] - lse);
    }
    return ll / static_cast<double>(samples.size());
}

inline void m_step(std::span<const IQSample> samples, EmState& s, const std::vector<double>& resp) {
    const std::size_t k = s.centers.size();
    const std::size_t n = samples.size();
    std::vector<double> nk(k, 0.0);
    std::vector<Complex> sum(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            nk[j] += resp[i * k + j];
            sum[j] += resp[i * k + j] * samples[i].z();
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        s.weights[j] = nk[j] / static_cast<double>(n);
        s.centers[j] = nk[j] > 0.0 ? sum[j] / nk[j] : s.centers[j];
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) ss += resp[i * k + j] * std::norm(samples[i].z() - s.centers[j]);
    }
    s.variance = ss / (2.0 * static_cast<double>(n));
}

}  // namespace detail

namespace detail {

struct EmRun {
    EmState state;
    std::vector<double> trace;
    double ll = 0.0;
    int iterations = 0;
    bool degenerate = false;
};

inline EmRun em_seed_run(std::span<const IQSample> samples, int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    EmRun run;
    run.state = seed_em(samples, k, rng);
    return run;
}

// Advances run by at most `limit` EM iterations; stops early on convergence
// (converged is set) or degeneracy.
inline void em_iterate(std::span<const IQSample> samples, EmRun& run, const EmOptions& opts, int limit, double spread,
                       bool& converged) {
    const double n = static_cast<double>(samples.size());
    const int k = static_cast<int>(run.state.centers.size());
    std::vector<double> resp(samples.size() * static_cast<std::size_t>(k));
    run.ll = e_step(samples, run.state, resp);
    converged = false;
    for (int step = 0; step < limit && run.iterations < opts.max_iter; ++step) {
        m_step(samples, run.state, resp);
        const double min_weight = *std::min_element(run.state.weights.begin(), run.state.weights.end());
        if (min_weight < 10.0 / n || !(std::sqrt(run.state.variance) > 1e-12 * std::max(spread, 1e-300))) {
            run.degenerate = true;
            return;
        }
        const double next = e_step(samples, run.state, resp);
        // EM never decreases the likelihood; allow only roundoff.
        if (next < run.ll - 1e-12 * std::max(1.0, std::abs(run.ll))) {
            throw ConvergenceError("em_fit: log-likelihood decreased from " + std::to_string(run.ll) + " to " +
                                   std::to_string(next));
        }
        run.trace.push_back(next);
        const double gain = next - run.ll;
        run.ll = next;
        ++run.iterations;
        if (gain < opts.tol) {
            converged = true;
            return;
        }
    }
}

}  // namespace detail

/// Fits a k-component isotropic Gaussian mixture by expectation-maximization.
///
/// Components are labelled by decreasing weight (g, e, f). Several k-means++
/// seedings derived from opts.seed are run for a few iterations each and the
/// most likely one is iterated to convergence. A degenerate start (a weight
/// below 10/N or a collapsed sigma) is reseeded, at most five times per start.
inline MixtureModel em_fit(std::span<const IQSample> samples, int k, const EmOptions& opts = {}) {
    detail::require(k >= 1 && k <= 3, "em_fit: k must be 1, 2 or 3");
    detail::require(samples.size() >= 100 * static_cast<std::size_t>(k), "em_fit: need at least 100 samples per component");
    detail::require(opts.starts >= 1, "em_fit: need at least one start");
    for (const auto& s : samples) {
        detail::require(std::isfinite(s.i) && std::isfinite(s.q), "em_fit: non-finite IQ sample");
    }
    const double n = static_cast<double>(samples.size());
    double spread = 0.0;
    {
        Complex mean = 0.0;
        for (const auto& s : samples) mean += s.z();
        mean /= n;
        for (const auto& s : samples) spread += std::norm(s.z() - mean);
        spread = std::sqrt(spread / (2.0 * n));
    }

    // Every start gets a short burst of iterations; only the most likely one
    // is iterated to convergence.
    constexpr int kMaxRestarts = 5;
    constexpr int kBurst = 20;
    std::optional<detail::EmRun> best;
    int restarts = 0;
    std::uint64_t draw = 0;
    for (int start = 0; start < opts.starts; ++start) {
        for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
            detail::EmRun run = detail::em_seed_run(samples, k, opts.seed + 0x9E3779B97F4A7C15ULL * draw++);
            bool converged = false;
            detail::em_iterate(samples, run, opts, kBurst, spread, converged);
            if (run.degenerate) {
                ++restarts;
                continue;
            }
            if (!best || run.ll > best->ll) best = std::move(run);
            break;
        }
    }
    if (!best) throw ConvergenceError("em_fit: degenerate mixture after 5 restarts");
    bool converged = false;
    detail::em_iterate(samples, *best, opts, opts.max_iter, spread, converged);
    if (best->degenerate) throw ConvergenceError("em_fit: mixture became degenerate");

    const detail::EmState& state = best->state;
    std::vector<std::size_t> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return state.weights[a] > state.weights[b]; });
    MixtureModel model;
    const double sigma = std::sqrt(state.variance);
    for (std::size_t r = 0; r < order.size(); ++r) {
        model.components.push_back({state.centers[order[r]], sigma, state.weights[order[r]], static_cast<StateLabel>(r)});
    }
    if (k == 3) {
        const Complex axis = model.components[1].center - model.components[0].center;
        const Complex f = model.components[2].center - model.components[0].center;
        model.labels_consistent = (std::conj(axis) * f).real() > 0.0;
    }
    model.log_likelihood_trace = std::move(best->trace);
    model.iterations = best->iterations;
    model.restarts = restarts;
    return model;
}

/// True if any two classification circles of radius radius_factor * sigma intersect.
inline bool circles_overlap(const MixtureModel& model, double radius_factor = 1.5) {
    const double r = radius_factor * model.sigma();
    for (std::size_t a = 0; a < model.components.size(); ++a) {
        for (std::size_t b = a + 1; b < model.components.size(); ++b) {
            if (std::abs(model.components[a].center - model.components[b].center) < 2.0 * r) return true;
        }
    }
    return false;
}

/// Label of the circle of radius radius_factor * sigma containing the
/// sample; nearest centre if several contain it, rejected if none does.
inline StateLabel classify_with_rejection(const MixtureModel& model, const IQSample& sample,
                                          double radius_factor = 1.5) {
    const double r = radius_factor * model.sigma();
    StateLabel best = StateLabel::kRejected;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& c : model.components) {
        const double d = std::abs(sample.z() - c.center);
        if (d < r && d < best_d) {
            best = c.label;
            best_d = d;
        }
    }
    return best;
}

/// Most probable component (the classifier sector), never rejected.
inline StateLabel classify_sector(const MixtureModel& model, const IQSample& sample) {
    StateLabel best = StateLabel::kRejected;
    double best_score = -std::numeric_limits<double>::infinity();
    const double var = model.sigma() * model.sigma();
    for (const auto& c : model.components) {
        const double score = std::log(c.weight) - std::norm(sample.z() - c.center) / (2.0 * var);
        if (score > best_score) {
            best_score = score;
            best = c.label;
        }
    }
    return best;
}

/// Outcome statistics of a data set under a fitted model.
struct ClassificationSummary {
    std::size_t total = 0;
    std::array<double, 4> circle_fraction{};  // g, e, f, rejected
    std::array<double, 3> sector_fraction{};  // g, e, f
    bool overlap_warning = false;

    double rejected_fraction() const { return circle_fraction[3]; }
};

inline ClassificationSummary summarize_classification(const MixtureModel& model, std::span<const IQSample> samples,
                                                      double radius_factor = 1.5) {
    ClassificationSummary s;
    s.total = samples.size();
    s.overlap_warning = circles_overlap(model, radius_factor);
    if (samples.empty()) return s;
    for (const auto& x : samples) {
        s.circle_fraction[static_cast<int>(classify_with_rejection(model, x, radius_factor))] += 1.0;
        s.sector_fraction[static_cast<int>(classify_sector(model, x))] += 1.0;
    }
    for (double& v : s.circle_fraction) v /= static_cast<double>(samples.size());
    for (double& v : s.sector_fraction) v /= static_cast<double>(samples.size());
    return s;
}

}  // namespace qgate
