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

// Drive pulse as a stationary oscillator measured by a decoherence-free
// qubit that starts in |g>. After the interaction the Kraus operators on
// the oscillator are
//   M_g = cos(phi(n)),   M_e = e_hat sin(phi(n)),   e_hat = sum |n><n+1|,
// with phi(n) the per-Fock rotation of the qubit.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgate/dynamics/qubit.hpp"
#include "qgate/errors.hpp"

namespace qgate {

/// How the per-Fock angle phi(n) relates to gamma_a t_d.
///
/// kRabiAngle: phi(n) = sqrt(gamma_a t_d n), half the Rabi angle
///   sqrt(4 gamma_a t_d n), so a coherent input with mean n_in gives
///   P(e) ~ sin^2(theta / 2).
/// kMainText: phi(n) = sqrt(4 gamma_a t_d n), the full Rabi angle used
///   directly as the operator argument; P(e) ~ sin^2(theta).
enum class PhaseConvention { kRabiAngle, kMainText };

inline std::string_view to_string(PhaseConvention c) {
    return c == PhaseConvention::kRabiAngle ? "rabi" : "main_text";
}

inline PhaseConvention parse_phase_convention(std::string_view s) {
    if (s == "rabi") return PhaseConvention::kRabiAngle;
    if (s == "main_text") return PhaseConvention::kMainText;
    throw InvalidArgument("unknown phase convention '" + std::string(s) + "' (expected rabi or main_text)");
}

inline constexpr double kMinOutcomeProbability = 1e-12;

/// Truncated photon-number amplitudes c_0 .. c_{N_max}.
struct FockVector {
    std::vector<Complex> amplitudes;

    static FockVector fock(int m, int n_max) {
        detail::require(m >= 0 && m <= n_max, "FockVector::fock: m outside [0, n_max]");
        FockVector v;
        v.amplitudes.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        v.amplitudes[m] = 1.0;
        return v;
    }

    int n_max() const { return static_cast<int>(amplitudes.size()) - 1; }

    double norm_squared() const {
        long double s = 0.0L;
        for (const Complex& c : amplitudes) s += std::norm(c);
        return static_cast<double>(s);
    }

    std::vector<double> distribution() const {
        std::vector<double> p(amplitudes.size());
        for (std::size_t n = 0; n < amplitudes.size(); ++n) p[n] = std::norm(amplitudes[n]);
        return p;
    }

    double mean_photon_number() const {
        long double s = 0.0L;
        long double norm = 0.0L;
        for (std::size_t n = 0; n < amplitudes.size(); ++n) {
            const long double p = std::norm(amplitudes[n]);
            s += p * static_cast<long double>(n);
            norm += p;
        }
        return static_cast<double>(s / norm);
    }

    /// Probability mass above n_max - 10.
    double tail_mass() const {
        long double s = 0.0L;
        for (std::size_t n = static_cast<std::size_t>(std::max(0, n_max() - 9)); n < amplitudes.size(); ++n) {
            s += std::norm(amplitudes[n]);
        }
        return static_cast<double>(s);
    }
};

/// Default truncation ceil(n_in + 10 sqrt(n_in + 1) + 30).
inline int default_truncation(double n_in) {
    detail::require(std::isfinite(n_in) && n_in >= 0.0, "default_truncation: n_in must be >= 0");
    return static_cast<int>(std::ceil(n_in + 10.0 * std::sqrt(n_in + 1.0) + 30.0));
}

/// Coherent state with Poisson weights of mean n_in, evaluated in log space.
inline FockVector coherent_state(double n_in, int n_max) {
    detail::require(std::isfinite(n_in) && n_in >= 0.0, "coherent_state: n_in must be >= 0");
    if (n_max < n_in + 8.0 * std::sqrt(n_in) + 20.0) {
        throw TruncationError("coherent_state: N_max = " + std::to_string(n_max) + " too small for n_in = " +
                              std::to_string(n_in));
    }
    FockVector v;
    v.amplitudes.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (n_in == 0.0) {
        v.amplitudes[0] = 1.0;
        return v;
    }
    const long double log_n = std::log(static_cast<long double>(n_in));
    for (int n = 0; n <= n_max; ++n) {
        const long double nl = n;
        const long double log_c = -0.5L * n_in + 0.5L * nl * log_n - 0.5L * std::lgamma(nl + 1.0L);
        v.amplitudes[n] = static_cast<double>(std::exp(log_c));
    }
    if (v.tail_mass() >= 1e-10) {
        throw TruncationError("coherent_state: tail mass above N_max - 10 exceeds 1e-10");
    }
    return v;
}

struct ToyParams {
    double gamma_a_t_d = 0.0;
    double n_in = 0.0;
    PhaseConvention convention = PhaseConvention::kRabiAngle;

    /// n_in chosen so that theta = sqrt(4 gamma_a t_d n_in).
    static ToyParams from_theta(double theta, double gamma_a_t_d,
                                PhaseConvention convention = PhaseConvention::kRabiAngle) {
        detail::require(gamma_a_t_d > 0.0, "ToyParams: gamma_a t_d must be > 0");
        detail::require(std::isfinite(theta) && theta >= 0.0, "ToyParams: theta must be >= 0");
        return ToyParams{gamma_a_t_d, theta * theta / (4.0 * gamma_a_t_d), convention};
    }

    double theta() const { return std::sqrt(4.0 * gamma_a_t_d * n_in); }

    double angle(int n) const {
        const double k = convention == PhaseConvention::kRabiAngle ? 1.0 : 4.0;
        return std::sqrt(k * gamma_a_t_d * static_cast<double>(n));
    }
};

struct MeasurementOutcome {
    Outcome label = Outcome::kGround;
    double probability = 0.0;
    std::optional<FockVector> post_state;  // empty when the outcome is impossible
    double mean_n = 0.0;

    bool defined() const { return post_state.has_value(); }
};

namespace detail {

inline void require_normalized(const FockVector& psi, const char* who) {
    require(!psi.amplitudes.empty(), std::string(who) + ": empty Fock vector");
    require(std::abs(psi.norm_squared() - 1.0) <= 1e-9, std::string(who) + ": Fock vector not normalized");
}

inline MeasurementOutcome finish_outcome(Outcome label, std::vector<Complex> amps) {
    MeasurementOutcome out;
    out.label = label;
    FockVector unnormalized{std::move(amps)};
    out.probability = unnormalized.norm_squared();
    if (out.probability > kMinOutcomeProbability) {
        const double inv = 1.0 / std::sqrt(out.probability);
        for (Complex& c : unnormalized.amplitudes) c *= inv;
        out.mean_n = unnormalized.mean_photon_number();
        out.post_state = std::move(unnormalized);
    }
    return out;
}

}  // namespace detail

/// Applies M_g and M_e to psi. Probabilities are the squared norms before
/// renormalization; the e post-state is shifted down by one photon.
inline std::pair<MeasurementOutcome, MeasurementOutcome> measurement_operators(const ToyParams& params,
                                                                               const FockVector& psi) {
    detail::require_normalized(psi, "measurement_operators");
    const std::size_t size = psi.amplitudes.size();
    std::vector<Complex> g(size, 0.0);
    std::vector<Complex> e(size, 0.0);
    for (std::size_t n = 0; n < size; ++n) {
        const double phi = params.angle(static_cast<int>(n));
        g[n] = psi.amplitudes[n] * std::cos(phi);
        if (n >= 1) {
            e[n - 1] = psi.amplitudes[n] * std::sin(phi);
        }
    }
    return {detail::finish_outcome(Outcome::kGround, std::move(g)),
            detail::finish_outcome(Outcome::kExcited, std::move(e))};
}

/// Photon-number distribution of the drive after post-selecting outcome.
inline std::vector<double> postselected_distribution(const ToyParams& params, const FockVector& psi,
                                                     Outcome outcome) {
    detail::require(outcome != Outcome::kNone, "postselected_distribution: outcome must be g or e");
    const auto [g, e] = measurement_operators(params, psi);
    const MeasurementOutcome& m = outcome == Outcome::kGround ? g : e;
    if (!m.defined()) {
        throw IncompatiblePostSelection("postselected_distribution: outcome '" + std::string(to_string(outcome)) +
                                        "' has probability " + std::to_string(m.probability));
    }
    return m.post_state->distribution();
}

struct ToyDeltaN {
    double theta = 0.0;
    double n_in = 0.0;
    double p_g = 0.0;
    double p_e = 0.0;
    double mean_g = 0.0;  // <n> after outcome g
    double mean_e = 0.0;  // <n> after outcome e, one photon already removed
    double dn_g = 0.0;
    double dn_e = 0.0;
    double dn_none = 0.0;
};

/// Photon-number change of a coherent drive of angle theta for each
/// post-selection. dn_none = P(g) dn_g + P(e) dn_e, which equals -P(e)
/// by energy conservation.
inline ToyDeltaN delta_n_toy(double theta, double gamma_a_t_d,
                             PhaseConvention convention = PhaseConvention::kRabiAngle) {
    detail::require(theta > 0.0, "delta_n_toy: theta must be > 0");
    const ToyParams params = ToyParams::from_theta(theta, gamma_a_t_d, convention);
    const FockVector psi = coherent_state(params.n_in, default_truncation(params.n_in));
    const auto [g, e] = measurement_operators(params, psi);
    ToyDeltaN out;
    out.theta = theta;
    out.n_in = params.n_in;
    out.p_g = g.probability;
    out.p_e = e.probability;
    out.mean_g = g.defined() ? g.mean_n : params.n_in;
    out.mean_e = e.defined() ? e.mean_n : params.n_in - 1.0;
    out.dn_g = out.mean_g - out.n_in;
    out.dn_e = out.mean_e - out.n_in;
    out.dn_none = out.p_g * out.dn_g + out.p_e * out.dn_e;
    return out;
}

struct BackactionPoint {
    double theta = 0.0;
    double dn_g = 0.0;
    double dn_e_shifted_rescaled = 0.0;  // theta / (theta + pi) * dn_e(theta + pi)
    double difference = 0.0;
};

/// theta / (theta + pi) * dn_e(theta + pi) - dn_g(theta) for any source of
/// Delta n. delta_n(theta) must return something with dn_g and dn_e members.
template <class DeltaNFn>
std::vector<BackactionPoint> backaction_difference(std::span<const double> thetas, DeltaNFn&& delta_n) {
    std::vector<BackactionPoint> out;
    out.reserve(thetas.size());
    for (double theta : thetas) {
        detail::require(theta > 0.0, "backaction_difference: theta must be > 0");
        const auto here = delta_n(theta);
        const auto shifted = delta_n(theta + kPi);
        BackactionPoint p;
        p.theta = theta;
        p.dn_g = here.dn_g;
        p.dn_e_shifted_rescaled = theta / (theta + kPi) * shifted.dn_e;
        p.difference = p.dn_e_shifted_rescaled - p.dn_g;
        out.push_back(p);
    }
    return out;
}

inline std::vector<BackactionPoint> backaction_difference(std::span<const double> thetas, double gamma_a_t_d,
                                                          PhaseConvention convention = PhaseConvention::kRabiAngle) {
    return backaction_difference(thetas,
                                 [&](double theta) { return delta_n_toy(theta, gamma_a_t_d, convention); });
}

/// Bayesian decomposition of a photodetector click on a cavity state.
struct ClickUpdate {
    std::vector<double> will_occur;    // P(n | click will occur) = |c_n|^2 n / <n>
    std::vector<double> has_occurred;  // P(n | click has occurred) = P(n + 1 | will occur)
};

inline ClickUpdate click_update(const FockVector& psi) {
    detail::require_normalized(psi, "click_update");
    long double mean = 0.0L;
    for (std::size_t n = 0; n < psi.amplitudes.size(); ++n) {
        mean += std::norm(psi.amplitudes[n]) * static_cast<long double>(n);
    }
    if (!(mean > 0.0L)) {
        throw InvalidArgument("click_update: click impossible for the vacuum");
    }
    ClickUpdate out;
    out.will_occur.assign(psi.amplitudes.size(), 0.0);
    out.has_occurred.assign(psi.amplitudes.size(), 0.0);
    for (std::size_t n = 0; n < psi.amplitudes.size(); ++n) {
        out.will_occur[n] = static_cast<double>(std::norm(psi.amplitudes[n]) * static_cast<long double>(n) / mean);
    }
    for (std::size_t n = 0; n + 1 < psi.amplitudes.size(); ++n) {
        out.has_occurred[n] = out.will_occur[n + 1];
    }
    return out;
}

/// Qubit-drive state U|g>|psi> = lambda_g |g>|psi_g> + lambda_e |e>|psi_e>.
struct JcColumn {
    double lambda_g = 0.0;
    double lambda_e = 0.0;
    std::optional<FockVector> psi_g;
    std::optional<FockVector> psi_e;
    Complex overlap = 0.0;  // <psi_e|psi_g>, zero if either branch is empty

    /// Tr[rho_q^2] of the reduced qubit state.
    double qubit_purity() const {
        const double cross = lambda_g * lambda_g * lambda_e * lambda_e;
        return 1.0 - 2.0 * cross * (1.0 - std::norm(overlap));
    }
};

inline JcColumn jc_unitary_column(const ToyParams& params, const FockVector& psi) {
    const auto [g, e] = measurement_operators(params, psi);
    JcColumn col;
    col.lambda_g = std::sqrt(g.probability);
    col.lambda_e = std::sqrt(e.probability);
    col.psi_g = g.post_state;
    col.psi_e = e.post_state;
    if (g.defined() && e.defined()) {
        Complex s = 0.0;
        for (std::size_t n = 0; n < psi.amplitudes.size(); ++n) {
            s += std::conj(e.post_state->amplitudes[n]) * g.post_state->amplitudes[n];
        }
        col.overlap = s;
    }
    return col;
}

}  // namespace qgate
