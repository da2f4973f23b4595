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

#include <cmath>

#include <gtest/gtest.h>

#include "qgate/energetics.hpp"
#include "qgate/toy_model.hpp"

namespace {

using namespace qgate;

constexpr double kGammaA = 2.0 * kPi * 20e3;
constexpr double kTd = 400e-9;

const QubitRates kRates = ExperimentConstants{}.rates();

DensityMatrix plus_state() {
    const double s = 1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(s, s);
}

TEST(FluxUnconditioned, Examples) {
    EXPECT_DOUBLE_EQ(flux_unconditioned(1e4, DensityMatrix::ground(), kRates), 1e8);
    EXPECT_NEAR(flux_unconditioned(0.0, DensityMatrix::excited(), kRates), kGammaA, 1e-9);
    EXPECT_NEAR(flux_unconditioned(0.0, thermal_state(0.088), kRates), 0.088 * kGammaA, 1e-9);
    EXPECT_NEAR(0.088 * kGammaA, 1.106e4, 5.0);
}

TEST(AmplitudePostselected, Examples) {
    const double a = 3e3;
    EXPECT_NEAR(std::abs(amplitude_postselected(a, DensityMatrix::ground(), EffectMatrix::identity(), kRates) - a), 0.0, 1e-12);
    const Complex x = amplitude_postselected(a, plus_state(), EffectMatrix::identity(), kRates);
    EXPECT_NEAR(x.real(), a - std::sqrt(kGammaA) / 2.0, 1e-9);
    EXPECT_NEAR(x.imag(), 0.0, 1e-12);
    const Complex y = amplitude_postselected(a, plus_state(), terminal_effect(Outcome::kExcited, 1.0, 1.0), kRates);
    EXPECT_NEAR(std::abs(y - a), 0.0, 1e-12);
}

TEST(AmplitudePostselected, ImaginaryPartIsMinusImaginaryWeakValue) {
    const DensityMatrix rho = DensityMatrix::pure(Complex(0.6, 0.0), Complex(0.0, 0.8));
    const EffectMatrix e = terminal_effect(Outcome::kExcited, 0.9, 0.8);
    const Complex wv = weak_value(pauli::sigma_minus(), rho, e);
    const Complex amp = amplitude_postselected(10.0, rho, e, kRates);
    EXPECT_NEAR(amp.imag(), -std::sqrt(kGammaA) * wv.imag(), 1e-12);
}

TEST(FluxPostselected, ReducesToUnconditionedForIdentityEffect) {
    for (double theta = 0.0; theta < 2.0 * kPi; theta += 0.37) {
        const DensityMatrix rho = DensityMatrix::pure(std::cos(theta / 2), std::sin(theta / 2));
        const double a = 1e4 * (1.0 + theta);
        const double u = flux_unconditioned(a, rho, kRates);
        const double p = flux_postselected(a, rho, EffectMatrix::identity(), kRates);
        EXPECT_LE(std::abs(u - p), 1e-12 * std::max(1.0, std::abs(u)));
    }
}

TEST(FluxPostselected, OrthogonalPostSelectionThrows) {
    EXPECT_THROW(flux_postselected(0.0, DensityMatrix::excited(), terminal_effect(Outcome::kGround, 1.0, 1.0), kRates),
                 IncompatiblePostSelection);
}

TEST(FluxPostselected, PhotodetectionWeakValue) {
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = 0.133;
    m(1, 1) = 0.867;
    const EffectMatrix e = EffectMatrix::from_matrix(m);
    const double f = flux_postselected(0.0, DensityMatrix::excited(), e, kRates);
    // Brute force: Tr[E s- rho s+] / Tr[E rho].
    const Matrix2 num = e.matrix() * pauli::sigma_minus() * pauli::projector_e() * pauli::sigma_plus();
    const double expected = kGammaA * num.trace().real() / (e.matrix() * pauli::projector_e()).trace().real();
    EXPECT_NEAR(f, expected, 1e-9);
    EXPECT_NEAR(f / kGammaA, 0.133 / 0.867, 1e-12);
}

TEST(IntegratePhotonNumber, ConstantFlux) {
    const TimeGrid g = TimeGrid::make(0.0, kTd, 4096);
    const FluxTrace t{g, std::vector<double>(g.size(), 3.7e7), Outcome::kNone};
    EXPECT_NEAR(integrate_photon_number(t), 3.7e7 * kTd, 1e-12 * 3.7e7 * kTd);
}

TEST(IntegratePhotonNumber, PiPulseEnergyConservation) {
    // A qubit whose only relaxation is emission into the line conserves
    // energy exactly: Delta n = -p_e(t_d).
    GateConfig cfg = GateConfig::ideal(kGammaA, kTd, 10e-9);
    cfg.shape = PulseShape::kSquare;
    const SweepPoint p = sweep_point(kPi, cfg);
    EXPECT_NEAR(p.budget(Outcome::kNone)->delta_n, -p.p_e, 1e-6);
    // Emission during the pulse keeps p_e(t_d) below 1 at gamma_a t_d = 0.05.
    EXPECT_NEAR(p.p_e, 0.981, 2e-3);
}

TEST(IntegratePhotonNumber, PiPulseWeakCouplingLimit) {
    GateConfig cfg = GateConfig::ideal(kGammaA / 100.0, kTd, 10e-9);
    cfg.shape = PulseShape::kSquare;
    const SweepPoint p = sweep_point(kPi, cfg);
    EXPECT_NEAR(p.budget(Outcome::kNone)->delta_n, -1.0, 2e-3);
}

TEST(IntegratePhotonNumber, ThermalEmissionWithoutDrive) {
    // Rates for which diag(0.912, 0.088) is stationary.
    GateConfig cfg = GateConfig::ideal(kGammaA, kTd, 10e-9);
    cfg.rates = QubitRates::make(kGammaA, 0.0, kGammaA, 0.912, 0.088);
    cfg.p_e_initial = 0.088;
    const SweepPoint p = sweep_point(0.0, cfg);
    EXPECT_NEAR(p.budget(Outcome::kNone)->n_out, 0.088 * kGammaA * kTd, 1e-12);
}

TEST(DeltaNSweep, ZeroAngleIsThermalEmission) {
    const auto pts = delta_n_sweep(std::vector<double>{0.0}, GateConfig::from_constants(ExperimentConstants{}));
    EXPECT_NEAR(pts[0].budget(Outcome::kNone)->delta_n, 0.088 * kGammaA * kTd, 1e-5);
    EXPECT_NEAR(pts[0].budget(Outcome::kNone)->delta_n, 4.4e-3, 1e-4);
}

TEST(DeltaNSweep, FullRabiCycleReturnsToGround) {
    GateConfig cfg = GateConfig::ideal(kGammaA / 100.0, kTd, 10e-9);
    const SweepPoint p = sweep_point(2.0 * kPi, cfg);
    EXPECT_NEAR(p.budget(Outcome::kNone)->delta_n, 0.0, 2e-3);
    EXPECT_NEAR(p.budget(Outcome::kGround)->delta_n, 0.0, 2e-3);
    // At the paper coupling the residual is the emitted fraction.
    const SweepPoint q = sweep_point(2.0 * kPi, GateConfig::ideal(kGammaA, kTd, 10e-9));
    EXPECT_NEAR(q.budget(Outcome::kNone)->delta_n, -q.p_e, 1e-6);
}

TEST(DeltaNSweep, FailuresAreReportedPerPoint) {
    // Perfect readout from the ground state with no drive: outcome e is impossible.
    GateConfig cfg = GateConfig::ideal(kGammaA, kTd, 10e-9);
    const auto pts = delta_n_sweep(std::vector<double>{0.0, kPi}, cfg);
    EXPECT_FALSE(pts[0].budget(Outcome::kExcited).has_value());
    EXPECT_FALSE(pts[0].errors[static_cast<int>(Outcome::kExcited)].empty());
    EXPECT_TRUE(pts[0].budget(Outcome::kGround).has_value());
    EXPECT_TRUE(pts[1].budget(Outcome::kExcited).has_value());
    EXPECT_THROW(delta_n_sweep(std::vector<double>{}, cfg), InvalidArgument);
}

TEST(DeltaNSweep, ThetaRange) {
    const auto t = theta_range(6.0 * kPi, 121);
    EXPECT_EQ(t.size(), 121u);
    EXPECT_NEAR(t[1], kPi / 20.0, 1e-15);
    EXPECT_DOUBLE_EQ(t.back(), 6.0 * kPi);
    EXPECT_EQ(theta_range(kPi, 1).size(), 1u);
}

class PaperSweep : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        points_ = delta_n_sweep(theta_range(6.0 * kPi, 121), GateConfig::from_constants(ExperimentConstants{}));
    }
    static std::vector<SweepPoint> points_;
};
std::vector<SweepPoint> PaperSweep::points_;

TEST_F(PaperSweep, UnconditionedWithinShadedArea) {
    for (const auto& p : points_) {
        ASSERT_TRUE(p.budget(Outcome::kNone).has_value());
        EXPECT_GE(p.budget(Outcome::kNone)->delta_n, -1.02);
        EXPECT_LE(p.budget(Outcome::kNone)->delta_n, 0.02);
    }
}

TEST_F(PaperSweep, CounterPhase) {
    int both = 0, opposite = 0;
    for (const auto& p : points_) {
        if (p.theta < kPi - 1e-12) continue;
        const double g = p.budget(Outcome::kGround)->delta_n, e = p.budget(Outcome::kExcited)->delta_n;
        if (std::abs(g) > 0.05 && std::abs(e) > 0.05) {
            ++both;
            opposite += (g > 0) != (e > 0);
        }
    }
    ASSERT_GT(both, 20);
    EXPECT_GE(static_cast<double>(opposite) / both, 0.9);
}

TEST_F(PaperSweep, WeakValueAmplification) {
    double m = 0.0;
    for (const auto& p : points_) m = std::max(m, std::abs(p.budget(Outcome::kGround)->delta_n));
    EXPECT_GT(m, 1.0);
}

TEST(Decomposition, OutcomeWeightedFluxesRebuildTheUnconditionedFlux) {
    GateConfig cfg = GateConfig::from_constants(ExperimentConstants{});
    cfg.f_g = cfg.f_e = 1.0;
    const GateRun run = simulate_gate(1.8 * kPi, cfg);
    const auto g = run.flux(Outcome::kGround, cfg.rates).flux;
    const auto e = run.flux(Outcome::kExcited, cfg.rates).flux;
    const auto n = run.flux(Outcome::kNone, cfg.rates).flux;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double rebuilt = run.outcome_probability(Outcome::kGround, i) * g[i] +
                               run.outcome_probability(Outcome::kExcited, i) * e[i];
        EXPECT_LE(std::abs(rebuilt - n[i]), 1e-9 * std::max(1.0, std::abs(n[i])));
    }
}

TEST(PurityBound, Examples) {
    EXPECT_DOUBLE_EQ(purity_bound(0.6, 0.8, 1.0), 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(purity_bound(s, s, 0.0), 0.5, 1e-15);
    EXPECT_THROW(purity_bound(0.6, 0.6, 0.0), InvalidArgument);
    EXPECT_THROW(purity_bound(0.6, 0.8, 1.5), InvalidArgument);
}

TEST(PurityBound, MatchesReducedStateOfToyModel) {
    const ToyParams params = ToyParams::from_theta(1.6 * kPi, 0.0503);
    const FockVector psi = coherent_state(params.n_in, default_truncation(params.n_in));
    const JcColumn col = jc_unitary_column(params, psi);
    // Reduced qubit state built from the bipartite amplitudes.
    Matrix2 rho = Matrix2::Zero();
    rho(0, 0) = col.lambda_g * col.lambda_g;
    rho(1, 1) = col.lambda_e * col.lambda_e;
    Complex off = 0.0;
    for (std::size_t n = 0; n < psi.amplitudes.size(); ++n) {
        off += col.lambda_e * col.psi_e->amplitudes[n] * std::conj(col.lambda_g * col.psi_g->amplitudes[n]);
    }
    rho(1, 0) = off;
    rho(0, 1) = std::conj(off);
    const double direct = (rho * rho).trace().real();
    EXPECT_NEAR(purity_bound(col.lambda_g, col.lambda_e, col.overlap), direct, 1e-10);
}

}  // namespace
