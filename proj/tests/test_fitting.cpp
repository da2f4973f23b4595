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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "qgate/fitting/bloch.hpp"
#include "qgate/fitting/levenberg_marquardt.hpp"
#include "qgate/fitting/reflection.hpp"
#include "qgate/synthetic.hpp"

namespace {

using namespace qgate;

const ExperimentConstants kC;
const double kOmega = 2.0 * kPi * 30e3;

BlochParams paper(double omega_a = kOmega) { return BlochParams::from_constants(kC, omega_a); }

ReflectionFixed fixed_of(const BlochParams& p) { return {p.gamma_1, p.gamma_2, p.p_g_th, p.p_e_th}; }

std::vector<double> grid() { return synthetic::detuning_grid(2.0 * kPi * 1e6, 101); }

TEST(SteadyState, Limits) {
    EXPECT_LT(std::abs(steady_state_sigma_minus(paper(), 1e15)), 1e-8 * std::abs(steady_state_sigma_minus(paper(), 1e6)));
    EXPECT_EQ(steady_state_sigma_minus(paper(0.0), 0.0), Complex(0.0));
}

TEST(SteadyState, LinearResponse) {
    const BlochParams p = paper(1.0);
    const Complex s = steady_state_sigma_minus(p, 0.0);
    EXPECT_NEAR(s.real() / (p.polarization() * p.omega_a / (2.0 * p.gamma_2)), 1.0, 1e-9);
    EXPECT_NEAR(s.imag(), 0.0, 1e-18);
}

TEST(ReflectionModel, FarDetunedIsOne) {
    EXPECT_LT(std::abs(reflection_model(paper(), 1e15) - 1.0), 1e-9);
    EXPECT_LT(std::abs(reflection_model(paper(), -1e15) - 1.0), 1e-9);
}

TEST(ReflectionModel, ResonantDipAtPaperRates) {
    const BlochParams p = paper(1e-3);
    const double gamma_2 = 1.0 / (2.0 * 5.5e-6) + 1.0 / 2.4e-6;
    EXPECT_NEAR(p.gamma_2, gamma_2, 1e-9);
    const double expected = 1.0 - 0.804 * (2.0 * kPi * 20e3) / gamma_2;
    const Complex r = reflection_model(p, 0.0);
    EXPECT_NEAR(r.real(), expected, 1e-9);
    EXPECT_NEAR(r.real(), 0.801, 1e-3);
    EXPECT_EQ(r.imag(), 0.0);
}

TEST(ReflectionModel, ConjugateSymmetry) {
    for (double d : grid()) {
        EXPECT_LT(std::abs(reflection_model(paper(), -d) - std::conj(reflection_model(paper(), d))), 1e-15);
    }
}

TEST(ReflectionModel, SteadyStateRelation) {
    // 1 - R = (sqrt(gamma_a) / alpha_in) <sigma_->_ss with alpha_in = Omega_a / (2 sqrt(gamma_a)).
    for (double om : {kOmega, 0.1 * kOmega, 10.0 * kOmega}) {
        const BlochParams p = paper(om);
        for (double d : grid()) {
            const Complex lhs = 1.0 - reflection_model(p, d);
            const Complex rhs = std::sqrt(p.gamma_a) / p.alpha_in() * steady_state_sigma_minus(p, d);
            EXPECT_LT(std::abs(lhs - rhs), 1e-12);
        }
    }
}

TEST(ReflectionModel, PowerBroadening) {
    double prev = 2.0;
    for (double om = 0.1 * kOmega; om < 100.0 * kOmega; om *= 1.5) {
        const double dip = std::abs(1.0 - reflection_model(paper(om), 0.0));
        EXPECT_LT(dip, prev);
        prev = dip;
    }
}

TEST(ReflectionModel, RejectsUnphysicalDephasing) {
    BlochParams p = paper();
    p.gamma_2 = 0.4 * p.gamma_1;
    EXPECT_THROW(reflection_model(p, 0.0), InvalidArgument);
}

TEST(LevenbergMarquardt, Rosenbrock) {
    auto r = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd v(2);
        v << 10.0 * (x(1) - x(0) * x(0)), 1.0 - x(0);
        return v;
    };
    auto j = [](const Eigen::VectorXd& x) {
        Eigen::MatrixXd m(2, 2);
        m << -20.0 * x(0), 10.0, -1.0, 0.0;
        return m;
    };
    const LmResult res = levenberg_marquardt(r, j, Eigen::Vector2d(-1.2, 1.0));
    EXPECT_NEAR(res.x(0), 1.0, 1e-8);
    EXPECT_NEAR(res.x(1), 1.0, 1e-8);
    for (std::size_t i = 1; i < res.accepted_objectives.size(); ++i) {
        EXPECT_LE(res.accepted_objectives[i], res.accepted_objectives[i - 1]);
    }
}

TEST(LevenbergMarquardt, IterationLimit) {
    auto r = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd v(2);
        v << 10.0 * (x(1) - x(0) * x(0)), 1.0 - x(0);
        return v;
    };
    auto j = [](const Eigen::VectorXd& x) {
        Eigen::MatrixXd m(2, 2);
        m << -20.0 * x(0), 10.0, -1.0, 0.0;
        return m;
    };
    EXPECT_THROW(levenberg_marquardt(r, j, Eigen::Vector2d(-1.2, 1.0), {.max_iter = 3}), ConvergenceError);
}

TEST(FitReflection, NoiselessRecovery) {
    const BlochParams truth = paper();
    const auto data = synthetic::reflection_data(truth, grid(), std::polar(0.8, 0.3), 0.0, 1);
    const ReflectionFit fit = fit_reflection(data, fixed_of(truth), 2.0 * kPi * 10e3, 2.0 * kPi * 50e3);
    EXPECT_NEAR(fit.gamma_a / truth.gamma_a, 1.0, 1e-3);
    EXPECT_NEAR(fit.omega_a / truth.omega_a, 1.0, 1e-3);
    EXPECT_LT(fit.residual, 1e-12);
    EXPECT_NEAR(std::abs(fit.scale), 0.8, 1e-6);
}

TEST(FitReflection, ObjectiveNonIncreasing) {
    const BlochParams truth = paper();
    const auto data = synthetic::reflection_data(truth, grid(), Complex(1.0), 0.01, 3);
    const ReflectionFit fit = fit_reflection(data, fixed_of(truth), 2.0 * kPi * 5e3, 2.0 * kPi * 80e3);
    ASSERT_GE(fit.objective_history.size(), 2u);
    for (std::size_t i = 1; i < fit.objective_history.size(); ++i) {
        EXPECT_LE(fit.objective_history[i], fit.objective_history[i - 1]);
    }
}

TEST(FitReflection, NoisyMedianError) {
    const BlochParams truth = paper();
    std::vector<double> errors;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto data = synthetic::reflection_data(truth, grid(), std::polar(1.0, 0.3), 0.01, seed);
        const ReflectionFit fit = fit_reflection(data, fixed_of(truth), 2.0 * kPi * 10e3, 2.0 * kPi * 50e3);
        errors.push_back(std::abs(fit.gamma_a / truth.gamma_a - 1.0));
        EXPECT_GT(fit.sigma_gamma_a, 0.0);
    }
    std::nth_element(errors.begin(), errors.begin() + 50, errors.end());
    EXPECT_LT(errors[50], 0.02);
}

TEST(FitReflection, UncertaintyMatchesScatter) {
    const BlochParams truth = paper();
    double sum_sq = 0.0, sum_sigma = 0.0;
    const int seeds = 200;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto data = synthetic::reflection_data(truth, grid(), Complex(1.0), 0.01, seed + 1000);
        const ReflectionFit fit = fit_reflection(data, fixed_of(truth), truth.gamma_a, truth.omega_a);
        sum_sq += std::pow(fit.gamma_a - truth.gamma_a, 2);
        sum_sigma += fit.sigma_gamma_a;
    }
    EXPECT_NEAR(std::sqrt(sum_sq / seeds) / (sum_sigma / seeds), 1.0, 0.25);
}

TEST(FitReflection, Preconditions) {
    const BlochParams truth = paper();
    const auto narrow = synthetic::reflection_data(truth, synthetic::detuning_grid(truth.gamma_2, 50), 1.0, 0.0, 1);
    EXPECT_THROW(fit_reflection(narrow, fixed_of(truth), 1e5, 1e5), InvalidArgument);
    auto few = synthetic::reflection_data(truth, synthetic::detuning_grid(2.0 * kPi * 1e6, 7), 1.0, 0.0, 1);
    EXPECT_THROW(fit_reflection(few, fixed_of(truth), 1e5, 1e5), InvalidArgument);
}

}  // namespace
