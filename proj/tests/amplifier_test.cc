// Copyright 2026 The nlamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlamp/amplifier.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "nlamp/errors.h"
#include "nlamp/linear_optics.h"
#include "test_support.h"

using namespace nlamp;

namespace {

const std::vector<double> kAlphaGrid{0.0, 0.1, 0.25, 0.5, 1.0};

// P = e^{-|a|^2} (r^2/2)(1 + g^2 |a|^2), r^2 = 1/(1+g^2), evaluated by hand.
double analytic_probability(double a, double g) {
    return std::exp(-a * a) * 0.5 / (1 + g * g) * (1 + g * g * a * a);
}

Complex mean_annihilation(const DensityOperator &rho) {
    Complex acc = 0;
    for (std::size_t n = 0; n + 1 < rho.dim(); ++n) {
        acc += std::sqrt(n + 1.0) * rho(n, n + 1);
    }
    return acc;
}

AmplifierConfig imperfect_config(Complex alpha) {
    AmplifierConfig c;
    c.alpha = alpha;
    c.source = {0.1, 0.05, 0.95};
    c.detector_mu = 0.6;
    c.n_max = 10;
    return c;
}

}  // namespace

TEST(amplifier_gain, reflectivity_relation) {
    auto g = AmplifierGain::from_gain(2.0);
    EXPECT_NEAR(g.reflectivity() * g.reflectivity(), 0.2, 1e-15);
    EXPECT_NEAR(std::sqrt(1 - g.reflectivity() * g.reflectivity()) / g.reflectivity(), 2.0, 1e-12);
    EXPECT_EQ(g.authoritative(), AmplifierGain::Source::gain);
    auto r = AmplifierGain::from_reflectivity(0.6);
    EXPECT_NEAR(r.gain(), 0.8 / 0.6, 1e-15);
    EXPECT_EQ(r.authoritative(), AmplifierGain::Source::reflectivity);
    EXPECT_THROW(AmplifierGain::from_gain(0.0), DomainError);
    EXPECT_THROW(AmplifierGain::from_reflectivity(1.0), DomainError);
}

TEST(ideal_output, vacuum_input) {
    auto out = ideal_output(0.0, 2.0);
    EXPECT_NEAR(out.state(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(out.success_probability, 0.1, 1e-15);
    EXPECT_EQ(out.branch, HeraldBranch::d1_only);
}

TEST(ideal_output, unit_gain_keeps_amplitude) {
    for (double a : {0.05, 0.3, 0.9}) {
        auto out = ideal_output(a, 1.0);
        EXPECT_NEAR(std::abs(out.state(1, 0) / out.state(0, 0)), a, 1e-14);
    }
}

TEST(ideal_output, small_amplitude_example) {
    auto out = ideal_output(0.1, 2.0);
    EXPECT_NEAR((out.state(1, 0) / out.state(0, 0)).real(), 0.2, 1e-14);
    EXPECT_NEAR(out.success_probability, std::exp(-0.01) * 0.1 * 1.04, 1e-15);
    EXPECT_NEAR(out.success_probability, 0.10296, 1e-5);
    auto both = ideal_output(0.1, 2.0, 12, true);
    EXPECT_NEAR(both.success_probability, 2 * out.success_probability, 1e-15);
    EXPECT_EQ(both.branch, HeraldBranch::both_branches);
    EXPECT_NEAR(both.state.trace(), 1.0, 1e-12);
}

TEST(build_resource, ideal_source_amplitudes) {
    auto rho = build_resource(0.6, SourceModel{});
    ASSERT_EQ(rho.mode_dims(), (ModeDims{3, 3}));
    // Index = 3 * n_T + n_R.
    EXPECT_NEAR(rho(3, 3).real(), 0.64, 1e-15);
    EXPECT_NEAR(rho(1, 1).real(), 0.36, 1e-15);
    EXPECT_NEAR(rho(3, 1).real(), 0.48, 1e-15);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
}

TEST(build_resource, vacuum_source) {
    auto rho = build_resource(0.6, SourceModel{1.0, 0.0, 1.0});
    EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
}

TEST(build_resource, imperfect_source_photon_statistics) {
    const SourceModel src{0.1, 0.05, 0.95};
    auto rho = build_resource(1 / std::sqrt(5.0), src);
    ASSERT_EQ(rho.num_modes(), 4u);
    EXPECT_TRUE(rho.check({}, true).physical());
    auto dims = rho.mode_dims();
    auto strides = mode_strides(dims);
    std::array<double, 5> sector{};
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        std::size_t n = 0;
        for (std::size_t m = 0; m < 4; ++m) {
            n += (i / strides[m]) % dims[m];
        }
        sector[n] += rho(i, i).real();
    }
    EXPECT_NEAR(sector[0], 0.1, 1e-12);
    EXPECT_NEAR(sector[1], 0.85, 1e-12);
    EXPECT_NEAR(sector[2], 0.05, 1e-12);
    // Matched single-photon population on (T, R) is m^2 of the single-photon weight.
    double matched = 0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        std::size_t tr = (i / strides[0]) % 3 + (i / strides[1]) % 3;
        std::size_t comp = (i / strides[2]) % 3 + (i / strides[3]) % 3;
        if (tr == 1 && comp == 0) {
            matched += rho(i, i).real();
        }
    }
    EXPECT_NEAR(matched, 0.85 * 0.95 * 0.95, 1e-12);
}

TEST(build_resource, rejects_invalid_weights) {
    EXPECT_THROW(build_resource(0.5, SourceModel{0.7, 0.4, 1.0}), DomainError);
    EXPECT_THROW(build_resource(0.5, SourceModel{-0.1, 0.0, 1.0}), DomainError);
    EXPECT_THROW(build_resource(0.5, SourceModel{0.0, 0.0, 1.2}), DomainError);
}

TEST(simulate, ideal_components_reproduce_analytic_output) {
    for (double a : kAlphaGrid) {
        for (double phase : {0.0, 1.1}) {
            Complex alpha = std::polar(a, phase);
            auto sim = simulate(ideal_config(alpha, 2.0));
            auto ref = ideal_output(alpha, 2.0);
            EXPECT_LT(trace_distance(sim.state, ref.state), 1e-9) << "alpha=" << alpha;
            EXPECT_NEAR(sim.success_probability / ref.success_probability, 1.0, 1e-6) << "alpha=" << alpha;
            EXPECT_NEAR(sim.success_probability, analytic_probability(a, 2.0), 1e-6 * analytic_probability(a, 2.0));
        }
    }
}

TEST(simulate, vacuum_input_heralds_vacuum) {
    auto sim = simulate(ideal_config(0.0, 2.0));
    EXPECT_NEAR(sim.state(0, 0).real(), 1.0, 1e-12);
    EXPECT_NEAR(sim.success_probability, 0.1, 1e-12);
}

TEST(simulate, unit_gain_moments) {
    const double a = 0.2;
    auto sim = simulate(ideal_config(a, 1.0));
    EXPECT_LT(trace_distance(sim.state, ideal_output(a, 1.0).state), 1e-9);
    // <X> = 2 Re<a>; for |0> + a|1> normalized it is 2a / (1 + a^2).
    double x_out = 2 * mean_annihilation(sim.state).real();
    EXPECT_NEAR(x_out / (2 * a), 1 / (1 + a * a), 1e-6);
}

TEST(simulate, both_heralds_double_probability_only) {
    auto c = ideal_config(0.3, 2.0);
    auto one = simulate(c);
    c.accept_both_heralds = true;
    auto both = simulate(c);
    EXPECT_NEAR(both.success_probability, 2 * one.success_probability, 1e-15);
    EXPECT_LT(test::max_abs_diff(both.state.matrix(), one.state.matrix()), 1e-15);
    EXPECT_EQ(both.branch, HeraldBranch::both_branches);
}

TEST(simulate, probability_increases_on_grid) {
    double prev = 0;
    for (double a : kAlphaGrid) {
        double p = simulate(ideal_config(a, 2.0)).success_probability;
        EXPECT_GT(p, prev) << "alpha=" << a;
        EXPECT_LE(p, 1.0);
        prev = p;
    }
}

TEST(simulate, outputs_are_physical_property) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        AmplifierConfig c;
        c.alpha = std::polar(u(test::rng()), 6.28 * u(test::rng()));
        double xi0 = 0.3 * u(test::rng());
        double xi2 = 0.2 * u(test::rng());
        c.source = {xi0, xi2, 0.7 + 0.3 * u(test::rng())};
        c.detector_mu = 0.05 + 0.95 * u(test::rng());
        c.detector = trial % 2 ? DetectorModel::on_off : DetectorModel::number_resolving;
        c.use_d2_veto = trial % 3 == 0;
        c.gain = AmplifierGain::from_gain(0.5 + 2.5 * u(test::rng()));
        c.n_max = 10;
        auto out = simulate(c);
        auto report = out.state.check({}, true);
        EXPECT_TRUE(report.physical()) << trial << " " << report.min_eigenvalue << " " << report.trace;
        EXPECT_GT(out.success_probability, 0.0);
        EXPECT_LE(out.success_probability, 1.0);
    }
}

TEST(simulate, outcome_table_partitions_probability) {
    for (double a : kAlphaGrid) {
        for (auto detector : {DetectorModel::on_off, DetectorModel::number_resolving}) {
            auto c = imperfect_config(a);
            c.detector = detector;
            c.n_max = 14;
            auto table = outcome_probabilities(c);
            double total = table[0][0] + table[0][1] + table[1][0] + table[1][1];
            EXPECT_NEAR(total, 1.0, 1e-10) << "alpha=" << a;
            c.use_d2_veto = true;
            EXPECT_NEAR(simulate(c).success_probability, table[1][1], 1e-12);
            c.use_d2_veto = false;
            EXPECT_NEAR(simulate(c).success_probability, table[1][0] + table[1][1], 1e-12);
        }
    }
}

TEST(simulate, rejects_meaningless_branch) {
    auto c = ideal_config(0.5, 2.0);
    c.detector_mu = 0.0;
    EXPECT_THROW(simulate(c), TruncationError);
    auto big = ideal_config(4.0, 2.0, 6);
    EXPECT_THROW(simulate(big), TruncationError);
    auto bad = ideal_config(0.5, 2.0, 1);
    EXPECT_THROW(simulate(bad), DomainError);
}

TEST(phase_covariance, ideal_and_imperfect) {
    std::vector<double> zero{0.0};
    EXPECT_EQ(phase_covariance_check(ideal_config(0.4, 2.0), zero).max_deviation, 0.0);
    std::vector<double> quarter{std::numbers::pi / 2};
    EXPECT_LT(phase_covariance_check(ideal_config(0.4, 2.0), quarter).max_deviation, 1e-10);
    std::vector<double> grid;
    for (int k = 0; k < 8; ++k) {
        grid.push_back(2 * std::numbers::pi * k / 8);
    }
    auto report = phase_covariance_check(imperfect_config(0.7), grid);
    EXPECT_EQ(report.deviations.size(), 8u);
    EXPECT_LT(report.max_deviation, 1e-10);
}

TEST(simulate, imperfections_reduce_gain) {
    // Vacuum and mode mismatch both dilute the |1> coherence.
    auto ideal = simulate(ideal_config(0.1, 2.0));
    auto c = ideal_config(0.1, 2.0);
    c.source = {0.2, 0.0, 0.9};
    auto worse = simulate(c);
    EXPECT_LT(std::abs(mean_annihilation(worse.state)), std::abs(mean_annihilation(ideal.state)));
}
