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

#include "nlamp/tomography.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "gtest/gtest.h"

#include "nlamp/amplifier.h"
#include "nlamp/errors.h"
#include "nlamp/linear_optics.h"
#include "test_support.h"

using namespace nlamp;

namespace {

std::vector<double> uniform_edges(std::size_t bins, double lo, double hi) {
    std::vector<double> e(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    return e;
}

// Gaussian (vacuum) mass on [a, b].
double normal_mass(double a, double b) {
    return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
}

ReconstructionResult reconstruct_samples(const DensityOperator &rho, std::size_t n, double eta, std::uint64_t seed,
                                         std::size_t n_max = 10) {
    auto phases = uniform_phases(12);
    auto samples = sample_homodyne(rho, phases, n, eta, seed);
    TomographyProblem problem(bin_samples(samples, phases, 100, -6, 6), n_max);
    return maxlik_reconstruct(problem);
}

void expect_monotone(const std::vector<double> &ll) {
    for (std::size_t i = 1; i < ll.size(); ++i) {
        ASSERT_GE(ll[i], ll[i - 1] - 1e-10) << "iteration " << i;
    }
}

DensityOperator amplified_truth(double alpha, double eta) {
    auto out = simulate(ideal_config(alpha, 2.0, 10)).state;
    return apply_loss(out, LossChannel(eta, 0));
}

}  // namespace

TEST(bin_samples, one_sample_per_phase) {
    auto phases = uniform_phases(12);
    std::vector<QuadratureSample> s;
    for (double p : phases) {
        s.push_back({p, 0.1});
    }
    auto h = bin_samples(s, phases, 10, -5, 5);
    ASSERT_EQ(h.size(), 12u);
    for (const auto &hist : h) {
        EXPECT_EQ(hist.total(), 1u);
        EXPECT_FALSE(hist.has_overflow());
        EXPECT_EQ(hist.counts[5], 1u);
    }
}

TEST(bin_samples, conserves_counts_and_flags_overflow) {
    auto phases = uniform_phases(4);
    auto s = sample_homodyne(DensityOperator::from_pure(fock_state(2, 4)), phases, 20000, 1.0, 3);
    s.push_back({phases[1], 100.0});
    s.push_back({phases[2], -100.0});
    s.push_back({phases[0], 1.0});  // exactly on an inner edge
    auto h = bin_samples(s, phases, 50, -5, 5);
    std::uint64_t total = 0;
    for (const auto &hist : h) {
        total += hist.total();
        EXPECT_NO_THROW(hist.validate());
    }
    EXPECT_EQ(total, s.size());
    EXPECT_GE(h[1].overflow, 1u);
    EXPECT_GE(h[2].underflow, 1u);
    EXPECT_TRUE(h[1].has_overflow());
}

TEST(bin_samples, rejects_unknown_phase) {
    auto phases = uniform_phases(3);
    std::vector<QuadratureSample> s{{0.5, 0.0}};
    EXPECT_THROW(bin_samples(s, phases, 10, -5, 5), DomainError);
    EXPECT_THROW(bin_samples(s, phases, 0, -5, 5), DomainError);
}

TEST(bin_samples, vacuum_histogram_chi_squared) {
    std::vector<double> phase{0.0};
    auto s = sample_homodyne(DensityOperator::from_pure(fock_state(0, 3)), phase, 100000, 1.0, 99);
    auto h = bin_samples(s, phase, 100, -5, 5).front();
    double chi2 = 0;
    int used = 0;
    double n = static_cast<double>(s.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        double expected = n * normal_mass(h.edges[b], h.edges[b + 1]);
        if (expected < 5) {
            continue;
        }
        double d = static_cast<double>(h.counts[b]) - expected;
        chi2 += d * d / expected;
        ++used;
    }
    boost::math::chi_squared dist(used - 1);
    double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    EXPECT_GT(p_value, 0.001) << "chi2=" << chi2 << " dof=" << used - 1;
}

TEST(bin_povm, histogram_is_complete) {
    auto edges = uniform_edges(100, -6, 6);
    for (double theta : {0.0, 0.7, 2.5}) {
        auto povms = histogram_povms(theta, edges, 10);
        ASSERT_EQ(povms.size(), 102u);
        CMatrix sum = CMatrix::Zero(11, 11);
        for (const auto &p : povms) {
            sum += p;
        }
        EXPECT_LT((sum - CMatrix::Identity(11, 11)).cwiseAbs().maxCoeff(), 1e-6) << theta;
    }
}

TEST(bin_povm, vacuum_mass_matches_error_function) {
    auto vac = DensityOperator::from_pure(fock_state(0, 6));
    for (double a : {0.1, 1.0, 2.3}) {
        auto pi = bin_povm(0.4, -a, a, 6);
        double p = (pi * vac.matrix()).trace().real();
        EXPECT_NEAR(p, std::erf(a / std::numbers::sqrt2), 1e-12) << a;
    }
    // Half-infinite bin.
    auto tail = bin_povm(0.0, 1.5, std::numeric_limits<double>::infinity(), 6);
    EXPECT_NEAR((tail * vac.matrix()).trace().real(), normal_mass(1.5, 40), 1e-12);
}

TEST(bin_povm, positive_on_physical_states_property) {
    auto edges = uniform_edges(20, -4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        auto rho = test::random_density(6, 1 + trial % 3);
        for (const auto &pi : histogram_povms(0.3 * trial, edges, 6)) {
            EXPECT_GE((pi * rho.matrix()).trace().real(), -1e-14);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(pi);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
        }
    }
}

TEST(bin_povm, born_rule_matches_pdf_integral) {
    auto rho = test::random_density(5, 2);
    const double lo = -0.5, hi = 0.9, theta = 1.2;
    // Composite Simpson over the pdf.
    const int n = 2000;
    double h = (hi - lo) / n, acc = 0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        acc += w * quadrature_pdf(rho, theta, lo + h * i);
    }
    acc *= h / 3;
    EXPECT_NEAR((bin_povm(theta, lo, hi, 5) * rho.matrix()).trace().real(), acc, 1e-10);
}

TEST(tomography_problem, validates_input) {
    QuadratureHistogram h{0.0, uniform_edges(4, -1, 1), {1, 2, 3, 4}, 0, 0};
    EXPECT_THROW(TomographyProblem({h}, 4), DomainError);
    EXPECT_THROW(TomographyProblem({h, h}, 4), DomainError);
    auto h2 = h;
    h2.phase = 1.0;
    EXPECT_NO_THROW(TomographyProblem({h, h2}, 4));
    auto empty = h;
    empty.counts = {0, 0, 0, 0};
    auto empty2 = empty;
    empty2.phase = 1.0;
    EXPECT_THROW(TomographyProblem({empty, empty2}, 4), DomainError);
    auto bad = h2;
    bad.counts.pop_back();
    EXPECT_THROW(TomographyProblem({h, bad}, 4), DomainError);
}

TEST(maxlik, truth_is_fixed_point_of_exact_data) {
    auto truth = amplified_truth(0.25, 0.68);
    auto problem = TomographyProblem::from_exact_probabilities(truth, uniform_phases(12), uniform_edges(100, -6, 6), 10);
    // One step of the iteration started at the truth leaves it in place: R
    // is then the identity on the support.
    auto p = problem.probabilities(truth);
    CMatrix r = CMatrix::Zero(11, 11);
    std::size_t j = 0;
    for (const auto &h : problem.histograms()) {
        for (const auto &pi : histogram_povms(h.phase, h.edges, 10)) {
            if (problem.frequencies()[j] > 0) {
                r += (problem.frequencies()[j] / p[j]) * pi;
            }
            ++j;
        }
    }
    CMatrix next = r * truth.matrix() * r;
    next /= next.trace().real();
    EXPECT_LT(test::max_abs_diff(next, truth.matrix()), 1e-9);
}

TEST(maxlik, exact_data_of_full_rank_state_converges) {
    // Full rank keeps the iteration geometric; rank-deficient truths are
    // approached only as 1/k.
    auto g = test::random_density(6, 7);
    CMatrix m = 0.5 * g.matrix();
    for (Eigen::Index n = 0; n < 7; ++n) {
        m(n, n) += 0.5 / 7;
    }
    DensityOperator truth(m);
    auto problem = TomographyProblem::from_exact_probabilities(truth, uniform_phases(12), uniform_edges(100, -6, 6), 6);
    auto result = maxlik_reconstruct(problem);
    EXPECT_GT(fidelity(result.rho, truth), 1 - 1e-6);
    expect_monotone(result.log_likelihood);
    EXPECT_EQ(result.log_likelihood.size(), result.iterations + 1);
    EXPECT_FALSE(result.floored);
}

TEST(maxlik, closure_on_sampled_amplifier_output) {
    auto truth = amplified_truth(0.25, 0.68);
    auto result = reconstruct_samples(simulate(ideal_config(0.25, 2.0, 10)).state, 200000, 0.68, 17);
    EXPECT_GE(fidelity(result.rho, truth), 0.995);
    EXPECT_TRUE(result.rho.check({}, true).physical());
    expect_monotone(result.log_likelihood);
}

TEST(maxlik, vacuum_reconstruction_is_dark) {
    auto result = reconstruct_samples(DensityOperator::from_pure(fock_state(0, 10)), 100000, 1.0, 5);
    EXPECT_LT(result.rho.mean_photon_number(), 0.01);
    expect_monotone(result.log_likelihood);
}

TEST(maxlik, iterates_stay_physical_and_likelihood_rises_property) {
    for (int trial = 0; trial < 4; ++trial) {
        auto truth = test::random_density(4, 1 + trial);
        auto phases = uniform_phases(6);
        auto samples = sample_homodyne(truth, phases, 20000, 1.0, 100 + trial);
        TomographyProblem problem(bin_samples(samples, phases, 60, -6, 6), 4);
        for (std::size_t cap : {1, 5, 50}) {
            auto r = maxlik_reconstruct(problem, {cap, 1e-10});
            EXPECT_TRUE(r.rho.check({}, true).physical()) << trial << " " << cap;
            expect_monotone(r.log_likelihood);
        }
    }
}

TEST(maxlik, non_convergence_is_reported) {
    auto truth = amplified_truth(0.5, 0.68);
    auto problem = TomographyProblem::from_exact_probabilities(truth, uniform_phases(12), uniform_edges(100, -6, 6), 10);
    auto r = maxlik_reconstruct(problem, {3, 1e-10});
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3u);
    EXPECT_EQ(r.log_likelihood.size(), 4u);
}

TEST(maxlik, empty_bin_probability_is_floored) {
    // Data far outside the reach of a 1-photon cutoff.
    QuadratureHistogram a{0.0, {-1, 0, 1}, {10, 10}, 0, 0};
    QuadratureHistogram b{1.0, {-1, 0, 1}, {10, 10}, 0, 0};
    b.overflow = 5;
    a.edges = {50, 60, 70};
    TomographyProblem problem({a, b}, 1);
    auto r = maxlik_reconstruct(problem, {5, 1e-10});
    EXPECT_TRUE(r.floored);
}

TEST(maxlik, fidelity_improves_with_sample_count) {
    auto input = simulate(ideal_config(0.25, 2.0, 10)).state;
    auto truth = amplified_truth(0.25, 0.68);
    std::vector<double> medians;
    for (std::size_t n : {1000, 10000, 100000, 200000}) {
        std::vector<double> f;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            f.push_back(fidelity(reconstruct_samples(input, n, 0.68, seed * 7919 + n).rho, truth));
        }
        std::nth_element(f.begin(), f.begin() + 2, f.end());
        medians.push_back(f[2]);
    }
    for (std::size_t i = 1; i < medians.size(); ++i) {
        EXPECT_GT(medians[i], medians[i - 1]) << i;
    }
}

TEST(density_json, round_trip) {
    auto rho = test::random_density(4, 2);
    std::stringstream buf;
    write_density_json(buf, rho);
    auto back = read_density_json(buf);
    EXPECT_EQ(back.n_max(), 4u);
    EXPECT_LT(test::max_abs_diff(back.matrix(), rho.matrix()), 1e-15);
    std::stringstream bad(R"({"n_max": 2, "re": [[1]], "im": [[0]]})");
    EXPECT_THROW(read_density_json(bad), ParseError);
    std::stringstream junk("{not json");
    EXPECT_THROW(read_density_json(junk), ParseError);
}
