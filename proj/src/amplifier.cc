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
#include <functional>
#include <string>

#include "nlamp/errors.h"
#include "nlamp/linear_optics.h"

namespace nlamp {

namespace {

constexpr double kSymmetricReflectivity = 0.70710678118654752440;

// Mode layout of the propagated circuit state.
enum CircuitMode : std::size_t { kInput = 0, kT = 1, kR = 2, kTCompanion = 3, kRCompanion = 4, kInputCompanion = 5 };

struct Propagated {
    double weight;
    FockVector state;
};

// Input (x) resource after the symmetric beamsplitter. After the S-BS the
// input slot and its companion feed D2; the R slot and its companion feed D1.
std::vector<Propagated> propagate(const AmplifierConfig &config, const NumericalPolicy &policy) {
    config.validate();
    const std::size_t detector_dim = config.n_max + kAncillaLevels;
    auto input = resize_mode(coherent_state(config.alpha, config.n_max, policy.truncation), 0, detector_dim);

    std::vector<Propagated> out;
    for (auto &[weight, resource] : resource_components(config.gain.reflectivity(), config.source)) {
        auto padded = resize_mode(resource, 1, detector_dim);
        const std::size_t companion_dim = padded.mode_dims()[3];
        auto joint = tensor_product(tensor_product(input, padded, policy), fock_state(0, companion_dim - 1), policy);
        joint = apply_beamsplitter(joint, BeamsplitterSpec(kSymmetricReflectivity, kInput, kR), policy);
        if (companion_dim > 1) {
            joint = apply_beamsplitter(
                joint, BeamsplitterSpec(kSymmetricReflectivity, kInputCompanion, kRCompanion), policy);
        }
        out.push_back({weight, std::move(joint)});
    }
    return out;
}

using OutcomeWeight = std::function<double(std::size_t d1_photons, std::size_t d2_photons)>;

// sum_k weight_k * <psi_k| W |psi_k>, reduced onto T. Returns the
// unnormalized 3x3 operator on T.
CMatrix reduce_onto_t(const std::vector<Propagated> &states, const OutcomeWeight &w) {
    CMatrix rho = CMatrix::Zero(kAncillaLevels, kAncillaLevels);
    for (const auto &[weight, psi] : states) {
        const auto &dims = psi.mode_dims();
        auto strides = mode_strides(dims);
        auto digit = [&](std::size_t i, std::size_t m) { return (i / strides[m]) % dims[m]; };
        CVector v(static_cast<Eigen::Index>(kAncillaLevels));
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            if (digit(i, kT) != 0) {
                continue;
            }
            double f = w(digit(i, kR) + digit(i, kRCompanion), digit(i, kInput) + digit(i, kInputCompanion));
            if (f == 0) {
                continue;
            }
            bool any = false;
            for (std::size_t t = 0; t < kAncillaLevels; ++t) {
                v[static_cast<Eigen::Index>(t)] = psi[i + t * strides[kT]];
                any = any || v[static_cast<Eigen::Index>(t)] != Complex(0);
            }
            if (any) {
                rho.noalias() += (weight * f) * (v * v.adjoint());
            }
        }
    }
    return rho;
}

double no_detection(double mu, std::size_t n) {
    return std::pow(1.0 - mu, static_cast<double>(n));
}

double herald_weight(const AmplifierConfig &c, std::size_t n) {
    if (n == 0) {
        return 0;
    }
    if (c.detector == DetectorModel::number_resolving) {
        return static_cast<double>(n) * c.detector_mu * std::pow(1.0 - c.detector_mu, static_cast<double>(n - 1));
    }
    return 1.0 - no_detection(c.detector_mu, n);
}

}  // namespace

AmplifierGain AmplifierGain::from_gain(double g) {
    if (!(g > 0) || !std::isfinite(g)) {
        throw DomainError("amplifier gain must be positive and finite");
    }
    return AmplifierGain(g, 1.0 / std::sqrt(1.0 + g * g), Source::gain);
}

AmplifierGain AmplifierGain::from_reflectivity(double r) {
    if (!(r > 0 && r < 1)) {
        throw DomainError("asymmetric beamsplitter reflectivity must lie in (0, 1)");
    }
    return AmplifierGain(std::sqrt(1.0 - r * r) / r, r, Source::reflectivity);
}

void SourceModel::validate() const {
    auto in_unit = [](double x) { return x >= 0 && x <= 1; };
    if (!in_unit(weight_vacuum) || !in_unit(weight_two_photon) || !in_unit(mode_overlap)) {
        throw DomainError("source weights and mode overlap must lie in [0, 1]");
    }
    if (weight_vacuum + weight_two_photon > 1.0 + 1e-15) {
        throw DomainError("source weights: weight_vacuum + weight_two_photon must not exceed 1");
    }
}

void AmplifierConfig::validate() const {
    source.validate();
    if (!(detector_mu >= 0 && detector_mu <= 1)) {
        throw DomainError("detector efficiency must lie in [0, 1]");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw DomainError("input amplitude must be finite");
    }
    if (n_max < 2) {
        throw DomainError("amplifier simulation needs n_max >= 2");
    }
}

AmplifierConfig ideal_config(Complex alpha, double gain, std::size_t n_max) {
    AmplifierConfig c;
    c.alpha = alpha;
    c.gain = AmplifierGain::from_gain(gain);
    c.detector = DetectorModel::number_resolving;
    c.detector_mu = 1.0;
    c.use_d2_veto = true;
    c.n_max = n_max;
    return c;
}

HeraldedOutput ideal_output(Complex alpha, double gain, std::size_t n_max, bool accept_both_heralds) {
    auto g = AmplifierGain::from_gain(gain);
    if (n_max < 1) {
        throw DomainError("ideal_output needs n_max >= 1");
    }
    CVector c = CVector::Zero(static_cast<Eigen::Index>(n_max + 1));
    c[0] = 1.0;
    c[1] = g.gain() * alpha;
    const double a2 = std::norm(alpha);
    const double r2 = g.reflectivity() * g.reflectivity();
    double p = std::exp(-a2) * 0.5 * r2 * (1.0 + g.gain() * g.gain() * a2);
    if (accept_both_heralds) {
        p *= 2;
    }
    auto psi = FockVector(c).normalized();
    return {DensityOperator::from_pure(psi), p,
            accept_both_heralds ? HeraldBranch::both_branches : HeraldBranch::d1_only};
}

std::vector<std::pair<double, FockVector>> resource_components(double reflectivity, const SourceModel &source) {
    source.validate();
    if (!(reflectivity >= 0 && reflectivity <= 1)) {
        throw DomainError("resource reflectivity must lie in [0, 1]");
    }
    const bool split = source.mode_overlap < 1;
    const std::size_t cd = split ? kAncillaLevels : 1;
    const ModeDims dims{kAncillaLevels, kAncillaLevels, cd, cd};
    const std::array<double, 3> weights{source.weight_vacuum, source.weight_single(), source.weight_two_photon};

    std::vector<std::pair<double, FockVector>> out;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        if (weights[n] <= 0) {
            continue;
        }
        // Modes (S, R, S', R'); the source slot S becomes T after the A-BS.
        CVector amps = CVector::Zero(static_cast<Eigen::Index>(total_dimension(dims)));
        amps[static_cast<Eigen::Index>(n * mode_strides(dims)[0])] = 1.0;
        FockVector psi(std::move(amps), dims);
        if (split) {
            psi = apply_beamsplitter(psi, BeamsplitterSpec(std::sqrt(1.0 - source.mode_overlap * source.mode_overlap), 0, 2));
        }
        psi = apply_beamsplitter(psi, BeamsplitterSpec(reflectivity, 0, 1));
        if (split) {
            psi = apply_beamsplitter(psi, BeamsplitterSpec(reflectivity, 2, 3));
        }
        out.emplace_back(weights[n], std::move(psi));
    }
    return out;
}

DensityOperator build_resource(double reflectivity, const SourceModel &source, std::size_t n_max) {
    if (n_max < 1) {
        throw DomainError("build_resource needs n_max >= 1");
    }
    const std::size_t level = std::min(n_max + 1, kAncillaLevels);
    const bool split = source.mode_overlap < 1;
    ModeDims dims = split ? ModeDims{level, level, level, level} : ModeDims{level, level};
    auto d = static_cast<Eigen::Index>(total_dimension(dims));
    CMatrix rho = CMatrix::Zero(d, d);
    for (auto &[w, psi] : resource_components(reflectivity, source)) {
        FockVector v = psi;
        for (std::size_t m = 0; m < (split ? 4u : 2u); ++m) {
            v = resize_mode(v, m, level);
        }
        rho.noalias() += w * (v.amplitudes() * v.amplitudes().adjoint());
    }
    return DensityOperator(std::move(rho), std::move(dims));
}

HeraldedOutput simulate(const AmplifierConfig &config, const NumericalPolicy &policy) {
    auto states = propagate(config, policy);
    auto weight = [&](std::size_t d1, std::size_t d2) {
        double w = herald_weight(config, d1);
        if (config.use_d2_veto) {
            w *= no_detection(config.detector_mu, d2);
        }
        return w;
    };
    CMatrix rho_t = reduce_onto_t(states, weight);
    double p = rho_t.trace().real();
    if (!(p >= 1e-15)) {
        throw TruncationError("heralding probability " + std::to_string(p) + " is numerically meaningless");
    }
    DensityOperator conditioned(rho_t / p);
    conditioned = resize_mode(conditioned, 0, config.n_max + 1);
    if (config.accept_both_heralds) {
        p *= 2;
    }
    return {std::move(conditioned), std::min(p, 1.0),
            config.accept_both_heralds ? HeraldBranch::both_branches : HeraldBranch::d1_only};
}

std::array<std::array<double, 2>, 2> outcome_probabilities(const AmplifierConfig &config,
                                                           const NumericalPolicy &policy) {
    auto states = propagate(config, policy);
    std::array<std::array<double, 2>, 2> table{};
    for (int h1 = 0; h1 < 2; ++h1) {
        for (int h2 = 0; h2 < 2; ++h2) {
            auto weight = [&](std::size_t d1, std::size_t d2) {
                double a = herald_weight(config, d1);
                double b = no_detection(config.detector_mu, d2);
                return (h1 ? a : 1.0 - a) * (h2 ? b : 1.0 - b);
            };
            table[h1][h2] = reduce_onto_t(states, weight).trace().real();
        }
    }
    return table;
}

PhaseCovarianceReport phase_covariance_check(const AmplifierConfig &config, std::span<const double> thetas,
                                             const NumericalPolicy &policy) {
    PhaseCovarianceReport report;
    auto reference = simulate(config, policy);
    for (double theta : thetas) {
        AmplifierConfig rotated = config;
        rotated.alpha = config.alpha * std::polar(1.0, theta);
        auto direct = simulate(rotated, policy);
        auto expected = apply_phase(reference.state, 0, theta);
        double dev = trace_distance(direct.state, expected, policy);
        report.thetas.push_back(theta);
        report.deviations.push_back(dev);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

}  // namespace nlamp
