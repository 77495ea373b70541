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

#ifndef NLAMP_AMPLIFIER_H
#define NLAMP_AMPLIFIER_H

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nlamp/fock.h"
#include "nlamp/numerical_policy.h"

namespace nlamp {

/// Gain of the heralded amplifier, g = sqrt(1 - r^2) / r, where r is the
/// amplitude reflectivity of the beamsplitter that splits the ancilla photon.
/// Whichever of g or r was supplied stays authoritative; the other is derived.
class AmplifierGain {
   public:
    enum class Source { gain, reflectivity };

    static AmplifierGain from_gain(double g);
    static AmplifierGain from_reflectivity(double r);

    double gain() const {
        return g_;
    }
    double reflectivity() const {
        return r_;
    }
    Source authoritative() const {
        return source_;
    }

   private:
    AmplifierGain(double g, double r, Source s) : g_(g), r_(r), source_(s) {
    }
    double g_;
    double r_;
    Source source_;
};

/// Imperfect heralded single-photon source. weight_vacuum and
/// weight_two_photon are the populations of |0> and |2> in the heralded mode;
/// mode_overlap is the amplitude overlap of each source photon with the
/// coherent-beam mode.
struct SourceModel {
    double weight_vacuum = 0;
    double weight_two_photon = 0;
    double mode_overlap = 1;

    double weight_single() const {
        return 1.0 - weight_vacuum - weight_two_photon;
    }
    bool ideal() const {
        return weight_vacuum == 0 && weight_two_photon == 0 && mode_overlap == 1;
    }
    /// Throws DomainError when the weights are not a valid distribution.
    void validate() const;
};

/// on_off: a click is any nonzero photon count. number_resolving: the herald
/// requires exactly one detected photon. Both include efficiency mu.
enum class DetectorModel { on_off, number_resolving };

enum class HeraldBranch { d1_only, both_branches };

struct AmplifierConfig {
    Complex alpha = 0;
    AmplifierGain gain = AmplifierGain::from_gain(2.0);
    SourceModel source{};
    double detector_mu = 1.0;
    DetectorModel detector = DetectorModel::on_off;
    bool use_d2_veto = false;
    bool accept_both_heralds = false;
    std::size_t n_max = 12;

    void validate() const;
};

/// Ideal components: perfect single photon, unit-efficiency number-resolving
/// detectors with the D2 veto on.
AmplifierConfig ideal_config(Complex alpha, double gain, std::size_t n_max = 12);

struct HeraldedOutput {
    DensityOperator state;
    double success_probability;
    HeraldBranch branch;
};

/// Normalized output |0> + g alpha |1> and its success probability
/// e^{-|alpha|^2} (r^2 / 2)(1 + g^2 |alpha|^2), doubled when both heralds are
/// accepted. The state lives in n_max + 1 levels.
HeraldedOutput ideal_output(Complex alpha, double gain, std::size_t n_max = 12, bool accept_both_heralds = false);

/// Ancilla photons per mode are capped here; the source emits at most two.
inline constexpr std::size_t kAncillaLevels = 3;

/// Weighted pure components of the resource on modes (T, R, T', R'). The
/// primed companion modes carry the part of each photon orthogonal to the
/// coherent beam; they are one-dimensional when mode_overlap == 1.
std::vector<std::pair<double, FockVector>> resource_components(double reflectivity, const SourceModel &source);

/// Resource density operator on (T, R) or, for mode_overlap < 1, on
/// (T, R, T', R'). Per-mode cutoff is min(n_max, 2).
DensityOperator build_resource(double reflectivity, const SourceModel &source, std::size_t n_max = 12);

/// Full circuit: input (x) resource, symmetric beamsplitter, detector POVMs,
/// reduction onto T.
HeraldedOutput simulate(const AmplifierConfig &config, const NumericalPolicy &policy = default_policy());

/// Probability of each detector outcome. Index [h1][h2]: h1 = 1 when D1
/// heralds, h2 = 1 when D2 registers nothing (the veto passes). Entries sum
/// to the input norm.
std::array<std::array<double, 2>, 2> outcome_probabilities(const AmplifierConfig &config,
                                                           const NumericalPolicy &policy = default_policy());

struct PhaseCovarianceReport {
    std::vector<double> thetas;
    std::vector<double> deviations;
    double max_deviation = 0;
};

/// Trace distance between simulate(alpha e^{i theta}) and the theta-rotated
/// simulate(alpha), for each theta.
PhaseCovarianceReport phase_covariance_check(const AmplifierConfig &config, std::span<const double> thetas,
                                             const NumericalPolicy &policy = default_policy());

}  // namespace nlamp

#endif
