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

#ifndef NLAMP_QUADRATURE_H
#define NLAMP_QUADRATURE_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "nlamp/fock.h"

namespace nlamp {

// Quadrature convention: X_theta = a e^{-i theta} + a^dag e^{i theta}, so the
// vacuum variance is 1 and a real coherent amplitude alpha gives <X_0> = 2 alpha.

struct QuadratureSample {
    double theta;
    double x;
};

/// theta_k = k pi / count, k = 0..count-1.
std::vector<double> uniform_phases(std::size_t count);

/// Number-basis wavefunctions psi_0(x) .. psi_{n_max}(x), real, via the
/// three-term recurrence x psi_n = sqrt(n+1) psi_{n+1} + sqrt(n) psi_{n-1}.
std::vector<double> quadrature_wavefunctions(double x, std::size_t n_max);

/// p(x | theta) for a unit-trace single-mode operator. Throws DomainError if
/// the trace differs from 1 by more than 1e-9.
double quadrature_pdf(const DensityOperator &rho, double theta, double x);

/// <m| X_theta |n> on the truncated space.
CMatrix quadrature_operator(std::size_t n_max, double theta);
/// <m| X_theta^2 |n>, built from the untruncated ladder algebra (so the
/// diagonal is 2n + 1 at every n, including n_max).
CMatrix quadrature_square_operator(std::size_t n_max, double theta);

struct QuadratureMoments {
    double mean;
    double variance;
};

QuadratureMoments quadrature_moments(const DensityOperator &rho, double theta);

/// Inverse-CDF sampler on a fixed grid with linear interpolation of the CDF.
class QuadratureSampler {
   public:
    static constexpr std::size_t kGridPoints = 4001;
    static constexpr double kGridHalfWidth = 10.0;

    QuadratureSampler(const DensityOperator &rho, std::span<const double> phases);

    /// x for phase index k and uniform deviate u in [0, 1).
    double draw(std::size_t phase_index, double u) const;
    const std::vector<double> &phases() const {
        return phases_;
    }

   private:
    std::vector<double> phases_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> cdf_;
};

/// Applies loss eta_hd, then draws `count` samples with phases taken
/// round-robin from `phases`. Deterministic for a fixed seed.
std::vector<QuadratureSample> sample_homodyne(const DensityOperator &rho, std::span<const double> phases,
                                              std::size_t count, double eta_hd, std::uint64_t seed);

class DetectorCalibration {
   public:
    /// repetition_rate in events per second, efficiency mu in [0, 1].
    DetectorCalibration(double repetition_rate, double efficiency);

    double repetition_rate() const {
        return rate_;
    }
    double efficiency() const {
        return mu_;
    }

   private:
    double rate_;
    double mu_;
};

/// Click rate C = rate * (1 - e^{-mu |alpha|^2}) of an on/off detector.
double click_rate(double amplitude, const DetectorCalibration &cal);
/// Inverse of click_rate. Throws DomainError for C < 0 or C >= rate.
double amplitude_from_counts(double counts_per_second, const DetectorCalibration &cal);

/// CSV with header `theta,x`.
void write_samples_csv(std::ostream &out, std::span<const QuadratureSample> samples);
void write_samples_csv(const std::filesystem::path &path, std::span<const QuadratureSample> samples);
std::vector<QuadratureSample> read_samples_csv(std::istream &in);
std::vector<QuadratureSample> read_samples_csv(const std::filesystem::path &path);

}  // namespace nlamp

#endif
