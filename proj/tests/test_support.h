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

// Helpers shared by the test binaries: random physical states and a few
// independent reference computations that do not go through library code.

#ifndef NLAMP_TESTS_TEST_SUPPORT_H
#define NLAMP_TESTS_TEST_SUPPORT_H

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "nlamp/fock.h"

namespace nlamp::test {

inline std::mt19937_64 &rng() {
    static std::mt19937_64 engine(0x5eedULL);
    return engine;
}

/// Random mixed state of the given rank (Ginibre construction).
inline DensityOperator random_density(const ModeDims &dims, std::size_t rank, std::mt19937_64 &gen = rng()) {
    std::normal_distribution<double> n(0.0, 1.0);
    auto d = static_cast<Eigen::Index>(total_dimension(dims));
    CMatrix g(d, static_cast<Eigen::Index>(rank));
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            g(i, j) = Complex(n(gen), n(gen));
        }
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityOperator(rho, dims);
}

inline DensityOperator random_density(std::size_t n_max, std::size_t rank, std::mt19937_64 &gen = rng()) {
    return random_density(ModeDims{n_max + 1}, rank, gen);
}

/// Random pure state whose support is concentrated on low photon numbers
/// (amplitudes damped as 0.6^n), so truncation effects stay negligible.
inline FockVector random_low_photon_vector(const ModeDims &dims, std::mt19937_64 &gen = rng()) {
    std::normal_distribution<double> n(0.0, 1.0);
    auto strides = mode_strides(dims);
    CVector v(static_cast<Eigen::Index>(total_dimension(dims)));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::size_t photons = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            photons += (static_cast<std::size_t>(i) / strides[k]) % dims[k];
        }
        v[i] = Complex(n(gen), n(gen)) * std::pow(0.6, static_cast<double>(photons));
    }
    v.normalize();
    return FockVector(v, dims);
}

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Poisson photon statistics summed directly.
inline double poisson_mean_truncated(double mean, std::size_t n_max) {
    double p = std::exp(-mean);
    double acc = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        p *= mean / static_cast<double>(n);
        acc += static_cast<double>(n) * p;
    }
    return acc;
}

/// Normalized |0> + c |1> embedded in n_max + 1 levels.
inline DensityOperator qubit_superposition(Complex c, std::size_t n_max) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(n_max + 1));
    v[0] = 1.0;
    v[1] = c;
    v.normalize();
    return DensityOperator(v * v.adjoint());
}

}  // namespace nlamp::test

#endif
