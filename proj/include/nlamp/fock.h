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

#ifndef NLAMP_FOCK_H
#define NLAMP_FOCK_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nlamp/numerical_policy.h"

namespace nlamp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Per-mode Hilbert-space dimensions (n_max + 1 for each mode). Mode 0 is
/// the most significant digit of the composite basis index.
using ModeDims = std::vector<std::size_t>;

std::size_t total_dimension(std::span<const std::size_t> dims);

/// Row-major strides of a composite basis index.
std::vector<std::size_t> mode_strides(std::span<const std::size_t> dims);

/// Pure state on a truncated photon-number basis, one or more modes.
class FockVector {
   public:
    /// Single-mode vector; n_max = amplitudes.size() - 1.
    explicit FockVector(CVector amplitudes);
    FockVector(CVector amplitudes, ModeDims dims);

    const CVector &amplitudes() const {
        return amplitudes_;
    }
    const ModeDims &mode_dims() const {
        return dims_;
    }
    std::size_t num_modes() const {
        return dims_.size();
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    /// Truncation bound of a single-mode vector. Throws DomainError for
    /// multimode vectors.
    std::size_t n_max() const;
    Complex operator[](std::size_t n) const {
        return amplitudes_[static_cast<Eigen::Index>(n)];
    }
    double norm2() const {
        return amplitudes_.squaredNorm();
    }
    FockVector normalized() const;

   private:
    CVector amplitudes_;
    ModeDims dims_;
};

struct PhysicalityReport {
    double hermiticity_error = 0;
    double min_eigenvalue = 0;
    double trace = 0;
    bool hermitian = false;
    bool positive = false;
    bool trace_ok = false;

    bool physical() const {
        return hermitian && positive && trace_ok;
    }
};

/// Mixed state (or unnormalized conditioned operator) on one or more
/// truncated modes.
class DensityOperator {
   public:
    /// Single mode of dimension matrix.rows().
    explicit DensityOperator(CMatrix matrix);
    DensityOperator(CMatrix matrix, ModeDims dims);

    static DensityOperator from_pure(const FockVector &psi);

    const CMatrix &matrix() const {
        return matrix_;
    }
    const ModeDims &mode_dims() const {
        return dims_;
    }
    std::size_t num_modes() const {
        return dims_.size();
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(matrix_.rows());
    }
    std::size_t n_max() const;
    Complex operator()(std::size_t row, std::size_t col) const {
        return matrix_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    double trace() const;
    DensityOperator normalized() const;
    /// Photon-number distribution of a single-mode operator.
    std::vector<double> photon_distribution() const;
    double mean_photon_number() const;

    /// Hermiticity, positivity and trace in (0, 1 + eps]. Requires
    /// normalization only when unit_trace is set.
    PhysicalityReport check(const NumericalPolicy &policy = default_policy(), bool unit_trace = false) const;

   private:
    CMatrix matrix_;
    ModeDims dims_;
};

/// |alpha> truncated at n_max. Throws TruncationError when the discarded
/// norm-squared exceeds truncation_tol.
FockVector coherent_state(Complex alpha, std::size_t n_max, double truncation_tol = default_policy().truncation);

/// |n> in a single mode of dimension n_max + 1.
FockVector fock_state(std::size_t n, std::size_t n_max);

FockVector tensor_product(const FockVector &a, const FockVector &b,
                          const NumericalPolicy &policy = default_policy());
DensityOperator tensor_product(const DensityOperator &a, const DensityOperator &b,
                               const NumericalPolicy &policy = default_policy());

/// Trace out every mode not listed in keep. Kept modes retain their
/// original relative order.
DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> keep);

/// Raise or lower the cutoff of one mode. Lowering throws TruncationError if
/// amplitude beyond the new cutoff exceeds truncation_tol.
FockVector resize_mode(const FockVector &psi, std::size_t mode, std::size_t new_dim,
                       double truncation_tol = default_policy().truncation);
DensityOperator resize_mode(const DensityOperator &rho, std::size_t mode, std::size_t new_dim,
                            double truncation_tol = default_policy().truncation);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Inputs are
/// normalized first; non-positive inputs throw DomainError.
double fidelity(const DensityOperator &rho, const DensityOperator &sigma,
                const NumericalPolicy &policy = default_policy());
/// Half the trace norm of the difference of the normalized inputs.
double trace_distance(const DensityOperator &rho, const DensityOperator &sigma,
                      const NumericalPolicy &policy = default_policy());

}  // namespace nlamp

#endif
