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

#ifndef NLAMP_LINEAR_OPTICS_H
#define NLAMP_LINEAR_OPTICS_H

#include <cstddef>

#include "nlamp/fock.h"

namespace nlamp {

/// Beamsplitter phase convention. `standard` maps creation operators as
///   a1^dag -> t a1^dag + r a2^dag,   a2^dag -> -r a1^dag + t a2^dag,
/// so |1,0> -> t|1,0> + r|0,1>. The sign sits on the path reflected from the
/// second input port. `inverse` is the adjoint transformation.
enum class BeamsplitterConvention { standard, inverse };

class BeamsplitterSpec {
   public:
    /// r is the amplitude reflectivity in [0, 1].
    BeamsplitterSpec(double reflectivity, std::size_t mode_a, std::size_t mode_b,
                     BeamsplitterConvention convention = BeamsplitterConvention::standard);

    double reflectivity() const {
        return r_;
    }
    double transmissivity() const {
        return t_;
    }
    std::size_t mode_a() const {
        return mode_a_;
    }
    std::size_t mode_b() const {
        return mode_b_;
    }
    BeamsplitterConvention convention() const {
        return convention_;
    }
    BeamsplitterSpec inverted() const;

   private:
    double r_;
    double t_;
    std::size_t mode_a_;
    std::size_t mode_b_;
    BeamsplitterConvention convention_;
};

class LossChannel {
   public:
    /// efficiency is the intensity transmission eta in [0, 1].
    LossChannel(double efficiency, std::size_t mode);

    double efficiency() const {
        return eta_;
    }
    std::size_t mode() const {
        return mode_;
    }

   private:
    double eta_;
    std::size_t mode_;
};

/// ( <k, N-k| U |n, N-n> ) for the (N+1)-dimensional sector of total photon
/// number N. Signed reflectivity: negative r gives the inverse convention.
RMatrix beamsplitter_sector(double signed_reflectivity, std::size_t total_photons);

/// Both modes must have the same cutoff. Norm-squared pushed past the cutoff
/// above policy.truncation throws TruncationError; smaller leakage is
/// silently dropped.
FockVector apply_beamsplitter(const FockVector &psi, const BeamsplitterSpec &spec,
                              const NumericalPolicy &policy = default_policy());
DensityOperator apply_beamsplitter(const DensityOperator &rho, const BeamsplitterSpec &spec,
                                   const NumericalPolicy &policy = default_policy());

/// Multiplies the amplitude at photon number n of `mode` by e^{i n theta}.
FockVector apply_phase(const FockVector &psi, std::size_t mode, double theta);
DensityOperator apply_phase(const DensityOperator &rho, std::size_t mode, double theta);

/// Pure loss: couple to a vacuum ancilla at reflectivity sqrt(1 - eta) and
/// trace the ancilla out.
DensityOperator apply_loss(const DensityOperator &rho, const LossChannel &channel,
                           const NumericalPolicy &policy = default_policy());

}  // namespace nlamp

#endif
