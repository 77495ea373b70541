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

#ifndef NLAMP_NUMERICAL_POLICY_H
#define NLAMP_NUMERICAL_POLICY_H

#include <cstddef>

namespace nlamp {

/// Tolerances shared by every module. Passed by const reference; the
/// defaults are what the library and its tests are calibrated against.
struct NumericalPolicy {
    /// max |rho - rho^dagger| entrywise.
    double hermiticity = 1e-12;
    /// Smallest admissible eigenvalue of a density operator.
    double positivity = -1e-10;
    /// Allowed trace excess over 1.
    double trace = 1e-12;
    /// Norm-squared deficit tolerated when cutting a Fock expansion.
    double truncation = 1e-8;
    /// Largest composite Hilbert-space dimension we will allocate.
    std::size_t dimension_cap = 1'000'000;
};

inline const NumericalPolicy &default_policy() {
    static const NumericalPolicy policy{};
    return policy;
}

}  // namespace nlamp

#endif
