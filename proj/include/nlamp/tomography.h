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

#ifndef NLAMP_TOMOGRAPHY_H
#define NLAMP_TOMOGRAPHY_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "nlamp/fock.h"
#include "nlamp/quadrature.h"

namespace nlamp {

/// Counts of one homodyne phase over uniform bins, plus the two unbounded
/// overflow bins (-inf, edges.front()) and [edges.back(), inf).
struct QuadratureHistogram {
    double phase = 0;
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    std::uint64_t total() const;
    bool has_overflow() const {
        return underflow != 0 || overflow != 0;
    }
    /// Throws DomainError unless edges are strictly increasing and
    /// counts.size() == edges.size() - 1.
    void validate() const;
};

/// One histogram per entry of `phases`, `bin_count` uniform bins on
/// [lo, hi). Every sample phase must match a listed phase to within 1e-12.
std::vector<QuadratureHistogram> bin_samples(std::span<const QuadratureSample> samples, std::span<const double> phases,
                                             std::size_t bin_count, double lo, double hi);

/// I_mn = \int_lo^hi psi_m(x) psi_n(x) dx. lo / hi may be infinite.
RMatrix bin_overlap_integrals(double lo, double hi, std::size_t n_max);

/// Pi = \int_lo^hi |x; theta><x; theta| dx in the Fock basis.
CMatrix bin_povm(double phase, double lo, double hi, std::size_t n_max);

/// All POVM elements of one histogram: underflow, each bin, overflow.
std::vector<CMatrix> histogram_povms(double phase, std::span<const double> edges, std::size_t n_max);

class TomographyProblem {
   public:
    /// Throws DomainError on empty data, repeated phases, or fewer than two
    /// phases.
    TomographyProblem(std::vector<QuadratureHistogram> histograms, std::size_t n_max);

    const std::vector<QuadratureHistogram> &histograms() const {
        return histograms_;
    }
    std::size_t n_max() const {
        return n_max_;
    }
    std::uint64_t total_counts() const {
        return total_;
    }

    /// Born probabilities Tr(Pi_j rho) in the order underflow, bins,
    /// overflow, histogram by histogram.
    std::vector<double> probabilities(const DensityOperator &rho) const;
    double log_likelihood(const DensityOperator &rho) const;

    /// Noise-free problem whose bin frequencies are the exact Born
    /// probabilities of `rho` (each phase weighted equally). Histogram counts
    /// are rounded to a nominal 10^9 samples per phase for display only.
    static TomographyProblem from_exact_probabilities(const DensityOperator &rho, std::span<const double> phases,
                                                      std::span<const double> edges, std::size_t n_max);

    /// Relative frequency of every bin, same order as probabilities().
    const std::vector<double> &frequencies() const {
        return frequencies_;
    }

    struct PhaseBlock {
        double phase;
        std::shared_ptr<const std::vector<RMatrix>> integrals;
        std::size_t offset;
    };
    const std::vector<PhaseBlock> &blocks() const {
        return blocks_;
    }

   private:
    TomographyProblem() = default;
    void build_cache();

    std::vector<QuadratureHistogram> histograms_;
    std::size_t n_max_ = 0;
    std::uint64_t total_ = 0;
    std::vector<double> frequencies_;
    std::vector<PhaseBlock> blocks_;
};

struct ReconstructionOptions {
    std::size_t max_iter = 2000;
    /// Stop once the log-likelihood gain per count drops below this.
    double tol = 1e-10;
};

struct ReconstructionResult {
    DensityOperator rho;
    /// Log-likelihood per count, sum_j f_j ln p_j, one entry for the start
    /// point and one per iteration.
    std::vector<double> log_likelihood;
    std::size_t iterations = 0;
    bool converged = false;
    /// A bin with counts had Born probability below 1e-300 and was floored.
    bool floored = false;
};

/// Fixed-point iteration rho <- N[R rho R], R = sum_j (f_j / p_j) Pi_j,
/// starting from the maximally mixed state.
ReconstructionResult maxlik_reconstruct(const TomographyProblem &problem, const ReconstructionOptions &options = {});

/// `{"n_max": int, "re": [[...]], "im": [[...]]}`
void write_density_json(std::ostream &out, const DensityOperator &rho);
void write_density_json(const std::filesystem::path &path, const DensityOperator &rho);
DensityOperator read_density_json(std::istream &in);
DensityOperator read_density_json(const std::filesystem::path &path);

}  // namespace nlamp

#endif
