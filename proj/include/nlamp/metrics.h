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

#ifndef NLAMP_METRICS_H
#define NLAMP_METRICS_H

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlamp/fock.h"

namespace nlamp {

struct GridSpec {
    double x_min = -6;
    double x_max = 6;
    std::size_t x_points = 201;
    double p_min = -6;
    double p_max = 6;
    std::size_t p_points = 201;
};

/// W(x, p) sampled on a rectangular grid, values(i, j) at (x[i], p[j]).
struct WignerGrid {
    std::vector<double> x;
    std::vector<double> p;
    RMatrix values;

    /// Riemann sum of W over the grid.
    double integral() const;
};

/// W(x, p) with x, p the X and P quadratures in shot-noise units, so the
/// vacuum is (1 / 2 pi) exp(-(x^2 + p^2) / 2). Direct Fock series with
/// associated Laguerre kernels.
double wigner_point(const DensityOperator &rho, double x, double p);
WignerGrid wigner(const DensityOperator &rho, const GridSpec &grid = {});

/// `x,p,w` rows.
void write_wigner_csv(std::ostream &out, const WignerGrid &grid);
void write_wigner_csv(const std::filesystem::path &path, const WignerGrid &grid);

/// <X_theta>_out / <X_theta>_in at theta = arg(alpha), with <X_in> = 2|alpha|.
/// A measured output (homodyne efficiency eta_hd < 1) is referred back to the
/// amplifier output by dividing its mean by sqrt(eta_hd).
double effective_gain(const DensityOperator &rho_out, Complex alpha_in, double eta_hd = 1.0);

/// Variance at the amplifier output from a variance measured at efficiency
/// eta_hd: 1 + (v_measured - 1) / eta_hd.
double output_plane_variance(double measured_variance, double eta_hd);

/// N_eq = <dX_theta^2>_out / g_eff^2 - input_variance. For eta_hd < 1 the
/// state is taken as measured and its variance corrected first.
double equivalent_input_noise(const DensityOperator &rho_out, double g_eff, double theta, double eta_hd = 1.0,
                              double input_variance = 1.0);

struct EinStatistics {
    double min;
    double avg;
    double max;
    std::vector<double> per_phase;
};

EinStatistics ein_statistics(const DensityOperator &rho_out, double g_eff, std::span<const double> phases,
                             double eta_hd = 1.0);

/// Equivalent input noise of the best deterministic phase-insensitive device
/// at gain g: (g^2 - 1) / g^2 for g >= 1 (quantum-limited amplifier),
/// (1 - g^2) / g^2 for g < 1 (beamsplitter attenuation).
double reference_ein(double g_eff);

struct MutualInformation {
    double direct;        ///< I_AB = 1/2 ln(1 + snr)
    double amplified;     ///< upper bound with the heralded amplifier
    double ratio;         ///< amplified / direct; small-snr limit at snr = 0
};

/// Gaussian-channel information with and without the heralded amplifier at
/// vanishing input. Each use succeeds with probability r^2 / 2 per herald
/// branch (r^2 with both) and then carries at most 1/2 ln(1 + g^2 snr).
MutualInformation mutual_info_bound(double snr, double gain, bool both_heralds);

enum class VarianceBasis { output_plane, measured_corrected };

struct MetricsReport {
    double alpha = 0;
    std::optional<double> g_eff;
    std::optional<double> ein_min;
    std::optional<double> ein_avg;
    std::optional<double> ein_max;
    double success_probability = 0;
    std::optional<double> reference_ein;
    std::vector<double> phases;
    VarianceBasis variance_basis = VarianceBasis::output_plane;
};

/// alpha == 0 leaves the gain-dependent fields empty.
MetricsReport compute_metrics(const DensityOperator &rho_out, Complex alpha, double success_probability,
                              std::span<const double> phases, double eta_hd = 1.0);

std::string metrics_json(const MetricsReport &report);

}  // namespace nlamp

#endif
