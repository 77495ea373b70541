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

#include "nlamp/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

#include "nlamp/errors.h"
#include "nlamp/quadrature.h"

namespace nlamp {

namespace {

std::vector<double> axis(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) {
        throw DomainError("grid axis needs at least two points and hi > lo");
    }
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

// sqrt(m! / (m + k)!) for 0 <= m, m + k <= n_max.
RMatrix factorial_ratios(std::size_t n_max) {
    auto d = static_cast<Eigen::Index>(n_max + 1);
    RMatrix f = RMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index m = 0; m + k < d; ++m) {
            double v = 1;
            for (Eigen::Index j = m + 1; j <= m + k; ++j) {
                v /= std::sqrt(static_cast<double>(j));
            }
            f(m, k) = v;
        }
    }
    return f;
}

double wigner_series(const CMatrix &rho, const RMatrix &ratios, double x, double p) {
    const auto d = rho.rows();
    const Complex beta(0.5 * x, 0.5 * p);
    const double b = x * x + p * p;
    double w = 0;
    Complex power = 1;  // (2 beta)^k
    std::vector<double> lag(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        // L_m^{(k)}(b) for m = 0 .. d-1-k.
        const Eigen::Index count = d - k;
        const double kk = static_cast<double>(k);
        lag[0] = 1.0;
        if (count > 1) {
            lag[1] = 1.0 + kk - b;
        }
        for (Eigen::Index m = 1; m + 1 < count; ++m) {
            const double md = static_cast<double>(m);
            lag[static_cast<std::size_t>(m + 1)] =
                ((2 * md + 1 + kk - b) * lag[static_cast<std::size_t>(m)] - (md + kk) * lag[static_cast<std::size_t>(m - 1)]) /
                (md + 1);
        }
        for (Eigen::Index m = 0; m < count; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const double kernel = sign * ratios(m, k) * lag[static_cast<std::size_t>(m)];
            if (k == 0) {
                w += rho(m, m).real() * kernel;
            } else {
                w += 2.0 * (rho(m, m + k) * power).real() * kernel;
            }
        }
        power *= 2.0 * beta;
    }
    return w * std::exp(-0.5 * b) / (2.0 * std::numbers::pi);
}

void require_single_mode(const DensityOperator &rho) {
    if (rho.num_modes() != 1) {
        throw DomainError("metric needs a single-mode state");
    }
}

}  // namespace

double WignerGrid::integral() const {
    if (x.size() < 2 || p.size() < 2) {
        return 0;
    }
    const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    const double dp = (p.back() - p.front()) / static_cast<double>(p.size() - 1);
    return values.sum() * dx * dp;
}

double wigner_point(const DensityOperator &rho, double x, double p) {
    require_single_mode(rho);
    return wigner_series(rho.matrix(), factorial_ratios(rho.n_max()), x, p);
}

WignerGrid wigner(const DensityOperator &rho, const GridSpec &spec) {
    require_single_mode(rho);
    if (std::abs(rho.trace() - 1.0) > 1e-9) {
        throw DomainError("wigner needs a unit-trace state");
    }
    WignerGrid g;
    g.x = axis(spec.x_min, spec.x_max, spec.x_points);
    g.p = axis(spec.p_min, spec.p_max, spec.p_points);
    g.values.resize(static_cast<Eigen::Index>(g.x.size()), static_cast<Eigen::Index>(g.p.size()));
    const auto ratios = factorial_ratios(rho.n_max());
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.p.size(); ++j) {
            g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                wigner_series(rho.matrix(), ratios, g.x[i], g.p[j]);
        }
    }
    return g;
}

void write_wigner_csv(std::ostream &out, const WignerGrid &grid) {
    out << "x,p,w\n";
    char buf[96];
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        for (std::size_t j = 0; j < grid.p.size(); ++j) {
            char *ptr = buf;
            char *end = buf + sizeof(buf);
            ptr = std::to_chars(ptr, end, grid.x[i]).ptr;
            *ptr++ = ',';
            ptr = std::to_chars(ptr, end, grid.p[j]).ptr;
            *ptr++ = ',';
            ptr = std::to_chars(ptr, end, grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))).ptr;
            *ptr++ = '\n';
            out.write(buf, ptr - buf);
        }
    }
}

void write_wigner_csv(const std::filesystem::path &path, const WignerGrid &grid) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_wigner_csv(out, grid);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

double effective_gain(const DensityOperator &rho_out, Complex alpha_in, double eta_hd) {
    require_single_mode(rho_out);
    const double amplitude = std::abs(alpha_in);
    if (amplitude == 0) {
        throw DomainError("effective gain is undefined for a vacuum input");
    }
    if (!(eta_hd > 0 && eta_hd <= 1)) {
        throw DomainError("homodyne efficiency must lie in (0, 1]");
    }
    auto m = quadrature_moments(rho_out, std::arg(alpha_in));
    return m.mean / (std::sqrt(eta_hd) * 2.0 * amplitude);
}

double output_plane_variance(double measured_variance, double eta_hd) {
    if (!(eta_hd > 0 && eta_hd <= 1)) {
        throw DomainError("homodyne efficiency must lie in (0, 1]");
    }
    return 1.0 + (measured_variance - 1.0) / eta_hd;
}

double equivalent_input_noise(const DensityOperator &rho_out, double g_eff, double theta, double eta_hd,
                              double input_variance) {
    require_single_mode(rho_out);
    if (g_eff == 0 || !std::isfinite(g_eff)) {
        throw DomainError("equivalent input noise needs a finite nonzero gain");
    }
    double v = output_plane_variance(quadrature_moments(rho_out, theta).variance, eta_hd);
    return v / (g_eff * g_eff) - input_variance;
}

EinStatistics ein_statistics(const DensityOperator &rho_out, double g_eff, std::span<const double> phases,
                             double eta_hd) {
    if (phases.empty()) {
        throw DomainError("ein_statistics needs at least one phase");
    }
    EinStatistics s{};
    for (double theta : phases) {
        s.per_phase.push_back(equivalent_input_noise(rho_out, g_eff, theta, eta_hd));
    }
    auto [lo, hi] = std::minmax_element(s.per_phase.begin(), s.per_phase.end());
    s.min = *lo;
    s.max = *hi;
    s.avg = std::accumulate(s.per_phase.begin(), s.per_phase.end(), 0.0) / static_cast<double>(s.per_phase.size());
    // Rounding can push the mean a hair outside [min, max] for constant data.
    s.avg = std::clamp(s.avg, s.min, s.max);
    return s;
}

double reference_ein(double g) {
    if (!(g > 0)) {
        throw DomainError("reference_ein needs a positive gain");
    }
    const double g2 = g * g;
    return g >= 1 ? (g2 - 1.0) / g2 : (1.0 - g2) / g2;
}

MutualInformation mutual_info_bound(double snr, double gain, bool both_heralds) {
    if (!(snr >= 0)) {
        throw DomainError("signal-to-noise ratio must be non-negative");
    }
    if (!(gain > 0)) {
        throw DomainError("gain must be positive");
    }
    const double r2 = 1.0 / (1.0 + gain * gain);
    const double success = both_heralds ? r2 : 0.5 * r2;
    MutualInformation mi{};
    mi.direct = 0.5 * std::log1p(snr);
    mi.amplified = success * 0.5 * std::log1p(gain * gain * snr);
    mi.ratio = snr == 0 ? success * gain * gain : mi.amplified / mi.direct;
    return mi;
}

MetricsReport compute_metrics(const DensityOperator &rho_out, Complex alpha, double success_probability,
                              std::span<const double> phases, double eta_hd) {
    MetricsReport r;
    r.alpha = std::abs(alpha);
    r.success_probability = success_probability;
    r.phases.assign(phases.begin(), phases.end());
    r.variance_basis = eta_hd < 1 ? VarianceBasis::measured_corrected : VarianceBasis::output_plane;
    if (std::abs(alpha) == 0) {
        return r;
    }
    double g = effective_gain(rho_out, alpha, eta_hd);
    auto s = ein_statistics(rho_out, g, phases, eta_hd);
    r.g_eff = g;
    r.ein_min = s.min;
    r.ein_avg = s.avg;
    r.ein_max = s.max;
    if (g > 0) {
        r.reference_ein = reference_ein(g);
    }
    return r;
}

std::string metrics_json(const MetricsReport &report) {
    auto opt = [](const std::optional<double> &v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::ordered_json j;
    j["alpha"] = report.alpha;
    j["g_eff"] = opt(report.g_eff);
    j["ein_min"] = opt(report.ein_min);
    j["ein_avg"] = opt(report.ein_avg);
    j["ein_max"] = opt(report.ein_max);
    j["success_probability"] = report.success_probability;
    j["reference_ein"] = opt(report.reference_ein);
    j["phases"] = report.phases;
    j["variance_basis"] = report.variance_basis == VarianceBasis::output_plane ? "output_plane" : "measured_corrected";
    return j.dump(2) + "\n";
}

}  // namespace nlamp
