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

#include "nlamp/quadrature.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nlamp/errors.h"
#include "nlamp/linear_optics.h"

namespace nlamp {

namespace {

void require_unit_trace(const DensityOperator &rho) {
    if (rho.num_modes() != 1) {
        throw DomainError("quadrature statistics need a single-mode state");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-9) {
        throw DomainError("quadrature statistics need a unit-trace state (trace " + std::to_string(rho.trace()) + ")");
    }
}

// 53-bit uniform deviate in [0, 1); independent of the standard library's
// distribution implementations so sample files are portable.
double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double parse_double(std::string_view s, std::size_t line) {
    // Leading/trailing whitespace tolerated.
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("sample CSV line " + std::to_string(line) + ": cannot parse '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::vector<double> uniform_phases(std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    }
    return out;
}

std::vector<double> quadrature_wavefunctions(double x, std::size_t n_max) {
    std::vector<double> psi(n_max + 1);
    psi[0] = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * x * x);
    if (n_max >= 1) {
        psi[1] = x * psi[0];
    }
    for (std::size_t n = 1; n < n_max; ++n) {
        psi[n + 1] = (x * psi[n] - std::sqrt(static_cast<double>(n)) * psi[n - 1]) / std::sqrt(static_cast<double>(n + 1));
    }
    return psi;
}

double quadrature_pdf(const DensityOperator &rho, double theta, double x) {
    require_unit_trace(rho);
    auto psi = quadrature_wavefunctions(x, rho.n_max());
    CVector v(static_cast<Eigen::Index>(psi.size()));
    for (std::size_t n = 0; n < psi.size(); ++n) {
        v[static_cast<Eigen::Index>(n)] = std::polar(psi[n], static_cast<double>(n) * theta);
    }
    return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

CMatrix quadrature_operator(std::size_t n_max, double theta) {
    auto d = static_cast<Eigen::Index>(n_max + 1);
    CMatrix x = CMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        double s = std::sqrt(static_cast<double>(n));
        x(n - 1, n) = s * std::polar(1.0, -theta);
        x(n, n - 1) = s * std::polar(1.0, theta);
    }
    return x;
}

CMatrix quadrature_square_operator(std::size_t n_max, double theta) {
    auto d = static_cast<Eigen::Index>(n_max + 1);
    CMatrix x2 = CMatrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        x2(n, n) = 2.0 * static_cast<double>(n) + 1.0;
        if (n + 2 < d) {
            double s = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
            x2(n, n + 2) = s * std::polar(1.0, -2 * theta);
            x2(n + 2, n) = s * std::polar(1.0, 2 * theta);
        }
    }
    return x2;
}

QuadratureMoments quadrature_moments(const DensityOperator &rho, double theta) {
    require_unit_trace(rho);
    const auto n_max = rho.n_max();
    double mean = (rho.matrix() * quadrature_operator(n_max, theta)).trace().real();
    double second = (rho.matrix() * quadrature_square_operator(n_max, theta)).trace().real();
    return {mean, second - mean * mean};
}

QuadratureSampler::QuadratureSampler(const DensityOperator &rho, std::span<const double> phases)
    : phases_(phases.begin(), phases.end()), grid_(kGridPoints) {
    require_unit_trace(rho);
    if (phases_.empty()) {
        throw DomainError("sampler needs at least one phase");
    }
    const double step = 2 * kGridHalfWidth / static_cast<double>(kGridPoints - 1);
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        grid_[i] = -kGridHalfWidth + step * static_cast<double>(i);
    }
    for (double theta : phases_) {
        std::vector<double> pdf(kGridPoints);
        for (std::size_t i = 0; i < kGridPoints; ++i) {
            pdf[i] = std::max(0.0, quadrature_pdf(rho, theta, grid_[i]));
        }
        std::vector<double> cdf(kGridPoints, 0.0);
        for (std::size_t i = 1; i < kGridPoints; ++i) {
            cdf[i] = cdf[i - 1] + 0.5 * step * (pdf[i] + pdf[i - 1]);
        }
        const double total = cdf.back();
        for (auto &c : cdf) {
            c /= total;
        }
        cdf_.push_back(std::move(cdf));
    }
}

double QuadratureSampler::draw(std::size_t k, double u) const {
    const auto &cdf = cdf_.at(k);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) {
        return grid_.front();
    }
    if (it == cdf.end()) {
        return grid_.back();
    }
    auto hi = static_cast<std::size_t>(it - cdf.begin());
    auto lo = hi - 1;
    double span = cdf[hi] - cdf[lo];
    double frac = span > 0 ? (u - cdf[lo]) / span : 0.5;
    return grid_[lo] + frac * (grid_[hi] - grid_[lo]);
}

std::vector<QuadratureSample> sample_homodyne(const DensityOperator &rho, std::span<const double> phases,
                                              std::size_t count, double eta_hd, std::uint64_t seed) {
    if (count < 1) {
        throw DomainError("sample_homodyne needs at least one sample");
    }
    auto measured = apply_loss(rho, LossChannel(eta_hd, 0));
    QuadratureSampler sampler(measured.normalized(), phases);
    std::mt19937_64 rng(seed);
    std::vector<QuadratureSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t k = i % phases.size();
        out.push_back({phases[k], sampler.draw(k, uniform01(rng))});
    }
    return out;
}

DetectorCalibration::DetectorCalibration(double repetition_rate, double efficiency)
    : rate_(repetition_rate), mu_(efficiency) {
    if (!(repetition_rate > 0) || !std::isfinite(repetition_rate)) {
        throw DomainError("repetition rate must be positive");
    }
    if (!(efficiency > 0 && efficiency <= 1)) {
        throw DomainError("detection efficiency must lie in (0, 1]");
    }
}

double click_rate(double amplitude, const DetectorCalibration &cal) {
    return cal.repetition_rate() * -std::expm1(-cal.efficiency() * amplitude * amplitude);
}

double amplitude_from_counts(double counts, const DetectorCalibration &cal) {
    if (!(counts >= 0)) {
        throw DomainError("count rate must be non-negative");
    }
    if (counts >= cal.repetition_rate()) {
        throw DomainError("count rate at or above the repetition rate: detector saturated");
    }
    return std::sqrt(-std::log1p(-counts / cal.repetition_rate()) / cal.efficiency());
}

void write_samples_csv(std::ostream &out, std::span<const QuadratureSample> samples) {
    out << "theta,x\n";
    char buf[64];
    for (const auto &s : samples) {
        auto r1 = std::to_chars(buf, buf + sizeof(buf), s.theta);
        *r1.ptr++ = ',';
        auto r2 = std::to_chars(r1.ptr, buf + sizeof(buf), s.x);
        *r2.ptr++ = '\n';
        out.write(buf, r2.ptr - buf);
    }
}

void write_samples_csv(const std::filesystem::path &path, std::span<const QuadratureSample> samples) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_samples_csv(out, samples);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::vector<QuadratureSample> read_samples_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("sample CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "theta,x") {
        throw ParseError("sample CSV line 1: expected header 'theta,x'");
    }
    std::vector<QuadratureSample> out;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError("sample CSV line " + std::to_string(n) + ": expected two columns");
        }
        std::string_view view(line);
        out.push_back({parse_double(view.substr(0, comma), n), parse_double(view.substr(comma + 1), n)});
    }
    return out;
}

std::vector<QuadratureSample> read_samples_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return read_samples_csv(in);
}

}  // namespace nlamp
