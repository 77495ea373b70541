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

#include "nlamp/linear_optics.h"

#include <cmath>
#include <numeric>
#include <string>

#include "nlamp/errors.h"

namespace nlamp {

namespace {

double binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    double c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

double signed_r(const BeamsplitterSpec &spec) {
    return spec.convention() == BeamsplitterConvention::standard ? spec.reflectivity() : -spec.reflectivity();
}

void check_modes(const ModeDims &dims, const BeamsplitterSpec &spec) {
    if (spec.mode_a() >= dims.size() || spec.mode_b() >= dims.size()) {
        throw RangeError("beamsplitter mode index out of range");
    }
    if (dims[spec.mode_a()] != dims[spec.mode_b()]) {
        throw DomainError("beamsplitter modes must share the same cutoff");
    }
}

// Applies U to every column of `m` (rows indexed by the composite basis).
// Returns the norm-squared that left the truncated space, summed over columns.
double transform_columns(CMatrix &m, const ModeDims &dims, const BeamsplitterSpec &spec) {
    const std::size_t a = spec.mode_a();
    const std::size_t b = spec.mode_b();
    const std::size_t d = dims[a];
    const std::size_t max_total = 2 * (d - 1);
    const double r = signed_r(spec);

    std::vector<RMatrix> sectors;
    sectors.reserve(max_total + 1);
    for (std::size_t n = 0; n <= max_total; ++n) {
        sectors.push_back(beamsplitter_sector(r, n));
    }

    auto strides = mode_strides(dims);
    const std::size_t sa = strides[a];
    const std::size_t sb = strides[b];
    const std::size_t total = total_dimension(dims);

    std::vector<std::size_t> bases;
    for (std::size_t i = 0; i < total; ++i) {
        if ((i / sa) % d == 0 && (i / sb) % d == 0) {
            bases.push_back(i);
        }
    }

    double leaked = 0;
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    CVector in_sector(static_cast<Eigen::Index>(max_total + 1));
    CVector out_sector(static_cast<Eigen::Index>(max_total + 1));
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        for (auto base : bases) {
            for (std::size_t n = 0; n <= max_total; ++n) {
                std::size_t lo = n > d - 1 ? n - (d - 1) : 0;
                std::size_t hi = std::min(n, d - 1);
                bool any = false;
                for (std::size_t n1 = 0; n1 <= n; ++n1) {
                    Complex v = 0;
                    if (n1 >= lo && n1 <= hi) {
                        v = m(static_cast<Eigen::Index>(base + n1 * sa + (n - n1) * sb), col);
                        any = any || v != Complex(0);
                    }
                    in_sector[static_cast<Eigen::Index>(n1)] = v;
                }
                if (!any) {
                    continue;
                }
                const RMatrix &u = sectors[n];
                for (std::size_t k = 0; k <= n; ++k) {
                    Complex acc = 0;
                    for (std::size_t n1 = lo; n1 <= hi; ++n1) {
                        acc += u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n1)) *
                               in_sector[static_cast<Eigen::Index>(n1)];
                    }
                    out_sector[static_cast<Eigen::Index>(k)] = acc;
                }
                for (std::size_t k = 0; k <= n; ++k) {
                    Complex v = out_sector[static_cast<Eigen::Index>(k)];
                    if (k <= d - 1 && n - k <= d - 1) {
                        out(static_cast<Eigen::Index>(base + k * sa + (n - k) * sb), col) = v;
                    } else {
                        leaked += std::norm(v);
                    }
                }
            }
        }
    }
    m = std::move(out);
    return leaked;
}

}  // namespace

BeamsplitterSpec::BeamsplitterSpec(double reflectivity, std::size_t mode_a, std::size_t mode_b,
                                   BeamsplitterConvention convention)
    : r_(reflectivity), t_(0), mode_a_(mode_a), mode_b_(mode_b), convention_(convention) {
    if (!(reflectivity >= 0 && reflectivity <= 1)) {
        throw DomainError("beamsplitter reflectivity must lie in [0, 1]");
    }
    if (mode_a == mode_b) {
        throw DomainError("beamsplitter needs two distinct modes");
    }
    t_ = std::sqrt(1.0 - r_ * r_);
}

BeamsplitterSpec BeamsplitterSpec::inverted() const {
    return BeamsplitterSpec(r_, mode_a_, mode_b_,
                            convention_ == BeamsplitterConvention::standard ? BeamsplitterConvention::inverse
                                                                           : BeamsplitterConvention::standard);
}

LossChannel::LossChannel(double efficiency, std::size_t mode) : eta_(efficiency), mode_(mode) {
    if (!(efficiency >= 0 && efficiency <= 1)) {
        throw DomainError("loss efficiency must lie in [0, 1]");
    }
}

RMatrix beamsplitter_sector(double r, std::size_t total) {
    const double t = std::sqrt(std::max(0.0, 1.0 - r * r));
    const auto n = static_cast<Eigen::Index>(total + 1);
    RMatrix u = RMatrix::Zero(n, n);
    for (std::size_t n1 = 0; n1 <= total; ++n1) {
        std::size_t n2 = total - n1;
        for (std::size_t k = 0; k <= total; ++k) {
            // Pick p photons from the first input and k - p from the second
            // into the first output.
            double acc = 0;
            for (std::size_t p = 0; p <= std::min(n1, k); ++p) {
                std::size_t q = k - p;
                if (q > n2) {
                    continue;
                }
                acc += binomial(n1, p) * std::pow(t, static_cast<double>(p)) *
                       std::pow(r, static_cast<double>(n1 - p)) * binomial(n2, q) *
                       std::pow(-r, static_cast<double>(q)) * std::pow(t, static_cast<double>(n2 - q));
            }
            double log_norm = 0.5 * (std::lgamma(static_cast<double>(k) + 1) +
                                     std::lgamma(static_cast<double>(total - k) + 1) -
                                     std::lgamma(static_cast<double>(n1) + 1) - std::lgamma(static_cast<double>(n2) + 1));
            u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n1)) = acc * std::exp(log_norm);
        }
    }
    return u;
}

FockVector apply_beamsplitter(const FockVector &psi, const BeamsplitterSpec &spec, const NumericalPolicy &policy) {
    check_modes(psi.mode_dims(), spec);
    CMatrix col = psi.amplitudes();
    double leaked = transform_columns(col, psi.mode_dims(), spec);
    if (leaked > policy.truncation) {
        throw TruncationError("beamsplitter pushes norm-squared " + std::to_string(leaked) + " past the cutoff");
    }
    return FockVector(col.col(0), psi.mode_dims());
}

DensityOperator apply_beamsplitter(const DensityOperator &rho, const BeamsplitterSpec &spec,
                                   const NumericalPolicy &policy) {
    check_modes(rho.mode_dims(), spec);
    CMatrix m = rho.matrix();
    transform_columns(m, rho.mode_dims(), spec);
    CMatrix m2 = m.adjoint();
    transform_columns(m2, rho.mode_dims(), spec);
    CMatrix out = m2.adjoint();
    double leaked = rho.trace() - out.trace().real();
    if (leaked > policy.truncation) {
        throw TruncationError("beamsplitter pushes population " + std::to_string(leaked) + " past the cutoff");
    }
    return DensityOperator(std::move(out), rho.mode_dims());
}

FockVector apply_phase(const FockVector &psi, std::size_t mode, double theta) {
    const auto &dims = psi.mode_dims();
    if (mode >= dims.size()) {
        throw RangeError("apply_phase: mode index out of range");
    }
    auto strides = mode_strides(dims);
    CVector out = psi.amplitudes();
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        auto n = static_cast<double>((i / strides[mode]) % dims[mode]);
        out[static_cast<Eigen::Index>(i)] *= std::polar(1.0, n * theta);
    }
    return FockVector(std::move(out), dims);
}

DensityOperator apply_phase(const DensityOperator &rho, std::size_t mode, double theta) {
    const auto &dims = rho.mode_dims();
    if (mode >= dims.size()) {
        throw RangeError("apply_phase: mode index out of range");
    }
    auto strides = mode_strides(dims);
    CVector phase(static_cast<Eigen::Index>(rho.dim()));
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        auto n = static_cast<double>((i / strides[mode]) % dims[mode]);
        phase[static_cast<Eigen::Index>(i)] = std::polar(1.0, n * theta);
    }
    CMatrix out = phase.asDiagonal() * rho.matrix() * phase.conjugate().asDiagonal();
    return DensityOperator(std::move(out), dims);
}

DensityOperator apply_loss(const DensityOperator &rho, const LossChannel &channel, const NumericalPolicy &policy) {
    const auto &dims = rho.mode_dims();
    if (channel.mode() >= dims.size()) {
        throw RangeError("apply_loss: mode index out of range");
    }
    if (channel.efficiency() == 1.0) {
        return rho;
    }
    const std::size_t d = dims[channel.mode()];
    auto vacuum = DensityOperator::from_pure(fock_state(0, d - 1));
    auto joint = tensor_product(rho, vacuum, policy);
    const std::size_t ancilla = dims.size();
    // Photons only move from the mode into the empty ancilla, so nothing
    // leaves the truncated space.
    BeamsplitterSpec bs(std::sqrt(1.0 - channel.efficiency()), channel.mode(), ancilla);
    auto mixed = apply_beamsplitter(joint, bs, policy);
    std::vector<std::size_t> keep(dims.size());
    std::iota(keep.begin(), keep.end(), 0);
    return partial_trace(mixed, keep);
}

}  // namespace nlamp
