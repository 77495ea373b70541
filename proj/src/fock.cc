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

#include "nlamp/fock.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nlamp/errors.h"

namespace nlamp {

namespace {

void require_dims(Eigen::Index size, const ModeDims &dims) {
    if (dims.empty()) {
        throw DomainError("state needs at least one mode");
    }
    for (auto d : dims) {
        if (d == 0) {
            throw DomainError("mode dimension must be positive");
        }
    }
    if (static_cast<std::size_t>(size) != total_dimension(dims)) {
        throw DomainError("amplitude count does not match the product of mode dimensions");
    }
}

std::size_t checked_product(std::size_t a, std::size_t b, const NumericalPolicy &policy) {
    if (a != 0 && b > policy.dimension_cap / a) {
        throw CapacityError("composite dimension exceeds the cap of " + std::to_string(policy.dimension_cap));
    }
    if (a * b > policy.dimension_cap) {
        throw CapacityError("composite dimension exceeds the cap of " + std::to_string(policy.dimension_cap));
    }
    return a * b;
}

ModeDims concat(const ModeDims &a, const ModeDims &b) {
    ModeDims out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Positive square root of a Hermitian operator. Eigenvalues at rounding
// level (or slightly negative, within policy.positivity) are set to zero so
// that their square roots do not leak into downstream traces.
CMatrix hermitian_sqrt(const CMatrix &m, const NumericalPolicy &policy) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < policy.positivity) {
        throw DomainError("operator is not positive semidefinite");
    }
    double floor = 1e-13 * std::max(ev.maxCoeff(), 0.0);
    for (auto &e : ev) {
        e = e > floor ? std::sqrt(e) : 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

DensityOperator checked_normalized(const DensityOperator &rho, const NumericalPolicy &policy) {
    auto report = rho.check(policy);
    if (!report.hermitian || !report.positive || report.trace <= 0) {
        throw DomainError("input is not a positive Hermitian operator");
    }
    return rho.normalized();
}

}  // namespace

std::size_t total_dimension(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> mode_strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * dims[k];
    }
    return strides;
}

FockVector::FockVector(CVector amplitudes) : FockVector(amplitudes, ModeDims{static_cast<std::size_t>(amplitudes.size())}) {
}

FockVector::FockVector(CVector amplitudes, ModeDims dims) : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    require_dims(amplitudes_.size(), dims_);
}

std::size_t FockVector::n_max() const {
    if (dims_.size() != 1) {
        throw DomainError("n_max is defined for single-mode vectors only");
    }
    return dims_[0] - 1;
}

FockVector FockVector::normalized() const {
    double n = amplitudes_.norm();
    if (n == 0) {
        throw DomainError("cannot normalize the zero vector");
    }
    return FockVector(amplitudes_ / n, dims_);
}

DensityOperator::DensityOperator(CMatrix matrix)
    : DensityOperator(matrix, ModeDims{static_cast<std::size_t>(matrix.rows())}) {
}

DensityOperator::DensityOperator(CMatrix matrix, ModeDims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw DomainError("density operator must be square");
    }
    require_dims(matrix_.rows(), dims_);
}

DensityOperator DensityOperator::from_pure(const FockVector &psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint(), psi.mode_dims());
}

std::size_t DensityOperator::n_max() const {
    if (dims_.size() != 1) {
        throw DomainError("n_max is defined for single-mode operators only");
    }
    return dims_[0] - 1;
}

double DensityOperator::trace() const {
    return matrix_.trace().real();
}

DensityOperator DensityOperator::normalized() const {
    double tr = trace();
    if (!(tr > 0)) {
        throw DomainError("cannot normalize an operator with non-positive trace");
    }
    return DensityOperator(matrix_ / tr, dims_);
}

std::vector<double> DensityOperator::photon_distribution() const {
    std::size_t d = n_max() + 1;
    std::vector<double> p(d);
    for (std::size_t n = 0; n < d; ++n) {
        p[n] = (*this)(n, n).real();
    }
    return p;
}

double DensityOperator::mean_photon_number() const {
    auto p = photon_distribution();
    double m = 0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        m += static_cast<double>(n) * p[n];
    }
    return m;
}

PhysicalityReport DensityOperator::check(const NumericalPolicy &policy, bool unit_trace) const {
    PhysicalityReport r;
    r.hermiticity_error = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    r.hermitian = r.hermiticity_error <= policy.hermiticity;
    CMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.positive = r.min_eigenvalue >= policy.positivity;
    r.trace = trace();
    if (unit_trace) {
        r.trace_ok = std::abs(r.trace - 1.0) <= policy.trace;
    } else {
        r.trace_ok = r.trace > 0 && r.trace <= 1.0 + policy.trace;
    }
    return r;
}

FockVector coherent_state(Complex alpha, std::size_t n_max, double truncation_tol) {
    if (n_max < 1) {
        throw DomainError("coherent_state needs n_max >= 1");
    }
    CVector c(static_cast<Eigen::Index>(n_max + 1));
    Complex term = std::exp(-0.5 * std::norm(alpha));
    c[0] = term;
    for (std::size_t n = 1; n <= n_max; ++n) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        c[static_cast<Eigen::Index>(n)] = term;
    }
    double deficit = 1.0 - c.squaredNorm();
    if (deficit > truncation_tol) {
        throw TruncationError("coherent state |alpha|=" + std::to_string(std::abs(alpha)) + " needs more than n_max=" +
                              std::to_string(n_max) + " (norm deficit " + std::to_string(deficit) + ")");
    }
    return FockVector(std::move(c));
}

FockVector fock_state(std::size_t n, std::size_t n_max) {
    if (n > n_max) {
        throw RangeError("fock_state: n=" + std::to_string(n) + " exceeds n_max=" + std::to_string(n_max));
    }
    CVector c = CVector::Zero(static_cast<Eigen::Index>(n_max + 1));
    c[static_cast<Eigen::Index>(n)] = 1.0;
    return FockVector(std::move(c));
}

FockVector tensor_product(const FockVector &a, const FockVector &b, const NumericalPolicy &policy) {
    checked_product(a.dim(), b.dim(), policy);
    CVector out(static_cast<Eigen::Index>(a.dim() * b.dim()));
    auto db = static_cast<Eigen::Index>(b.dim());
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
        out.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
    }
    return FockVector(std::move(out), concat(a.mode_dims(), b.mode_dims()));
}

DensityOperator tensor_product(const DensityOperator &a, const DensityOperator &b, const NumericalPolicy &policy) {
    std::size_t d = checked_product(a.dim(), b.dim(), policy);
    auto db = static_cast<Eigen::Index>(b.dim());
    CMatrix out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < a.matrix().rows(); ++i) {
        for (Eigen::Index j = 0; j < a.matrix().cols(); ++j) {
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
        }
    }
    return DensityOperator(std::move(out), concat(a.mode_dims(), b.mode_dims()));
}

DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> keep) {
    const auto &dims = rho.mode_dims();
    if (keep.empty()) {
        throw RangeError("partial_trace: keep set is empty");
    }
    std::vector<bool> kept(dims.size(), false);
    for (auto m : keep) {
        if (m >= dims.size()) {
            throw RangeError("partial_trace: mode index " + std::to_string(m) + " out of range");
        }
        if (kept[m]) {
            throw RangeError("partial_trace: duplicate mode index " + std::to_string(m));
        }
        kept[m] = true;
    }
    ModeDims keep_dims, drop_dims;
    std::vector<std::size_t> keep_modes, drop_modes;
    for (std::size_t m = 0; m < dims.size(); ++m) {
        if (kept[m]) {
            keep_modes.push_back(m);
            keep_dims.push_back(dims[m]);
        } else {
            drop_modes.push_back(m);
            drop_dims.push_back(dims[m]);
        }
    }
    auto strides = mode_strides(dims);
    std::size_t dk = total_dimension(keep_dims);
    std::size_t dd = drop_dims.empty() ? 1 : total_dimension(drop_dims);

    // Map (kept index, dropped index) -> composite index.
    auto kept_offsets = std::vector<std::size_t>(dk, 0);
    auto drop_offsets = std::vector<std::size_t>(dd, 0);
    auto fill = [&](const std::vector<std::size_t> &modes, const ModeDims &sub, std::vector<std::size_t> &offsets) {
        auto sub_strides = mode_strides(sub);
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            std::size_t off = 0;
            for (std::size_t k = 0; k < modes.size(); ++k) {
                std::size_t digit = (i / sub_strides[k]) % sub[k];
                off += digit * strides[modes[k]];
            }
            offsets[i] = off;
        }
    };
    fill(keep_modes, keep_dims, kept_offsets);
    if (!drop_modes.empty()) {
        fill(drop_modes, drop_dims, drop_offsets);
    }

    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    const auto &m = rho.matrix();
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            Complex acc = 0;
            for (std::size_t e = 0; e < dd; ++e) {
                acc += m(static_cast<Eigen::Index>(kept_offsets[i] + drop_offsets[e]),
                         static_cast<Eigen::Index>(kept_offsets[j] + drop_offsets[e]));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityOperator(std::move(out), std::move(keep_dims));
}

FockVector resize_mode(const FockVector &psi, std::size_t mode, std::size_t new_dim, double truncation_tol) {
    const auto &dims = psi.mode_dims();
    if (mode >= dims.size()) {
        throw RangeError("resize_mode: mode index out of range");
    }
    if (new_dim == 0) {
        throw DomainError("resize_mode: dimension must be positive");
    }
    ModeDims out_dims = dims;
    out_dims[mode] = new_dim;
    auto in_strides = mode_strides(dims);
    auto out_strides = mode_strides(out_dims);
    CVector out = CVector::Zero(static_cast<Eigen::Index>(total_dimension(out_dims)));
    double dropped = 0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        std::size_t o = 0;
        bool inside = true;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            std::size_t digit = (i / in_strides[k]) % dims[k];
            if (k == mode && digit >= new_dim) {
                inside = false;
                break;
            }
            o += digit * out_strides[k];
        }
        if (inside) {
            out[static_cast<Eigen::Index>(o)] = psi[i];
        } else {
            dropped += std::norm(psi[i]);
        }
    }
    if (dropped > truncation_tol) {
        throw TruncationError("resize_mode drops norm-squared " + std::to_string(dropped));
    }
    return FockVector(std::move(out), std::move(out_dims));
}

DensityOperator resize_mode(const DensityOperator &rho, std::size_t mode, std::size_t new_dim, double truncation_tol) {
    const auto &dims = rho.mode_dims();
    if (mode >= dims.size()) {
        throw RangeError("resize_mode: mode index out of range");
    }
    if (new_dim == 0) {
        throw DomainError("resize_mode: dimension must be positive");
    }
    ModeDims out_dims = dims;
    out_dims[mode] = new_dim;
    auto in_strides = mode_strides(dims);
    auto out_strides = mode_strides(out_dims);
    std::vector<long> map(rho.dim(), -1);
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        std::size_t o = 0;
        bool inside = true;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            std::size_t digit = (i / in_strides[k]) % dims[k];
            if (k == mode && digit >= new_dim) {
                inside = false;
                break;
            }
            o += digit * out_strides[k];
        }
        map[i] = inside ? static_cast<long>(o) : -1;
    }
    auto d = static_cast<Eigen::Index>(total_dimension(out_dims));
    CMatrix out = CMatrix::Zero(d, d);
    double dropped = 0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        if (map[i] < 0) {
            dropped += rho(i, i).real();
            continue;
        }
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            if (map[j] >= 0) {
                out(map[i], map[j]) = rho(i, j);
            }
        }
    }
    if (dropped > truncation_tol) {
        throw TruncationError("resize_mode drops population " + std::to_string(dropped));
    }
    return DensityOperator(std::move(out), std::move(out_dims));
}

double fidelity(const DensityOperator &rho, const DensityOperator &sigma, const NumericalPolicy &policy) {
    if (rho.mode_dims() != sigma.mode_dims()) {
        throw DomainError("fidelity: dimension mismatch");
    }
    auto a = checked_normalized(rho, policy);
    auto b = checked_normalized(sigma, policy);
    // Trace norm of sqrt(a) sqrt(b); avoids taking a square root of the
    // rounding noise in sqrt(a) b sqrt(a).
    CMatrix sa = hermitian_sqrt(0.5 * (a.matrix() + a.matrix().adjoint()), policy);
    CMatrix sb = hermitian_sqrt(0.5 * (b.matrix() + b.matrix().adjoint()), policy);
    Eigen::JacobiSVD<CMatrix> svd(sa * sb);
    double s = svd.singularValues().sum();
    return std::clamp(s * s, 0.0, 1.0);
}

double trace_distance(const DensityOperator &rho, const DensityOperator &sigma, const NumericalPolicy &policy) {
    if (rho.mode_dims() != sigma.mode_dims()) {
        throw DomainError("trace_distance: dimension mismatch");
    }
    auto a = checked_normalized(rho, policy);
    auto b = checked_normalized(sigma, policy);
    CMatrix diff = a.matrix() - b.matrix();
    diff = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
    return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

}  // namespace nlamp
