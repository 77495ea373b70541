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

#include "nlamp/tomography.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "nlamp/errors.h"

namespace nlamp {

namespace {

constexpr double kProbabilityFloor = 1e-300;
constexpr double kPanelWidth = 0.25;
constexpr double kNominalCounts = 1e9;

using Gauss = boost::math::quadrature::gauss<double, 20>;

void accumulate_panel(RMatrix &out, double a, double b, std::size_t n_max) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const auto &nodes = Gauss::abscissa();
    const auto &weights = Gauss::weights();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (double sign : {-1.0, 1.0}) {
            double x = mid + sign * half * nodes[i];
            auto psi = quadrature_wavefunctions(x, n_max);
            Eigen::Map<const Eigen::VectorXd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
            out.noalias() += (half * weights[i]) * (v * v.transpose());
        }
    }
}

// exp(i (m - n) theta)
CMatrix phase_pattern(std::size_t n_max, double theta) {
    auto d = static_cast<Eigen::Index>(n_max + 1);
    CMatrix e(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            e(m, n) = std::polar(1.0, static_cast<double>(m - n) * theta);
        }
    }
    return e;
}

}  // namespace

std::uint64_t QuadratureHistogram::total() const {
    std::uint64_t t = underflow + overflow;
    for (auto c : counts) {
        t += c;
    }
    return t;
}

void QuadratureHistogram::validate() const {
    if (edges.size() < 2) {
        throw DomainError("histogram needs at least two edges");
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) {
            throw DomainError("histogram edges must be strictly increasing");
        }
    }
    if (counts.size() != edges.size() - 1) {
        throw DomainError("histogram counts must have one entry per bin");
    }
}

std::vector<QuadratureHistogram> bin_samples(std::span<const QuadratureSample> samples, std::span<const double> phases,
                                             std::size_t bin_count, double lo, double hi) {
    if (bin_count == 0 || !(hi > lo)) {
        throw DomainError("bin_samples needs bin_count > 0 and hi > lo");
    }
    std::vector<QuadratureHistogram> out(phases.size());
    std::vector<double> edges(bin_count + 1);
    for (std::size_t i = 0; i <= bin_count; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bin_count);
    }
    for (std::size_t k = 0; k < phases.size(); ++k) {
        out[k].phase = phases[k];
        out[k].edges = edges;
        out[k].counts.assign(bin_count, 0);
    }
    const double width = (hi - lo) / static_cast<double>(bin_count);
    for (const auto &s : samples) {
        auto it = std::find_if(phases.begin(), phases.end(), [&](double p) { return std::abs(p - s.theta) <= 1e-12; });
        if (it == phases.end()) {
            throw DomainError("sample phase " + std::to_string(s.theta) + " is not in the phase list");
        }
        auto &h = out[static_cast<std::size_t>(it - phases.begin())];
        if (s.x < lo) {
            ++h.underflow;
        } else if (s.x >= hi) {
            ++h.overflow;
        } else {
            auto b = std::min(static_cast<std::size_t>((s.x - lo) / width), bin_count - 1);
            // Guard against rounding at bin boundaries.
            while (b > 0 && s.x < edges[b]) {
                --b;
            }
            while (b + 1 < bin_count && s.x >= edges[b + 1]) {
                ++b;
            }
            ++h.counts[b];
        }
    }
    return out;
}

RMatrix bin_overlap_integrals(double lo, double hi, std::size_t n_max) {
    if (!(hi > lo)) {
        throw DomainError("bin needs hi > lo");
    }
    // Beyond this the wavefunctions up to n_max are below double precision.
    const double reach = 2.0 * std::sqrt(2.0 * static_cast<double>(n_max) + 1.0) + 16.0;
    const double a = std::max(lo, -reach);
    const double b = std::min(hi, reach);
    auto d = static_cast<Eigen::Index>(n_max + 1);
    RMatrix out = RMatrix::Zero(d, d);
    if (!(b > a)) {
        return out;
    }
    auto panels = static_cast<std::size_t>(std::ceil((b - a) / kPanelWidth));
    panels = std::max<std::size_t>(panels, 1);
    const double w = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        accumulate_panel(out, a + w * static_cast<double>(i), a + w * static_cast<double>(i + 1), n_max);
    }
    return 0.5 * (out + out.transpose());
}

CMatrix bin_povm(double phase, double lo, double hi, std::size_t n_max) {
    return bin_overlap_integrals(lo, hi, n_max).cast<Complex>().cwiseProduct(phase_pattern(n_max, phase));
}

std::vector<CMatrix> histogram_povms(double phase, std::span<const double> edges, std::size_t n_max) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<CMatrix> out;
    out.push_back(bin_povm(phase, -inf, edges.front(), n_max));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        out.push_back(bin_povm(phase, edges[i], edges[i + 1], n_max));
    }
    out.push_back(bin_povm(phase, edges.back(), inf, n_max));
    return out;
}

TomographyProblem::TomographyProblem(std::vector<QuadratureHistogram> histograms, std::size_t n_max)
    : histograms_(std::move(histograms)), n_max_(n_max) {
    for (const auto &h : histograms_) {
        h.validate();
        total_ += h.total();
    }
    if (total_ == 0) {
        throw DomainError("tomography needs a nonzero total count");
    }
    std::vector<double> flat;
    for (const auto &h : histograms_) {
        flat.push_back(static_cast<double>(h.underflow));
        for (auto c : h.counts) {
            flat.push_back(static_cast<double>(c));
        }
        flat.push_back(static_cast<double>(h.overflow));
    }
    for (auto &f : flat) {
        f /= static_cast<double>(total_);
    }
    frequencies_ = std::move(flat);
    build_cache();
}

void TomographyProblem::build_cache() {
    if (histograms_.size() < 2) {
        throw DomainError("tomography needs at least two distinct phases");
    }
    for (std::size_t i = 0; i < histograms_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(histograms_[i].phase - histograms_[j].phase) <= 1e-12) {
                throw DomainError("tomography phases must be distinct");
            }
        }
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::size_t offset = 0;
    for (std::size_t i = 0; i < histograms_.size(); ++i) {
        const auto &h = histograms_[i];
        std::shared_ptr<const std::vector<RMatrix>> integrals;
        for (std::size_t j = 0; j < i; ++j) {
            if (histograms_[j].edges == h.edges) {
                integrals = blocks_[j].integrals;
                break;
            }
        }
        if (!integrals) {
            auto v = std::make_shared<std::vector<RMatrix>>();
            v->push_back(bin_overlap_integrals(-inf, h.edges.front(), n_max_));
            for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) {
                v->push_back(bin_overlap_integrals(h.edges[b], h.edges[b + 1], n_max_));
            }
            v->push_back(bin_overlap_integrals(h.edges.back(), inf, n_max_));
            integrals = std::move(v);
        }
        blocks_.push_back({h.phase, integrals, offset});
        offset += integrals->size();
    }
}

std::vector<double> TomographyProblem::probabilities(const DensityOperator &rho) const {
    if (rho.num_modes() != 1 || rho.n_max() != n_max_) {
        throw DomainError("state cutoff does not match the tomography problem");
    }
    std::vector<double> p(blocks_.back().offset + blocks_.back().integrals->size());
    for (const auto &block : blocks_) {
        // Re[rho(n,m) e^{i(m-n) theta}]; the integrals are real symmetric.
        RMatrix rotated = rho.matrix().cwiseProduct(phase_pattern(n_max_, block.phase).transpose()).real();
        for (std::size_t j = 0; j < block.integrals->size(); ++j) {
            p[block.offset + j] = (*block.integrals)[j].cwiseProduct(rotated).sum();
        }
    }
    return p;
}

double TomographyProblem::log_likelihood(const DensityOperator &rho) const {
    auto p = probabilities(rho);
    double ll = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (frequencies_[j] > 0) {
            ll += frequencies_[j] * std::log(std::max(p[j], kProbabilityFloor));
        }
    }
    return ll;
}

TomographyProblem TomographyProblem::from_exact_probabilities(const DensityOperator &rho, std::span<const double> phases,
                                                              std::span<const double> edges, std::size_t n_max) {
    TomographyProblem problem;
    problem.n_max_ = n_max;
    for (double theta : phases) {
        QuadratureHistogram h;
        h.phase = theta;
        h.edges.assign(edges.begin(), edges.end());
        h.counts.assign(edges.size() - 1, 0);
        h.validate();
        problem.histograms_.push_back(std::move(h));
    }
    problem.build_cache();
    auto target = rho.normalized();
    auto p = problem.probabilities(target);
    const double per_phase = 1.0 / static_cast<double>(phases.size());
    for (const auto &block : problem.blocks_) {
        auto &h = problem.histograms_[static_cast<std::size_t>(&block - problem.blocks_.data())];
        for (std::size_t j = 0; j < block.integrals->size(); ++j) {
            double q = std::max(0.0, p[block.offset + j]);
            auto c = static_cast<std::uint64_t>(std::llround(q * kNominalCounts));
            if (j == 0) {
                h.underflow = c;
            } else if (j + 1 == block.integrals->size()) {
                h.overflow = c;
            } else {
                h.counts[j - 1] = c;
            }
            problem.frequencies_.push_back(q * per_phase);
        }
    }
    problem.total_ = static_cast<std::uint64_t>(kNominalCounts) * phases.size();
    return problem;
}

ReconstructionResult maxlik_reconstruct(const TomographyProblem &problem, const ReconstructionOptions &options) {
    const std::size_t n_max = problem.n_max();
    const auto d = static_cast<Eigen::Index>(n_max + 1);
    const auto &freq = problem.frequencies();

    std::vector<CMatrix> patterns;
    for (const auto &block : problem.blocks()) {
        patterns.push_back(phase_pattern(n_max, block.phase));
    }

    CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
    bool floored = false;
    auto evaluate = [&](const CMatrix &m, std::vector<double> &p) {
        p = problem.probabilities(DensityOperator(m));
        double ll = 0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (freq[j] > 0) {
                if (p[j] < kProbabilityFloor) {
                    p[j] = kProbabilityFloor;
                    floored = true;
                }
                ll += freq[j] * std::log(p[j]);
            }
        }
        return ll;
    };

    std::vector<double> p;
    std::vector<double> trace{evaluate(rho, p)};
    bool converged = false;
    std::size_t it = 0;
    while (it < options.max_iter) {
        ++it;
        CMatrix r = CMatrix::Zero(d, d);
        for (std::size_t b = 0; b < problem.blocks().size(); ++b) {
            const auto &block = problem.blocks()[b];
            RMatrix s = RMatrix::Zero(d, d);
            for (std::size_t j = 0; j < block.integrals->size(); ++j) {
                double f = freq[block.offset + j];
                if (f > 0) {
                    s.noalias() += (f / p[block.offset + j]) * (*block.integrals)[j];
                }
            }
            r += s.cast<Complex>().cwiseProduct(patterns[b]);
        }
        CMatrix next = r * rho * r;
        next = 0.5 * (next + next.adjoint());
        rho = next / next.trace().real();
        double ll = evaluate(rho, p);
        double gain = ll - trace.back();
        trace.push_back(ll);
        if (gain < options.tol) {
            converged = true;
            break;
        }
    }
    return {DensityOperator(rho), std::move(trace), it, converged, floored};
}

void write_density_json(std::ostream &out, const DensityOperator &rho) {
    nlohmann::json j;
    j["n_max"] = rho.n_max();
    auto re = nlohmann::json::array();
    auto im = nlohmann::json::array();
    for (std::size_t m = 0; m < rho.dim(); ++m) {
        auto rr = nlohmann::json::array();
        auto ii = nlohmann::json::array();
        for (std::size_t n = 0; n < rho.dim(); ++n) {
            rr.push_back(rho(m, n).real());
            ii.push_back(rho(m, n).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    out << j.dump(2) << '\n';
}

void write_density_json(const std::filesystem::path &path, const DensityOperator &rho) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_density_json(out, rho);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

DensityOperator read_density_json(std::istream &in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("density JSON: ") + e.what());
    }
    try {
        auto n_max = j.at("n_max").get<std::size_t>();
        const auto &re = j.at("re");
        const auto &im = j.at("im");
        auto d = static_cast<Eigen::Index>(n_max + 1);
        if (re.size() != static_cast<std::size_t>(d) || im.size() != static_cast<std::size_t>(d)) {
            throw ParseError("density JSON: matrix size does not match n_max");
        }
        CMatrix m(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            if (re[a].size() != static_cast<std::size_t>(d) || im[a].size() != static_cast<std::size_t>(d)) {
                throw ParseError("density JSON: row " + std::to_string(a) + " has the wrong length");
            }
            for (Eigen::Index b = 0; b < d; ++b) {
                m(a, b) = Complex(re[a][b].get<double>(), im[a][b].get<double>());
            }
        }
        return DensityOperator(std::move(m));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("density JSON: ") + e.what());
    }
}

DensityOperator read_density_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return read_density_json(in);
}

}  // namespace nlamp
