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

#include "nlamp/sweep.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>

#include "nlamp/errors.h"
#include "nlamp/quadrature.h"
#include "nlamp/tomography.h"

namespace nlamp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) {
        return "nan";
    }
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), *v);
    return std::string(buf, r.ptr);
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

struct PointArtifacts {
    SweepPoint point;
    std::vector<QuadratureSample> samples;
};

PointArtifacts compute_point(const RunConfig &config, double alpha) {
    AmplifierConfig amp = config.amplifier;
    amp.alpha = alpha;
    PointArtifacts out{
        .point = {.metrics = {}, .state = DensityOperator(CMatrix::Identity(1, 1))},
        .samples = {},
    };
    switch (config.stage) {
        case PipelineStage::analytic: {
            auto h = ideal_output(alpha, amp.gain.gain(), amp.n_max, amp.accept_both_heralds);
            out.point.metrics = compute_metrics(h.state, alpha, h.success_probability, config.phases);
            out.point.state = std::move(h.state);
            break;
        }
        case PipelineStage::circuit: {
            auto h = simulate(amp);
            out.point.metrics = compute_metrics(h.state, alpha, h.success_probability, config.phases);
            out.point.state = std::move(h.state);
            break;
        }
        case PipelineStage::sampled: {
            auto h = simulate(amp);
            out.samples = sample_homodyne(h.state, config.phases, config.samples_per_state, config.eta_hd,
                                          substream_seed(config.seed, alpha));
            const auto &t = config.tomography;
            auto hist = bin_samples(out.samples, config.phases, t.bins, -t.range, t.range);
            TomographyProblem problem(std::move(hist), t.n_max);
            auto rec = maxlik_reconstruct(problem, t.options);
            out.point.metrics =
                compute_metrics(rec.rho, alpha, h.success_probability, config.phases, config.eta_hd);
            out.point.state = std::move(rec.rho);
            out.point.tomography_iterations = rec.iterations;
            out.point.tomography_converged = rec.converged;
            break;
        }
    }
    return out;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, double alpha) {
    auto key = static_cast<std::uint64_t>(std::llround(alpha * 1e4));
    return splitmix64(master ^ splitmix64(key));
}

std::string alpha_dir_name(double alpha) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "alpha_%.4f", alpha);
    return buf;
}

SweepPoint run_point(const RunConfig &config, double alpha) {
    return compute_point(config, alpha).point;
}

std::string summary_csv(const std::vector<SweepPoint> &points) {
    std::string s = "alpha,g_eff,ein_min,ein_avg,ein_max,p_success,reference_ein\n";
    for (const auto &p : points) {
        const auto &m = p.metrics;
        s += number(m.alpha) + "," + number(m.g_eff) + "," + number(m.ein_min) + "," + number(m.ein_avg) + "," +
             number(m.ein_max) + "," + number(m.success_probability) + "," + number(m.reference_ein) + "\n";
    }
    return s;
}

SweepResult run_sweep(const RunConfig &config) {
    auto violations = check_invariants(config);
    if (!violations.empty()) {
        throw DomainError("invalid run configuration: " + format_violation(violations.front()));
    }
    std::vector<double> alphas = config.alphas;
    std::stable_sort(alphas.begin(), alphas.end());

    std::vector<std::future<PointArtifacts>> jobs;
    for (double a : alphas) {
        jobs.push_back(std::async(std::launch::async, compute_point, std::cref(config), a));
    }
    std::vector<PointArtifacts> results;
    for (auto &j : jobs) {
        results.push_back(j.get());
    }

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + config.output_dir.string() + ": " + ec.message());
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto dir = config.output_dir / alpha_dir_name(alphas[i]);
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw IoError("cannot create " + dir.string() + ": " + ec.message());
        }
        const auto &r = results[i];
        write_text(dir / "metrics.json", metrics_json(r.point.metrics));
        write_wigner_csv(dir / "wigner.csv", wigner(r.point.state, config.wigner));
        write_density_json(dir / "rho.json", r.point.state);
        if (!r.samples.empty()) {
            write_samples_csv(dir / "samples.csv", r.samples);
        }
    }

    SweepResult out;
    for (auto &r : results) {
        out.points.push_back(std::move(r.point));
    }
    out.summary_path = config.output_dir / "summary.csv";
    auto tmp = out.summary_path;
    tmp += ".tmp";
    write_text(tmp, summary_csv(out.points));
    std::filesystem::rename(tmp, out.summary_path, ec);
    if (ec) {
        throw IoError("cannot finalize " + out.summary_path.string() + ": " + ec.message());
    }
    return out;
}

}  // namespace nlamp
