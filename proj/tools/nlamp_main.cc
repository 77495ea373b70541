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

// Command-line driver: sweeps, config validation, single-state Wigner grids
// and reconstruction from recorded samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "nlamp/amplifier.h"
#include "nlamp/errors.h"
#include "nlamp/metrics.h"
#include "nlamp/run_config.h"
#include "nlamp/sweep.h"
#include "nlamp/tomography.h"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string stage;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--config", f.config, "YAML run configuration");
    cmd->add_option("--seed", f.seed, "master seed (overrides the config)");
    cmd->add_option("--out", f.out, "output location (overrides the config)");
    cmd->add_option("--stage", f.stage, "analytic | circuit | sampled");
}

void report(const std::vector<nlamp::ConfigViolation> &violations, const std::string &source) {
    for (const auto &v : violations) {
        std::cerr << source << ": " << nlamp::format_violation(v) << '\n';
    }
}

// Config from --config (or built-in defaults) with command-line overrides.
// Returns nullopt after printing violations.
std::optional<nlamp::RunConfig> load(const CommonFlags &f) {
    nlamp::ConfigCheck check =
        f.config.empty() ? nlamp::parse_config(nlamp::default_config_text()) : nlamp::validate_config(f.config);
    if (!check.ok()) {
        report(check.violations, f.config.empty() ? "defaults" : f.config);
        return std::nullopt;
    }
    auto cfg = *check.config;
    if (f.seed) {
        cfg.seed = *f.seed;
    }
    if (!f.out.empty()) {
        cfg.output_dir = f.out;
    }
    if (!f.stage.empty()) {
        auto s = nlamp::parse_stage(f.stage);
        if (!s) {
            std::cerr << "nlamp: unknown stage '" << f.stage << "' (expected analytic, circuit or sampled)\n";
            return std::nullopt;
        }
        cfg.stage = *s;
    }
    return cfg;
}

int cmd_run(const CommonFlags &f) {
    auto cfg = load(f);
    if (!cfg) {
        return 2;
    }
    auto result = nlamp::run_sweep(*cfg);
    for (const auto &p : result.points) {
        std::cout << nlamp::alpha_dir_name(p.metrics.alpha);
        if (p.metrics.g_eff) {
            std::cout << "  g_eff=" << *p.metrics.g_eff << "  ein_avg=" << *p.metrics.ein_avg;
        }
        std::cout << "  P=" << p.metrics.success_probability;
        if (cfg->stage == nlamp::PipelineStage::sampled) {
            std::cout << "  tomography_iterations=" << p.tomography_iterations
                      << (p.tomography_converged ? "" : " (not converged)");
        }
        std::cout << '\n';
    }
    std::cout << "summary: " << result.summary_path.string() << '\n';
    return 0;
}

int cmd_check(const std::string &path, bool print_default) {
    if (print_default) {
        std::cout << nlamp::default_config_text();
        return 0;
    }
    if (path.empty()) {
        std::cerr << "nlamp check: --config is required\n";
        return 2;
    }
    auto check = nlamp::validate_config(path);
    if (!check.ok()) {
        report(check.violations, path);
        return 2;
    }
    std::cout << path << ": ok\n";
    return 0;
}

int cmd_wigner(const CommonFlags &f, double alpha, const std::string &rho_path) {
    auto cfg = load(f);
    if (!cfg) {
        return 2;
    }
    nlamp::DensityOperator rho = [&] {
        if (!rho_path.empty()) {
            return nlamp::read_density_json(std::filesystem::path(rho_path)).normalized();
        }
        if (cfg->stage == nlamp::PipelineStage::analytic) {
            return nlamp::ideal_output(alpha, cfg->amplifier.gain.gain(), cfg->amplifier.n_max).state;
        }
        auto amp = cfg->amplifier;
        amp.alpha = alpha;
        return nlamp::simulate(amp).state;
    }();
    auto grid = nlamp::wigner(rho, cfg->wigner);
    if (f.out.empty()) {
        nlamp::write_wigner_csv(std::cout, grid);
    } else {
        nlamp::write_wigner_csv(std::filesystem::path(f.out), grid);
    }
    return 0;
}

int cmd_tomo(const CommonFlags &f, const std::string &samples_path) {
    CommonFlags no_out = f;
    no_out.out.clear();
    auto cfg = load(no_out);
    if (!cfg) {
        return 2;
    }
    auto samples = nlamp::read_samples_csv(std::filesystem::path(samples_path));
    if (samples.empty()) {
        std::cerr << "nlamp tomo: " << samples_path << " has no samples\n";
        return 2;
    }
    // Phases come from the data so any recorded phase set is accepted.
    std::vector<double> phases;
    for (const auto &s : samples) {
        if (std::none_of(phases.begin(), phases.end(), [&](double p) { return std::abs(p - s.theta) <= 1e-12; })) {
            phases.push_back(s.theta);
        }
    }
    std::sort(phases.begin(), phases.end());
    const auto &t = cfg->tomography;
    nlamp::TomographyProblem problem(nlamp::bin_samples(samples, phases, t.bins, -t.range, t.range), t.n_max);
    auto rec = nlamp::maxlik_reconstruct(problem, t.options);
    if (f.out.empty()) {
        nlamp::write_density_json(std::cout, rec.rho);
    } else {
        nlamp::write_density_json(std::filesystem::path(f.out), rec.rho);
    }
    std::cerr << "samples=" << samples.size() << " phases=" << phases.size() << " iterations=" << rec.iterations
              << (rec.converged ? "" : " (not converged)") << (rec.floored ? " (probability floor hit)" : "")
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Heralded noiseless amplifier simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags, wigner_flags, tomo_flags;
    auto *run = app.add_subcommand("run", "run the configured alpha sweep");
    add_common(run, run_flags);

    std::string check_path;
    bool print_default = false;
    auto *check = app.add_subcommand("check", "validate a configuration file");
    check->add_option("--config", check_path, "YAML run configuration");
    check->add_flag("--print-default", print_default, "print the default configuration and exit");

    double alpha = 0.1;
    std::string rho_path;
    auto *wig = app.add_subcommand("wigner", "Wigner grid of one output state (CSV x,p,w)");
    add_common(wig, wigner_flags);
    wig->add_option("--alpha", alpha, "input amplitude");
    wig->add_option("--rho", rho_path, "density matrix JSON to use instead of simulating");

    std::string samples_path;
    auto *tomo = app.add_subcommand("tomo", "reconstruct a density matrix from a sample CSV");
    add_common(tomo, tomo_flags);
    tomo->add_option("--samples", samples_path, "CSV with header theta,x")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(run_flags);
        }
        if (*check) {
            return cmd_check(check_path, print_default);
        }
        if (*wig) {
            return cmd_wigner(wigner_flags, alpha, rho_path);
        }
        if (*tomo) {
            return cmd_tomo(tomo_flags, samples_path);
        }
    } catch (const std::exception &e) {
        std::cerr << "nlamp: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
