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

#ifndef NLAMP_SWEEP_H
#define NLAMP_SWEEP_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlamp/metrics.h"
#include "nlamp/run_config.h"

namespace nlamp {

/// Seed of the per-alpha random substream: splitmix64(master ^ k) with
/// k = round(alpha * 10^4). Adding or removing an alpha leaves the others
/// untouched.
std::uint64_t substream_seed(std::uint64_t master, double alpha);

/// `alpha_<value>` with four decimals, e.g. alpha_0.2500.
std::string alpha_dir_name(double alpha);

struct SweepPoint {
    MetricsReport metrics;
    /// The state the metrics were computed from (raw reconstructed state in
    /// the sampled stage).
    DensityOperator state;
    std::size_t tomography_iterations = 0;
    bool tomography_converged = true;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::filesystem::path summary_path;
};

/// Runs one alpha through the configured pipeline without touching the file
/// system.
SweepPoint run_point(const RunConfig &config, double alpha);

/// Runs every alpha, writes `alpha_<a>/{metrics.json,wigner.csv,rho.json}`
/// (plus samples.csv in the sampled stage) and then `summary.csv`. The summary
/// is only written once every per-alpha artifact exists.
SweepResult run_sweep(const RunConfig &config);

std::string summary_csv(const std::vector<SweepPoint> &points);

}  // namespace nlamp

#endif
