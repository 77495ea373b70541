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

#ifndef NLAMP_RUN_CONFIG_H
#define NLAMP_RUN_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlamp/amplifier.h"
#include "nlamp/metrics.h"
#include "nlamp/tomography.h"

namespace nlamp {

enum class PipelineStage { analytic, circuit, sampled };

std::string_view stage_name(PipelineStage stage);
std::optional<PipelineStage> parse_stage(std::string_view name);

struct TomographySettings {
    std::size_t n_max = 10;
    std::size_t bins = 100;
    /// Bins cover [-range, range).
    double range = 6.0;
    ReconstructionOptions options{};
};

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    int schema_version = kSchemaVersion;
    /// alpha is unused here; each sweep point sets its own.
    AmplifierConfig amplifier{};
    std::vector<double> alphas{0.1, 0.25, 0.5, 1.0};
    std::vector<double> phases = uniform_phases(12);
    std::size_t samples_per_state = 200000;
    double eta_hd = 0.68;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "nlamp_out";
    PipelineStage stage = PipelineStage::circuit;
    TomographySettings tomography{};
    GridSpec wigner{};
};

struct ConfigViolation {
    /// Dotted key path, e.g. `amplifier.gain`.
    std::string key;
    std::string message;
    /// 1-based line in the source file, 0 when not tied to a line.
    int line = 0;
};

struct ConfigCheck {
    std::optional<RunConfig> config;
    std::vector<ConfigViolation> violations;

    bool ok() const {
        return config.has_value() && violations.empty();
    }
};

/// Parses YAML text. Syntax errors throw ParseError naming the line;
/// semantic problems are collected as violations.
ConfigCheck parse_config(std::string_view text);
/// Reads and parses a file; throws IoError if it cannot be read.
ConfigCheck validate_config(const std::filesystem::path &path);

/// Invariant checks on an already-built config.
std::vector<ConfigViolation> check_invariants(const RunConfig &config);

/// Fully commented default configuration.
std::string default_config_text();

std::string format_violation(const ConfigViolation &v);

}  // namespace nlamp

#endif
