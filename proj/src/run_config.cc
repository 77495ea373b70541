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

#include "nlamp/run_config.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nlamp/errors.h"

namespace nlamp {

namespace {

int line_of(const YAML::Node &n) {
    return n.Mark().line >= 0 ? n.Mark().line + 1 : 0;
}

class Reader {
   public:
    std::vector<ConfigViolation> violations;

    void fail(const std::string &key, const std::string &message, const YAML::Node &at) {
        violations.push_back({key, message, line_of(at)});
    }

    template <typename T>
    bool get(const YAML::Node &parent, const std::string &name, const std::string &path, T &out) {
        auto n = parent[name];
        if (!n) {
            return false;
        }
        try {
            out = n.as<T>();
            return true;
        } catch (const YAML::BadConversion &) {
            fail(path, "has the wrong type (got '" + (n.IsScalar() ? n.Scalar() : std::string("non-scalar")) + "')", n);
            return false;
        }
    }

    void reject_unknown(const YAML::Node &map, const std::set<std::string> &known, const std::string &prefix) {
        for (auto it = map.begin(); it != map.end(); ++it) {
            auto key = it->first.as<std::string>();
            if (!known.contains(key)) {
                fail(prefix + key, "is not a recognised key", it->first);
            }
        }
    }

    YAML::Node section(const YAML::Node &root, const std::string &name) {
        auto n = root[name];
        if (n && !n.IsMap()) {
            fail(name, "must be a section (mapping)", n);
            return YAML::Node();
        }
        return n;
    }
};

void read_amplifier(Reader &rd, const YAML::Node &amp, RunConfig &cfg) {
    if (!amp) {
        return;
    }
    rd.reject_unknown(amp,
                      {"gain", "reflectivity", "detector_mu", "detector", "use_d2_veto", "accept_both_heralds", "n_max"},
                      "amplifier.");
    double g = 0, r = 0;
    bool has_g = rd.get(amp, "gain", "amplifier.gain", g);
    bool has_r = rd.get(amp, "reflectivity", "amplifier.reflectivity", r);
    try {
        if (has_g && has_r) {
            double derived = std::sqrt(1.0 - r * r) / r;
            if (!(r > 0 && r < 1) || std::abs(derived - g) > 1e-12 * std::max(1.0, g)) {
                rd.fail("amplifier.reflectivity",
                        "inconsistent with amplifier.gain: g = sqrt(1 - r^2) / r gives " + std::to_string(derived) +
                            " for r = " + std::to_string(r) + ", but gain = " + std::to_string(g),
                        amp["reflectivity"]);
            } else {
                cfg.amplifier.gain = AmplifierGain::from_gain(g);
            }
        } else if (has_g) {
            cfg.amplifier.gain = AmplifierGain::from_gain(g);
        } else if (has_r) {
            cfg.amplifier.gain = AmplifierGain::from_reflectivity(r);
        }
    } catch (const DomainError &e) {
        rd.fail(has_g ? "amplifier.gain" : "amplifier.reflectivity", e.what(), has_g ? amp["gain"] : amp["reflectivity"]);
    }
    rd.get(amp, "detector_mu", "amplifier.detector_mu", cfg.amplifier.detector_mu);
    std::string detector;
    if (rd.get(amp, "detector", "amplifier.detector", detector)) {
        if (detector == "on_off") {
            cfg.amplifier.detector = DetectorModel::on_off;
        } else if (detector == "number_resolving") {
            cfg.amplifier.detector = DetectorModel::number_resolving;
        } else {
            rd.fail("amplifier.detector", "must be on_off or number_resolving", amp["detector"]);
        }
    }
    rd.get(amp, "use_d2_veto", "amplifier.use_d2_veto", cfg.amplifier.use_d2_veto);
    rd.get(amp, "accept_both_heralds", "amplifier.accept_both_heralds", cfg.amplifier.accept_both_heralds);
    long long n_max = 0;
    if (rd.get(amp, "n_max", "amplifier.n_max", n_max)) {
        if (n_max < 2) {
            rd.fail("amplifier.n_max", "must be at least 2", amp["n_max"]);
        } else {
            cfg.amplifier.n_max = static_cast<std::size_t>(n_max);
        }
    }
}

void read_source(Reader &rd, const YAML::Node &src, RunConfig &cfg) {
    if (!src) {
        return;
    }
    rd.reject_unknown(src, {"weight_vacuum", "weight_two_photon", "mode_overlap"}, "source.");
    rd.get(src, "weight_vacuum", "source.weight_vacuum", cfg.amplifier.source.weight_vacuum);
    rd.get(src, "weight_two_photon", "source.weight_two_photon", cfg.amplifier.source.weight_two_photon);
    rd.get(src, "mode_overlap", "source.mode_overlap", cfg.amplifier.source.mode_overlap);
}

void read_tomography(Reader &rd, const YAML::Node &t, RunConfig &cfg) {
    if (!t) {
        return;
    }
    rd.reject_unknown(t, {"n_max", "bins", "range", "max_iter", "tol"}, "tomography.");
    long long v = 0;
    if (rd.get(t, "n_max", "tomography.n_max", v)) {
        if (v < 1) {
            rd.fail("tomography.n_max", "must be at least 1", t["n_max"]);
        } else {
            cfg.tomography.n_max = static_cast<std::size_t>(v);
        }
    }
    if (rd.get(t, "bins", "tomography.bins", v)) {
        if (v < 1) {
            rd.fail("tomography.bins", "must be at least 1", t["bins"]);
        } else {
            cfg.tomography.bins = static_cast<std::size_t>(v);
        }
    }
    if (rd.get(t, "max_iter", "tomography.max_iter", v)) {
        if (v < 1) {
            rd.fail("tomography.max_iter", "must be at least 1", t["max_iter"]);
        } else {
            cfg.tomography.options.max_iter = static_cast<std::size_t>(v);
        }
    }
    rd.get(t, "range", "tomography.range", cfg.tomography.range);
    rd.get(t, "tol", "tomography.tol", cfg.tomography.options.tol);
}

void read_wigner(Reader &rd, const YAML::Node &w, RunConfig &cfg) {
    if (!w) {
        return;
    }
    rd.reject_unknown(w, {"extent", "points"}, "wigner.");
    double extent = 0;
    if (rd.get(w, "extent", "wigner.extent", extent)) {
        if (!(extent > 0)) {
            rd.fail("wigner.extent", "must be positive", w["extent"]);
        } else {
            cfg.wigner.x_min = cfg.wigner.p_min = -extent;
            cfg.wigner.x_max = cfg.wigner.p_max = extent;
        }
    }
    long long points = 0;
    if (rd.get(w, "points", "wigner.points", points)) {
        if (points < 2) {
            rd.fail("wigner.points", "must be at least 2", w["points"]);
        } else {
            cfg.wigner.x_points = cfg.wigner.p_points = static_cast<std::size_t>(points);
        }
    }
}

}  // namespace

std::string_view stage_name(PipelineStage stage) {
    switch (stage) {
        case PipelineStage::analytic:
            return "analytic";
        case PipelineStage::circuit:
            return "circuit";
        case PipelineStage::sampled:
            return "sampled";
    }
    return "circuit";
}

std::optional<PipelineStage> parse_stage(std::string_view name) {
    if (name == "analytic") {
        return PipelineStage::analytic;
    }
    if (name == "circuit") {
        return PipelineStage::circuit;
    }
    if (name == "sampled" || name == "sampled+tomography") {
        return PipelineStage::sampled;
    }
    return std::nullopt;
}

std::vector<ConfigViolation> check_invariants(const RunConfig &c) {
    std::vector<ConfigViolation> v;
    if (c.schema_version != kSchemaVersion) {
        v.push_back({"schema_version", "unsupported schema version " + std::to_string(c.schema_version)});
    }
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
        if (!(c.alphas[i] >= 0) || !std::isfinite(c.alphas[i])) {
            v.push_back({"alphas[" + std::to_string(i) + "]", "amplitudes must be finite and non-negative"});
        }
    }
    if (c.phases.empty()) {
        v.push_back({"phases", "at least one phase is required"});
    }
    for (std::size_t i = 0; i < c.phases.size(); ++i) {
        if (!(c.phases[i] >= 0 && c.phases[i] < std::numbers::pi)) {
            v.push_back({"phases[" + std::to_string(i) + "]", "phases must lie in [0, pi)"});
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(c.phases[i] - c.phases[j]) <= 1e-12) {
                v.push_back({"phases[" + std::to_string(i) + "]", "duplicates phases[" + std::to_string(j) + "]"});
            }
        }
    }
    if (!(c.eta_hd > 0 && c.eta_hd <= 1)) {
        v.push_back({"eta_hd", "homodyne efficiency must lie in (0, 1]"});
    }
    if (c.stage == PipelineStage::sampled) {
        if (c.samples_per_state == 0) {
            v.push_back({"samples_per_state", "the sampled stage needs at least one sample"});
        }
        if (c.phases.size() < 2) {
            v.push_back({"phases", "tomography needs at least two phases"});
        }
    }
    if (!(c.amplifier.detector_mu >= 0 && c.amplifier.detector_mu <= 1)) {
        v.push_back({"amplifier.detector_mu", "detector efficiency must lie in [0, 1]"});
    }
    try {
        c.amplifier.source.validate();
    } catch (const DomainError &e) {
        v.push_back({"source", e.what()});
    }
    if (!(c.tomography.range > 0)) {
        v.push_back({"tomography.range", "must be positive"});
    }
    if (!(c.tomography.options.tol > 0)) {
        v.push_back({"tomography.tol", "must be positive"});
    }
    if (c.output_dir.empty()) {
        v.push_back({"output_dir", "must not be empty"});
    }
    return v;
}

ConfigCheck parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException &e) {
        throw ParseError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    Reader rd;
    RunConfig cfg;
    if (!root.IsMap()) {
        rd.fail("", "configuration must be a mapping of keys to values", root);
        return {std::nullopt, rd.violations};
    }
    rd.reject_unknown(root,
                      {"schema_version", "alphas", "phases", "samples_per_state", "eta_hd", "seed", "output_dir",
                       "stage", "amplifier", "source", "tomography", "wigner"},
                      "");
    if (!rd.get(root, "schema_version", "schema_version", cfg.schema_version) && !root["schema_version"]) {
        rd.fail("schema_version", "is required", root);
    }
    rd.get(root, "alphas", "alphas", cfg.alphas);
    if (auto ph = root["phases"]) {
        if (ph.IsScalar()) {
            long long count = 0;
            if (rd.get(root, "phases", "phases", count)) {
                if (count < 1) {
                    rd.fail("phases", "phase count must be positive", ph);
                } else {
                    cfg.phases = uniform_phases(static_cast<std::size_t>(count));
                }
            }
        } else {
            rd.get(root, "phases", "phases", cfg.phases);
        }
    }
    long long samples = 0;
    if (rd.get(root, "samples_per_state", "samples_per_state", samples)) {
        if (samples < 0) {
            rd.fail("samples_per_state", "must be non-negative", root["samples_per_state"]);
        } else {
            cfg.samples_per_state = static_cast<std::size_t>(samples);
        }
    }
    rd.get(root, "eta_hd", "eta_hd", cfg.eta_hd);
    rd.get(root, "seed", "seed", cfg.seed);
    std::string out;
    if (rd.get(root, "output_dir", "output_dir", out)) {
        cfg.output_dir = out;
    }
    std::string stage;
    if (rd.get(root, "stage", "stage", stage)) {
        if (auto s = parse_stage(stage)) {
            cfg.stage = *s;
        } else {
            rd.fail("stage", "must be analytic, circuit or sampled", root["stage"]);
        }
    }
    read_amplifier(rd, rd.section(root, "amplifier"), cfg);
    read_source(rd, rd.section(root, "source"), cfg);
    read_tomography(rd, rd.section(root, "tomography"), cfg);
    read_wigner(rd, rd.section(root, "wigner"), cfg);

    auto inv = check_invariants(cfg);
    auto violations = std::move(rd.violations);
    // Type errors already reported for a key make its invariant message noise.
    for (auto &v : inv) {
        bool dup = false;
        for (const auto &r : violations) {
            dup = dup || r.key == v.key;
        }
        if (!dup) {
            if (auto n = root[v.key.substr(0, v.key.find_first_of(".["))]) {
                v.line = line_of(n);
            }
            violations.push_back(std::move(v));
        }
    }
    return {std::move(cfg), std::move(violations)};
}

ConfigCheck validate_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string format_violation(const ConfigViolation &v) {
    std::string s;
    if (v.line > 0) {
        s += "line " + std::to_string(v.line) + ": ";
    }
    s += v.key.empty() ? v.message : "`" + v.key + "` " + v.message;
    return s;
}

std::string default_config_text() {
    return R"(# Heralded noiseless amplifier sweep.
schema_version: 1

# Input amplitudes |alpha| (real, non-negative).
alphas: [0.1, 0.25, 0.5, 1.0]
# Homodyne phases: either a list in [0, pi) or a count of uniform phases.
phases: 12
samples_per_state: 200000
eta_hd: 0.68
seed: 1
output_dir: nlamp_out
# analytic | circuit | sampled
stage: circuit

amplifier:
  # Set gain or reflectivity; if both are given they must satisfy
  # gain = sqrt(1 - reflectivity^2) / reflectivity.
  gain: 2.0
  detector_mu: 1.0
  # on_off | number_resolving
  detector: on_off
  use_d2_veto: false
  accept_both_heralds: false
  n_max: 12

source:
  weight_vacuum: 0.0
  weight_two_photon: 0.0
  mode_overlap: 1.0

tomography:
  n_max: 10
  bins: 100
  range: 6.0
  max_iter: 2000
  tol: 1.0e-10

wigner:
  extent: 6.0
  points: 201
)";
}

}  // namespace nlamp
