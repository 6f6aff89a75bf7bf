#pragma once

#include "fdastap/config.hpp"
#include "fdastap/geometry.hpp"
#include "fdastap/phasecode.hpp"
#include "fdastap/scene.hpp"
#include "fdastap/stap.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdastap::io {

// Fully resolved run description. Defaults reproduce the reference
// system and scenario tables; a config file only overrides what it names.
struct RunConfig {
    SystemConfig system;
    scene::Scene scenario;
    stap::GridSpec grid;
    model::Mode mode = model::Mode::fda;
    scene::CnrMode cnr_mode = scene::CnrMode::per_patch;
    stap::LossRef loss_ref = stap::LossRef::eq64;
    double loading = 0.0;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::size_t max_snapshot_dim = 8192;
    double target_extent_m = 10.0; // boresight extent for the decorrelation check

    bool operator==(const RunConfig&) const = default;
};

RunConfig default_config();

// Parse a config from JSON text; empty text means pure defaults. Throws
// std::runtime_error with the offending field path on schema violations.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical JSON serialization; parse_config(save_config(rc)) == rc.
std::string save_config(const RunConfig& rc);

std::uint64_t config_hash(const RunConfig& rc);

// Hard validation (throws) plus soft findings such as an infeasible phase
// code or a violated decorrelation bound, which are reported as warnings.
std::vector<std::string> validate_config(const RunConfig& rc);

// CSV emitters, one value row per line, floats at 9 significant digits.
void write_pattern_csv(const std::string& path, const stap::PatternGrid& grid);
void write_cut_csv(const std::string& path, const stap::PatternCut& cut);
void write_loss_csv(const std::string& path, const std::vector<double>& doppler_hz,
                    const std::vector<double>& loss_db);
void write_phase_code_csv(const std::string& path, const phasecode::PhaseCode& code,
                          const std::vector<double>& centers_hz);

void write_manifest(const std::string& path, const std::string& command, const RunConfig& rc,
                    double wall_time_s, const std::vector<std::string>& outputs);

std::string format_double(double v); // 9 significant digits

} // namespace fdastap::io
