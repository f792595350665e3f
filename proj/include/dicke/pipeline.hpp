#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "dicke/model.hpp"

namespace dicke {

// Sizes of the synthetic calibration run; chosen so reference values resolve
// well inside their quoted tolerances in well under a minute.
inline constexpr int kCalibrationPoissonPoints = 4000;
inline constexpr int kCalibrationGinibreSize = 512;
inline constexpr int kCalibrationTrials = 20;

// Everything one pipeline invocation depends on.  Artifact names are keyed
// by params_hash(model, sector), so runs with different physics never
// collide in the same output directory.
struct RunConfig {
    ModelParams model;
    Sector sector = Sector::Positive;
    double delta = 1e-3;
    int window_size = 300;
    int window_step = -1;  // -1: window_size/10; 0: a single window
    std::uint64_t seed = 42;
    std::filesystem::path output_dir = ".";
    bool use_cache = true;

    int effective_step() const { return window_step < 0 ? window_size / 10 : window_step; }

    void validate() const;
    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Parse a JSON config file; unknown keys are rejected to catch typos.
RunConfig load_config(const std::filesystem::path& path);

// Artifact locations inside config.output_dir.
std::filesystem::path liouvillian_path(const RunConfig& config);
std::filesystem::path spectrum_path(const RunConfig& config);
std::filesystem::path eigenvalue_csv_path(const RunConfig& config);
std::filesystem::path convergence_csv_path(const RunConfig& config);
std::filesystem::path convergence_summary_path(const RunConfig& config);
std::filesystem::path window_csv_path(const RunConfig& config);
std::filesystem::path calibration_report_path(const RunConfig& config);

// Pipeline stages: build -> diag -> converge -> scan, plus the synthetic
// calibration run.  Each stage is idempotent for a fixed config and seed;
// concurrent invocations on one output_dir serialize on an advisory lock.
void cmd_build(const RunConfig& config);
void cmd_diag(const RunConfig& config);
void cmd_converge(const RunConfig& config);
void cmd_scan(const RunConfig& config);
void cmd_calibrate(const RunConfig& config);

}  // namespace dicke
