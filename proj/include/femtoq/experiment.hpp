#pragma once

// On-disk artifacts for full runs and oracle invocations.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "femtoq/config.hpp"
#include "femtoq/coordinator.hpp"
#include "femtoq/oracle.hpp"

namespace femtoq {

inline constexpr const char* version = "0.1.0";

struct ExperimentResult {
    RunTrace trace;
    std::string config_hash;
};

/// Runs the full density sweep and writes, under `out_dir`:
///   config.json, manifest.json, summary.csv, final_actions.csv,
///   trace_mNN.csv (one per density, when trace_stride > 0) and the
///   plot_*.csv series. The manifest is also written to `log` when given.
ExperimentResult run_experiment(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                std::ostream* log = nullptr);

struct OracleRun {
    OracleResult result;
    std::size_t m = 0;
    std::optional<double> learned_sum;
    std::optional<double> optimality_gap;
};

/// Exhaustive search over the first m_max admitted FBSs. Writes oracle.csv
/// and oracle_actions.csv; when `out_dir` holds a run of the same config
/// the optimality gap (oracle - learned) / oracle is included.
OracleRun run_oracle(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Reads summary.csv and returns sum_capacity for density `m`.
std::optional<double> read_learned_sum(const std::filesystem::path& summary_csv, std::size_t m);

} // namespace femtoq
