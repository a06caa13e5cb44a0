#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "strainlimit/config.hpp"
#include "strainlimit/energy.hpp"
#include "strainlimit/studies.hpp"

namespace strainlimit {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitVerifyFailed = 3,
};

/// One simulation: energy.csv, monitor.csv and state_<t>.csv files in config.out_dir.
int cmd_run(const RunConfig& config, std::ostream& log);
/// The study named by config.study; writes report.csv in config.out_dir.
int cmd_sweep(const RunConfig& config, std::ostream& log);
/// Built-in property suite; kExitOk iff every property holds.
int cmd_verify(std::ostream& log);

void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyLedger>& rows);
void write_monitor_csv(const std::filesystem::path& path, const std::vector<MonitorRecord>& rows);
void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& report);
/// Per quadrature point: x[, y], u, v, packed eps, packed T.
void write_snapshot_csv(const std::filesystem::path& path, const GalerkinSystem& system, const State& state);

}  // namespace strainlimit
