#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "vicinal/config.hpp"
#include "vicinal/core.hpp"
#include "vicinal/height_solver.hpp"
#include "vicinal/io.hpp"

namespace vicinal {

enum class Command { RunSlope, RunHeight, RunBcf, Analyze, Sweep, Verify };

std::string_view to_string(Command command);
/// Throws Error(InvalidArgument) on an unknown command name.
Command parse_command(std::string_view name);

SlopeField initial_slope(const RunConfig& cfg);
HeightField initial_height(const RunConfig& cfg);
HeightModel height_model(const RunConfig& cfg);

/// The command a sweep point runs: run-slope for slope problems, run-height
/// for height problems.
Command natural_command(const RunConfig& cfg);

struct RunOutcome {
  RunStatus status = RunStatus::ReachedEnd;
  std::string failure;
  ReportLines report;
};

/// Runs one of run-slope, run-height, run-bcf or analyze and writes
/// trajectory.csv (height runs: height_trajectory.csv), snapshots.csv and
/// report.txt into out_dir. A run that fails part-way still writes what it
/// has and reports RunStatus::Failed.
RunOutcome execute(Command command, const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace vicinal
