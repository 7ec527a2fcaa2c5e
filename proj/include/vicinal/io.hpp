#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vicinal/core.hpp"
#include "vicinal/height_solver.hpp"

namespace vicinal {

inline constexpr const char* kTrajectoryHeader = "t,F,E,mass,u_min,lower_bound,dt";
inline constexpr const char* kSnapshotHeader = "t,coord,value";
inline constexpr const char* kHeightHeader = "t,G,mean_h,h_min,h_max,slope_min,slope_max,dt";

/// Shortest decimal form that round-trips ("%.17g").
std::string format_double(double v);

/// Writes the records with LF line endings and 17 significant digits.
/// Throws Error(IoError) if the file cannot be written.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
void write_trajectory_csv(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);

/// Throws Error(IoError) if unreadable, Error(MalformedCsv) on a bad header,
/// wrong field count or unparsable number.
std::vector<DiagnosticsRecord> read_trajectory_csv(const std::filesystem::path& path);

/// Long format, one row per (snapshot, coordinate).
void write_snapshot_csv(const std::vector<Snapshot>& snapshots, const std::vector<double>& coords,
                        const std::filesystem::path& path);

struct SnapshotTable {
  std::vector<double> coords;
  std::vector<Snapshot> snapshots;
};

/// Regroups rows by t; every snapshot must share the coordinates of the first.
SnapshotTable read_snapshot_csv(const std::filesystem::path& path);

void write_height_csv(const HeightTrajectory& traj, const std::filesystem::path& path);
std::vector<HeightRecord> read_height_csv(const std::filesystem::path& path);

/// `key = value` lines, in the given order.
using ReportLines = std::vector<std::pair<std::string, std::string>>;

void write_report(const ReportLines& lines, const std::filesystem::path& path);
std::map<std::string, std::string> read_report(const std::filesystem::path& path);

/// Creates the directory (and parents). Throws Error(IoError).
void ensure_directory(const std::filesystem::path& dir);

}  // namespace vicinal
