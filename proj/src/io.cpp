#include "vicinal/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace vicinal {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (in.bad()) throw Error(ErrorKind::IoError, "failed reading " + path.string());
  return lines;
}

std::vector<double> parse_row(const std::string& line, std::size_t fields, const fs::path& path, std::size_t row) {
  std::vector<double> out;
  out.reserve(fields);
  const char* p = line.c_str();
  for (;;) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(p, &end);
    if (end == p || (*end != ',' && *end != '\0')) {
      throw Error(ErrorKind::MalformedCsv, path.string() + ":" + std::to_string(row) + ": bad number");
    }
    out.push_back(v);
    if (*end == '\0') break;
    p = end + 1;
  }
  if (out.size() != fields) {
    throw Error(ErrorKind::MalformedCsv, path.string() + ":" + std::to_string(row) + ": expected " +
                                             std::to_string(fields) + " fields, got " + std::to_string(out.size()));
  }
  return out;
}

std::vector<std::vector<double>> read_table(const fs::path& path, const char* header, std::size_t fields) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines.front() != header) {
    throw Error(ErrorKind::MalformedCsv, path.string() + ": expected header '" + header + "'");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      throw Error(ErrorKind::MalformedCsv, path.string() + ":" + std::to_string(i + 1) + ": empty row");
    }
    rows.push_back(parse_row(lines[i], fields, path, i + 1));
  }
  return rows;
}

void write_row(std::ofstream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::vector<DiagnosticsRecord>& records, const fs::path& path) {
  auto out = open_out(path);
  out << kTrajectoryHeader << '\n';
  for (const auto& r : records) write_row(out, {r.t, r.F, r.E, r.mass, r.u_min, r.lower_bound, r.dt});
  finish(out, path);
}

void write_trajectory_csv(const Trajectory& traj, const fs::path& path) { write_trajectory_csv(traj.records, path); }

std::vector<DiagnosticsRecord> read_trajectory_csv(const fs::path& path) {
  std::vector<DiagnosticsRecord> records;
  for (const auto& row : read_table(path, kTrajectoryHeader, 7)) {
    records.push_back({row[0], row[1], row[2], row[3], row[4], row[5], row[6]});
  }
  return records;
}

void write_snapshot_csv(const std::vector<Snapshot>& snapshots, const std::vector<double>& coords,
                        const fs::path& path) {
  auto out = open_out(path);
  out << kSnapshotHeader << '\n';
  for (const auto& s : snapshots) {
    require(s.values.size() == coords.size(), ErrorKind::InvalidArgument, "snapshot size differs from coordinates");
    for (std::size_t i = 0; i < coords.size(); ++i) write_row(out, {s.t, coords[i], s.values[i]});
  }
  finish(out, path);
}

SnapshotTable read_snapshot_csv(const fs::path& path) {
  SnapshotTable table;
  std::vector<double> coords;
  bool first_done = false;
  std::size_t index = 0;
  for (const auto& row : read_table(path, kSnapshotHeader, 3)) {
    if (table.snapshots.empty() || row[0] != table.snapshots.back().t) {
      if (!table.snapshots.empty()) {
        if (!first_done) {
          table.coords = coords;
          first_done = true;
        }
        if (table.snapshots.back().values.size() != table.coords.size()) {
          throw Error(ErrorKind::MalformedCsv, path.string() + ": snapshots have different sizes");
        }
      }
      table.snapshots.push_back({row[0], {}});
      index = 0;
    }
    if (!first_done) {
      coords.push_back(row[1]);
    } else if (index >= table.coords.size() || table.coords[index] != row[1]) {
      throw Error(ErrorKind::MalformedCsv, path.string() + ": snapshot coordinates differ");
    }
    table.snapshots.back().values.push_back(row[2]);
    ++index;
  }
  if (!first_done) table.coords = coords;
  if (!table.snapshots.empty() && table.snapshots.back().values.size() != table.coords.size()) {
    throw Error(ErrorKind::MalformedCsv, path.string() + ": snapshots have different sizes");
  }
  return table;
}

void write_height_csv(const HeightTrajectory& traj, const fs::path& path) {
  auto out = open_out(path);
  out << kHeightHeader << '\n';
  for (const auto& r : traj.records) {
    write_row(out, {r.t, r.G, r.mean_h, r.h_min, r.h_max, r.slope_min, r.slope_max, r.dt});
  }
  finish(out, path);
}

std::vector<HeightRecord> read_height_csv(const fs::path& path) {
  std::vector<HeightRecord> records;
  for (const auto& row : read_table(path, kHeightHeader, 8)) {
    records.push_back({row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7]});
  }
  return records;
}

void write_report(const ReportLines& lines, const fs::path& path) {
  auto out = open_out(path);
  for (const auto& [k, v] : lines) out << k << " = " << v << '\n';
  finish(out, path);
}

std::map<std::string, std::string> read_report(const fs::path& path) {
  std::map<std::string, std::string> out;
  for (const auto& line : read_lines(path)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::IoError, "cannot create directory " + dir.string() + ": " + ec.message());
  }
}

}  // namespace vicinal
