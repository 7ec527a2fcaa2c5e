#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vicinal/core.hpp"

namespace vicinal {

struct VerifyOptions {
  /// E_i <= E_{i-1} + energy_slack * E_0
  double energy_slack = 1e-10;
  /// max_i |mass_i - mass_0| / mass_0
  double mass_drift = 1e-6;
  /// u_min >= (1 - bound_slack) J(E, mass_0)
  double bound_slack = 1e-3;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  /// Distance to failure: positive when the check passes.
  double margin = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool ok() const;
  /// One "PASS|FAIL <name> margin=<m> <detail>" line per check.
  std::string text() const;
};

/// Runs the invariant checks over a slope trajectory. The exponential energy
/// decay check needs alpha == 1 and is skipped when alpha is unknown.
VerifyReport verify_records(const std::vector<DiagnosticsRecord>& records, std::optional<double> alpha,
                            const VerifyOptions& options = {});

/// Reads the trajectory CSV and, when present, the report.txt next to it
/// for the alpha metadata. Throws Error(IoError) or Error(MalformedCsv).
VerifyReport verify_trajectory_file(const std::filesystem::path& trajectory_csv, const VerifyOptions& options = {});

}  // namespace vicinal
