#include "vicinal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "vicinal/energetics.hpp"
#include "vicinal/io.hpp"

namespace vicinal {

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

std::string VerifyReport::text() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.pass ? "PASS " : "FAIL ";
    out += c.name + " margin=" + format_double(c.margin);
    if (!c.detail.empty()) out += " " + c.detail;
    out += '\n';
  }
  return out;
}

VerifyReport verify_records(const std::vector<DiagnosticsRecord>& records, std::optional<double> alpha,
                            const VerifyOptions& options) {
  require(!records.empty(), ErrorKind::MalformedCsv, "trajectory has no records");
  VerifyReport report;
  const DiagnosticsRecord& first = records.front();
  const double e0 = first.E;
  const double mass0 = first.mass;

  {
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const double rise = records[i].E - records[i - 1].E;
      if (rise > worst) {
        worst = rise;
        at = i;
      }
    }
    const double allowed = options.energy_slack * std::abs(e0);
    VerifyCheck c{"energy-monotone", worst <= allowed, allowed - worst, ""};
    if (worst > 0.0) c.detail = "largest rise " + format_double(worst) + " at row " + std::to_string(at + 1);
    report.checks.push_back(c);
  }
  {
    double drift = 0.0;
    for (const auto& r : records) drift = std::max(drift, std::abs(r.mass - mass0) / std::abs(mass0));
    report.checks.push_back(
        {"mass-drift", drift <= options.mass_drift, options.mass_drift - drift, "drift " + format_double(drift)});
  }
  {
    double margin = std::numeric_limits<double>::infinity();
    double at_t = 0.0;
    for (const auto& r : records) {
      const double m = r.u_min - ((1.0 - options.bound_slack) * lower_bound_J(std::max(r.E, 0.0), mass0));
      if (m < margin) {
        margin = m;
        at_t = r.t;
      }
    }
    report.checks.push_back({"positivity-bound", margin >= 0.0, margin, "tightest at t=" + format_double(at_t)});
  }
  if (alpha && *alpha == 1.0) {
    double u_low = std::numeric_limits<double>::infinity();
    for (const auto& r : records) u_low = std::min(u_low, r.u_min);
    const double beta = decay_constant_beta(u_low);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
      // Relative slack covers the rounding of E itself.
      const double bound = e0 * std::exp(-beta * (r.t - first.t)) * (1.0 + 1e-9) + 1e-12 * std::abs(e0);
      margin = std::min(margin, (bound - r.E) / std::abs(e0));
    }
    report.checks.push_back({"energy-decay", margin >= 0.0, margin, "beta " + format_double(beta)});
  }
  return report;
}

VerifyReport verify_trajectory_file(const std::filesystem::path& trajectory_csv, const VerifyOptions& options) {
  const auto records = read_trajectory_csv(trajectory_csv);
  std::optional<double> alpha;
  const auto report_path = trajectory_csv.parent_path() / "report.txt";
  if (std::filesystem::exists(report_path)) {
    const auto meta = read_report(report_path);
    if (const auto it = meta.find("alpha"); it != meta.end()) {
      char* end = nullptr;
      const double a = std::strtod(it->second.c_str(), &end);
      if (end != it->second.c_str()) alpha = a;
    }
  }
  return verify_records(records, alpha, options);
}

}  // namespace vicinal
