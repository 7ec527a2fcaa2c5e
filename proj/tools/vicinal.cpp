// Command-line front end: run-slope, run-height, run-bcf, analyze, sweep,
// verify. Every failure prints a single "error[<kind>]: <message>" line.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vicinal/config.hpp"
#include "vicinal/problems.hpp"
#include "vicinal/verify.hpp"

namespace fs = std::filesystem;
using namespace vicinal;

namespace {

bool verbose() {
  const char* v = std::getenv("VICINAL_VERBOSE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

std::mutex log_mutex;

void log(const std::string& msg) {
  if (!verbose()) return;
  std::lock_guard lock(log_mutex);
  std::cerr << "[vicinal] " << msg << '\n';
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load(const fs::path& config, const std::vector<std::string>& overrides) {
  RunConfig cfg = parse_config(read_text(config));
  for (const auto& o : overrides) apply_override(cfg, o);
  validate(cfg);
  return cfg;
}

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string dir_name(const std::vector<std::pair<std::string, std::string>>& point) {
  std::string name;
  for (const auto& [k, v] : point) {
    if (!name.empty()) name += '_';
    name += k + '=' + v;
  }
  std::replace(name.begin(), name.end(), '/', '-');
  return name.empty() ? "base" : name;
}

int run_sweep(const fs::path& config, const fs::path& out, const std::vector<std::string>& sets, unsigned jobs) {
  std::vector<SweepAxis> axes;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "sweep value '" + s + "' is not key=v1,v2,...");
    axes.push_back({s.substr(0, eq), split(s.substr(eq + 1), ',')});
  }
  const RunConfig base = load(config, {});

  // Cross product in lexicographic order of the axes as given.
  std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        auto q = p;
        q.push_back({axis.key, v});
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }

  // Resolve every point up front so that bad overrides fail before any run.
  std::vector<RunConfig> configs;
  for (const auto& p : points) {
    RunConfig cfg = base;
    for (const auto& [k, v] : p) apply_override(cfg, k, v);
    validate(cfg);
    configs.push_back(cfg);
  }
  ensure_directory(out);

  std::vector<std::string> status(points.size());
  std::vector<std::string> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const fs::path dir = out / dir_name(points[i]);
      try {
        log("sweep point " + dir.filename().string());
        const RunOutcome r = execute(natural_command(configs[i]), configs[i], dir);
        status[i] = std::string(to_string(r.status));
        if (r.status == RunStatus::Failed) errors[i] = r.failure;
      } catch (const Error& e) {
        status[i] = "error";
        errors[i] = std::string(to_string(e.kind())) + ": " + e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(points.size(), jobs > 0 ? jobs : hw));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  ReportLines index;
  index.push_back({"points", std::to_string(points.size())});
  bool ok = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    index.push_back({dir_name(points[i]), status[i] + (errors[i].empty() ? "" : " (" + errors[i] + ")")});
    ok = ok && errors[i].empty();
  }
  write_report(index, out / "sweep.txt");
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::cout << dir_name(points[i]) << ": " << status[i] << '\n';
  }
  if (!ok) {
    for (const auto& e : errors) {
      if (!e.empty()) {
        std::cerr << "error[simulation-failed]: sweep point failed: " << e << '\n';
        return 3;
      }
    }
  }
  return 0;
}

int run_verify(const fs::path& out, const fs::path& trajectory) {
  const fs::path path = trajectory.empty() ? out / "trajectory.csv" : trajectory;
  const VerifyReport report = verify_trajectory_file(path);
  std::cout << report.text();
  std::cout << (report.ok() ? "verify: all checks passed\n" : "verify: FAILED\n");
  return report.ok() ? 0 : 1;
}

int run_single(Command command, const fs::path& config, const fs::path& out, const std::vector<std::string>& sets) {
  const RunConfig cfg = load(config, sets);
  log(std::string(to_string(command)) + " " + cfg.problem + " -> " + out.string());
  const RunOutcome r = execute(command, cfg, out);
  for (const auto& [k, v] : r.report) {
    if (k == "status" || k == "final_t" || k == "fitted_rate" || k == "predicted_rate_discrete") {
      std::cout << k << " = " << v << '\n';
    }
  }
  if (r.status == RunStatus::Failed) {
    std::cerr << "error[simulation-failed]: " << r.failure << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vicinal surface step-flow toolkit"};
  app.require_subcommand(1);

  fs::path config, out, trajectory;
  std::vector<std::string> sets;
  unsigned jobs = 0;

  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"run-slope", "integrate the slope equation"},
      {"run-height", "integrate the monotone or regularized height equation"},
      {"run-bcf", "integrate the discrete step train"},
      {"analyze", "run a single-mode problem and fit its energy decay rate"},
      {"sweep", "run every combination of the --set value lists"},
      {"verify", "check a trajectory for the Lyapunov, mass and positivity invariants"},
  };
  for (const auto& [name, about] : commands) {
    CLI::App* sub = app.add_subcommand(name, about);
    if (std::string(name) == "verify") {
      sub->add_option("--out", out, "run directory holding trajectory.csv and report.txt");
      sub->add_option("--trajectory", trajectory, "trajectory CSV to check (overrides --out)");
      sub->add_option("--config", config, "ignored; accepted for a uniform interface");
    } else {
      sub->add_option("--config", config, "config file")->required();
      sub->add_option("--out", out, "output directory")->required();
      sub->add_option("--set", sets, "override key=value (sweep: key=v1,v2,...)")->take_all();
      if (std::string(name) == "sweep") sub->add_option("--jobs", jobs, "concurrent runs (default: cores)");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return 2;
  }

  try {
    for (CLI::App* sub : subs) {
      if (!sub->parsed()) continue;
      const Command command = parse_command(sub->get_name());
      switch (command) {
        case Command::Verify:
          if (out.empty() && trajectory.empty()) {
            throw Error(ErrorKind::InvalidArgument, "verify needs --out or --trajectory");
          }
          return run_verify(out, trajectory);
        case Command::Sweep:
          return run_sweep(config, out, sets, jobs);
        default:
          return run_single(command, config, out, sets);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
