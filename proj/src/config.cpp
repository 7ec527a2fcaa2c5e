#include "vicinal/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>

namespace vicinal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

double parse_real(std::string_view key, std::string_view value, int line) {
  const std::string text(value);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::TypeMismatch,
                where(line) + "'" + std::string(key) + "' expects a real number, got '" + text + "'");
  }
  return v;
}

long parse_integer(std::string_view key, std::string_view value, int line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::TypeMismatch,
                where(line) + "'" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
  }
  return v;
}

using Setter = std::function<void(RunConfig&, std::string_view value, int line)>;

struct KeySpec {
  std::string section;
  Setter set;
  std::string description;
};

Setter real_field(double RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, int line) { c.*field = parse_real("value", v, line); };
}

Setter sim_real(double SimConfig::*field) {
  return [field](RunConfig& c, std::string_view v, int line) { c.sim.*field = parse_real("value", v, line); };
}

Setter sim_int(int SimConfig::*field) {
  return [field](RunConfig& c, std::string_view v, int line) {
    c.sim.*field = static_cast<int>(parse_integer("value", v, line));
  };
}

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = [] {
    std::map<std::string, KeySpec> t;
    t["name"] = {"problem", nullptr, "built-in problem (fig1, fig2, fig3, fig5, fig6, decay-alpha0, decay-alpha1)"};
    t["alpha"] = {"problem", sim_real(&SimConfig::alpha), "coefficient of the logarithmic energy term"};
    t["n"] = {"problem",
              [](RunConfig& c, std::string_view v, int line) {
                const long n = parse_integer("n", v, line);
                if (n < 5) throw Error(ErrorKind::InvalidArgument, where(line) + "n must be >= 5");
                c.n = static_cast<std::size_t>(n);
              },
              "grid points (slope, periodic height) or interior nodes (monotone height)"};
    t["period"] = {"problem", real_field(&RunConfig::period), "period of the slope grid in h"};
    t["initial"] = {"problem",
                    [](RunConfig& c, std::string_view v, int line) {
                      if (v == "fig2") c.initial = SlopeInitial::Fig2;
                      else if (v == "constant") c.initial = SlopeInitial::Constant;
                      else if (v == "perturbed") c.initial = SlopeInitial::Perturbed;
                      else
                        throw Error(ErrorKind::TypeMismatch, where(line) +
                                                                 "'initial' expects fig2, constant or perturbed");
                    },
                    "slope initial data: fig2, constant or perturbed"};
    t["base"] = {"problem", real_field(&RunConfig::base), "constant part of the slope initial data"};
    t["amplitude"] = {"problem", real_field(&RunConfig::amplitude), "sine amplitude of perturbed slope data"};
    t["wavenumber"] = {"problem",
                       [](RunConfig& c, std::string_view v, int line) {
                         c.wavenumber = static_cast<int>(parse_integer("wavenumber", v, line));
                       },
                       "sine wavenumber of perturbed slope data"};
    t["length"] = {"problem", real_field(&RunConfig::length), "x-length L of height problems"};
    t["height_difference"] = {"problem", real_field(&RunConfig::height_difference),
                              "height difference H of the monotone height problem"};
    t["fig1_coefficient"] = {"problem", real_field(&RunConfig::fig1_coefficient),
                             "linear coefficient of the monotone front"};
    t["height_amplitude"] = {"problem", real_field(&RunConfig::height_amplitude),
                             "amplitude of the periodic sine height"};

    t["t_end"] = {"solver", sim_real(&SimConfig::t_end), "final time"};
    t["dt_init"] = {"solver", sim_real(&SimConfig::dt_init), "first time step"};
    t["dt_min"] = {"solver", sim_real(&SimConfig::dt_min), "smallest time step before giving up"};
    t["dt_max"] = {"solver", sim_real(&SimConfig::dt_max), "largest time step"};
    t["newton_tol"] = {"solver", sim_real(&SimConfig::newton_tol), "Newton residual tolerance (max norm)"};
    t["newton_max_iter"] = {"solver", sim_int(&SimConfig::newton_max_iter), "Newton iteration cap per step"};
    t["eps"] = {"solver", sim_real(&SimConfig::eps_mobility), "mobility regularization"};
    t["delta"] = {"solver", sim_real(&SimConfig::delta_log), "log-term regularization"};
    t["energy_guard"] = {"solver", sim_real(&SimConfig::energy_guard),
                         "accepted slope steps satisfy E_new <= E_old + energy_guard * E_0"};
    t["convergence_tol"] = {"solver", sim_real(&SimConfig::convergence_tol),
                            "stop slope runs once max|u - 1/mass| is below this (0 disables)"};
    t["slope_floor"] = {"solver", sim_real(&SimConfig::slope_floor), "monotone height runs reject slopes below this"};

    t["output_stride"] = {"output", sim_int(&SimConfig::output_stride), "record every k-th accepted step"};
    t["snapshot_stride"] = {"output", sim_int(&SimConfig::snapshot_stride),
                            "store the field with every k-th record (0 disables)"};
    t["fraction_tail"] = {"output", real_field(&RunConfig::fraction_tail), "tail fraction used by the decay fit"};
    return t;
  }();
  return table;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

void apply_entry(RunConfig& cfg, const Entry& e) {
  const auto& table = key_table();
  const auto it = table.find(e.key);
  if (it == table.end()) throw Error(ErrorKind::UnknownKey, where(e.line) + "unknown key '" + e.key + "'");
  if (!e.section.empty() && e.section != it->second.section) {
    throw Error(ErrorKind::UnknownKey, where(e.line) + "key '" + e.key + "' does not belong in [" + e.section +
                                           "] (it lives in [" + it->second.section + "])");
  }
  if (!it->second.set) return;
  try {
    it->second.set(cfg, e.value, e.line);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::TypeMismatch) throw;
    // Re-raise with the key name in place of the generic placeholder.
    std::string msg = err.what();
    const auto pos = msg.find("'value'");
    if (pos != std::string::npos) msg.replace(pos, 7, "'" + e.key + "'");
    throw Error(ErrorKind::TypeMismatch, msg);
  }
}

std::string format_default(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Slope: return "slope";
    case ProblemKind::MonotoneHeight: return "monotone-height";
    case ProblemKind::RegularizedHeight: return "regularized-height";
  }
  return "unknown";
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig5", "fig6", "decay-alpha0",
                                                 "decay-alpha1"};
  return names;
}

RunConfig named_problem(const std::string& name) {
  RunConfig c;
  c.problem = name;
  if (name == "fig1") {
    c.kind = ProblemKind::MonotoneHeight;
    c.sim.alpha = 1.0;
    c.sim.t_end = 0.02;
  } else if (name == "fig2" || name == "fig3") {
    c.kind = ProblemKind::Slope;
    c.initial = SlopeInitial::Fig2;
    c.sim.alpha = name == "fig2" ? 0.0 : 1.0;
    c.sim.t_end = 1.0;
  } else if (name == "fig5" || name == "fig6") {
    c.kind = ProblemKind::RegularizedHeight;
    c.sim.alpha = name == "fig5" ? 0.0 : 1.0;
    c.sim.t_end = 0.05;
  } else if (name == "decay-alpha0" || name == "decay-alpha1") {
    c.kind = ProblemKind::Slope;
    c.initial = SlopeInitial::Perturbed;
    c.sim.alpha = name == "decay-alpha0" ? 0.0 : 1.0;
    c.sim.t_end = name == "decay-alpha0" ? 0.25 : 0.1;
    c.sim.dt_init = 1e-5;
    c.sim.dt_max = 1e-5;
    c.sim.convergence_tol = 0.0;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown problem '" + name + "'");
  }
  return c;
}

RunConfig parse_config(std::string_view text) {
  std::vector<Entry> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ParseError, where(line_no) + "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name != "problem" && name != "solver" && name != "output") {
        throw Error(ErrorKind::UnknownKey, where(line_no) + "unknown section [" + name + "]");
      }
      section = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, where(line_no) + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorKind::ParseError, where(line_no) + "missing key before '='");
    if (value.empty()) throw Error(ErrorKind::ParseError, where(line_no) + "missing value for '" + key + "'");
    if (section.empty()) throw Error(ErrorKind::ParseError, where(line_no) + "key '" + key + "' outside a section");
    for (const auto& e : entries) {
      if (e.key == key) throw Error(ErrorKind::ParseError, where(line_no) + "duplicate key '" + key + "'");
    }
    entries.push_back({section, key, value, line_no});
  }

  // Check every key before looking for the problem name so that typos are
  // reported as such.
  const auto& table = key_table();
  for (const auto& e : entries) {
    const auto it = table.find(e.key);
    if (it == table.end()) throw Error(ErrorKind::UnknownKey, where(e.line) + "unknown key '" + e.key + "'");
  }
  const auto name_it = std::find_if(entries.begin(), entries.end(), [](const Entry& e) { return e.key == "name"; });
  if (name_it == entries.end() || name_it->section != "problem") {
    throw Error(ErrorKind::UnknownKey, "missing [problem] name");
  }

  RunConfig cfg = named_problem(name_it->value);
  for (const auto& e : entries) apply_entry(cfg, e);
  return cfg;
}

void apply_override(RunConfig& cfg, std::string_view key, std::string_view value) {
  std::string section;
  std::string k(trim(key));
  if (const auto dot = k.find('.'); dot != std::string::npos) {
    section = k.substr(0, dot);
    k = k.substr(dot + 1);
  }
  if (k == "name") throw Error(ErrorKind::InvalidArgument, "the problem name cannot be overridden");
  apply_entry(cfg, Entry{section, k, std::string(trim(value)), 0});
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::ParseError, "override '" + std::string(assignment) + "' is not key=value");
  }
  apply_override(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void validate(const RunConfig& cfg) {
  cfg.sim.validate();
  require(cfg.n >= 5, ErrorKind::InvalidArgument, "n must be >= 5");
  require(cfg.period > 0.0 && cfg.length > 0.0, ErrorKind::InvalidArgument, "period and length must be positive");
  require(cfg.fraction_tail > 0.0 && cfg.fraction_tail <= 1.0, ErrorKind::InvalidArgument,
          "fraction_tail must lie in (0, 1]");
  if (cfg.kind == ProblemKind::MonotoneHeight) {
    require(cfg.height_difference > 0.0, ErrorKind::InvalidArgument, "height_difference must be positive");
  }
  if (cfg.kind == ProblemKind::Slope && cfg.initial == SlopeInitial::Perturbed) {
    require(cfg.wavenumber >= 0, ErrorKind::InvalidArgument, "wavenumber must be >= 0");
    require(cfg.base - std::abs(cfg.amplitude) > 0.0, ErrorKind::InvalidArgument,
            "perturbed slope data must stay positive");
  }
}

std::vector<ConfigKey> config_keys() {
  const RunConfig d;
  auto v = [](double x) { return format_default(x); };
  const std::map<std::string, std::string> defaults = {
      {"name", "(required)"},
      {"alpha", v(d.sim.alpha)},
      {"n", std::to_string(d.n)},
      {"period", v(d.period)},
      {"initial", "fig2"},
      {"base", v(d.base)},
      {"amplitude", v(d.amplitude)},
      {"wavenumber", std::to_string(d.wavenumber)},
      {"length", v(d.length)},
      {"height_difference", v(d.height_difference)},
      {"fig1_coefficient", v(d.fig1_coefficient)},
      {"height_amplitude", v(d.height_amplitude)},
      {"t_end", v(d.sim.t_end)},
      {"dt_init", v(d.sim.dt_init)},
      {"dt_min", v(d.sim.dt_min)},
      {"dt_max", v(d.sim.dt_max)},
      {"newton_tol", v(d.sim.newton_tol)},
      {"newton_max_iter", std::to_string(d.sim.newton_max_iter)},
      {"eps", v(d.sim.eps_mobility)},
      {"delta", v(d.sim.delta_log)},
      {"energy_guard", v(d.sim.energy_guard)},
      {"convergence_tol", v(d.sim.convergence_tol)},
      {"slope_floor", v(d.sim.slope_floor)},
      {"output_stride", std::to_string(d.sim.output_stride)},
      {"snapshot_stride", std::to_string(d.sim.snapshot_stride)},
      {"fraction_tail", v(d.fraction_tail)},
  };
  std::vector<ConfigKey> out;
  for (const char* section : {"problem", "solver", "output"}) {
    for (const auto& [key, spec] : key_table()) {
      if (spec.section != section) continue;
      out.push_back({spec.section, key, defaults.at(key), spec.description});
    }
  }
  return out;
}

}  // namespace vicinal
