#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vicinal/core.hpp"

namespace vicinal {

enum class ProblemKind { Slope, MonotoneHeight, RegularizedHeight };

std::string_view to_string(ProblemKind kind);

/// Slope initial data selected by the `initial` key.
enum class SlopeInitial { Fig2, Constant, Perturbed };

/// A fully resolved run: the named problem's defaults with the config file
/// and any overrides applied on top.
struct RunConfig {
  std::string problem;
  ProblemKind kind = ProblemKind::Slope;
  std::size_t n = 256;

  // Slope problems: periodic grid in h.
  double period = 1.0;
  SlopeInitial initial = SlopeInitial::Fig2;
  double base = 0.27;
  double amplitude = 0.01;
  int wavenumber = 1;

  // Height problems.
  double length = 1.0;
  double height_difference = 2.0;
  double fig1_coefficient = 2.0;
  double height_amplitude = 1.0;

  SimConfig sim;

  // Output and analysis.
  double fraction_tail = 0.25;
};

/// Names of the built-in problems.
const std::vector<std::string>& problem_names();

/// Defaults of a built-in problem. Throws Error(InvalidArgument) on an
/// unknown name.
RunConfig named_problem(const std::string& name);

/// Parses the line-oriented config format:
///
///   # comment
///   [problem]
///   name = fig3
///   alpha = 1
///   [solver]
///   t_end = 0.5
///
/// Keys belong to exactly one of [problem], [solver], [output]. Unknown keys,
/// keys in the wrong section and a missing [problem] name are unknown-key
/// errors; malformed lines are parse errors; values of the wrong type are
/// type-mismatch errors. Messages carry the line number.
RunConfig parse_config(std::string_view text);

/// Applies `key=value`, where key is either `key` or `section.key`.
void apply_override(RunConfig& cfg, std::string_view assignment);
void apply_override(RunConfig& cfg, std::string_view key, std::string_view value);

/// Checks cross-field consistency; throws Error(InvalidArgument).
void validate(const RunConfig& cfg);

struct ConfigKey {
  std::string section;
  std::string key;
  std::string default_value;
  std::string description;
};

/// The documented key table, defaults as for a problem that does not
/// override them.
std::vector<ConfigKey> config_keys();

}  // namespace vicinal
