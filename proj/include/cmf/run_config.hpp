#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmf/model.hpp"

namespace cmf {

enum class Method { Cmf, Ed, Jw, Asymptotic };
enum class SweepAxis { Field, Temperature };

std::string method_name(Method m);

/// Validated batch-run description. Fields are in reduced units: the sweep
/// axis and fixed field are b/b_c, couplings are chi = v^y/v^x and
/// vz = v^z/v^x with v^x settable (default 1).
struct RunConfig {
  std::vector<Method> methods{Method::Cmf};
  int n = 18;
  FamilyKind family = FamilyKind::PowerLaw;
  double alpha = 0.0;
  int range = 1;
  double chi = 0.5;
  double vz = 0.0;
  double vx = 1.0;
  SweepAxis axis = SweepAxis::Field;
  double min = 0.0;
  double max = 3.0;
  int steps = 100;
  double fixed_b_over_bc = 2.0;   ///< temperature sweeps
  double fixed_temperature = 0.0; ///< field sweeps
  std::vector<int> js;            ///< empty means all separations 1..n/2
  std::string output_path = "-";  ///< "-" writes to stdout
  int ed_max_n = 18;
  int ed_max_n_thermal = 12;

  void validate() const;  ///< throws ConfigError with the offending field
};

/// Key-value entries with dotted section names ("chain.n"); later entries
/// override earlier ones, so command-line flags are appended after the file.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Reads a sectioned key = value file ([chain], [coupling], [sweep], [output],
/// [limits]); '#' and ';' start comments.
ConfigEntries read_config_file(const std::string& path);

/// Builds and validates a RunConfig; unknown keys are rejected.
RunConfig parse_config(const ConfigEntries& entries);

struct RunResult {
  std::string csv;
  int points = 0;
  int rows = 0;
  int failures = 0;  ///< sweep points where a method failed numerically
  std::string summary;
};

/// Executes the sweep over a worker pool; rows are emitted in deterministic
/// sweep order with 12-significant-digit formatting.
RunResult run(const RunConfig& config);

}  // namespace cmf
