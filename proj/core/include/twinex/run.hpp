#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twinex/exciton_model.hpp"
#include "twinex/light_sources.hpp"
#include "twinex/oracle.hpp"
#include "twinex/spectra.hpp"

namespace twinex {

enum class Task { Absorption, Density, Sweep2d, Action, Populations, Distribution, Verify };

const char* to_string(Task t);
Task task_from_string(const std::string& s);

struct VerifyOptions {
  double tolerance_second = 1e-3;
  double tolerance_fourth = 1e-2;
  int n_steps = 256;
  /// fs; 0 selects the oracle default.
  double t_max = 0.0;
  std::vector<LightKind> kinds{LightKind::Twin, LightKind::Stochastic, LightKind::CwPair};
};

struct RunConfig {
  std::string config_path;
  std::string model_path;  // resolved against the config file's directory
  Task task = Task::Absorption;
  LightSpec light;
  Axis absorption_grid = Axis::uniform("w", 9000.0, 14000.0, 5.0);
  std::optional<Axis> wp_grid;
  std::optional<Axis> w2_grid;
  EmissionConfig emission;
  PopulationTarget population_target = PopulationTarget::FTotal;
  Manifold distribution_manifold = Manifold::F;
  VerifyOptions verify;
  std::string output_dir = ".";
  unsigned threads = 0;

  /// SHA-256 over a canonical rendering of every field that can change an
  /// output byte (the model file enters through its parsed content). The
  /// output directory and thread count are excluded.
  std::string hash;
};

/// Parses and validates a run configuration. Throws ConfigError with
/// "file:line: field ..." diagnostics.
RunConfig load_run_config(const std::string& path);

struct VerificationRow {
  std::string expression;
  LightKind kind = LightKind::Twin;
  double closed_norm = 0.0;
  double oracle_norm = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  /// "pass", "fail" or "nonconvergence".
  std::string status;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  bool passed() const;
};

/// Closed forms against the time-domain oracle for every supported
/// (expression, light kind) pair, using `light` for the field parameters.
VerificationReport verify(const ExcitonModel& model, const LightSpec& light, const VerifyOptions& opts,
                          unsigned threads = 0);

void write_report(std::ostream& out, const VerificationReport& report);

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitComputation = 3, kExitVerification = 4 };

/// Executes the configured task, writing artifacts and a `manifest` file
/// into cfg.output_dir. On failure the files written so far are removed, a
/// diagnostic goes to `err`, and the matching exit code is returned.
int run(const RunConfig& cfg, std::ostream& err);

/// Loads `config_path`, applies the optional overrides and runs.
int run_from_file(const std::string& config_path, const std::optional<std::string>& output_dir,
                  std::optional<unsigned> threads, std::ostream& err);

std::string sha256_hex(const std::string& data);

const char* version();

}  // namespace twinex
