#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pxflow/experiment/config.hpp"
#include "pxflow/fields.hpp"

namespace pxflow::experiment {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,         // I/O and anything unexpected
  kExitConfig = 2,        // configuration, hypotheses, input schema
  kExitBlowUp = 3,        // non-finite state or CFL violation under cfl = error
  kExitAuditFailure = 4,  // invariant-class audit failed
};

struct ConfigSource {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::vector<std::string> overrides;
};

struct RunRequest {
  ConfigSource source;
  std::string out_dir = "pxflow-out";
  bool quiet = false;
};

/// Outcome of one simulation, also used as a sweep row.
struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  json report;  // null when the run did not complete
  std::optional<VectorField> final_velocity;
};

/// Resolves and parses a configuration source; throws ConfigError.
ExperimentConfig load_experiment(const ConfigSource& source);

/// Runs a parsed configuration and writes samples.csv, report.json,
/// config.json, manifest.json and plot.py into out_dir.
RunOutcome execute_run(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

int cmd_run(const RunRequest& req, std::ostream& out, std::ostream& err);

struct SweepRequest {
  RunRequest base;
  std::string axis;  // seed, amplitude, p-profile, N, dt, L
  std::vector<std::string> values;
  int threads = 1;
};

int cmd_sweep(const SweepRequest& req, std::ostream& out, std::ostream& err);

struct AnalyzeRequest {
  std::string csv_path;
  std::optional<double> t0;
  std::optional<double> t1;
  std::vector<std::string> columns{"l2", "h1_semi"};
  int dim = 3;
  std::vector<std::pair<std::string, double>> targets;  // overrides d/4, d/4 + 1/2
  double tolerance = 0.1;
  std::optional<std::string> json_out;
};

int cmd_analyze(const AnalyzeRequest& req, std::ostream& out, std::ostream& err);

struct FitRequest {
  std::string csv_path;
  std::string column = "l2";
  double t0 = 1.0;
  std::optional<double> t1;
};

int cmd_fit(const FitRequest& req, std::ostream& out, std::ostream& err);

struct CheckExponentRequest {
  ConfigSource source;
  int refinements = 0;  // extra grid doublings for the log-Hoelder refinement test
  std::optional<std::string> json_out;
};

int cmd_check_exponent(const CheckExponentRequest& req, std::ostream& out, std::ostream& err);

struct CalibrateRequest {
  RunRequest base;
  double start = 0.1;
  int max_halvings = 8;
};

/// Bisects the small-data threshold: scales the initial data to H^1 = target,
/// halving the target until the enstrophy monitor passes.
int cmd_calibrate(const CalibrateRequest& req, std::ostream& out, std::ostream& err);

}  // namespace pxflow::experiment
