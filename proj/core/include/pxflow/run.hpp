#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pxflow/diagnostics.hpp"
#include "pxflow/sim_config.hpp"
#include "pxflow/solver.hpp"

namespace pxflow {

/// Receives samples in time order. kinetic_flux needs the next sample, so a
/// sink sees each row one sample late; finish() releases the last one.
class SampleSink {
 public:
  virtual ~SampleSink() = default;
  virtual void on_sample(const NormSample& s) = 0;
  virtual void finish() {}
};

/// Streams rows to a CSV stream, flushing after each row.
class CsvSampleSink : public SampleSink {
 public:
  explicit CsvSampleSink(std::ostream& os);
  void on_sample(const NormSample& s) override;
  void finish() override;

 private:
  void emit(NormSample s, double flux);

  std::ostream& os_;
  std::vector<NormSample> window_;  // at most the last three samples
  bool finished_ = false;
};

struct RunOptions {
  SampleSink* sink = nullptr;
  Solver::WarningHandler warn;
  /// Velocity checkpoints are written at the first step reaching each time.
  std::vector<double> checkpoint_times;
  std::string checkpoint_prefix = "checkpoint";
  std::function<void(const SampleRecord&)> on_record;
};

struct RunResult {
  DecayReport report;
  SpectralVector initial;  // u0 coefficients
  VectorField final_velocity;
  std::vector<std::string> checkpoints;
};

/// Fit window used by run(): [fit_t0 or 1, fit_t1 or min(t_box, t_end)].
std::pair<double, double> fit_window(const SimConfig& cfg);

/// Throws InvalidArgument on inconsistent configuration (including monitors
/// that need spectra without retention).
void validate_config(const SimConfig& cfg);

/// Steps to t_end recording every record_every steps. Step errors propagate
/// after the sink has been finished.
RunResult run(const SimConfig& cfg, const RunOptions& opts = {});

/// Builds the report (fits, audits, hard-check summary) from recorded samples.
void finalize_report(DecayReport& report, const SimConfig& cfg, const ExponentField& p,
                     const SpectralVector& u0);

}  // namespace pxflow
