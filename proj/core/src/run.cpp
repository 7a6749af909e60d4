#include "pxflow/run.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "pxflow/checkpoint.hpp"
#include "pxflow/csv.hpp"
#include "pxflow/error.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {

CsvSampleSink::CsvSampleSink(std::ostream& os) : os_(os) { write_csv_header(os_); }

void CsvSampleSink::emit(NormSample s, double flux) {
  s.kinetic_flux = flux;
  write_csv_row(os_, s);
  os_.flush();
}

void CsvSampleSink::on_sample(const NormSample& s) {
  window_.push_back(s);
  if (window_.size() == 2) {
    const auto& a = window_[0];
    const auto& b = window_[1];
    emit(a, (b.l2 * b.l2 - a.l2 * a.l2) / (b.t - a.t));
  } else if (window_.size() == 3) {
    const auto& a = window_[0];
    const auto& c = window_[2];
    emit(window_[1], (c.l2 * c.l2 - a.l2 * a.l2) / (c.t - a.t));
    window_.erase(window_.begin());
  }
}

void CsvSampleSink::finish() {
  if (finished_) return;
  finished_ = true;
  if (window_.size() == 1) {
    emit(window_[0], 0.0);
  } else if (window_.size() >= 2) {
    const auto& a = window_[window_.size() - 2];
    const auto& b = window_.back();
    emit(b, (b.l2 * b.l2 - a.l2 * a.l2) / (b.t - a.t));
  }
  window_.clear();
}

std::pair<double, double> fit_window(const SimConfig& cfg) {
  const double t0 = cfg.diagnostics.fit_t0.value_or(1.0);
  const double t1 = cfg.diagnostics.fit_t1.value_or(std::min(box_window_end(cfg.grid), cfg.t_end));
  return {t0, t1};
}

void validate_config(const SimConfig& cfg) {
  cfg.grid.validate();
  if (cfg.dt < 0.0) throw InvalidArgument("dt must be positive (0 selects the default)");
  if (!(cfg.t_end >= 0.0)) throw InvalidArgument("t_end must be non-negative");
  if (cfg.record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (!(cfg.small_data_scale >= 0.0)) throw InvalidArgument("small_data_scale must be non-negative");
  if (!(cfg.diagnostics.C0 > 0.0)) throw InvalidArgument("diagnostics.C0 must be positive");
  if ((cfg.monitors.amplitude || cfg.monitors.splitting) && !cfg.diagnostics.retain_spectra) {
    throw InvalidArgument(
        "amplitude and splitting monitors need retained spectra; set diagnostics.retain_spectra = true");
  }
  if (cfg.small_data.enabled && !(cfg.small_data.h1_cap > 0.0)) {
    throw InvalidArgument("small_data.h1_cap must be positive");
  }
}

namespace {

double enstrophy(const SpectralVector& u) {
  const double h = h_seminorm(u, 1);
  return h * h;
}

}  // namespace

void finalize_report(DecayReport& rep, const SimConfig& cfg, const ExponentField& p, const SpectralVector& u0) {
  std::vector<NormSample> norms;
  norms.reserve(rep.records.size());
  for (const auto& r : rep.records) norms.push_back(r.norms);
  fill_kinetic_flux(norms);
  for (std::size_t i = 0; i < norms.size(); ++i) rep.records[i].norms.kinetic_flux = norms[i].kinetic_flux;

  for (const auto& r : rep.records) {
    rep.worst_parseval = std::max(rep.worst_parseval, r.checks.parseval_defect);
    rep.worst_korn = std::max(rep.worst_korn, r.checks.korn_defect);
    rep.worst_divergence = std::max(rep.worst_divergence, r.checks.divergence);
    rep.worst_mean = std::max(rep.worst_mean, r.checks.mean_mode);
    rep.worst_plancherel =
        std::min({rep.worst_plancherel, r.checks.plancherel_margin, r.checks.plancherel_ball_margin});
  }

  const auto [t0, t1] = fit_window(cfg);
  rep.fit_t0 = t0;
  rep.fit_t1 = t1;
  std::vector<std::pair<double, double>> l2;
  std::vector<std::pair<double, double>> h1;
  std::vector<double> times;
  for (const auto& s : norms) {
    l2.emplace_back(s.t, s.l2);
    h1.emplace_back(s.t, s.h1_semi);
    times.push_back(s.t);
  }
  const auto oracle = linear_oracle(u0, times);
  std::vector<std::pair<double, double>> ol2;
  std::vector<std::pair<double, double>> oh1;
  for (const auto& o : oracle) {
    ol2.emplace_back(o.t, o.l2);
    oh1.emplace_back(o.t, o.h1);
  }
  auto try_fit = [&](const auto& series, std::optional<DecayFit>& out, const char* name) {
    try {
      out = fit_decay(series, t0, t1);
    } catch (const InvalidArgument& e) {
      if (!rep.fit_error.empty()) rep.fit_error += "; ";
      rep.fit_error += std::string(name) + ": " + e.what();
    }
  };
  if (t0 < t1) {
    try_fit(l2, rep.l2_fit, "l2");
    try_fit(h1, rep.h1_fit, "h1_semi");
    try_fit(ol2, rep.oracle_l2_fit, "oracle l2");
    try_fit(oh1, rep.oracle_h1_fit, "oracle h1_semi");
  } else {
    std::ostringstream os;
    os << "fit window [" << t0 << ", " << t1 << "] is empty";
    rep.fit_error = os.str();
  }

  const GMassCaseInfo info = g_mass_case(p.p_minus());
  rep.energy = energy_audit(rep.records, cfg.diagnostics.tol_energy_factor * rep.dt);
  rep.g_mass = g_mass_audit(rep.records, info);
  const Grid& g = cfg.grid;
  if (cfg.monitors.amplitude) rep.amplitude = amplitude_audit(g, rep.records, info);
  if (cfg.monitors.splitting) {
    rep.splitting = splitting_audit(g, rep.records, cfg.diagnostics.C0, cfg.diagnostics.split_weight);
  }
}

RunResult run(const SimConfig& cfg, const RunOptions& opts) {
  validate_config(cfg);
  ExponentField p = build_exponent_field(cfg.exponent, cfg.grid);
  const VectorField u0 = make_initial_data(cfg);

  Solver solver(cfg, p, u0);
  if (opts.warn) solver.set_warning_handler(opts.warn);

  RunResult res;
  res.initial = solver.state().u;
  DecayReport& rep = res.report;
  rep.dt = solver.dt();

  auto take_sample = [&]() {
    SampleRecord r = record(solver.state().u, solver.state().t, p, cfg.diagnostics);
    r.dissipated = solver.dissipated();
    if (opts.sink) opts.sink->on_sample(r.norms);
    if (opts.on_record) opts.on_record(r);
    rep.records.push_back(std::move(r));
  };

  std::vector<double> pending = opts.checkpoint_times;
  std::sort(pending.begin(), pending.end());
  auto maybe_checkpoint = [&]() {
    const double t = solver.state().t;
    while (!pending.empty() && pending.front() <= t + 1e-12 * std::max(1.0, t)) {
      pending.erase(pending.begin());
      std::ostringstream name;
      name << opts.checkpoint_prefix << "_" << solver.state().step << ".pxck";
      write_velocity_checkpoint(name.str(), solver.velocity(), t);
      res.checkpoints.push_back(name.str());
    }
  };

  try {
    take_sample();
    maybe_checkpoint();
    double e_prev = spectral_energy(solver.state().u);
    double h_prev = enstrophy(solver.state().u);
    const long total = solver.total_steps();
    for (long n = 1; n <= total; ++n) {
      solver.step();
      const double e = spectral_energy(solver.state().u);
      const double h = enstrophy(solver.state().u);
      if (e > e_prev) rep.energy_monotone = false;
      if (h > h_prev && rep.enstrophy_monotone) {
        rep.enstrophy_monotone = false;
        rep.first_enstrophy_increase = n;
      }
      e_prev = e;
      h_prev = h;
      if (n % cfg.record_every == 0 || n == total) take_sample();
      maybe_checkpoint();
    }
  } catch (...) {
    rep.steps = solver.state().step;
    rep.cfl_warnings = solver.cfl_warnings();
    if (opts.sink) opts.sink->finish();
    throw;
  }
  if (opts.sink) opts.sink->finish();

  rep.steps = solver.state().step;
  rep.cfl_warnings = solver.cfl_warnings();
  finalize_report(rep, cfg, p, res.initial);
  res.final_velocity = solver.velocity();
  return res;
}

}  // namespace pxflow
