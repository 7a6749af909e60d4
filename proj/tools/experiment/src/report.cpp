#include "pxflow/experiment/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "pxflow/run.hpp"
#include "pxflow/solver.hpp"
#include "pxflow/version.hpp"

namespace pxflow::experiment {

json fit_json(const DecayFit& f) {
  return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"t0", f.t0},
          {"t1", f.t1},             {"r2", f.r2},               {"count", f.count}};
}

json fit_json(const std::optional<DecayFit>& f) { return f ? fit_json(*f) : json(nullptr); }

namespace {

json case_json(const GMassCaseInfo& info) {
  json j = {{"case", to_string(info.tag)}, {"out_of_hypothesis", info.out_of_hypothesis}};
  j["alpha"] = info.alpha ? json(*info.alpha) : json(nullptr);
  j["beta"] = info.beta ? json(*info.beta) : json(nullptr);
  return j;
}

}  // namespace

json report_json(const DecayReport& r, const ExperimentConfig& cfg, const ExponentField& p) {
  const int d = cfg.sim.grid.dim;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["pxflow_version"] = kVersion;
  j["config"] = to_json(cfg);
  j["dt"] = r.dt;
  j["steps"] = r.steps;
  j["samples"] = r.records.size();
  j["cfl_warnings"] = r.cfl_warnings;
  j["exponent"] = {{"p_minus", p.p_minus()}, {"p_plus", p.p_plus()}, {"p_infinity", p.p_infinity()}};
  j["fit_window"] = {r.fit_t0, r.fit_t1};
  j["fits"] = {{"l2", fit_json(r.l2_fit)},
               {"h1_semi", fit_json(r.h1_fit)},
               {"oracle_l2", fit_json(r.oracle_l2_fit)},
               {"oracle_h1_semi", fit_json(r.oracle_h1_fit)}};
  j["fit_error"] = r.fit_error.empty() ? json(nullptr) : json(r.fit_error);
  j["targets"] = {{"l2", d / 4.0}, {"h1_semi", d / 4.0 + 0.5}};
  j["energy_audit"] = {{"tolerance", r.energy.tolerance},
                       {"worst_excess", r.energy.worst_excess},
                       {"worst_sample_excess", r.energy.worst_sample_excess},
                       {"enstrophy_ratio", r.energy.enstrophy_ratio},
                       {"passed", r.energy.passed}};
  j["energy_monotone"] = r.energy_monotone;
  j["enstrophy_monotone"] = r.enstrophy_monotone;
  j["first_enstrophy_increase"] = r.first_enstrophy_increase < 0 ? json(nullptr) : json(r.first_enstrophy_increase);
  j["g_mass_audit"] = {{"case", case_json(r.g_mass.info)}, {"lhs", r.g_mass.lhs},
                       {"rhs", r.g_mass.rhs},              {"ratio", r.g_mass.ratio},
                       {"ratio_half", r.g_mass.ratio_half}, {"max_ratio", r.g_mass.max_ratio},
                       {"non_divergent", r.g_mass.non_divergent}};
  if (r.amplitude) {
    const auto& a = *r.amplitude;
    j["amplitude_audit"] = {{"bracket", to_string(a.bracket)},
                            {"t", a.t},
                            {"ratio", a.ratio},
                            {"running_max", a.running_max},
                            {"max_ratio", a.running_max.empty() ? 0.0 : a.running_max.back()},
                            {"growth", a.growth}};
  } else {
    j["amplitude_audit"] = nullptr;
  }
  if (r.splitting) {
    const auto& s = *r.splitting;
    j["splitting_audit"] = {{"C0", s.C0},
                            {"f_kind", to_string(s.kind)},
                            {"t", s.t},
                            {"lhs", s.lhs},
                            {"rhs", s.rhs},
                            {"max_violation", s.max_violation}};
    j["splitting_audit"]["three_term_margin"] = s.three_term_margin ? json(*s.three_term_margin) : json(nullptr);
    j["splitting_audit"]["three_term_ball_margin"] =
        s.three_term_ball_margin ? json(*s.three_term_ball_margin) : json(nullptr);
  } else {
    j["splitting_audit"] = nullptr;
  }
  j["hard_checks"] = {{"worst_parseval_defect", r.worst_parseval},
                      {"worst_korn_defect", r.worst_korn},
                      {"worst_divergence", r.worst_divergence},
                      {"worst_mean_mode", r.worst_mean},
                      {"worst_plancherel_margin", r.worst_plancherel},
                      {"failures", r.hard_failures()}};
  return j;
}

json defaults_json() {
  return {{"schema_version", kSchemaVersion},
          {"pxflow_version", kVersion},
          {"cfl_limit", kCflLimit},
          {"default_dt", "0.25 * dx / max(1, max|u0|)"},
          {"luxemburg_tolerance", LuxemburgOptions{}.tolerance},
          {"luxemburg_max_iterations", LuxemburgOptions{}.max_iterations},
          {"log_holder_pair_budget", kDefaultPairBudget},
          {"min_fit_samples", kMinFitSamples},
          {"parseval_tolerance", kParsevalTolerance},
          {"korn_tolerance", kKornTolerance},
          {"divergence_tolerance", kDivergenceTolerance},
          {"plancherel_tolerance", kPlancherelTolerance},
          {"fft", "FFTW3 c2c, FFTW_ESTIMATE"},
          {"transform_convention", "unitary: u_hat = sqrt(V)/N * sum u exp(-i xi.x)"}};
}

json manifest_json(const Manifest& m) {
  return {{"config", m.config},     {"started", m.started}, {"finished", m.finished}, {"outputs", m.outputs},
          {"defaults", defaults_json()}, {"seed", m.config.value("seed", 0)}, {"replay", m.replay},
          {"exit_code", m.exit_code}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string plot_script(const std::string& csv_name, int dim) {
  std::ostringstream os;
  os << R"(#!/usr/bin/env python3
# Plots the pxflow sample CSV next to this script.
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV = os.path.join(HERE, ")"
     << csv_name << R"(")
DIM = )" << dim
     << R"(


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) for r in rows] for k in rows[0]} if rows else {}


def main():
    data = load(CSV)
    if not data:
        sys.exit("no samples in " + CSV)
    t1 = [1.0 + t for t in data["t"]]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name, rate in (("l2", DIM / 4.0), ("h1_semi", DIM / 4.0 + 0.5)):
        ys = data[name]
        pts = [(x, y) for x, y in zip(t1, ys) if y > 0]
        if not pts:
            continue
        ax.loglog([p[0] for p in pts], [p[1] for p in pts], label=name)
        x0, y0 = pts[0]
        ax.loglog([p[0] for p in pts], [y0 * (p[0] / x0) ** (-rate) for p in pts], "--",
                  label="(1+t)^-%.2f" % rate)
    ax.set_xlabel("1 + t")
    ax.set_ylabel("norm")
    ax.legend()
    fig.tight_layout()
    out = os.path.join(HERE, "decay.png")
    fig.savefig(out, dpi=120)
    print(out)


if __name__ == "__main__":
    main()
)";
  return os.str();
}

}  // namespace pxflow::experiment
