#include <iostream>

#include <CLI11.hpp>

#include "pxflow/experiment/commands.hpp"
#include "pxflow/experiment/presets.hpp"
#include "pxflow/version.hpp"

namespace {

using namespace pxflow::experiment;

void add_source(CLI::App* app, ConfigSource& src) {
  app->add_option("--config,-c", src.config_path, "JSON configuration file (comments allowed)");
  app->add_option("--preset,-p", src.preset, "built-in preset to start from");
  app->add_option("--set,-s", src.overrides, "override a key, e.g. --set time.dt=0.05")->take_all();
}

void add_run_flags(CLI::App* app, RunRequest& req) {
  add_source(app, req.source);
  app->add_option("--out,-o", req.out_dir, "output directory")->capture_default_str();
  app->add_flag("--quiet,-q", req.quiet, "suppress the summary on stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pxflow: decay experiments for generalized Newtonian fluids with variable power-law index"};
  app.set_version_flag("--version", std::string(pxflow::kVersion));
  app.require_subcommand(1);

  RunRequest run_req;
  auto* run = app.add_subcommand("run", "run one simulation and write samples, report and manifest");
  add_run_flags(run, run_req);

  SweepRequest sweep_req;
  auto* sweep = app.add_subcommand("sweep", "run independent simulations over one parameter axis");
  add_run_flags(sweep, sweep_req.base);
  sweep->add_option("--axis", sweep_req.axis, "seed, amplitude, p-profile, N, dt or L")->required();
  sweep->add_option("--values", sweep_req.values, "values along the axis (JSON scalars or objects)");
  sweep->add_option("--threads,-j", sweep_req.threads, "parallel runs")->capture_default_str();

  AnalyzeRequest analyze_req;
  std::vector<std::string> target_args;
  auto* analyze = app.add_subcommand("analyze", "fit decay exponents in a samples CSV and compare with targets");
  analyze->add_option("csv", analyze_req.csv_path, "samples CSV")->required();
  analyze->add_option("--t0", analyze_req.t0, "window start (default 1)");
  analyze->add_option("--t1", analyze_req.t1, "window end (default last sample)");
  analyze->add_option("--columns", analyze_req.columns, "columns to fit")->capture_default_str();
  analyze->add_option("--dim,-d", analyze_req.dim, "spatial dimension for the default targets")->capture_default_str();
  analyze->add_option("--target", target_args, "column=exponent target override");
  analyze->add_option("--tolerance", analyze_req.tolerance, "allowed |fit - target|")->capture_default_str();
  analyze->add_option("--json", analyze_req.json_out, "write the analysis as JSON");

  FitRequest fit_req;
  auto* fit = app.add_subcommand("fit", "least-squares fit of log v against log(1 + t)");
  fit->add_option("csv", fit_req.csv_path, "samples CSV")->required();
  fit->add_option("--column", fit_req.column, "column to fit")->capture_default_str();
  fit->add_option("--t0", fit_req.t0, "window start")->capture_default_str();
  fit->add_option("--t1", fit_req.t1, "window end (default last sample)");

  CheckExponentRequest check_req;
  auto* check = app.add_subcommand("check-exponent", "report bounds and log-Hoelder constants of the exponent field");
  add_source(check, check_req.source);
  check->add_option("--refine", check_req.refinements, "grid doublings for the refinement test")->capture_default_str();
  check->add_option("--json", check_req.json_out, "write the report as JSON");

  CalibrateRequest cal_req;
  auto* cal = app.add_subcommand("calibrate", "find the small-data threshold by halving the initial H1 norm");
  add_run_flags(cal, cal_req.base);
  cal->add_option("--start", cal_req.start, "first H1 norm probed")->capture_default_str();
  cal->add_option("--halvings", cal_req.max_halvings, "maximum number of halvings")->capture_default_str();

  auto* presets = app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(run_req, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(sweep_req, std::cout, std::cerr);
  if (*analyze) {
    for (const auto& t : target_args) {
      const auto eq = t.find('=');
      try {
        if (eq == std::string::npos) throw std::invalid_argument(t);
        analyze_req.targets.emplace_back(t.substr(0, eq), std::stod(t.substr(eq + 1)));
      } catch (const std::exception&) {
        std::cerr << "config error: --target expects column=value, got '" << t << "'\n";
        return kExitConfig;
      }
    }
    return cmd_analyze(analyze_req, std::cout, std::cerr);
  }
  if (*fit) return cmd_fit(fit_req, std::cout, std::cerr);
  if (*check) return cmd_check_exponent(check_req, std::cout, std::cerr);
  if (*cal) return cmd_calibrate(cal_req, std::cout, std::cerr);
  if (*presets) {
    for (const auto& name : preset_names()) std::cout << name << "  " << preset_summary(name) << "\n";
    return kExitOk;
  }
  return kExitError;
}
