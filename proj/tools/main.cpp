#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carroll/report.hpp"

namespace {

void parse_params(const std::vector<std::string>& kvs,
                  std::map<std::string, double>& out) {
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw carroll::ConfigError("expected --param key=value, got '" + kv +
                                 "'");
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      out[kv.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw carroll::ConfigError("cannot parse parameter value in '" + kv +
                                 "'");
    }
  }
}

void add_data_options(CLI::App* cmd, carroll::RunConfig& cfg,
                      std::vector<std::string>& params) {
  cmd->add_option("--gamma", cfg.gamma, "adiabatic exponent in (1, 3]")
      ->required();
  cmd->add_option("--preset", cfg.preset, "named initial data family");
  cmd->add_option("--param", params, "preset parameter override key=value")
      ->take_all();
  cmd->add_option("--data", cfg.csv_path,
                  "tabulated initial data CSV with header x,sigma,beta");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "solver and certifier for the 1d isentropic Carrollian fluid system"};
  app.set_version_flag("--version", std::string(carroll::kToolName) + " " +
                                        carroll::kToolVersion);
  app.require_subcommand(1);

  carroll::RunConfig cfg;
  std::vector<std::string> params;
  std::string solver = "grid";
  std::string boundary = "farfield";

  CLI::App* certify = app.add_subcommand(
      "certify", "admissibility, classification and blow-up report");
  add_data_options(certify, cfg, params);
  certify->add_option("--samples", cfg.report_samples,
                      "foot points per family in the blow-up window list");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a solver, write snapshot CSVs and certificates");
  add_data_options(simulate, cfg, params);
  simulate->add_option("--solver", solver, "exact3, chars, or grid");
  simulate->add_option("--t-end", cfg.t_end, "final time")->required();
  simulate->add_option("--snapshots", cfg.snapshot_times,
                       "comma separated record times (t_end is always kept)")
      ->delimiter(',');
  simulate->add_option("--nx", cfg.nx, "output grid resolution");
  simulate->add_option("--cfl", cfg.cfl, "grid solver CFL number");
  simulate->add_option("--boundary", boundary, "farfield or periodic");
  simulate->add_option("--x-min", cfg.x_min, "output window left end");
  simulate->add_option("--x-max", cfg.x_max, "output window right end");
  simulate->add_option("--out", cfg.out_dir, "output directory")->required();
  simulate->add_option("--tol-region", cfg.tol_region,
                       "region certificate tolerance (default: automatic)");
  simulate->add_flag("--allow-near-blowup", cfg.allow_near_blowup,
                     "permit t_end inside the blow-up safety margin");
  simulate->add_option("--bundle-dx", cfg.bundle_dx,
                       "characteristic bundle foot-point spacing");

  carroll::CompareOptions copt;
  CLI::App* compare = app.add_subcommand(
      "compare", "field errors between runs; the last manifest is the "
                 "reference");
  compare->add_option("manifests", copt.manifests, "simulate manifest files")
      ->expected(-2);
  compare->add_option("--window-lo", copt.window_lo,
                      "restrict error norms to x >= this");
  compare->add_option("--window-hi", copt.window_hi,
                      "restrict error norms to x <= this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    parse_params(params, cfg.preset_params);
    if (certify->parsed()) return carroll::cmd_certify(cfg, std::cout);
    if (simulate->parsed()) {
      cfg.solver = carroll::parse_solver(solver);
      if (boundary == "periodic") {
        cfg.boundary = carroll::BoundaryMode::periodic;
      } else if (boundary == "farfield" || boundary == "farfield-constant") {
        cfg.boundary = carroll::BoundaryMode::farfield_constant;
      } else {
        throw carroll::ConfigError("unknown boundary '" + boundary + "'");
      }
      return carroll::cmd_simulate(cfg, std::cout);
    }
    return carroll::cmd_compare(copt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
