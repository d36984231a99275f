#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "carroll/reference_solver.hpp"

namespace carroll {

inline constexpr const char* kToolName = "carrollfluid";
inline constexpr const char* kToolVersion = "0.1.0";

enum class SolverKind { exact3, characteristics, grid };

std::string solver_name(SolverKind kind);
SolverKind parse_solver(const std::string& name);

// One fully-specified run, shared by certify and simulate.
struct RunConfig {
  double gamma = 2.0;
  std::string preset;                            // preset name, or
  std::map<std::string, double> preset_params;   //   its parameter overrides
  std::string csv_path;                          // tabulated samples instead

  SolverKind solver = SolverKind::grid;
  double t_end = 1.0;
  std::vector<double> snapshot_times;            // t_end is always included
  int nx = 800;
  double cfl = 0.8;
  BoundaryMode boundary = BoundaryMode::farfield_constant;
  std::optional<double> x_min;                   // output window overrides
  std::optional<double> x_max;
  std::string out_dir = ".";
  double tol_region = std::numeric_limits<double>::quiet_NaN();  // NaN: auto
  bool allow_near_blowup = false;
  double bundle_dx = 0.02;                       // characteristic bundle knobs
  double bundle_cfl = 0.9;
  int report_samples = 33;                       // blow-up windows in certify
};

struct CompareOptions {
  std::vector<std::string> manifests;  // two or more; the last is reference
  std::optional<double> window_lo;
  std::optional<double> window_hi;
};

InitialData load_initial_data(const RunConfig& cfg);

// Pure report builders; the cmd_* wrappers print and map to exit codes.
nlohmann::ordered_json certify_report(const RunConfig& cfg);
nlohmann::ordered_json simulate_report(const RunConfig& cfg);
nlohmann::ordered_json compare_report(const CompareOptions& opt);

// Exit codes: 0 clean, 2 when a computed certificate fails; errors throw.
int cmd_certify(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const CompareOptions& opt, std::ostream& out);

}  // namespace carroll
