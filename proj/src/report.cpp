#include "carroll/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carroll/characteristics.hpp"
#include "carroll/exact_gamma3.hpp"

namespace carroll {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw DataError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

ordered_json data_echo(const InitialData& data, const RunConfig& cfg) {
  ordered_json j;
  if (data.kind() == InitialData::Kind::preset) {
    j["kind"] = "preset";
    j["name"] = data.name();
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : cfg.preset_params) params[k] = v;
    j["params"] = params;
  } else {
    j["kind"] = "tabulated";
    j["path"] = cfg.csv_path;
  }
  j["x_lo"] = data.x_lo();
  j["x_hi"] = data.x_hi();
  const FarField& ff = data.far_field();
  j["far_field"] = {{"sigma_left", ff.sigma_left},
                    {"beta_left", ff.beta_left},
                    {"sigma_right", ff.sigma_right},
                    {"beta_right", ff.beta_right}};
  return j;
}

ordered_json bounds_json(const RegionBounds& b) {
  return {{"m1", b.m1}, {"M1", b.M1}, {"m2", b.m2}, {"M2", b.M2}};
}

ordered_json gate_json(const AdmissibilityVerdict& v) {
  ordered_json j;
  j["admissible"] = v.admissible;
  j["inf_w1"] = v.inf_w1;
  j["sup_w2"] = v.sup_w2;
  j["coupling_enforced"] = v.coupling_enforced;
  if (v.coupling_enforced) {
    j["slow_upper"] = v.slow_upper;
    j["fast_lower"] = v.fast_lower;
  }
  j["violations"] = v.violations;
  return j;
}

ordered_json certificate_json(const RegionCertificate& c) {
  ordered_json j;
  j["pass"] = c.pass;
  j["tol"] = c.tol;
  j["max_excess"] = c.max_excess;
  j["n_samples"] = c.n_samples;
  ordered_json viols = ordered_json::array();
  const std::size_t shown = std::min<std::size_t>(c.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const RegionViolation& v = c.violations[i];
    viols.push_back({{"index", v.index},
                     {"x", v.x},
                     {"what", v.what},
                     {"excess", v.excess}});
  }
  j["n_violations"] = c.violations.size();
  j["violations"] = viols;
  return j;
}

const char* family_name(BlowupFamily f) {
  switch (f) {
    case BlowupFamily::none: return "none";
    case BlowupFamily::forward: return "forward";
    case BlowupFamily::backward: return "backward";
    case BlowupFamily::both: return "both";
  }
  return "none";
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return xs;
}

std::string snapshot_csv(std::span<const double> xs,
                         std::span<const RiemannState> field,
                         const GammaParams& p) {
  std::string out = "x,sigma,beta,w1,w2,lambda1,lambda2\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const RiemannState& w = field[i];
    const FluidState u = from_riemann(w, p);
    out += fmt12(xs[i]);
    out += ',';
    out += fmt12(u.sigma);
    out += ',';
    out += fmt12(u.beta);
    out += ',';
    out += fmt12(w.w1);
    out += ',';
    out += fmt12(w.w2);
    out += ',';
    out += fmt12(lambda1_riemann(w, p));
    out += ',';
    out += fmt12(lambda2_riemann(w, p));
    out += '\n';
  }
  return out;
}

double scan_data_lipschitz(const InitialData& data, const GammaParams& p) {
  double lip = 0.0;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double x =
        data.x_lo() + (data.x_hi() - data.x_lo()) * i / double(n - 1);
    const DerivativeField df = derivative_field(data, x, p);
    lip = std::max({lip, std::abs(df.w1_x), std::abs(df.w2_x)});
  }
  return lip;
}

std::vector<double> normalized_snapshots(const RunConfig& cfg) {
  std::vector<double> snaps = cfg.snapshot_times;
  for (double s : snaps) {
    if (!(s >= 0.0) || s > cfg.t_end * (1.0 + 1e-12)) {
      throw ConfigError("snapshot times must lie in [0, t_end]");
    }
  }
  snaps.push_back(cfg.t_end);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <=
                                   1e-12 * (1.0 + cfg.t_end);
                          }),
              snaps.end());
  return snaps;
}

struct CsvTable {
  std::vector<double> x, sigma, beta, w1, w2;
};

CsvTable read_snapshot_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,sigma,beta,w1,w2,lambda1,lambda2") {
    throw DataError("unexpected header in " + path.string());
  }
  CsvTable t;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[7];
    char comma;
    for (int k = 0; k < 7; ++k) {
      if (!(ss >> v[k])) {
        throw DataError("bad value at " + path.string() + " row " +
                        std::to_string(row));
      }
      if (k < 6 && !(ss >> comma && comma == ',')) {
        throw DataError("bad separator at " + path.string() + " row " +
                        std::to_string(row));
      }
    }
    t.x.push_back(v[0]);
    t.sigma.push_back(v[1]);
    t.beta.push_back(v[2]);
    t.w1.push_back(v[3]);
    t.w2.push_back(v[4]);
  }
  if (t.x.size() < 2) throw DataError("too few rows in " + path.string());
  return t;
}

double interp_column(const std::vector<double>& xs,
                     const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double f = (x - xs[j]) / (xs[j + 1] - xs[j]);
  return ys[j] * (1.0 - f) + ys[j + 1] * f;
}

ordered_json blowup_json_gamma3(const Gamma3Solver& solver) {
  const BlowupReport r = solver.blowup();
  ordered_json j;
  j["method"] = "decoupled-exact";
  j["blows_up"] = r.verdict == BlowupVerdict::finite_time_blowup;
  if (r.verdict == BlowupVerdict::finite_time_blowup) {
    j["t_star"] = r.t_star;
    j["family"] = family_name(r.family);
    j["x0"] = r.x0;
  }
  j["lipschitz_constant"] = solver.lipschitz_constant();
  return j;
}

ordered_json blowup_json_general(const InitialData& data, const GammaParams& p,
                                 int n_windows) {
  const std::vector<BlowupInterval> windows =
      blowup_bounds_general(data, p, n_windows);
  const BlowupEnvelope env = blowup_envelope_general(data, p);
  ordered_json j;
  j["method"] = "riccati-window";
  j["blows_up"] = env.blows_up;
  if (env.blows_up) {
    j["earliest_possible"] = env.earliest_possible;
    j["earliest_guaranteed"] = env.earliest_guaranteed;
    j["family"] = env.family == 1 ? "forward" : "backward";
    j["x0"] = env.x0;
  }
  ordered_json arr = ordered_json::array();
  for (const BlowupInterval& w : windows) {
    ordered_json e;
    e["family"] = w.family == 1 ? "forward" : "backward";
    e["x0"] = w.x0;
    e["alpha0"] = w.alpha0;
    e["t_lo"] = w.t_lo;
    e["t_hi"] = w.t_hi;
    e["t_lo_outer"] = w.t_lo_outer;
    e["t_hi_outer"] = w.t_hi_outer;
    if (w.alt_valid) {
      e["alt_t_lo"] = w.alt_t_lo;
      e["alt_t_hi"] = w.alt_t_hi;
    }
    arr.push_back(e);
  }
  j["n_windows"] = windows.size();
  j["windows"] = arr;
  return j;
}

}  // namespace

std::string solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::exact3: return "exact3";
    case SolverKind::characteristics: return "chars";
    case SolverKind::grid: return "grid";
  }
  return "grid";
}

SolverKind parse_solver(const std::string& name) {
  if (name == "exact3") return SolverKind::exact3;
  if (name == "chars" || name == "characteristics") {
    return SolverKind::characteristics;
  }
  if (name == "grid") return SolverKind::grid;
  throw ConfigError("unknown solver '" + name +
                    "' (expected exact3, chars, or grid)");
}

InitialData load_initial_data(const RunConfig& cfg) {
  const bool has_preset = !cfg.preset.empty();
  const bool has_csv = !cfg.csv_path.empty();
  if (has_preset == has_csv) {
    throw ConfigError("exactly one of a preset or a data file is required");
  }
  if (has_preset) return InitialData::preset(cfg.preset, cfg.preset_params);
  return read_tabulated_csv(cfg.csv_path);
}

ordered_json certify_report(const RunConfig& cfg) {
  const InitialData data = load_initial_data(cfg);
  const GammaParams p = make_params(cfg.gamma);
  const RegionBounds bounds = region_bounds(data, p);
  const AdmissibilityVerdict verdict = admissibility_gate(bounds, p);

  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["mode"] = "certify";
  j["gamma"] = p.gamma;
  j["theta"] = p.theta;
  j["initial_data"] = data_echo(data, cfg);
  j["region_bounds"] = bounds_json(bounds);
  j["admissibility"] = gate_json(verdict);

  if (!verdict.admissible) {
    j["note"] = "envelope, classification and blow-up sections need "
                "admissible data";
    return j;
  }

  const EigenvalueEnvelope env = eigenvalue_envelope(bounds, p);
  j["eigenvalue_envelope"] = {{"beta_minus_lo", env.beta_minus_lo},
                              {"beta_minus_hi", env.beta_minus_hi},
                              {"beta_plus_lo", env.beta_plus_lo},
                              {"beta_plus_hi", env.beta_plus_hi},
                              {"max_abs_lambda", env.max_abs_lambda()}};

  const int n = 2001;
  int fr = 0, br = 0, fc = 0, bc = 0;
  for (int i = 0; i < n; ++i) {
    const double x =
        data.x_lo() + (data.x_hi() - data.x_lo()) * i / double(n - 1);
    const PointClass c = classify_initial_point(data, x, p);
    fr += c.fr;
    br += c.br;
    fc += c.fc;
    bc += c.bc;
  }
  j["classification"] = {{"n_samples", n},
                         {"fraction_fr", double(fr) / n},
                         {"fraction_br", double(br) / n},
                         {"fraction_fc", double(fc) / n},
                         {"fraction_bc", double(bc) / n}};

  if (p.gamma == 3.0) {
    const Gamma3Solver solver(data);
    j["blowup"] = blowup_json_gamma3(solver);
  } else {
    j["blowup"] = blowup_json_general(data, p, cfg.report_samples);
  }
  return j;
}

ordered_json simulate_report(const RunConfig& cfg) {
  const InitialData data = load_initial_data(cfg);
  const GammaParams p = make_params(cfg.gamma);
  if (!(cfg.t_end > 0.0)) throw ConfigError("simulate needs t_end > 0");
  if (cfg.nx < 4) throw ConfigError("simulate needs nx >= 4");

  const RegionBounds bounds = region_bounds(data, p);
  const AdmissibilityVerdict verdict = admissibility_gate(bounds, p);
  if (!verdict.admissible) {
    std::ostringstream msg;
    msg << "initial data rejected by the admissibility gate:";
    for (const auto& why : verdict.violations) msg << " [" << why << "]";
    throw GateError(msg.str());
  }
  if (cfg.solver == SolverKind::exact3 && p.gamma != 3.0) {
    throw ConfigError("solver exact3 requires gamma == 3");
  }

  // Horizon guard: refuse to integrate into the last stretch before a
  // predicted gradient catastrophe unless explicitly allowed.
  ordered_json blowup_section;
  double predicted = kInf;
  std::optional<Gamma3Solver> exact;
  if (p.gamma == 3.0) {
    exact.emplace(data);
    blowup_section = blowup_json_gamma3(*exact);
    if (exact->blowup().verdict == BlowupVerdict::finite_time_blowup) {
      predicted = exact->blowup().t_star;
    }
  } else {
    blowup_section = blowup_json_general(data, p, cfg.report_samples);
    const BlowupEnvelope env = blowup_envelope_general(data, p);
    if (env.blows_up) predicted = env.earliest_possible;
  }
  if (!cfg.allow_near_blowup && cfg.t_end > 0.95 * predicted) {
    std::ostringstream msg;
    msg << "t_end = " << cfg.t_end
        << " is inside the safety margin of the predicted blow-up time "
        << predicted << "; pass --allow-near-blowup to override";
    throw HorizonError(msg.str());
  }

  const std::vector<double> snaps = normalized_snapshots(cfg);

  const EigenvalueEnvelope env = eigenvalue_envelope(bounds, p);
  double wlo = data.x_lo(), whi = data.x_hi();
  if (cfg.solver == SolverKind::grid) {
    const double pad = 1.1 * cfg.t_end * env.max_abs_lambda();
    wlo -= pad;
    whi += pad;
  }
  if (cfg.x_min) wlo = *cfg.x_min;
  if (cfg.x_max) whi = *cfg.x_max;
  if (!(whi > wlo)) throw ConfigError("output window needs x_max > x_min");

  fs::create_directories(cfg.out_dir);

  double tol = cfg.tol_region;
  ordered_json snapshot_entries = ordered_json::array();
  ordered_json lipschitz_entries = ordered_json::array();
  bool all_pass = true;

  auto emit = [&](std::size_t idx, double t, std::span<const double> xs,
                  std::span<const RiemannState> field,
                  const RegionCertificate& cert) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", idx);
    atomic_write(fs::path(cfg.out_dir) / name, snapshot_csv(xs, field, p));
    ordered_json e;
    e["index"] = idx;
    e["t"] = t;
    e["file"] = name;
    e["certificate"] = certificate_json(cert);
    snapshot_entries.push_back(e);
    all_pass = all_pass && cert.pass;
  };

  if (cfg.solver == SolverKind::exact3) {
    if (std::isnan(tol)) tol = 1e-9;
    const std::vector<double> xs = linspace(wlo, whi, cfg.nx);
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      const std::vector<RiemannState> field = exact->solve(snaps[k], xs);
      emit(k, snaps[k], xs, field,
           certify_runtime_region(xs, field, bounds, p, tol));
      if (snaps[k] > 0.0) {
        const LipschitzCertificate lc = exact->one_sided_lipschitz(snaps[k], xs);
        lipschitz_entries.push_back({{"t", lc.t},
                                     {"pass", lc.pass},
                                     {"constant", lc.constant},
                                     {"worst_margin", lc.worst_margin},
                                     {"worst_x", lc.worst_x},
                                     {"worst_family", lc.worst_family},
                                     {"n_samples", lc.n_samples}});
        all_pass = all_pass && lc.pass;
      }
    }
  } else if (cfg.solver == SolverKind::characteristics) {
    BundleConfig bc;
    bc.dx = cfg.bundle_dx;
    bc.cfl = cfg.bundle_cfl;
    const CharacteristicField field(data, p, cfg.t_end, bc);
    if (std::isnan(tol)) tol = 10.0 * bc.dx * scan_data_lipschitz(data, p);
    const std::vector<double> xs = linspace(wlo, whi, cfg.nx);
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      std::vector<RiemannState> f(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        f[i] = field.state(snaps[k], xs[i]);
      }
      emit(k, snaps[k], xs, f, certify_runtime_region(xs, f, bounds, p, tol));
    }
  } else {
    const Grid1D grid{wlo, whi, cfg.nx, cfg.cfl};
    const GridSolution sol =
        run_reference(data, p, grid, cfg.t_end, snaps, cfg.boundary, tol);
    tol = sol.tol;
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
      emit(k, sol.times[k], sol.x, sol.fields[k], sol.certificates[k]);
    }
  }

  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["mode"] = "simulate";
  ordered_json config;
  config["gamma"] = p.gamma;
  config["theta"] = p.theta;
  config["solver"] = solver_name(cfg.solver);
  config["t_end"] = cfg.t_end;
  config["snapshot_times"] = snaps;
  config["nx"] = cfg.nx;
  config["cfl"] = cfg.cfl;
  config["boundary"] = cfg.boundary == BoundaryMode::periodic
                           ? "periodic"
                           : "farfield-constant";
  config["x_min"] = wlo;
  config["x_max"] = whi;
  config["tol_region"] = tol;
  config["allow_near_blowup"] = cfg.allow_near_blowup;
  config["initial_data"] = data_echo(data, cfg);
  j["config"] = config;
  j["region_bounds"] = bounds_json(bounds);
  j["admissibility"] = gate_json(verdict);
  j["blowup"] = blowup_section;
  j["snapshots"] = snapshot_entries;
  if (cfg.solver == SolverKind::exact3) j["lipschitz"] = lipschitz_entries;
  j["all_certificates_pass"] = all_pass;

  atomic_write(fs::path(cfg.out_dir) / "manifest.json", j.dump(2) + "\n");
  return j;
}

ordered_json compare_report(const CompareOptions& opt) {
  if (opt.manifests.size() < 2) {
    throw ConfigError("compare needs at least two manifests");
  }
  std::vector<ordered_json> ms;
  std::vector<fs::path> dirs;
  for (const std::string& path : opt.manifests) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    ordered_json m;
    try {
      m = ordered_json::parse(in);
    } catch (const std::exception& e) {
      throw DataError("cannot parse " + path + ": " + e.what());
    }
    if (!m.contains("mode") || m["mode"] != "simulate") {
      throw ConfigError(path + " is not a simulate manifest");
    }
    ms.push_back(std::move(m));
    dirs.push_back(fs::path(path).parent_path());
  }

  // Runs must describe the same experiment before errors mean anything.
  for (const char* key : {"gamma", "t_end", "boundary"}) {
    for (std::size_t i = 1; i < ms.size(); ++i) {
      if (ms[i]["config"][key] != ms[0]["config"][key]) {
        throw ConfigError(std::string("manifests disagree on config '") + key +
                          "'");
      }
    }
  }
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (ms[i]["config"]["initial_data"] != ms[0]["config"]["initial_data"]) {
      throw ConfigError("manifests disagree on the initial data");
    }
  }

  const std::size_t ref_idx = ms.size() - 1;
  const double wlo = opt.window_lo.value_or(-kInf);
  const double whi = opt.window_hi.value_or(kInf);

  struct FieldRef {
    const char* name;
    std::vector<double> CsvTable::* column;
  };
  const FieldRef field_refs[] = {{"sigma", &CsvTable::sigma},
                                 {"beta", &CsvTable::beta},
                                 {"w1", &CsvTable::w1},
                                 {"w2", &CsvTable::w2}};

  auto snapshot_list = [](const ordered_json& m) {
    std::vector<std::pair<double, std::string>> out;
    for (const auto& s : m["snapshots"]) {
      out.emplace_back(s["t"].get<double>(), s["file"].get<std::string>());
    }
    return out;
  };
  const auto ref_snaps = snapshot_list(ms[ref_idx]);

  ordered_json runs = ordered_json::array();
  // per-field (dx, linf, l1) points for the convergence fit
  std::map<std::string, std::vector<std::array<double, 3>>> fit_points;

  for (std::size_t r = 0; r + 1 < ms.size(); ++r) {
    const auto run_snaps = snapshot_list(ms[r]);
    ordered_json times = ordered_json::array();
    ordered_json final_errors;
    double final_t = -kInf;

    for (const auto& [t, file] : run_snaps) {
      const auto match = std::find_if(
          ref_snaps.begin(), ref_snaps.end(), [&](const auto& s) {
            return std::abs(s.first - t) <= 1e-9 * (1.0 + std::abs(t));
          });
      if (match == ref_snaps.end()) continue;

      const CsvTable a = read_snapshot_csv(dirs[r] / file);
      const CsvTable b = read_snapshot_csv(dirs[ref_idx] / match->second);

      ordered_json fields;
      for (const FieldRef& fr : field_refs) {
        double linf = 0.0, l1 = 0.0;
        double prev_x = 0.0, prev_d = 0.0;
        bool have_prev = false;
        for (std::size_t i = 0; i < a.x.size(); ++i) {
          const double x = a.x[i];
          if (x < wlo || x > whi) continue;
          const double d =
              std::abs((a.*(fr.column))[i] -
                       interp_column(b.x, b.*(fr.column), x));
          linf = std::max(linf, d);
          if (have_prev) l1 += 0.5 * (d + prev_d) * (x - prev_x);
          prev_x = x;
          prev_d = d;
          have_prev = true;
        }
        fields[fr.name] = {{"linf", linf}, {"l1", l1}};
        if (t > final_t) final_errors[fr.name] = fields[fr.name];
      }
      times.push_back({{"t", t}, {"fields", fields}});
      final_t = std::max(final_t, t);
    }
    if (times.empty()) {
      throw ConfigError("no matching snapshot times between " +
                        opt.manifests[r] + " and the reference");
    }

    const double nx = ms[r]["config"]["nx"].get<double>();
    const double dx = (ms[r]["config"]["x_max"].get<double>() -
                       ms[r]["config"]["x_min"].get<double>()) /
                      nx;
    for (const FieldRef& fr : field_refs) {
      fit_points[fr.name].push_back(
          {dx, final_errors[fr.name]["linf"].get<double>(),
           final_errors[fr.name]["l1"].get<double>()});
    }
    runs.push_back({{"manifest", opt.manifests[r]},
                    {"nx", ms[r]["config"]["nx"]},
                    {"dx", dx},
                    {"times", times}});
  }

  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["mode"] = "compare";
  j["reference"] = opt.manifests[ref_idx];
  if (opt.window_lo || opt.window_hi) {
    j["window"] = {{"lo", opt.window_lo ? ordered_json(*opt.window_lo)
                                        : ordered_json(nullptr)},
                   {"hi", opt.window_hi ? ordered_json(*opt.window_hi)
                                        : ordered_json(nullptr)}};
  }
  j["runs"] = runs;

  if (ms.size() >= 3) {  // two or more runs against the reference
    auto slope = [](const std::vector<std::array<double, 3>>& pts, int col) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (const auto& pt : pts) {
        if (!(pt[static_cast<std::size_t>(col)] > 0.0)) continue;
        const double lx = std::log(pt[0]);
        const double ly = std::log(pt[static_cast<std::size_t>(col)]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
      }
      if (n < 2) return std::numeric_limits<double>::quiet_NaN();
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    ordered_json conv;
    for (const FieldRef& fr : field_refs) {
      conv[fr.name] = {{"order_linf", slope(fit_points[fr.name], 1)},
                       {"order_l1", slope(fit_points[fr.name], 2)}};
    }
    j["convergence"] = conv;
  }
  return j;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  out << certify_report(cfg).dump(2) << '\n';
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const ordered_json j = simulate_report(cfg);
  out << j.dump(2) << '\n';
  return j["all_certificates_pass"].get<bool>() ? 0 : 2;
}

int cmd_compare(const CompareOptions& opt, std::ostream& out) {
  out << compare_report(opt).dump(2) << '\n';
  return 0;
}

}  // namespace carroll
