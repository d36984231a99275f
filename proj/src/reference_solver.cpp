#include "carroll/reference_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace carroll {

namespace {

void validate_grid(const Grid1D& grid) {
  if (!(grid.x_max > grid.x_min)) {
    throw ParameterError("grid needs x_max > x_min");
  }
  if (grid.n_cells < 4) {
    throw ParameterError("grid needs at least 4 cells");
  }
  if (!(grid.cfl > 0.0) || grid.cfl > 1.0) {
    throw ParameterError("grid cfl must lie in (0, 1]");
  }
}

}  // namespace

double stable_step(std::span<const RiemannState> field, const Grid1D& grid,
                   const GammaParams& p) {
  validate_grid(grid);
  double max_speed = 0.0;
  for (const RiemannState& w : field) {
    max_speed = std::max(max_speed, std::abs(lambda1_riemann(w, p)));
    max_speed = std::max(max_speed, std::abs(lambda2_riemann(w, p)));
  }
  if (!(max_speed > 0.0) || !std::isfinite(max_speed)) {
    throw RegionError("cannot bound characteristic speeds for this field");
  }
  return grid.cfl * grid.dx() / max_speed;
}

std::vector<RiemannState> upwind_step(std::span<const RiemannState> field,
                                      const Grid1D& grid, double dt,
                                      const GammaParams& p, BoundaryMode mode,
                                      const RiemannState& far_left,
                                      const RiemannState& far_right) {
  validate_grid(grid);
  if (field.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw ParameterError("field size does not match the grid");
  }
  if (!(dt > 0.0)) throw ParameterError("upwind step needs dt > 0");
  const double limit = stable_step(field, grid, p);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the stable step " << limit;
    throw CflError(msg.str());
  }

  const std::size_t n = field.size();
  const double dx = grid.dx();
  std::vector<RiemannState> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RiemannState& w = field[i];
    const double l1 = lambda1_riemann(w, p);  // negative in-region
    const double l2 = lambda2_riemann(w, p);  // positive in-region
    const double w1_left =
        i > 0 ? field[i - 1].w1
              : (mode == BoundaryMode::periodic ? field[n - 1].w1 : far_left.w1);
    const double w2_right =
        i + 1 < n
            ? field[i + 1].w2
            : (mode == BoundaryMode::periodic ? field[0].w2 : far_right.w2);
    next[i].w1 = w.w1 - dt * l2 * (w.w1 - w1_left) / dx;
    next[i].w2 = w.w2 - dt * l1 * (w2_right - w.w2) / dx;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(next[i].w1 > next[i].w2)) {
      std::ostringstream msg;
      msg << "upwind step left the positivity region at cell " << i;
      throw RegionError(msg.str());
    }
  }
  return next;
}

GridSolution run_reference(const InitialData& data, const GammaParams& p,
                           const Grid1D& grid, double t_end,
                           std::span<const double> snapshot_times,
                           BoundaryMode mode, double tol_override) {
  validate_grid(grid);
  if (!(t_end >= 0.0)) throw ParameterError("run_reference needs t_end >= 0");

  const RegionBounds bounds = region_bounds(data, p);
  const AdmissibilityVerdict verdict = admissibility_gate(bounds, p);
  if (!verdict.admissible) {
    std::ostringstream msg;
    msg << "initial data rejected by the admissibility gate:";
    for (const auto& why : verdict.violations) msg << " [" << why << "]";
    throw GateError(msg.str());
  }

  GridSolution sol;
  sol.grid = grid;
  sol.boundary = mode;

  const double dx = grid.dx();
  const std::size_t n = static_cast<std::size_t>(grid.n_cells);
  sol.x.resize(n);
  std::vector<RiemannState> field(n);
  double data_lip = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sol.x[i] = grid.x_min + (static_cast<double>(i) + 0.5) * dx;
    field[i] = data.riemann(sol.x[i], p);
    const DerivativeField df = derivative_field(data, sol.x[i], p);
    data_lip = std::max({data_lip, std::abs(df.w1_x), std::abs(df.w2_x)});
  }
  sol.data_lipschitz = data_lip;
  sol.tol = std::isfinite(tol_override) ? tol_override : 10.0 * dx * data_lip;

  std::vector<double> snaps(snapshot_times.begin(), snapshot_times.end());
  for (double s : snaps) {
    if (!(s >= 0.0) || s > t_end * (1.0 + 1e-12)) {
      throw ParameterError("snapshot times must lie in [0, t_end]");
    }
  }
  snaps.push_back(t_end);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <= 1e-12 * (1.0 + t_end);
                          }),
              snaps.end());

  const FarField& ff = data.far_field();
  const RiemannState far_left = to_riemann({ff.sigma_left, ff.beta_left}, p);
  const RiemannState far_right = to_riemann({ff.sigma_right, ff.beta_right}, p);

  auto record = [&](double t) {
    sol.times.push_back(t);
    sol.fields.push_back(field);
    sol.certificates.push_back(
        certify_runtime_region(sol.x, field, bounds, p, sol.tol));
  };

  double t = 0.0;
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() &&
         snaps[next_snap] <= 1e-12 * (1.0 + t_end)) {
    record(snaps[next_snap]);
    ++next_snap;
  }
  const double t_eps = 1e-12 * (1.0 + t_end);
  while (t < t_end - t_eps) {
    double dt = stable_step(field, grid, p);
    double target = t_end;
    if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);
    if (t + dt > target) dt = target - t;
    field = upwind_step(field, grid, dt, p, mode, far_left, far_right);
    t += dt;
    while (next_snap < snaps.size() && t >= snaps[next_snap] - t_eps) {
      record(snaps[next_snap]);
      ++next_snap;
    }
  }
  while (next_snap < snaps.size()) {  // t_end == 0 edge
    record(snaps[next_snap]);
    ++next_snap;
  }
  return sol;
}

RiemannState sample_solution(const GridSolution& sol, std::size_t snapshot,
                             double x) {
  if (snapshot >= sol.fields.size()) {
    throw ParameterError("snapshot index out of range");
  }
  const std::vector<RiemannState>& f = sol.fields[snapshot];
  const std::vector<double>& xs = sol.x;
  if (x <= xs.front()) return f.front();
  if (x >= xs.back()) return f.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double frac = (x - xs[j]) / (xs[j + 1] - xs[j]);
  return {f[j].w1 * (1.0 - frac) + f[j + 1].w1 * frac,
          f[j].w2 * (1.0 - frac) + f[j + 1].w2 * frac};
}

}  // namespace carroll
