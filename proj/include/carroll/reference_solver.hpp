#pragma once

#include <limits>
#include <span>
#include <vector>

#include "carroll/classification.hpp"
#include "carroll/errors.hpp"
#include "carroll/initial_data.hpp"
#include "carroll/state_algebra.hpp"

namespace carroll {

// Uniform cell-centered grid on [x_min, x_max].
struct Grid1D {
  double x_min;
  double x_max;
  int n_cells;
  double cfl = 0.8;

  double dx() const { return (x_max - x_min) / n_cells; }
};

enum class BoundaryMode { farfield_constant, periodic };

// One snapshot-bearing run of the first-order upwind scheme.
struct GridSolution {
  Grid1D grid;
  BoundaryMode boundary;
  std::vector<double> x;                            // cell centers
  std::vector<double> times;                        // recorded snapshots
  std::vector<std::vector<RiemannState>> fields;    // one field per snapshot
  std::vector<RegionCertificate> certificates;      // one per snapshot
  double data_lipschitz;                            // max initial |w_x|
  double tol;                                       // certificate tolerance
};

// Advances the field by dt.  Each invariant is differenced on its own upwind
// side (w1 rides the positive speed, w2 the negative one).  Throws CflError
// when dt exceeds the stable step for the current field and RegionError if
// the update leaves the positivity region.
std::vector<RiemannState> upwind_step(std::span<const RiemannState> field,
                                      const Grid1D& grid, double dt,
                                      const GammaParams& p, BoundaryMode mode,
                                      const RiemannState& far_left,
                                      const RiemannState& far_right);

// Largest admissible time step for the current field.
double stable_step(std::span<const RiemannState> field, const Grid1D& grid,
                   const GammaParams& p);

// Runs the scheme to t_end, recording and certifying the field at each of
// snapshot_times (deduplicated, ascending; t_end is appended when missing).
// The certificate tolerance defaults to 10 * dx * data_lipschitz and can be
// overridden with a finite tol_override.
GridSolution run_reference(const InitialData& data, const GammaParams& p,
                           const Grid1D& grid, double t_end,
                           std::span<const double> snapshot_times,
                           BoundaryMode mode = BoundaryMode::farfield_constant,
                           double tol_override =
                               std::numeric_limits<double>::quiet_NaN());

// Linear interpolation of one recorded snapshot at x (clamped to the ends).
RiemannState sample_solution(const GridSolution& sol, std::size_t snapshot,
                             double x);

}  // namespace carroll
