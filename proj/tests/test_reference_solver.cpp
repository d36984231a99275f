#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "carroll/exact_gamma3.hpp"
#include "carroll/reference_solver.hpp"

using namespace carroll;

namespace {

std::vector<RiemannState> sample_field(const InitialData& data,
                                       const Grid1D& grid,
                                       const GammaParams& p) {
  std::vector<RiemannState> field(static_cast<std::size_t>(grid.n_cells));
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double x = grid.x_min + (static_cast<double>(i) + 0.5) * grid.dx();
    field[i] = data.riemann(x, p);
  }
  return field;
}

InitialData remark_gamma2() {
  return InitialData::preset("remark-family", {{"m", 1.0}, {"theta", 0.5}});
}

}  // namespace

TEST_CASE("grid parameters are validated") {
  const GammaParams p = make_params(2.0);
  const std::vector<RiemannState> field(8, RiemannState{1.0, -1.0});
  CHECK_THROWS_AS(stable_step(field, Grid1D{1.0, -1.0, 8, 0.8}, p),
                  ParameterError);
  CHECK_THROWS_AS(stable_step(field, Grid1D{-1.0, 1.0, 2, 0.8}, p),
                  ParameterError);
  CHECK_THROWS_AS(stable_step(field, Grid1D{-1.0, 1.0, 8, 0.0}, p),
                  ParameterError);
  CHECK_THROWS_AS(stable_step(field, Grid1D{-1.0, 1.0, 8, 1.5}, p),
                  ParameterError);
}

TEST_CASE("stable step scales with the largest speed") {
  // constant sigma = 1, beta = 0 at the decoupled exponent: speeds are +-1
  const GammaParams p = make_params(3.0);
  const std::vector<RiemannState> field(100, RiemannState{1.0, -1.0});
  const Grid1D grid{-1.0, 1.0, 100, 0.8};
  CHECK(stable_step(field, grid, p) == doctest::Approx(0.8 * 0.02).epsilon(1e-15));
}

TEST_CASE("steps beyond the stability limit are refused") {
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-10.0, 10.0, 200, 0.8};
  const std::vector<RiemannState> field =
      sample_field(remark_gamma2(), grid, p);
  const double limit = stable_step(field, grid, p);
  const RiemannState far_l = field.front(), far_r = field.back();
  CHECK_THROWS_AS(upwind_step(field, grid, 1.5 * limit, p,
                              BoundaryMode::farfield_constant, far_l, far_r),
                  CflError);
  CHECK_THROWS_AS(upwind_step(field, grid, 0.0, p,
                              BoundaryMode::farfield_constant, far_l, far_r),
                  ParameterError);
  CHECK_NOTHROW(upwind_step(field, grid, limit, p,
                            BoundaryMode::farfield_constant, far_l, far_r));
}

TEST_CASE("the scheme preserves the discrete range") {
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-10.0, 10.0, 400, 0.9};
  std::vector<RiemannState> field = sample_field(remark_gamma2(), grid, p);
  const RiemannState far_l = field.front(), far_r = field.back();

  double w1_min = 1e300, w1_max = -1e300, w2_min = 1e300, w2_max = -1e300;
  for (const RiemannState& w : field) {
    w1_min = std::min(w1_min, w.w1);
    w1_max = std::max(w1_max, w.w1);
    w2_min = std::min(w2_min, w.w2);
    w2_max = std::max(w2_max, w.w2);
  }

  for (int step = 0; step < 200; ++step) {
    const double dt = stable_step(field, grid, p);
    field = upwind_step(field, grid, dt, p, BoundaryMode::farfield_constant,
                        far_l, far_r);
    for (const RiemannState& w : field) {
      CHECK(w.w1 >= w1_min - 1e-12);
      CHECK(w.w1 <= w1_max + 1e-12);
      CHECK(w.w2 >= w2_min - 1e-12);
      CHECK(w.w2 <= w2_max + 1e-12);
    }
  }
}

TEST_CASE("leaving the positivity region raises") {
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-10.0, 10.0, 100, 0.8};
  std::vector<RiemannState> field = sample_field(remark_gamma2(), grid, p);
  for (RiemannState& w : field) std::swap(w.w1, w.w2);  // now w1 < w2 everywhere
  CHECK_THROWS_AS(upwind_step(field, grid, 1e-6, p,
                              BoundaryMode::farfield_constant, field.front(),
                              field.back()),
                  RegionError);
}

TEST_CASE("constant fields are exact fixed points") {
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-5.0, 5.0, 64, 0.9};
  const RiemannState w0 = to_riemann({1.3, 0.2}, p);
  std::vector<RiemannState> field(64, w0);
  for (int step = 0; step < 100; ++step) {
    const double dt = stable_step(field, grid, p);
    field = upwind_step(field, grid, dt, p, BoundaryMode::farfield_constant,
                        w0, w0);
  }
  for (const RiemannState& w : field) {
    CHECK(w.w1 == w0.w1);
    CHECK(w.w2 == w0.w2);
  }
  // the periodic wrap of a constant is the same constant
  field = upwind_step(field, grid, stable_step(field, grid, p), p,
                      BoundaryMode::periodic, w0, w0);
  for (const RiemannState& w : field) CHECK(w.w1 == w0.w1);
}

TEST_CASE("reference run records certified snapshots") {
  const InitialData data = remark_gamma2();
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-15.0, 15.0, 600, 0.8};
  const std::vector<double> snaps{0.0, 0.25, 0.5};
  const GridSolution sol = run_reference(data, p, grid, 0.5, snaps);

  REQUIRE(sol.times.size() == 3);
  CHECK(sol.times[0] == 0.0);
  CHECK(sol.times[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.times[2] == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(sol.fields.size() == 3);
  REQUIRE(sol.certificates.size() == 3);
  for (const auto& f : sol.fields) CHECK(f.size() == 600);
  for (const auto& c : sol.certificates) CHECK(c.pass);
  CHECK(sol.tol == doctest::Approx(10.0 * grid.dx() * sol.data_lipschitz)
                       .epsilon(1e-12));
  CHECK(sol.data_lipschitz > 0.2);  // max slope of this profile is 0.25

  // the t = 0 snapshot is the pointwise initial data at cell centers
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const RiemannState w = data.riemann(sol.x[i], p);
    CHECK(sol.fields[0][i].w1 == w.w1);
    CHECK(sol.fields[0][i].w2 == w.w2);
  }

  // duplicated and unsorted snapshot requests collapse cleanly
  const std::vector<double> messy{0.5, 0.25, 0.25, 0.0, 0.5};
  const GridSolution again = run_reference(data, p, grid, 0.5, messy);
  CHECK(again.times.size() == 3);

  CHECK_THROWS_AS(
      run_reference(data, p, grid, 0.5, std::vector<double>{0.75}),
      ParameterError);
  CHECK_THROWS_AS(
      run_reference(data, p, grid, -1.0, std::vector<double>{}),
      ParameterError);
}

TEST_CASE("a zero-length run returns the projected data") {
  const InitialData data = remark_gamma2();
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-5.0, 5.0, 32, 0.8};
  const GridSolution sol =
      run_reference(data, p, grid, 0.0, std::vector<double>{});
  REQUIRE(sol.times.size() == 1);
  CHECK(sol.times[0] == 0.0);
  CHECK(sol.certificates[0].pass);
}

TEST_CASE("inadmissible data never starts a run") {
  const InitialData bad = InitialData::preset(
      "gaussian-bump", {{"sigma", 2.0}, {"a", 8.0}, {"s", 1.0}});
  const Grid1D grid{-10.0, 10.0, 100, 0.8};
  CHECK_THROWS_AS(run_reference(bad, make_params(2.0), grid, 0.1,
                                std::vector<double>{}),
                  GateError);
}

TEST_CASE("tolerance override replaces the automatic one") {
  const InitialData data = remark_gamma2();
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-10.0, 10.0, 100, 0.8};
  const GridSolution sol =
      run_reference(data, p, grid, 0.1, std::vector<double>{},
                    BoundaryMode::farfield_constant, 0.5);
  CHECK(sol.tol == 0.5);
}

TEST_CASE("periodic runs hold the invariant box") {
  const InitialData data = remark_gamma2();
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-20.0, 20.0, 512, 0.8};
  const GridSolution sol = run_reference(data, p, grid, 0.2,
                                         std::vector<double>{0.1},
                                         BoundaryMode::periodic);
  for (const auto& c : sol.certificates) CHECK(c.pass);
}

TEST_CASE("sampling interpolates between cell centers") {
  const InitialData data = remark_gamma2();
  const GammaParams p = make_params(2.0);
  const Grid1D grid{-10.0, 10.0, 100, 0.8};
  const GridSolution sol =
      run_reference(data, p, grid, 0.0, std::vector<double>{});

  CHECK(sample_solution(sol, 0, sol.x[40]).w1 == sol.fields[0][40].w1);
  const double mid = 0.5 * (sol.x[40] + sol.x[41]);
  CHECK(sample_solution(sol, 0, mid).w1 ==
        doctest::Approx(0.5 * (sol.fields[0][40].w1 + sol.fields[0][41].w1))
            .epsilon(1e-15));
  // beyond the grid the boundary cells extend as constants
  CHECK(sample_solution(sol, 0, 50.0).w1 == sol.fields[0].back().w1);
  CHECK(sample_solution(sol, 0, -50.0).w2 == sol.fields[0].front().w2);
  CHECK_THROWS_AS(sample_solution(sol, 5, 0.0), ParameterError);
}

TEST_CASE("a coarse run tracks the closed-form solution") {
  const InitialData data = InitialData::preset(
      "arctan-compressive", {{"sigma", 2.0}, {"eps", 0.1}});
  const GammaParams p = make_params(3.0);
  const Grid1D grid{-25.0, 25.0, 1000, 0.8};
  const GridSolution sol =
      run_reference(data, p, grid, 1.0, std::vector<double>{});
  const Gamma3Solver exact(data);

  double err = 0.0;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    if (std::abs(sol.x[i]) > 15.0) continue;
    const RiemannState w = exact.state(1.0, sol.x[i]);
    err = std::max(err, std::abs(sol.fields.back()[i].w1 - w.w1));
    err = std::max(err, std::abs(sol.fields.back()[i].w2 - w.w2));
  }
  CHECK(err < 0.05);
  CHECK(err > 0.0);  // it is a numerical method, not an oracle
}
