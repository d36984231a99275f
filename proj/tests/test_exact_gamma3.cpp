#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "carroll/exact_gamma3.hpp"

using namespace carroll;

namespace {

InitialData compressive() {
  return InitialData::preset("arctan-compressive",
                             {{"sigma", 2.0}, {"eps", 0.1}});
}

InitialData rarefactive() {
  return InitialData::preset("arctan-rarefactive",
                             {{"sigma", 2.0}, {"eps", 0.1}});
}

}  // namespace

TEST_CASE("solver refuses inadmissible data") {
  const InitialData bad = InitialData::preset(
      "gaussian-bump", {{"sigma", 2.0}, {"a", 8.0}, {"s", 1.0}});
  CHECK_THROWS_AS(Gamma3Solver{bad}, GateError);
}

TEST_CASE("blow-up prediction for steepening arctan data") {
  const Gamma3Solver solver(compressive());
  const BlowupReport r = solver.blowup();
  REQUIRE(r.verdict == BlowupVerdict::finite_time_blowup);
  // reference value computed by minimizing w^2/w_x in extended precision
  CHECK(r.t_star == doctest::Approx(39.899916415720195).epsilon(1e-12));
  CHECK(r.t_lo == doctest::Approx(r.t_star).epsilon(1e-12));
  CHECK(r.t_hi == doctest::Approx(r.t_star).epsilon(1e-12));
  // the two families tie by the data's point symmetry
  CHECK(r.family == BlowupFamily::both);
  CHECK(std::abs(std::abs(r.x0) - 0.050125523346230768) < 1e-5);

  const BlowupReport again = predict_blowup_gamma3(compressive());
  CHECK(again.t_star == doctest::Approx(r.t_star).epsilon(1e-14));
}

TEST_CASE("flattening arctan data exists globally") {
  const Gamma3Solver solver(rarefactive());
  const BlowupReport r = solver.blowup();
  CHECK(r.verdict == BlowupVerdict::global_existence);
  CHECK(r.family == BlowupFamily::none);
  CHECK(std::isinf(r.t_star));
  CHECK(family_index(BlowupFamily::none) == 0);
}

TEST_CASE("characteristics are straight lines with reciprocal slope") {
  const Gamma3Solver solver(rarefactive());
  const double x0 = 1.25;
  const double t = 7.0;
  CHECK(solver.characteristic_position(1, x0, t) ==
        doctest::Approx(x0 + t / solver.w1_0(x0)).epsilon(1e-15));
  CHECK(solver.characteristic_position(2, x0, t) ==
        doctest::Approx(x0 + t / solver.w2_0(x0)).epsilon(1e-15));
  // family 1 moves right, family 2 moves left
  CHECK(solver.characteristic_position(1, x0, t) > x0);
  CHECK(solver.characteristic_position(2, x0, t) < x0);
}

TEST_CASE("foot point inverts the characteristic map") {
  const Gamma3Solver solver(rarefactive());
  for (double t : {0.5, 3.0, 25.0}) {
    for (double x : {-8.0, -0.3, 0.0, 2.4, 11.0}) {
      for (int family : {1, 2}) {
        const double y = solver.foot_point(family, t, x);
        CHECK(std::abs(solver.characteristic_position(family, y, t) - x) <=
              1e-10 * (1.0 + std::abs(x)));
      }
    }
  }
}

TEST_CASE("invariants ride their characteristics unchanged") {
  const Gamma3Solver solver(rarefactive());
  for (double t : {0.5, 2.0, 9.0}) {
    for (double x0 : {-3.0, 0.0, 1.7}) {
      const double x1 = solver.characteristic_position(1, x0, t);
      CHECK(std::abs(solver.state(t, x1).w1 - solver.w1_0(x0)) <= 1e-10);
      const double x2 = solver.characteristic_position(2, x0, t);
      CHECK(std::abs(solver.state(t, x2).w2 - solver.w2_0(x0)) <= 1e-10);
    }
  }
}

TEST_CASE("vector solve matches pointwise states") {
  const Gamma3Solver solver(rarefactive());
  const std::vector<double> xs{-5.0, -1.0, 0.0, 0.5, 4.0};
  const std::vector<RiemannState> f = solver.solve(2.0, xs);
  REQUIRE(f.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const RiemannState w = solver.state(2.0, xs[i]);
    CHECK(f[i].w1 == doctest::Approx(w.w1).epsilon(1e-15));
    CHECK(f[i].w2 == doctest::Approx(w.w2).epsilon(1e-15));
  }
  const std::vector<RiemannState> g = solve_exact_gamma3(rarefactive(), 2.0, xs);
  CHECK(g[2].w1 == doctest::Approx(f[2].w1).epsilon(1e-15));
}

TEST_CASE("state queries respect the horizon") {
  const Gamma3Solver solver(compressive());
  CHECK_THROWS_AS(solver.state(-0.1, 0.0), ParameterError);
  CHECK_NOTHROW(solver.state(39.0, 0.0));
  CHECK_THROWS_AS(solver.state(39.9, 0.0), HorizonError);
  CHECK_THROWS_AS(solver.state(100.0, 0.0), HorizonError);
  // the globally existing flow answers at any time
  const Gamma3Solver global(rarefactive());
  CHECK_NOTHROW(global.state(1000.0, 3.0));
}

TEST_CASE("slope transport matches finite differences of the field") {
  const Gamma3Solver solver(compressive());
  const double x0 = 1.0, t = 5.0;
  const double xt = solver.characteristic_position(1, x0, t);
  const double h = 1e-5;
  const double fd =
      (solver.state(t, xt + h).w1 - solver.state(t, xt - h).w1) / (2 * h);
  CHECK(solver.slope_along(1, x0, t) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("slope blow-up reports the per-characteristic time") {
  const Gamma3Solver solver(compressive());
  // at x0 = 0: w1 = 2 and w1_x = 0.1, so the slope explodes at t = 40
  const double t_char = 40.0;
  CHECK(solver.slope_along(1, 0.0, 39.999) > 1e3);
  try {
    solver.slope_along(1, 0.0, t_char);
    FAIL("expected BlowupError");
  } catch (const BlowupError& e) {
    CHECK(e.t_star() == doctest::Approx(t_char).epsilon(1e-12));
  }
  const double a = alpha_along_characteristic_gamma3(compressive(), 1, 0.0, 20.0);
  CHECK(a == doctest::Approx(0.1 / (1.0 - 20.0 * 0.1 / 4.0)).epsilon(1e-12));
}

TEST_CASE("one-sided slope certificate on the global flow") {
  const Gamma3Solver solver(rarefactive());
  const double c_ref = std::pow(2.0 + 0.05 * std::acos(-1.0), 2);
  CHECK(solver.lipschitz_constant() == doctest::Approx(c_ref).epsilon(1e-12));

  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(-20.0 + 0.1 * i);
  for (double t : {0.5, 5.0, 50.0}) {
    const LipschitzCertificate cert = solver.one_sided_lipschitz(t, xs);
    CHECK(cert.pass);
    CHECK(cert.t == t);
    CHECK(cert.constant == doctest::Approx(c_ref).epsilon(1e-12));
    CHECK(cert.worst_margin >= 0.0);
  }
  CHECK_THROWS_AS(solver.one_sided_lipschitz(0.0, xs), ParameterError);
  CHECK_THROWS_AS(solver.one_sided_lipschitz(-1.0, xs), ParameterError);

  // certificates stop at the horizon of a steepening flow
  const Gamma3Solver steep(compressive());
  CHECK_THROWS_AS(steep.one_sided_lipschitz(40.0, xs), HorizonError);
  CHECK(steep.one_sided_lipschitz(20.0, xs).pass);
  CHECK(one_sided_lipschitz_certificate_gamma3(compressive(), 20.0, xs).pass);
}

TEST_CASE("mixed-sign slopes stay above the decay floor") {
  const InitialData bump = InitialData::preset(
      "gaussian-bump", {{"sigma", 2.0}, {"a", 0.1}, {"s", 1.0}});
  const Gamma3Solver solver(bump);
  REQUIRE(solver.blowup().verdict == BlowupVerdict::finite_time_blowup);
  const double t_half = 0.5 * solver.blowup().t_star;
  std::vector<double> xs;
  for (int i = 0; i <= 800; ++i) xs.push_back(-20.0 + 0.05 * i);
  const LipschitzCertificate cert = solver.one_sided_lipschitz(t_half, xs);
  CHECK(cert.pass);
  // somewhere the slope really is negative, so the bound is doing work
  CHECK(cert.worst_margin < cert.constant / t_half);
}
