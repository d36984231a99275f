#pragma once

#include <span>
#include <vector>

#include "carroll/classification.hpp"
#include "carroll/initial_data.hpp"

namespace carroll {

// At gamma = 3 the two characteristic families decouple completely: w1 is
// transported at speed lambda2 = 1/w1 and w2 at lambda1 = 1/w2, each a scalar
// conservation law in its own invariant.  Everything below is closed-form up
// to one-dimensional root finding.

enum class BlowupVerdict { global_existence, finite_time_blowup };

// Which invariant's slope diverges first.  "both" marks a tie within
// relative tolerance 1e-9 (symmetric data produces exact ties).
enum class BlowupFamily { none, forward, backward, both };

inline int family_index(BlowupFamily f) {
  return f == BlowupFamily::forward ? 1 : f == BlowupFamily::backward ? 2 : 0;
}

struct BlowupReport {
  BlowupVerdict verdict;
  double t_star;   // +infinity for global existence
  double t_lo;     // closed form: lower == upper == t_star
  double t_hi;
  BlowupFamily family;
  double x0;       // foot point achieving the infimum (NaN when global)
};

// Certificate that inf_x (beta +- sigma)_x(t, .) >= -C/t with
// C = sup (sigma0 + |beta0|)^2, checked on a sample set by evaluating the
// slopes along exact characteristics.
struct LipschitzCertificate {
  bool pass;
  double t;
  double constant;       // the C above
  double worst_margin;   // min over samples of w_jx(t,x) + C/t
  double worst_x;
  int worst_family;
  std::size_t n_samples;
};

class Gamma3Solver {
 public:
  // Computes bounds, runs the admissibility gate (GateError on failure), and
  // evaluates the blow-up prediction.
  explicit Gamma3Solver(const InitialData& data);

  const GammaParams& params() const { return params_; }
  const RegionBounds& bounds() const { return bounds_; }
  const AdmissibilityVerdict& verdict() const { return verdict_; }
  const BlowupReport& blowup() const { return report_; }

  double w1_0(double x0) const;
  double w2_0(double x0) const;

  // Straight-line characteristic through (0, x0): x0 + t / w_j(0, x0).
  double characteristic_position(int family, double x0, double t) const;

  // Inverse of the above: the foot point whose family-j characteristic passes
  // through (t, x).  Monotone for t below the blow-up time, so bisection on
  // the envelope-derived bracket always succeeds; BracketError otherwise.
  double foot_point(int family, double t, double x) const;

  // State at (t, x); requires 0 <= t < t_star.
  RiemannState state(double t, double x) const;
  std::vector<RiemannState> solve(double t, std::span<const double> x) const;

  // Invariant slope alpha_j(t) along the characteristic seeded at x0:
  //   1/alpha_j(t) = 1/alpha_j(0) - t / w_j(0,x0)^2,
  // with alpha_j(0) = w_jx(0, x0).  A nonpositive seed never blows up; a
  // positive one diverges at t = w_j^2/alpha_j(0), beyond which BlowupError
  // (carrying that time) is thrown.
  double slope_along(int family, double x0, double t) const;

  // sup (sigma0 + |beta0|)^2 over the line (the one-sided Lipschitz constant).
  double lipschitz_constant() const { return lipschitz_constant_; }

  LipschitzCertificate one_sided_lipschitz(double t,
                                           std::span<const double> x) const;

 private:
  double invariant0(int family, double x0) const;
  double slope0(int family, double x0) const;

  InitialData data_;
  GammaParams params_;
  RegionBounds bounds_;
  AdmissibilityVerdict verdict_;
  BlowupReport report_;
  double lipschitz_constant_;
  int scan_points_ = 8193;
};

// Free-function forms for one-shot use.
BlowupReport predict_blowup_gamma3(const InitialData& data);
std::vector<RiemannState> solve_exact_gamma3(const InitialData& data, double t,
                                             std::span<const double> x);
double alpha_along_characteristic_gamma3(const InitialData& data, int family,
                                         double x0, double t);
LipschitzCertificate one_sided_lipschitz_certificate_gamma3(
    const InitialData& data, double t, std::span<const double> x);

}  // namespace carroll
