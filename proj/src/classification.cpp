#include "carroll/classification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace carroll {

namespace {

// Golden-section refinement of a local extremum of f inside [a, b].
// maximize == true hunts a maximum.  f is assumed unimodal on [a, b]; the
// caller brackets with neighbouring scan points so this holds for C1 data.
double golden_refine(const std::function<double(double)>& f, double a, double b,
                     bool maximize) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b));
       ++it) {
    const bool pick_left = maximize ? (fc > fd) : (fc < fd);
    if (pick_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return f(mid);
}

// Scan extremes of f over [lo, hi] with local refinement of every interior
// extremum; n is the scan resolution.
std::pair<double, double> scan_extremes(const std::function<double(double)>& f,
                                        double lo, double hi, int n) {
  const double dx = (hi - lo) / (n - 1);
  double fmin = std::numeric_limits<double>::infinity();
  double fmax = -fmin;
  double prev2 = f(lo), prev1 = f(lo + dx);
  fmin = std::min({fmin, prev2, prev1});
  fmax = std::max({fmax, prev2, prev1});
  for (int i = 2; i < n; ++i) {
    const double xi = lo + i * dx;
    const double fi = f(xi);
    fmin = std::min(fmin, fi);
    fmax = std::max(fmax, fi);
    // refine around interior extrema of the sampled sequence
    if (prev1 > prev2 && prev1 > fi) {
      fmax = std::max(fmax, golden_refine(f, xi - 2 * dx, xi, true));
    } else if (prev1 < prev2 && prev1 < fi) {
      fmin = std::min(fmin, golden_refine(f, xi - 2 * dx, xi, false));
    }
    prev2 = prev1;
    prev1 = fi;
  }
  return {fmin, fmax};
}

}  // namespace

PointClass classify_point(double lambda1_x, double lambda2_x) {
  if (!std::isfinite(lambda1_x) || !std::isfinite(lambda2_x)) {
    throw DataError("classify_point requires finite speed slopes");
  }
  PointClass c;
  c.fr = lambda2_x >= 0.0;
  c.fc = !c.fr;
  c.br = lambda1_x >= 0.0;
  c.bc = !c.br;
  return c;
}

PointClass classify_initial_point(const InitialData& data, double x,
                                  const GammaParams& p) {
  const RiemannState w = data.riemann(x, p);
  const DerivativeField d = derivative_field(data, x, p);
  const LambdaJacobian j = lambda_jacobian_riemann(w, p);
  const double l1x = j.d1_dw1 * d.w1_x + j.d1_dw2 * d.w2_x;
  const double l2x = j.d2_dw1 * d.w1_x + j.d2_dw2 * d.w2_x;
  return classify_point(l1x, l2x);
}

RegionBounds region_bounds(const InitialData& data, const GammaParams& p,
                           int scan_points) {
  if (scan_points < 3) {
    throw ParameterError("region_bounds needs at least 3 scan points");
  }
  auto w1 = [&](double x) { return data.riemann(x, p).w1; };
  auto w2 = [&](double x) { return data.riemann(x, p).w2; };
  auto [m1, M1] = scan_extremes(w1, data.x_lo(), data.x_hi(), scan_points);
  auto [m2, M2] = scan_extremes(w2, data.x_lo(), data.x_hi(), scan_points);

  const FarField& ff = data.far_field();
  const RiemannState wl = to_riemann({ff.sigma_left, ff.beta_left}, p);
  const RiemannState wr = to_riemann({ff.sigma_right, ff.beta_right}, p);
  m1 = std::min({m1, wl.w1, wr.w1});
  M1 = std::max({M1, wl.w1, wr.w1});
  m2 = std::min({m2, wl.w2, wr.w2});
  M2 = std::max({M2, wl.w2, wr.w2});
  return {m1, M1, m2, M2};
}

AdmissibilityVerdict admissibility_gate(const RegionBounds& b,
                                        const GammaParams& p) {
  AdmissibilityVerdict v;
  v.inf_w1 = b.m1;
  v.sup_w2 = b.M2;
  v.slow_upper = (b.M1 - p.theta * b.m1) + (1.0 + p.theta) * b.M2;
  v.fast_lower = (1.0 + p.theta) * b.m1 - (p.theta * b.M2 - b.m2);
  v.coupling_enforced = p.gamma != 3.0;

  auto fail = [&](const std::string& why) { v.violations.push_back(why); };
  if (!(b.m1 > 0.0)) {
    std::ostringstream msg;
    msg << "inf w1 = " << b.m1 << " must be positive";
    fail(msg.str());
  }
  if (!(b.M2 < 0.0)) {
    std::ostringstream msg;
    msg << "sup w2 = " << b.M2 << " must be negative";
    fail(msg.str());
  }
  if (v.coupling_enforced) {
    if (!(v.slow_upper < 0.0)) {
      std::ostringstream msg;
      msg << "(M1 - theta m1) + (1+theta) M2 = " << v.slow_upper
          << " must be negative for gamma < 3";
      fail(msg.str());
    }
    if (!(v.fast_lower > 0.0)) {
      std::ostringstream msg;
      msg << "(1+theta) m1 - (theta M2 - m2) = " << v.fast_lower
          << " must be positive for gamma < 3";
      fail(msg.str());
    }
  }
  v.admissible = v.violations.empty();
  return v;
}

double EigenvalueEnvelope::max_abs_lambda() const {
  return std::max(1.0 / std::abs(beta_minus_hi), 1.0 / beta_plus_lo);
}

EigenvalueEnvelope eigenvalue_envelope(const RegionBounds& b,
                                       const GammaParams& p) {
  EigenvalueEnvelope e;
  if (p.theta == 1.0) {
    // beta - sigma and beta + sigma are w2 and w1 themselves, and the max-min
    // principle confines those to their initial boxes exactly.
    e.beta_minus_lo = b.m2;
    e.beta_minus_hi = b.M2;
    e.beta_plus_lo = b.m1;
    e.beta_plus_hi = b.M1;
  } else {
    const double th = p.theta;
    e.beta_minus_lo = 0.5 * ((b.m1 - th * b.M1) + (1.0 + th) * b.m2);
    e.beta_minus_hi = 0.5 * ((b.M1 - th * b.m1) + (1.0 + th) * b.M2);
    e.beta_plus_lo = 0.5 * ((1.0 + th) * b.m1 - (th * b.M2 - b.m2));
    e.beta_plus_hi = 0.5 * ((1.0 + th) * b.M1 + (b.M2 - th * b.m2));
  }
  if (!(e.beta_minus_hi < 0.0) || !(e.beta_plus_lo > 0.0)) {
    std::ostringstream msg;
    msg << "speed envelope straddles zero (beta - sigma^theta <= " << e.beta_minus_hi
        << ", beta + sigma^theta >= " << e.beta_plus_lo
        << "); the bounds are inadmissible";
    throw GateError(msg.str());
  }
  return e;
}

RegionCertificate certify_runtime_region(std::span<const double> x,
                                         std::span<const RiemannState> field,
                                         const RegionBounds& b,
                                         const GammaParams& p, double tol) {
  if (x.size() != field.size()) {
    throw ParameterError("certify_runtime_region: coordinate and field sizes differ");
  }
  RegionCertificate cert;
  cert.tol = tol;
  cert.max_excess = 0.0;
  cert.n_samples = field.size();

  auto check = [&](std::size_t i, const char* what, double excess) {
    if (excess > cert.max_excess) cert.max_excess = excess;
    if (excess > tol) {
      cert.violations.push_back({i, x[i], what, excess});
    }
  };

  for (std::size_t i = 0; i < field.size(); ++i) {
    const RiemannState& w = field[i];
    if (!std::isfinite(w.w1) || !std::isfinite(w.w2)) {
      cert.max_excess = std::numeric_limits<double>::infinity();
      cert.violations.push_back(
          {i, x[i], "non-finite field value",
           std::numeric_limits<double>::infinity()});
      continue;
    }
    check(i, "w1 below m1", b.m1 - w.w1);
    check(i, "w1 above M1", w.w1 - b.M1);
    check(i, "w2 below m2", b.m2 - w.w2);
    check(i, "w2 above M2", w.w2 - b.M2);
    // strict hyperbolicity: sigma^theta > |beta|, written in invariants
    const double margin =
        0.5 * (p.theta * (w.w1 - w.w2)) - std::abs(0.5 * (w.w1 + w.w2));
    check(i, "sigma^theta - |beta| not positive", -margin);
  }
  cert.pass = cert.violations.empty();
  return cert;
}

}  // namespace carroll
