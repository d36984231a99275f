#include "carroll/state_algebra.hpp"

#include <cmath>
#include <sstream>

namespace carroll {

namespace {

void require_finite_state(const FluidState& s) {
  if (!std::isfinite(s.sigma) || !std::isfinite(s.beta)) {
    throw DataError("non-finite state (sigma, beta)");
  }
}

void require_positive_sigma(double sigma) {
  if (sigma <= 0.0) {
    std::ostringstream msg;
    msg << "sigma = " << sigma
        << " is at or below the liquescence threshold; states require sigma > 0";
    throw LiquescenceError(msg.str());
  }
}

}  // namespace

GammaParams make_params(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 1.0 || gamma > 3.0) {
    std::ostringstream msg;
    msg << "adiabatic exponent gamma must lie in (1, 3], got " << gamma;
    if (gamma == 1.0) {
      msg << " (the isothermal law gamma = 1 is outside this library's scope)";
    }
    throw ParameterError(msg.str());
  }
  return {gamma, 0.5 * (gamma - 1.0)};
}

double sigma_pow_theta(double sigma, const GammaParams& p) {
  require_positive_sigma(sigma);
  return p.theta == 1.0 ? sigma : std::pow(sigma, p.theta);
}

EigenData eigen(const FluidState& s, const GammaParams& p, double tol_degeneracy) {
  require_finite_state(s);
  require_positive_sigma(s.sigma);

  const double c = sigma_pow_theta(s.sigma, p);
  const double mu1 = s.beta - c;
  const double mu2 = s.beta + c;
  if (mu1 == 0.0 || mu2 == 0.0) {
    std::ostringstream msg;
    msg << "degenerate state: beta = " << s.beta << " equals "
        << (mu1 == 0.0 ? "+" : "-") << "sigma^theta = " << (mu1 == 0.0 ? c : -c)
        << ", characteristic speeds are undefined";
    throw DegeneracyError(msg.str());
  }

  EigenData e;
  e.mu1 = mu1;
  e.mu2 = mu2;
  e.lambda1 = 1.0 / mu1;
  e.lambda2 = 1.0 / mu2;
  const double slope = std::pow(s.sigma, p.theta - 1.0);
  e.r1 = {1.0, -slope};
  e.r2 = {1.0, slope};
  e.near_degenerate = std::min(std::abs(mu1), std::abs(mu2)) < tol_degeneracy;
  return e;
}

RiemannState to_riemann(const FluidState& s, const GammaParams& p) {
  require_finite_state(s);
  require_positive_sigma(s.sigma);
  const double c = sigma_pow_theta(s.sigma, p) / p.theta;
  return {s.beta + c, s.beta - c};
}

FluidState from_riemann(const RiemannState& w, const GammaParams& p) {
  if (!std::isfinite(w.w1) || !std::isfinite(w.w2)) {
    throw DataError("non-finite Riemann state (w1, w2)");
  }
  if (!(w.w1 > w.w2)) {
    std::ostringstream msg;
    msg << "cannot invert Riemann coordinates with w1 = " << w.w1
        << " <= w2 = " << w.w2 << "; positive sigma requires w1 > w2";
    throw InversionError(msg.str());
  }
  const double half_gap = 0.5 * p.theta * (w.w1 - w.w2);  // sigma^theta
  const double sigma =
      p.theta == 1.0 ? half_gap : std::pow(half_gap, 1.0 / p.theta);
  return {sigma, 0.5 * (w.w1 + w.w2)};
}

double lambda1_riemann(const RiemannState& w, const GammaParams& p) {
  const double d = (1.0 - p.theta) * w.w1 + (1.0 + p.theta) * w.w2;
  if (d == 0.0) {
    throw DegeneracyError("lambda1 undefined: (1-theta) w1 + (1+theta) w2 == 0");
  }
  return 2.0 / d;
}

double lambda2_riemann(const RiemannState& w, const GammaParams& p) {
  const double d = (1.0 + p.theta) * w.w1 + (1.0 - p.theta) * w.w2;
  if (d == 0.0) {
    throw DegeneracyError("lambda2 undefined: (1+theta) w1 + (1-theta) w2 == 0");
  }
  return 2.0 / d;
}

LambdaJacobian lambda_jacobian_riemann(const RiemannState& w, const GammaParams& p) {
  const double d1 = (1.0 - p.theta) * w.w1 + (1.0 + p.theta) * w.w2;
  const double d2 = (1.0 + p.theta) * w.w1 + (1.0 - p.theta) * w.w2;
  if (d1 == 0.0 || d2 == 0.0) {
    throw DegeneracyError("speed derivatives undefined at a degenerate state");
  }
  LambdaJacobian j;
  j.d1_dw1 = -2.0 * (1.0 - p.theta) / (d1 * d1);
  j.d1_dw2 = -2.0 * (1.0 + p.theta) / (d1 * d1);
  j.d2_dw1 = -2.0 * (1.0 + p.theta) / (d2 * d2);
  j.d2_dw2 = -2.0 * (1.0 - p.theta) / (d2 * d2);
  return j;
}

Vec2 grad_lambda1(const FluidState& s, const GammaParams& p) {
  const EigenData e = eigen(s, p);
  const double denom = e.mu1 * e.mu1;
  return {p.theta * std::pow(s.sigma, p.theta - 1.0) / denom, -1.0 / denom};
}

Vec2 grad_lambda2(const FluidState& s, const GammaParams& p) {
  const EigenData e = eigen(s, p);
  const double denom = e.mu2 * e.mu2;
  return {-p.theta * std::pow(s.sigma, p.theta - 1.0) / denom, -1.0 / denom};
}

DualityDiagnostics duality_diagnostics(const FluidState& s, const GammaParams& p) {
  require_finite_state(s);
  require_positive_sigma(s.sigma);
  DualityDiagnostics d;
  const double sigma_gamma = std::pow(s.sigma, p.gamma);
  d.epsilon = sigma_gamma / p.gamma;
  d.varpi = 0.5 * s.sigma * s.beta * s.beta +
            sigma_gamma / (p.gamma * (p.gamma - 1.0));
  d.pi = 0.0;
  d.galilean_rho = s.sigma;
  d.galilean_v = s.beta;
  d.galilean_p = d.epsilon;
  return d;
}

}  // namespace carroll
