#pragma once

#include "carroll/errors.hpp"

namespace carroll {

// Adiabatic exponent and its characteristic power theta = (gamma - 1)/2.
// gamma is restricted to (1, 3], so theta lies in (0, 1].  theta is the
// exponent through which sigma enters the Riemann coordinates, and 1/theta
// the one through which they invert; keeping both avoids recomputing.
struct GammaParams {
  double gamma;
  double theta;
};

// Validates gamma and derives theta.  gamma = 1 (the isothermal law) needs a
// logarithmic change of variables that this library does not implement, and
// gamma > 3 breaks the ordering of the characteristic speeds, so both are
// rejected.
GammaParams make_params(double gamma);

// Primitive fields.  sigma must stay strictly positive: sigma = 0 is the
// liquescence threshold where the system stops being hyperbolic.
struct FluidState {
  double sigma;
  double beta;
};

// Riemann coordinates w1 = beta + sigma^theta/theta, w2 = beta - sigma^theta/theta.
// sigma > 0 is equivalent to w1 > w2.
struct RiemannState {
  double w1;
  double w2;
};

// A direction or gradient in (sigma, beta) coordinates.
struct Vec2 {
  double d_sigma;
  double d_beta;
};

// Eigenstructure at a state.  mu1 = beta - sigma^theta and mu2 = beta + sigma^theta
// are the eigenvalues of the flux Jacobian in (sigma*beta, energy) form; the
// characteristic speeds of the evolution-in-t system are their reciprocals
// lambda_j = 1/mu_j, so lambda_j * mu_j == 1 identically.  r1, r2 are
// unnormalised eigenvector directions in (sigma, beta).
struct EigenData {
  double mu1;
  double mu2;
  double lambda1;
  double lambda2;
  Vec2 r1;
  Vec2 r2;
  bool near_degenerate;  // some |mu_j| fell inside the proximity band
};

inline constexpr double kDefaultDegeneracyTol = 1e-10;

// sigma^theta; throws LiquescenceError unless sigma > 0.
double sigma_pow_theta(double sigma, const GammaParams& p);

// Eigenstructure of the state.  Throws LiquescenceError for sigma <= 0 and
// DegeneracyError when beta equals +-sigma^theta exactly; states merely close
// to a degeneracy (within tol_degeneracy) are flagged, not rejected.
EigenData eigen(const FluidState& s, const GammaParams& p,
                double tol_degeneracy = kDefaultDegeneracyTol);

RiemannState to_riemann(const FluidState& s, const GammaParams& p);

// Inverse map; requires w1 > w2 (otherwise no positive sigma exists and
// InversionError is thrown).
FluidState from_riemann(const RiemannState& w, const GammaParams& p);

// Characteristic speeds written directly in Riemann coordinates:
//   lambda1 = 2 / ((1-theta) w1 + (1+theta) w2),
//   lambda2 = 2 / ((1+theta) w1 + (1-theta) w2).
// The denominators are 2(beta -+ sigma^theta); a vanishing one is the same
// degeneracy as in eigen() and throws DegeneracyError.
double lambda1_riemann(const RiemannState& w, const GammaParams& p);
double lambda2_riemann(const RiemannState& w, const GammaParams& p);

// Partial derivatives of the speeds with respect to (w1, w2); used to turn
// invariant slopes into speed slopes for classification.
struct LambdaJacobian {
  double d1_dw1;
  double d1_dw2;
  double d2_dw1;
  double d2_dw2;
};
LambdaJacobian lambda_jacobian_riemann(const RiemannState& w, const GammaParams& p);

// Gradients of the speeds in primitive coordinates:
//   grad lambda1 = ( theta sigma^(theta-1), -1) / (beta - sigma^theta)^2,
//   grad lambda2 = (-theta sigma^(theta-1), -1) / (beta + sigma^theta)^2.
// Their pairings with r1, r2 are strictly positive resp. negative wherever the
// state is non-degenerate, i.e. both characteristic families are genuinely
// nonlinear.
Vec2 grad_lambda1(const FluidState& s, const GammaParams& p);
Vec2 grad_lambda2(const FluidState& s, const GammaParams& p);

// Quantities exchanged with the dual (Galilean) description of the same flow:
// an energy density epsilon = sigma^gamma / gamma, the flux
// varpi = sigma beta^2 / 2 + sigma^gamma / (gamma (gamma - 1)), a pressure
// that vanishes identically in this frame, and the triple (rho, v, p) the
// Galilean side reads off the Carrollian one.
struct DualityDiagnostics {
  double epsilon;
  double varpi;
  double pi;
  double galilean_rho;
  double galilean_v;
  double galilean_p;
};

DualityDiagnostics duality_diagnostics(const FluidState& s, const GammaParams& p);

}  // namespace carroll
