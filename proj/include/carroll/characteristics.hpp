#pragma once

#include <span>
#include <vector>

#include "carroll/classification.hpp"
#include "carroll/initial_data.hpp"

namespace carroll {

// General-gamma characteristic machinery.  For gamma in (1, 3) the families
// couple: w1 is transported at lambda2(w1, w2) and w2 at lambda1(w1, w2), so
// each characteristic needs the other family's field along its path.  A
// waveform (Picard) iteration over a bundle of traces from both families
// converges that field; individual traces and Riccati slope integrals are
// then evaluated through it.

// Logarithm of the integrating factor that linearises the slope equation
// along a family-j characteristic, with q = (1-theta)/(2theta):
//   h1 = -q log(w1 - w2) - log( (1+theta) w1 + (1-theta) w2 ),
//   h2 = -q log(w1 - w2) - log( -[(1-theta) w1 + (1+theta) w2] ).
// Throws RegionError when a logarithm argument is nonpositive (the state is
// outside the admissible region).
double integrating_factor(const RiemannState& w, int family, const GammaParams& p);

// Integrand of the rescaled-slope reciprocal:
//   family 1: (w1 - w2)^q / ( (1+theta) w1 + (1-theta) w2 ),
//   family 2: (w1 - w2)^q / (-[(1-theta) w1 + (1+theta) w2]).
// Strictly positive on the admissible region.
double riccati_integrand(const RiemannState& w, int family, const GammaParams& p);

struct TraceNode {
  double t;
  double x;
  double w1;
  double w2;
};

enum class TraceStatus { alive, blown_up, horizon_reached };

struct CharacteristicTrace {
  int family;  // 1: carries w1 at speed lambda2 > 0, 2: carries w2 at lambda1 < 0
  double x0;
  TraceStatus status;
  std::vector<TraceNode> nodes;
};

struct BundleConfig {
  double dx = 0.02;        // foot-point spacing of the bundle
  double cfl = 0.9;        // bundle step: dt = cfl * dx / max|lambda|
  int max_sweeps = 50;
  double tol = 1e-10;      // sweep-to-sweep field change to declare convergence
  double pad_factor = 1.1; // domain padding beyond t_end * max|lambda|
};

// Picard-converged two-family characteristic field up to t_end.  Positions of
// all bundle traces are re-integrated each sweep against the other family's
// previous-sweep field (Jacobi ordering, so results do not depend on trace
// order), until the largest change in the field each trace experiences drops
// below cfg.tol.  IterationError if that does not happen within max_sweeps;
// BlowupError if same-family characteristics cross before t_end (the horizon
// was set past the gradient catastrophe).
class CharacteristicField {
 public:
  CharacteristicField(const InitialData& data, const GammaParams& p,
                      double t_end, BundleConfig cfg = {});

  double t_end() const { return t_end_; }
  int sweeps() const { return sweeps_; }
  double residual() const { return residual_; }
  const GammaParams& params() const { return params_; }
  const RegionBounds& bounds() const { return bounds_; }

  // Field lookup, linear in position between traces and linear in time
  // between levels; beyond the bundle the far-field constants apply.
  double w1_at(double t, double x) const;
  double w2_at(double t, double x) const;
  RiemannState state(double t, double x) const;

  // Integrates one family-j characteristic from x0 at step dt (Heun) through
  // the converged field up to t_target.  dt may be finer than the bundle's
  // internal step.  For t_target beyond t_end() the trace continues with the
  // foreign invariant frozen at its last field value; that extension is exact
  // once the trace has left the perturbed zone (the foreign invariant is a
  // far-field constant there) and is how per-foot-point Riccati crossings
  // later than the first catastrophe are reached at all, since no classical
  // field exists beyond it.
  CharacteristicTrace trace(int family, double x0, double dt,
                            double t_target) const;

 private:
  double foreign_at(int family, double t, double x) const;
  double level_value(int foreign_family, std::size_t level, double x) const;

  GammaParams params_;
  RegionBounds bounds_;
  double t_end_;
  InitialData data_;
  int sweeps_ = 0;
  double residual_ = 0.0;
  double far_w1_left_, far_w1_right_, far_w2_left_, far_w2_right_;

  std::vector<double> times_;  // bundle time levels, uniformly spaced
  std::size_t n_traces_ = 0;
  std::vector<double> const1_;  // w1 constants of family-1 traces
  std::vector<double> const2_;  // w2 constants of family-2 traces
  // positions, level-major: pos[k * n_traces_ + i]
  std::vector<double> pos1_, pos2_;
};

// Convenience wrapper: converge a field to t_end, then extract one trace.
CharacteristicTrace trace_characteristic(const InitialData& data,
                                         const GammaParams& p, int family,
                                         double x0, double t_end, double dt,
                                         BundleConfig cfg = {});

// Trapezoid integration of the rescaled-slope reciprocal along a trace:
//   1/alpha~(t) = 1/alpha~(0) - 2 (1+theta) integral of riccati_integrand,
// alpha~ = exp(h_family) alpha.  For alpha0 > 0 the reciprocal decreases
// through zero at the slope catastrophe; the crossing is located by linear
// interpolation between nodes.  For alpha0 <= 0 no crossing ever occurs.
struct RiccatiResult {
  bool blew_up;
  double t_blowup;         // crossing time (NaN when !blew_up)
  double alpha_end;        // slope at the final node (NaN when blew_up)
  double reciprocal_end;   // 1/alpha~ at the final node (diagnostic)
};

RiccatiResult integrate_riccati(const CharacteristicTrace& trace, double alpha0,
                                const GammaParams& p);

// Predicted blow-up window for the characteristic seeded at x0 with positive
// initial slope.  [t_lo, t_hi] pins the own invariant to its exact constant
// along the trace and ranges the foreign one over its global bounds; the
// monotonicity of the integrand in the foreign invariant makes these sharp,
// and at theta == 1 they collapse to the single point w_j^2 / w_jx.
// [t_lo_outer, t_hi_outer] ranges both invariants over the global box (the
// coarser bracket that needs no trace information beyond the scaled slope).
// For family 2 an alternate reading that scales by the family-1 slope instead
// is reported when that slope is also positive (alt_valid).
struct BlowupInterval {
  int family;
  double x0;
  double alpha0;          // initial slope w_jx(0, x0) > 0
  double t_lo, t_hi;
  double t_lo_outer, t_hi_outer;
  bool alt_valid;
  double alt_t_lo, alt_t_hi;
};

// Per-sample blow-up windows over a grid of foot points (empty when both
// slopes are nonpositive everywhere: the solution is global).
// GateError for inadmissible data.
std::vector<BlowupInterval> blowup_bounds_general(const InitialData& data,
                                                  const GammaParams& p,
                                                  int n_samples = 257);

// Aggregate of the per-sample windows: blow-up cannot happen before
// earliest_possible and must happen by earliest_guaranteed, with golden-
// section refinement of the minimising foot point per family.
struct BlowupEnvelope {
  bool blows_up;
  double earliest_possible;   // min over samples of t_lo (+inf if global)
  double earliest_guaranteed; // min over samples of t_hi (+inf if global)
  int family;                 // family achieving earliest_guaranteed
  double x0;
};

BlowupEnvelope blowup_envelope_general(const InitialData& data,
                                       const GammaParams& p,
                                       int n_samples = 257);

// Certificate that inf_x w_jx(t, .) >= -C_j/t, with the per-family constants
//   C1 = (M1-m2)^q ((1+theta) M1 + M2 - theta m2)^2 / (2 (1+theta) (m1-M2)^q),
//   C2 = (M1-m2)^q (m1 - theta M1 + (1+theta) m2)^2 / (2 (1+theta) (m1-M2)^q),
// checked by integrating slopes along a bundle of characteristics from both
// families.  Requires 0 < t below the earliest possible blow-up.
struct GeneralLipschitzCertificate {
  bool pass;
  double t;
  double constant1;
  double constant2;
  double worst_margin;  // min over samples of w_jx(t) + C_j/t
  double worst_x0;
  int worst_family;
  std::size_t n_samples;
};

GeneralLipschitzCertificate one_sided_lipschitz_certificate_general(
    const InitialData& data, const GammaParams& p, double t, int n_samples = 65);

}  // namespace carroll
