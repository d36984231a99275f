#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "carroll/initial_data.hpp"
#include "carroll/state_algebra.hpp"

namespace carroll {

// Pointwise wave character from the signs of the speed slopes.  The forward
// family transports w1 at speed lambda2, the backward family w2 at lambda1.
// A nonnegative slope of the family's speed means the characteristics spread
// (rarefactive); a negative one means they focus (compressive).  Boundary
// zeros count as rarefactive, so fr == !fc and br == !bc always.
struct PointClass {
  bool fr;  // forward rarefactive:  d lambda2 / dx >= 0
  bool br;  // backward rarefactive: d lambda1 / dx >= 0
  bool fc;  // forward compressive:  d lambda2 / dx < 0
  bool bc;  // backward compressive: d lambda1 / dx < 0
};

PointClass classify_point(double lambda1_x, double lambda2_x);

// Classification of an initial profile at x, with the speed slopes obtained
// from the invariant slopes via the chain rule.
PointClass classify_initial_point(const InitialData& data, double x,
                                  const GammaParams& p);

// Extremes of the initial Riemann invariants over the real line:
// m1 = inf w1, M1 = sup w1, m2 = inf w2, M2 = sup w2.
struct RegionBounds {
  double m1;
  double M1;
  double m2;
  double M2;
};

// Scans the truncation interval on a fine grid, refines every interior local
// extremum, and folds in the declared far-field values.
RegionBounds region_bounds(const InitialData& data, const GammaParams& p,
                           int scan_points = 8193);

// Invariant-region admissibility.  The sign conditions inf w1 > 0 > sup w2
// are always required; for gamma < 3 the two coupling conditions
//   (M1 - theta m1) + (1+theta) M2 < 0  and  (1+theta) m1 - (theta M2 - m2) > 0
// are additionally required (they keep the characteristic speeds away from
// the degeneracy for all states inside the box).  At gamma = 3 the box alone
// suffices and the coupling conditions are evaluated but not enforced.
struct AdmissibilityVerdict {
  bool admissible;
  double inf_w1;             // m1, needs > 0
  double sup_w2;             // M2, needs < 0
  double slow_upper;         // (M1 - theta m1) + (1+theta) M2, needs < 0 when gamma < 3
  double fast_lower;         // (1+theta) m1 - (theta M2 - m2), needs > 0 when gamma < 3
  bool coupling_enforced;    // false exactly when gamma == 3
  std::vector<std::string> violations;
};

AdmissibilityVerdict admissibility_gate(const RegionBounds& b, const GammaParams& p);

// Guaranteed range of beta -+ sigma^theta over every state the evolution can
// reach from data with these bounds.  For theta < 1:
//   (m1 - theta M1 + (1+theta) m2)/2 <= beta - sigma^theta <= (M1 - theta m1 + (1+theta) M2)/2,
//   ((1+theta) m1 - (theta M2 - m2))/2 <= beta + sigma^theta <= ((1+theta) M1 + M2 - theta m2)/2.
// At theta == 1 these collapse to the exact ranges [m2, M2] and [m1, M1]
// (beta -+ sigma are then w2 and w1 themselves).  Throws GateError when the
// envelope straddles zero, i.e. the bounds are inadmissible.
struct EigenvalueEnvelope {
  double beta_minus_lo;  // range of beta - sigma^theta (negative)
  double beta_minus_hi;
  double beta_plus_lo;   // range of beta + sigma^theta (positive)
  double beta_plus_hi;

  // Largest characteristic speed magnitude over the envelope:
  // |lambda1| <= 1/|beta_minus_hi| and lambda2 <= 1/beta_plus_lo.
  double max_abs_lambda() const;
};

EigenvalueEnvelope eigenvalue_envelope(const RegionBounds& b, const GammaParams& p);

// Runtime check of an evolved snapshot against the initial bounds: every
// sample must satisfy m_j - tol <= w_j <= M_j + tol and stay strictly inside
// the hyperbolic region (sigma^theta > |beta|).
struct RegionViolation {
  std::size_t index;
  double x;
  std::string what;   // which bound failed
  double excess;      // how far past it
};

struct RegionCertificate {
  bool pass;
  double tol;
  double max_excess;  // largest bound overshoot seen (0 if none)
  std::size_t n_samples;
  std::vector<RegionViolation> violations;
};

RegionCertificate certify_runtime_region(std::span<const double> x,
                                         std::span<const RiemannState> field,
                                         const RegionBounds& b,
                                         const GammaParams& p, double tol);

}  // namespace carroll
