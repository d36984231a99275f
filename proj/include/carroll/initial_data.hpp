#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "carroll/state_algebra.hpp"

namespace carroll {

// Declared asymptotic states.  Presets know theirs exactly; tabulated data is
// held constant beyond its sample range, so the far field is the end samples.
struct FarField {
  double sigma_left;
  double beta_left;
  double sigma_right;
  double beta_right;
};

struct TabulatedSample {
  double x;
  double sigma;
  double beta;
};

// Initial profile (sigma0, beta0) on the whole real line, evaluable together
// with its first derivatives.  Presets are analytic everywhere; tabulated
// profiles are interpolated with a monotonicity-preserving cubic inside the
// sample range and extended by constants outside it.
//
// The truncation interval [x_lo, x_hi] is where scans (bounds, blow-up
// minimisation, Lipschitz constants) sample the profile; evaluation remains
// valid outside it.
class InitialData {
 public:
  enum class Kind { preset, tabulated };

  // Named presets with keyword parameters (unknown keys are rejected):
  //   "constant":            sigma (>0, default 1), beta (default 0)
  //   "arctan-compressive":  sigma (>0, default 2), eps (>0, default 0.1);
  //                          beta0 = eps * arctan(x)
  //   "arctan-rarefactive":  same parameters; beta0 = -eps * arctan(x)
  //   "remark-family":       m (>0, default 1), theta ((0,1], default 0.5);
  //                          sigma0^theta = theta m (2+theta)/2 constant and
  //                          beta0 = (m theta / 2) tanh(x), which realises the
  //                          bounds m1 = m, M1 = (1+theta) m, m2 = -(1+theta) m,
  //                          M2 = -m when evaluated at the matching gamma
  //   "gaussian-bump":       sigma (>0, default 2), a (default 0.1), s (>0,
  //                          default 1); beta0 = a x exp(-x^2/s^2)
  // All presets accept x_lo / x_hi to override the truncation interval
  // (default [-20, 20]).
  static InitialData preset(const std::string& name,
                            const std::map<std::string, double>& params = {});

  // Strictly increasing x, at least 4 samples, sigma > 0 throughout.
  static InitialData tabulated(std::vector<TabulatedSample> samples);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double sigma(double x) const { return sigma_(x); }
  double beta(double x) const { return beta_(x); }
  double sigma_x(double x) const { return sigma_x_(x); }
  double beta_x(double x) const { return beta_x_(x); }

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  const FarField& far_field() const { return far_; }

  RiemannState riemann(double x, const GammaParams& p) const;

 private:
  InitialData() = default;

  Kind kind_ = Kind::preset;
  std::string name_;
  std::function<double(double)> sigma_, beta_, sigma_x_, beta_x_;
  double x_lo_ = -20.0;
  double x_hi_ = 20.0;
  FarField far_{1.0, 0.0, 1.0, 0.0};
};

// Spatial derivatives of the profile and of its Riemann coordinates at x:
//   w1_x = beta0' + sigma0^(theta-1) sigma0',
//   w2_x = beta0' - sigma0^(theta-1) sigma0'.
struct DerivativeField {
  double sigma_x;
  double beta_x;
  double w1_x;
  double w2_x;
};

DerivativeField derivative_field(const InitialData& data, double x,
                                 const GammaParams& p);

// Validating wrapper around InitialData::tabulated for pre-parsed samples.
InitialData ingest_tabulated(std::span<const TabulatedSample> samples);

// Reads a CSV file with header "x,sigma,beta" (UTF-8, '.' decimal separator).
InitialData read_tabulated_csv(const std::string& path);

}  // namespace carroll
