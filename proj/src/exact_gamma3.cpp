#include "carroll/exact_gamma3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace carroll {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFamilyTieRel = 1e-9;

std::string gate_message(const AdmissibilityVerdict& v) {
  std::ostringstream msg;
  msg << "initial data rejected by the admissibility gate:";
  for (const auto& why : v.violations) msg << " [" << why << "]";
  return msg.str();
}

}  // namespace

Gamma3Solver::Gamma3Solver(const InitialData& data)
    : data_(data), params_(make_params(3.0)) {
  bounds_ = region_bounds(data, params_, scan_points_);
  verdict_ = admissibility_gate(bounds_, params_);
  if (!verdict_.admissible) {
    throw GateError(gate_message(verdict_));
  }

  // sup (sigma0 + |beta0|)^2 == max(sup w1, sup(-w2))^2 at theta = 1.
  const double amp = std::max(bounds_.M1, -bounds_.m2);
  lipschitz_constant_ = amp * amp;

  // Blow-up prediction: per family, minimise w_j(0,x)^2 / w_jx(0,x) over the
  // points with positive slope.  Grid scan plus golden-section polish; the
  // far field has zero slope and never contributes.
  const double lo = data.x_lo(), hi = data.x_hi();
  const int n = scan_points_;
  const double dx = (hi - lo) / (n - 1);
  double best_t[3] = {kInf, kInf, kInf};  // index by family
  double best_x[3] = {kNaN, kNaN, kNaN};
  bool any_positive_slope = false;

  for (int family = 1; family <= 2; ++family) {
    auto objective = [&](double x) {
      const double a = slope0(family, x);
      if (!(a > 0.0)) return kInf;
      const double w = invariant0(family, x);
      return w * w / a;
    };
    double prev2 = objective(lo), prev1 = objective(lo + dx);
    double fmin = std::min(prev2, prev1);
    double xmin = prev2 <= prev1 ? lo : lo + dx;
    for (int i = 2; i < n; ++i) {
      const double xi = lo + i * dx;
      const double fi = objective(xi);
      if (fi < fmin) {
        fmin = fi;
        xmin = xi;
      }
      // polish interior dips of the sampled objective
      if (prev1 < prev2 && prev1 < fi && std::isfinite(prev1)) {
        double a = xi - 2 * dx, b = xi;
        constexpr double inv_phi = 0.6180339887498949;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = objective(c), fd = objective(d);
        for (int it = 0; it < 90; ++it) {
          if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
          } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
          }
        }
        const double xm = 0.5 * (a + b);
        const double fm = objective(xm);
        if (fm < fmin) {
          fmin = fm;
          xmin = xm;
        }
      }
      prev2 = prev1;
      prev1 = fi;
    }
    best_t[family] = fmin;
    best_x[family] = std::isfinite(fmin) ? xmin : kNaN;

    if (!any_positive_slope) {
      for (int i = 0; i < n; ++i) {
        const int f = family;
        if (slope0(f, lo + i * dx) > 0.0) {
          any_positive_slope = true;
          break;
        }
      }
    }
  }

  if (!any_positive_slope) {
    report_ = {BlowupVerdict::global_existence, kInf, kInf, kInf,
               BlowupFamily::none, kNaN};
  } else {
    const double t1 = best_t[1], t2 = best_t[2];
    const double t_star = std::min(t1, t2);
    BlowupFamily family;
    double x0;
    if (std::abs(t1 - t2) <= kFamilyTieRel * t_star) {
      family = BlowupFamily::both;
      x0 = t1 <= t2 ? best_x[1] : best_x[2];
    } else if (t1 < t2) {
      family = BlowupFamily::forward;
      x0 = best_x[1];
    } else {
      family = BlowupFamily::backward;
      x0 = best_x[2];
    }
    report_ = {BlowupVerdict::finite_time_blowup, t_star, t_star, t_star,
               family, x0};
  }
}

double Gamma3Solver::invariant0(int family, double x0) const {
  const RiemannState w = data_.riemann(x0, params_);
  return family == 1 ? w.w1 : w.w2;
}

double Gamma3Solver::slope0(int family, double x0) const {
  const DerivativeField d = derivative_field(data_, x0, params_);
  return family == 1 ? d.w1_x : d.w2_x;
}

double Gamma3Solver::w1_0(double x0) const { return invariant0(1, x0); }
double Gamma3Solver::w2_0(double x0) const { return invariant0(2, x0); }

double Gamma3Solver::characteristic_position(int family, double x0,
                                             double t) const {
  if (family != 1 && family != 2) {
    throw ParameterError("family must be 1 or 2");
  }
  return x0 + t / invariant0(family, x0);
}

double Gamma3Solver::foot_point(int family, double t, double x) const {
  if (family != 1 && family != 2) {
    throw ParameterError("family must be 1 or 2");
  }
  if (t == 0.0) return x;

  // Speeds stay inside [1/M, 1/m] (family 1) resp. [1/M2, 1/m2] (family 2),
  // so the foot point is bracketed by x - t/m and x - t/M.
  const double m = family == 1 ? bounds_.m1 : bounds_.m2;
  const double M = family == 1 ? bounds_.M1 : bounds_.M2;
  double lo = x - t / m, hi = x - t / M;
  if (lo > hi) std::swap(lo, hi);
  const double pad = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
  lo -= pad;
  hi += pad;

  auto g = [&](double x0) {
    return x0 + t / invariant0(family, x0) - x;
  };
  double glo = g(lo), ghi = g(hi);
  if (glo > 0.0 || ghi < 0.0) {
    std::ostringstream msg;
    msg << "foot-point bracket [" << lo << ", " << hi
        << "] lost for family " << family << " at (t, x) = (" << t << ", " << x
        << ")";
    throw BracketError(msg.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm <= 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  return 0.5 * (lo + hi);
}

RiemannState Gamma3Solver::state(double t, double x) const {
  if (!(t >= 0.0)) {
    throw ParameterError("exact evaluation requires t >= 0");
  }
  if (t >= report_.t_star) {
    std::ostringstream msg;
    msg << "t = " << t << " is at or beyond the predicted blow-up time "
        << report_.t_star << "; the classical solution has ended";
    throw HorizonError(msg.str());
  }
  RiemannState w;
  w.w1 = invariant0(1, foot_point(1, t, x));
  w.w2 = invariant0(2, foot_point(2, t, x));
  return w;
}

std::vector<RiemannState> Gamma3Solver::solve(double t,
                                              std::span<const double> x) const {
  std::vector<RiemannState> out;
  out.reserve(x.size());
  for (double xi : x) out.push_back(state(t, xi));
  return out;
}

double Gamma3Solver::slope_along(int family, double x0, double t) const {
  if (family != 1 && family != 2) {
    throw ParameterError("family must be 1 or 2");
  }
  if (!(t >= 0.0)) {
    throw ParameterError("slope evaluation requires t >= 0");
  }
  const double a0 = slope0(family, x0);
  if (a0 == 0.0) return 0.0;
  const double w = invariant0(family, x0);
  if (a0 > 0.0) {
    const double t_char = w * w / a0;
    if (t >= t_char) {
      std::ostringstream msg;
      msg << "slope along family " << family << " characteristic from x0 = "
          << x0 << " diverges at t = " << t_char;
      throw BlowupError(msg.str(), t_char);
    }
  }
  return a0 / (1.0 - t * a0 / (w * w));
}

LipschitzCertificate Gamma3Solver::one_sided_lipschitz(
    double t, std::span<const double> x) const {
  if (!(t > 0.0)) {
    throw ParameterError("the one-sided Lipschitz bound -C/t needs t > 0");
  }
  if (t >= report_.t_star) {
    std::ostringstream msg;
    msg << "t = " << t << " is at or beyond the blow-up time "
        << report_.t_star;
    throw HorizonError(msg.str());
  }
  LipschitzCertificate cert;
  cert.t = t;
  cert.constant = lipschitz_constant_;
  cert.worst_margin = kInf;
  cert.worst_x = kNaN;
  cert.worst_family = 0;
  cert.n_samples = 2 * x.size();
  const double floor = -lipschitz_constant_ / t;
  for (double xi : x) {
    for (int family = 1; family <= 2; ++family) {
      const double slope = slope_along(family, foot_point(family, t, xi), t);
      const double margin = slope - floor;
      if (margin < cert.worst_margin) {
        cert.worst_margin = margin;
        cert.worst_x = xi;
        cert.worst_family = family;
      }
    }
  }
  // The bound is strict mathematically; concede only rounding noise.
  cert.pass = cert.worst_margin >= -1e-12 * std::abs(floor);
  return cert;
}

BlowupReport predict_blowup_gamma3(const InitialData& data) {
  return Gamma3Solver(data).blowup();
}

std::vector<RiemannState> solve_exact_gamma3(const InitialData& data, double t,
                                             std::span<const double> x) {
  return Gamma3Solver(data).solve(t, x);
}

double alpha_along_characteristic_gamma3(const InitialData& data, int family,
                                         double x0, double t) {
  return Gamma3Solver(data).slope_along(family, x0, t);
}

LipschitzCertificate one_sided_lipschitz_certificate_gamma3(
    const InitialData& data, double t, std::span<const double> x) {
  return Gamma3Solver(data).one_sided_lipschitz(t, x);
}

}  // namespace carroll
