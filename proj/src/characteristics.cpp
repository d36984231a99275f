#include "carroll/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

namespace carroll {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double q_exponent(const GammaParams& p) {
  return (1.0 - p.theta) / (2.0 * p.theta);
}

void require_family(int family) {
  if (family != 1 && family != 2) {
    throw ParameterError("family must be 1 or 2");
  }
}

std::string gate_message(const AdmissibilityVerdict& v) {
  std::ostringstream msg;
  msg << "initial data rejected by the admissibility gate:";
  for (const auto& why : v.violations) msg << " [" << why << "]";
  return msg.str();
}

// Piecewise-linear lookup in one bundle row.  pos is ascending; the cursor j
// carries locality between consecutive queries with nondecreasing x.
double row_lookup(const double* pos, const double* val, std::size_t n,
                  double far_left, double far_right, double x, std::size_t& j) {
  if (x <= pos[0]) return far_left;
  if (x >= pos[n - 1]) return far_right;
  if (j > n - 2) j = n - 2;
  while (pos[j] > x && j > 0) --j;
  while (j + 1 < n - 1 && pos[j + 1] < x) ++j;
  const double gap = pos[j + 1] - pos[j];
  if (gap <= 0.0) return val[j];
  const double f = (x - pos[j]) / gap;
  return val[j] * (1.0 - f) + val[j + 1] * f;
}

}  // namespace

double integrating_factor(const RiemannState& w, int family,
                          const GammaParams& p) {
  require_family(family);
  const double gap = w.w1 - w.w2;
  if (!(gap > 0.0)) {
    throw RegionError("integrating factor undefined: w1 - w2 must be positive");
  }
  const double denom =
      family == 1 ? (1.0 + p.theta) * w.w1 + (1.0 - p.theta) * w.w2
                  : -((1.0 - p.theta) * w.w1 + (1.0 + p.theta) * w.w2);
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "integrating factor undefined for family " << family
        << ": state (" << w.w1 << ", " << w.w2
        << ") is outside the admissible region";
    throw RegionError(msg.str());
  }
  return -q_exponent(p) * std::log(gap) - std::log(denom);
}

double riccati_integrand(const RiemannState& w, int family,
                         const GammaParams& p) {
  require_family(family);
  const double gap = w.w1 - w.w2;
  if (!(gap > 0.0)) {
    throw RegionError("Riccati integrand undefined: w1 - w2 must be positive");
  }
  const double denom =
      family == 1 ? (1.0 + p.theta) * w.w1 + (1.0 - p.theta) * w.w2
                  : -((1.0 - p.theta) * w.w1 + (1.0 + p.theta) * w.w2);
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "Riccati integrand undefined for family " << family
        << ": state (" << w.w1 << ", " << w.w2
        << ") is outside the admissible region";
    throw RegionError(msg.str());
  }
  return std::pow(gap, q_exponent(p)) / denom;
}

CharacteristicField::CharacteristicField(const InitialData& data,
                                         const GammaParams& p, double t_end,
                                         BundleConfig cfg)
    : params_(p), t_end_(t_end), data_(data) {
  if (!(t_end > 0.0)) {
    throw ParameterError("characteristic field needs t_end > 0");
  }
  if (!(cfg.dx > 0.0) || !(cfg.cfl > 0.0) || cfg.cfl > 1.0) {
    throw ParameterError("bundle needs dx > 0 and cfl in (0, 1]");
  }

  bounds_ = region_bounds(data, p);
  const AdmissibilityVerdict verdict = admissibility_gate(bounds_, p);
  if (!verdict.admissible) {
    throw GateError(gate_message(verdict));
  }
  const EigenvalueEnvelope env = eigenvalue_envelope(bounds_, p);
  const double max_lambda = env.max_abs_lambda();

  const FarField& ff = data.far_field();
  const RiemannState wl = to_riemann({ff.sigma_left, ff.beta_left}, p);
  const RiemannState wr = to_riemann({ff.sigma_right, ff.beta_right}, p);
  far_w1_left_ = wl.w1;
  far_w1_right_ = wr.w1;
  far_w2_left_ = wl.w2;
  far_w2_right_ = wr.w2;

  // Bundle domain: truncation interval padded by the characteristic range.
  const double pad = cfg.pad_factor * t_end * max_lambda + cfg.dx;
  const double lo = data.x_lo() - pad;
  const double hi = data.x_hi() + pad;
  n_traces_ = static_cast<std::size_t>(std::ceil((hi - lo) / cfg.dx)) + 1;
  const double dx = (hi - lo) / static_cast<double>(n_traces_ - 1);

  const std::size_t n_steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(t_end * max_lambda / (cfg.cfl * dx))));
  times_.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    times_[k] = t_end * static_cast<double>(k) / static_cast<double>(n_steps);
  }

  const std::size_t n = n_traces_;
  const std::size_t levels = n_steps + 1;
  const std::size_t cells = levels * n;

  const double clamp_tol = 1e-3 * dx;  // same-family crossing threshold
  const GammaParams& par = params_;

  std::vector<double> speed0_1(n), speed0_2(n);
  const1_.resize(n);
  const2_.resize(n);
  double data_lip = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = lo + dx * static_cast<double>(i);
    const RiemannState w = data.riemann(x0, par);
    const1_[i] = w.w1;
    const2_[i] = w.w2;
    speed0_1[i] = lambda2_riemann(w, par);
    speed0_2[i] = lambda1_riemann(w, par);
    const DerivativeField df = derivative_field(data, x0, par);
    data_lip = std::max({data_lip, std::abs(df.w1_x), std::abs(df.w2_x)});
  }
  if (data_lip == 0.0) data_lip = 1.0;  // constant data: any tolerance works

  // Sweep-0 guess: straight lines at the initial speeds.
  pos1_.resize(cells);
  pos2_.resize(cells);
  std::vector<double> new1(cells), new2(cells);
  for (std::size_t k = 0; k < levels; ++k) {
    const double tk = times_[k];
    double* row1 = pos1_.data() + k * n;
    double* row2 = pos2_.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double x0 = lo + dx * static_cast<double>(i);
      row1[i] = x0 + tk * speed0_1[i];
      row2[i] = x0 + tk * speed0_2[i];
    }
    for (std::size_t i = 1; i < n; ++i) {  // keep rows searchable
      row1[i] = std::max(row1[i], row1[i - 1]);
      row2[i] = std::max(row2[i], row2[i - 1]);
    }
  }

  // Waveform relaxation: re-integrate each family through the other family's
  // previous-sweep field until the experienced field stops changing.
  bool converged = false;
  double max_clamp = 0.0;
  double first_clamp_time = kInf;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double max_move = 0.0;
    max_clamp = 0.0;
    first_clamp_time = kInf;

    for (int fam = 1; fam <= 2; ++fam) {
      std::vector<double>& fresh = fam == 1 ? new1 : new2;
      const std::vector<double>& foreign_pos = fam == 1 ? pos2_ : pos1_;
      const std::vector<double>& foreign_val = fam == 1 ? const2_ : const1_;
      const std::vector<double>& own_const = fam == 1 ? const1_ : const2_;
      const std::vector<double>& old_pos = fam == 1 ? pos1_ : pos2_;
      const double far_l = fam == 1 ? far_w2_left_ : far_w1_left_;
      const double far_r = fam == 1 ? far_w2_right_ : far_w1_right_;

      for (std::size_t i = 0; i < n; ++i) {
        fresh[i] = lo + dx * static_cast<double>(i);
      }
      for (std::size_t k = 0; k + 1 < levels; ++k) {
        const double dtk = times_[k + 1] - times_[k];
        const double* frow_k = foreign_pos.data() + k * n;
        const double* frow_k1 = foreign_pos.data() + (k + 1) * n;
        const double* cur = fresh.data() + k * n;
        double* nxt = fresh.data() + (k + 1) * n;
        const double* old_row = old_pos.data() + (k + 1) * n;
        std::size_t ja = 0, jb = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double xk = cur[i];
          const double own = own_const[i];
          const double fa =
              row_lookup(frow_k, foreign_val.data(), n, far_l, far_r, xk, ja);
          const double sa = fam == 1 ? lambda2_riemann({own, fa}, par)
                                     : lambda1_riemann({fa, own}, par);
          const double xp = xk + dtk * sa;
          const double fb =
              row_lookup(frow_k1, foreign_val.data(), n, far_l, far_r, xp, jb);
          const double sb = fam == 1 ? lambda2_riemann({own, fb}, par)
                                     : lambda1_riemann({fb, own}, par);
          double xn = xk + 0.5 * dtk * (sa + sb);
          if (i > 0 && xn < nxt[i - 1]) {  // same-family crossing guard
            const double clamp = nxt[i - 1] - xn;
            if (clamp > max_clamp) {
              max_clamp = clamp;
              first_clamp_time = std::min(first_clamp_time, times_[k + 1]);
            }
            xn = nxt[i - 1];
          }
          nxt[i] = xn;
          max_move = std::max(max_move, std::abs(xn - old_row[i]));
        }
      }
    }

    std::swap(pos1_, new1);
    std::swap(pos2_, new2);
    sweeps_ = sweep;
    residual_ = data_lip * max_move;
    if (residual_ < cfg.tol) {
      converged = true;
      break;
    }
  }

  if (max_clamp > clamp_tol) {
    std::ostringstream msg;
    msg << "same-family characteristics cross near t = " << first_clamp_time
        << "; the requested horizon t_end = " << t_end
        << " lies beyond the gradient catastrophe";
    throw BlowupError(msg.str(), first_clamp_time);
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "characteristic bundle did not converge in " << cfg.max_sweeps
        << " sweeps (residual " << residual_ << ", tolerance " << cfg.tol << ")";
    throw IterationError(msg.str());
  }
}

double CharacteristicField::level_value(int foreign_family, std::size_t level,
                                        double x) const {
  const std::vector<double>& pos = foreign_family == 1 ? pos1_ : pos2_;
  const std::vector<double>& val = foreign_family == 1 ? const1_ : const2_;
  const double far_l = foreign_family == 1 ? far_w1_left_ : far_w2_left_;
  const double far_r = foreign_family == 1 ? far_w1_right_ : far_w2_right_;
  const double* row = pos.data() + level * n_traces_;
  const double* v = val.data();
  const std::size_t n = n_traces_;
  if (x <= row[0]) return far_l;
  if (x >= row[n - 1]) return far_r;
  const auto it = std::upper_bound(row, row + n, x);
  std::size_t j = static_cast<std::size_t>(it - row);
  j = j == 0 ? 0 : j - 1;
  if (j > n - 2) j = n - 2;
  const double gap = row[j + 1] - row[j];
  if (gap <= 0.0) return v[j];
  const double f = (x - row[j]) / gap;
  return v[j] * (1.0 - f) + v[j + 1] * f;
}

double CharacteristicField::foreign_at(int family, double t, double x) const {
  // family here is the *queried* invariant (1 -> w1 field, 2 -> w2 field).
  if (!(t >= 0.0) || t > t_end_ * (1.0 + 1e-12)) {
    throw ParameterError("field query outside [0, t_end]");
  }
  const double t_clamped = std::min(t, t_end_);
  const std::size_t n_steps = times_.size() - 1;
  const double dt = t_end_ / static_cast<double>(n_steps);
  std::size_t k = static_cast<std::size_t>(t_clamped / dt);
  if (k >= n_steps) k = n_steps - 1;
  const double s = (t_clamped - times_[k]) / (times_[k + 1] - times_[k]);
  const double a = level_value(family, k, x);
  const double b = level_value(family, k + 1, x);
  return a * (1.0 - s) + b * s;
}

double CharacteristicField::w1_at(double t, double x) const {
  return foreign_at(1, t, x);
}

double CharacteristicField::w2_at(double t, double x) const {
  return foreign_at(2, t, x);
}

RiemannState CharacteristicField::state(double t, double x) const {
  return {w1_at(t, x), w2_at(t, x)};
}

CharacteristicTrace CharacteristicField::trace(int family, double x0, double dt,
                                               double t_target) const {
  require_family(family);
  if (!(dt > 0.0)) throw ParameterError("trace step dt must be positive");
  if (!(t_target >= 0.0)) throw ParameterError("trace target time must be >= 0");

  const RiemannState w0 = data_.riemann(x0, params_);
  const double own = family == 1 ? w0.w1 : w0.w2;
  const int foreign_family = family == 1 ? 2 : 1;

  auto foreign_lookup = [&](double t, double x) {
    return foreign_at(foreign_family, std::min(t, t_end_), x);
  };
  auto make_state = [&](double f) {
    return family == 1 ? RiemannState{own, f} : RiemannState{f, own};
  };
  auto speed_of = [&](double f) {
    const RiemannState w = make_state(f);
    return family == 1 ? lambda2_riemann(w, params_)
                       : lambda1_riemann(w, params_);
  };

  CharacteristicTrace tr;
  tr.family = family;
  tr.x0 = x0;
  tr.status = TraceStatus::alive;
  tr.nodes.reserve(static_cast<std::size_t>(t_target / dt) + 2);

  double t = 0.0;
  double x = x0;
  // seed with the exact initial values rather than an interpolated field read
  double f = family == 1 ? w0.w2 : w0.w1;
  tr.nodes.push_back({t, x, make_state(f).w1, make_state(f).w2});
  while (t < t_target) {
    const double step = std::min(dt, t_target - t);
    const double sa = speed_of(f);
    const double xp = x + step * sa;
    const double fb = foreign_lookup(t + step, xp);
    const double sb = speed_of(fb);
    x += 0.5 * step * (sa + sb);
    t += step;
    f = foreign_lookup(t, x);
    tr.nodes.push_back({t, x, make_state(f).w1, make_state(f).w2});
  }
  tr.status = TraceStatus::horizon_reached;
  return tr;
}

CharacteristicTrace trace_characteristic(const InitialData& data,
                                         const GammaParams& p, int family,
                                         double x0, double t_end, double dt,
                                         BundleConfig cfg) {
  CharacteristicField field(data, p, t_end, cfg);
  return field.trace(family, x0, dt, t_end);
}

RiccatiResult integrate_riccati(const CharacteristicTrace& trace, double alpha0,
                                const GammaParams& p) {
  if (trace.nodes.empty()) {
    throw ParameterError("cannot integrate along an empty trace");
  }
  if (!std::isfinite(alpha0)) {
    throw ParameterError("initial slope must be finite");
  }

  const RiemannState w0{trace.nodes.front().w1, trace.nodes.front().w2};
  if (alpha0 == 0.0) {
    // alpha == 0 solves the slope equation identically.
    return {false, kNaN, 0.0, kInf};
  }
  const double h0 = integrating_factor(w0, trace.family, p);
  double reciprocal = 1.0 / (std::exp(h0) * alpha0);
  const double coeff = 2.0 * (1.0 + p.theta);

  double prev_integrand = riccati_integrand(w0, trace.family, p);
  double prev_t = trace.nodes.front().t;
  for (std::size_t k = 1; k < trace.nodes.size(); ++k) {
    const TraceNode& node = trace.nodes[k];
    const RiemannState w{node.w1, node.w2};
    const double integrand = riccati_integrand(w, trace.family, p);
    const double dt = node.t - prev_t;
    const double next =
        reciprocal - coeff * 0.5 * dt * (prev_integrand + integrand);
    if (alpha0 > 0.0 && next <= 0.0) {
      const double frac = reciprocal / (reciprocal - next);
      return {true, prev_t + frac * dt, kNaN, next};
    }
    reciprocal = next;
    prev_integrand = integrand;
    prev_t = node.t;
  }

  const RiemannState w_end{trace.nodes.back().w1, trace.nodes.back().w2};
  const double h_end = integrating_factor(w_end, trace.family, p);
  return {false, kNaN, std::exp(-h_end) / reciprocal, reciprocal};
}

namespace {

// Shared arithmetic for the per-foot-point blow-up window.
BlowupInterval make_interval(const InitialData& data, const GammaParams& p,
                             const RegionBounds& b, int family, double x0,
                             double alpha0) {
  const double q = q_exponent(p);
  const double coeff = 2.0 * (1.0 + p.theta);
  const RiemannState w = data.riemann(x0, p);
  const double scaled = std::exp(integrating_factor(w, family, p)) * alpha0;

  BlowupInterval iv;
  iv.family = family;
  iv.x0 = x0;
  iv.alpha0 = alpha0;

  if (family == 1) {
    // own invariant pinned to W = w1(0,x0); integrand monotone decreasing in
    // the foreign invariant, so its range ends sit at w2 = m2 and w2 = M2
    const double hi_integrand = riccati_integrand({w.w1, b.m2}, 1, p);
    const double lo_integrand = riccati_integrand({w.w1, b.M2}, 1, p);
    iv.t_lo = 1.0 / (coeff * scaled * hi_integrand);
    iv.t_hi = 1.0 / (coeff * scaled * lo_integrand);
    iv.t_lo_outer = ((1.0 + p.theta) * b.m1 - (p.theta * b.M2 - b.m2)) /
                    (coeff * scaled * std::pow(b.M1 - b.m2, q));
    iv.t_hi_outer = ((1.0 + p.theta) * b.M1 + b.M2 - p.theta * b.m2) /
                    (coeff * scaled * std::pow(b.m1 - b.M2, q));
    iv.alt_valid = false;
    iv.alt_t_lo = kNaN;
    iv.alt_t_hi = kNaN;
  } else {
    // own invariant pinned to V = w2(0,x0); integrand monotone increasing in
    // the foreign invariant, range ends at w1 = M1 and w1 = m1
    const double hi_integrand = riccati_integrand({b.M1, w.w2}, 2, p);
    const double lo_integrand = riccati_integrand({b.m1, w.w2}, 2, p);
    iv.t_lo = 1.0 / (coeff * scaled * hi_integrand);
    iv.t_hi = 1.0 / (coeff * scaled * lo_integrand);
    iv.t_lo_outer = -(b.M1 - p.theta * b.m1 + (1.0 + p.theta) * b.M2) /
                    (coeff * scaled * std::pow(b.M1 - b.m2, q));
    iv.t_hi_outer = -(b.m1 - p.theta * b.M1 + (1.0 + p.theta) * b.m2) /
                    (coeff * scaled * std::pow(b.m1 - b.M2, q));
    // alternate reading: the window scaled by the *forward* family's slope at
    // the same foot point, meaningful only where that slope is positive
    const DerivativeField df = derivative_field(data, x0, p);
    if (df.w1_x > 0.0) {
      const double scaled1 =
          std::exp(integrating_factor(w, 1, p)) * df.w1_x;
      iv.alt_valid = true;
      iv.alt_t_lo = -(b.M1 - p.theta * b.m1 + (1.0 + p.theta) * b.M2) /
                    (coeff * scaled1 * std::pow(b.M1 - b.m2, q));
      iv.alt_t_hi = -(b.m1 - p.theta * b.M1 + (1.0 + p.theta) * b.m2) /
                    (coeff * scaled1 * std::pow(b.m1 - b.M2, q));
    } else {
      iv.alt_valid = false;
      iv.alt_t_lo = kNaN;
      iv.alt_t_hi = kNaN;
    }
  }
  return iv;
}

RegionBounds gated_bounds(const InitialData& data, const GammaParams& p) {
  const RegionBounds b = region_bounds(data, p);
  const AdmissibilityVerdict verdict = admissibility_gate(b, p);
  if (!verdict.admissible) {
    throw GateError(gate_message(verdict));
  }
  return b;
}

}  // namespace

std::vector<BlowupInterval> blowup_bounds_general(const InitialData& data,
                                                  const GammaParams& p,
                                                  int n_samples) {
  if (n_samples < 2) {
    throw ParameterError("blowup_bounds_general needs at least 2 samples");
  }
  const RegionBounds b = gated_bounds(data, p);
  std::vector<BlowupInterval> out;
  const double lo = data.x_lo(), hi = data.x_hi();
  for (int family = 1; family <= 2; ++family) {
    for (int i = 0; i < n_samples; ++i) {
      const double x0 =
          lo + (hi - lo) * static_cast<double>(i) / (n_samples - 1);
      const DerivativeField df = derivative_field(data, x0, p);
      const double alpha0 = family == 1 ? df.w1_x : df.w2_x;
      if (alpha0 > 0.0) {
        out.push_back(make_interval(data, p, b, family, x0, alpha0));
      }
    }
  }
  return out;
}

BlowupEnvelope blowup_envelope_general(const InitialData& data,
                                       const GammaParams& p, int n_samples) {
  const RegionBounds b = gated_bounds(data, p);
  const double lo = data.x_lo(), hi = data.x_hi();
  const int n = std::max(n_samples, 2049);

  BlowupEnvelope env;
  env.blows_up = false;
  env.earliest_possible = kInf;
  env.earliest_guaranteed = kInf;
  env.family = 0;
  env.x0 = kNaN;

  for (int family = 1; family <= 2; ++family) {
    auto t_lo_of = [&](double x0) {
      const DerivativeField df = derivative_field(data, x0, p);
      const double alpha0 = family == 1 ? df.w1_x : df.w2_x;
      if (!(alpha0 > 0.0)) return kInf;
      return make_interval(data, p, b, family, x0, alpha0).t_lo;
    };
    auto t_hi_of = [&](double x0) {
      const DerivativeField df = derivative_field(data, x0, p);
      const double alpha0 = family == 1 ? df.w1_x : df.w2_x;
      if (!(alpha0 > 0.0)) return kInf;
      return make_interval(data, p, b, family, x0, alpha0).t_hi;
    };

    for (auto [objective, track_guaranteed] :
         {std::pair<std::function<double(double)>, bool>{t_lo_of, false},
          std::pair<std::function<double(double)>, bool>{t_hi_of, true}}) {
      const double dx = (hi - lo) / (n - 1);
      double fmin = kInf, xmin = kNaN;
      double prev2 = objective(lo), prev1 = objective(lo + dx);
      if (prev2 < fmin) { fmin = prev2; xmin = lo; }
      if (prev1 < fmin) { fmin = prev1; xmin = lo + dx; }
      for (int i = 2; i < n; ++i) {
        const double xi = lo + i * dx;
        const double fi = objective(xi);
        if (fi < fmin) { fmin = fi; xmin = xi; }
        if (prev1 < prev2 && prev1 < fi && std::isfinite(prev1)) {
          constexpr double inv_phi = 0.6180339887498949;
          double a = xi - 2 * dx, bb = xi;
          double c = bb - inv_phi * (bb - a), d = a + inv_phi * (bb - a);
          double fc = objective(c), fd = objective(d);
          for (int it = 0; it < 90; ++it) {
            if (fc < fd) {
              bb = d; d = c; fd = fc;
              c = bb - inv_phi * (bb - a);
              fc = objective(c);
            } else {
              a = c; c = d; fc = fd;
              d = a + inv_phi * (bb - a);
              fd = objective(d);
            }
          }
          const double xm = 0.5 * (a + bb);
          const double fm = objective(xm);
          if (fm < fmin) { fmin = fm; xmin = xm; }
        }
        prev2 = prev1;
        prev1 = fi;
      }
      if (std::isfinite(fmin)) {
        env.blows_up = true;
        if (track_guaranteed) {
          if (fmin < env.earliest_guaranteed) {
            env.earliest_guaranteed = fmin;
            env.family = family;
            env.x0 = xmin;
          }
        } else {
          env.earliest_possible = std::min(env.earliest_possible, fmin);
        }
      }
    }
  }
  return env;
}

GeneralLipschitzCertificate one_sided_lipschitz_certificate_general(
    const InitialData& data, const GammaParams& p, double t, int n_samples) {
  if (!(t > 0.0)) {
    throw ParameterError("the one-sided Lipschitz bound -C/t needs t > 0");
  }
  const RegionBounds b = gated_bounds(data, p);
  const BlowupEnvelope env = blowup_envelope_general(data, p);
  if (env.blows_up && t >= env.earliest_possible) {
    std::ostringstream msg;
    msg << "t = " << t << " is not below the earliest possible blow-up time "
        << env.earliest_possible;
    throw HorizonError(msg.str());
  }

  const double q = q_exponent(p);
  const double numer = std::pow(b.M1 - b.m2, q);
  const double denom = 2.0 * (1.0 + p.theta) * std::pow(b.m1 - b.M2, q);
  const double d1 = (1.0 + p.theta) * b.M1 + b.M2 - p.theta * b.m2;
  const double d2 = -(b.m1 - p.theta * b.M1 + (1.0 + p.theta) * b.m2);

  GeneralLipschitzCertificate cert;
  cert.t = t;
  cert.constant1 = numer * d1 * d1 / denom;
  cert.constant2 = numer * d2 * d2 / denom;
  cert.worst_margin = kInf;
  cert.worst_x0 = kNaN;
  cert.worst_family = 0;
  cert.n_samples = 2 * static_cast<std::size_t>(n_samples);

  CharacteristicField field(data, p, t);
  const double dt = t / 512.0;
  const double lo = data.x_lo(), hi = data.x_hi();
  for (int family = 1; family <= 2; ++family) {
    const double floor = -(family == 1 ? cert.constant1 : cert.constant2) / t;
    for (int i = 0; i < n_samples; ++i) {
      const double x0 = lo + (hi - lo) * static_cast<double>(i) / (n_samples - 1);
      const DerivativeField df = derivative_field(data, x0, p);
      const double alpha0 = family == 1 ? df.w1_x : df.w2_x;
      const CharacteristicTrace tr = field.trace(family, x0, dt, t);
      const RiccatiResult rr = integrate_riccati(tr, alpha0, p);
      const double margin =
          rr.blew_up ? -kInf : rr.alpha_end - floor;
      if (margin < cert.worst_margin) {
        cert.worst_margin = margin;
        cert.worst_x0 = x0;
        cert.worst_family = family;
      }
    }
  }
  const double scale =
      std::max(cert.constant1, cert.constant2) / t;
  cert.pass = cert.worst_margin >= -1e-9 * scale;
  return cert;
}

}  // namespace carroll
