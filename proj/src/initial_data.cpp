#include "carroll/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace carroll {

namespace {

double require_param(const std::map<std::string, double>& params,
                     const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(const std::string& preset,
                           const std::map<std::string, double>& params,
                           std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (key == "x_lo" || key == "x_hi") continue;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      std::ostringstream msg;
      msg << "preset '" << preset << "' does not take a parameter '" << key << "'";
      throw ParameterError(msg.str());
    }
  }
}

// Monotonicity-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
// Used for tabulated profiles so that interpolation never manufactures new
// extrema, which would silently widen the invariant-region bounds.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    m_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] == 0.0 || delta[i] == 0.0 ||
          (delta[i - 1] > 0.0) != (delta[i] > 0.0)) {
        m_[i] = 0.0;  // local extremum in the data: flatten
      } else {
        const double wl = 2.0 * h[i] + h[i - 1];
        const double wr = h[i] + 2.0 * h[i - 1];
        m_[i] = (wl + wr) / (wl / delta[i - 1] + wr / delta[i]);
      }
    }
  }

  double value(double x) const {
    const auto [i, t, h] = locate(x);
    if (h == 0.0) return y_[i];  // clamped outside the table
    const double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * m_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + h * m_[i + 1] * (t3 - t2);
  }

  double derivative(double x) const {
    const auto [i, t, h] = locate(x);
    if (h == 0.0) return 0.0;
    const double t2 = t * t;
    return (y_[i] * (6 * t2 - 6 * t) + h * m_[i] * (3 * t2 - 4 * t + 1) +
            y_[i + 1] * (-6 * t2 + 6 * t) + h * m_[i + 1] * (3 * t2 - 2 * t)) / h;
  }

 private:
  static double endpoint_slope(double h0, double h1, double d0, double d1) {
    // Three-point one-sided estimate, clipped to keep the end interval monotone.
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d0 == 0.0 || (m > 0.0) != (d0 > 0.0)) return 0.0;
    if (std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
  }

  struct Location {
    std::size_t i;
    double t;
    double h;
  };

  Location locate(double x) const {
    if (x <= x_.front()) return {0, 0.0, 0.0};
    if (x >= x_.back()) return {x_.size() - 1, 0.0, 0.0};
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    return {i, (x - x_[i]) / h, h};
  }

  std::vector<double> x_, y_;
  std::vector<double> m_;
};

}  // namespace

InitialData InitialData::preset(const std::string& name,
                                const std::map<std::string, double>& params) {
  InitialData d;
  d.kind_ = Kind::preset;
  d.name_ = name;
  d.x_lo_ = require_param(params, "x_lo", -20.0);
  d.x_hi_ = require_param(params, "x_hi", 20.0);
  if (!(d.x_lo_ < d.x_hi_)) {
    throw ParameterError("preset truncation interval needs x_lo < x_hi");
  }

  if (name == "constant") {
    reject_unknown_params(name, params, {"sigma", "beta"});
    const double s = require_param(params, "sigma", 1.0);
    const double b = require_param(params, "beta", 0.0);
    if (s <= 0.0) throw ParameterError("constant preset requires sigma > 0");
    d.sigma_ = [s](double) { return s; };
    d.beta_ = [b](double) { return b; };
    d.sigma_x_ = [](double) { return 0.0; };
    d.beta_x_ = [](double) { return 0.0; };
    d.far_ = {s, b, s, b};
    return d;
  }

  if (name == "arctan-compressive" || name == "arctan-rarefactive") {
    reject_unknown_params(name, params, {"sigma", "eps"});
    const double s = require_param(params, "sigma", 2.0);
    const double eps = require_param(params, "eps", 0.1);
    if (s <= 0.0 || eps <= 0.0) {
      throw ParameterError("arctan presets require sigma > 0 and eps > 0");
    }
    const double sign = name == "arctan-compressive" ? 1.0 : -1.0;
    d.sigma_ = [s](double) { return s; };
    d.beta_ = [eps, sign](double x) { return sign * eps * std::atan(x); };
    d.sigma_x_ = [](double) { return 0.0; };
    d.beta_x_ = [eps, sign](double x) { return sign * eps / (1.0 + x * x); };
    const double asym = eps * (std::atan(1.0) * 2.0);  // eps * pi/2
    d.far_ = {s, -sign * asym, s, sign * asym};
    return d;
  }

  if (name == "remark-family") {
    reject_unknown_params(name, params, {"m", "theta"});
    const double m = require_param(params, "m", 1.0);
    const double th = require_param(params, "theta", 0.5);
    if (m <= 0.0 || th <= 0.0 || th > 1.0) {
      throw ParameterError("remark-family preset requires m > 0 and theta in (0, 1]");
    }
    // sigma0 is the constant whose theta-power is theta*m*(2+theta)/2; beta0
    // sweeps (m theta/2) tanh(x), so both invariants increase monotonically
    // from m resp. -(1+theta) m on the left to (1+theta) m resp. -m on the right.
    const double s = std::pow(0.5 * th * m * (2.0 + th), 1.0 / th);
    const double amp = 0.5 * m * th;
    d.sigma_ = [s](double) { return s; };
    d.beta_ = [amp](double x) { return amp * std::tanh(x); };
    d.sigma_x_ = [](double) { return 0.0; };
    d.beta_x_ = [amp](double x) {
      const double c = std::cosh(x);
      return amp / (c * c);
    };
    d.far_ = {s, -amp, s, amp};
    return d;
  }

  if (name == "gaussian-bump") {
    reject_unknown_params(name, params, {"sigma", "a", "s"});
    const double sg = require_param(params, "sigma", 2.0);
    const double a = require_param(params, "a", 0.1);
    const double s = require_param(params, "s", 1.0);
    if (sg <= 0.0 || s <= 0.0) {
      throw ParameterError("gaussian-bump preset requires sigma > 0 and s > 0");
    }
    d.sigma_ = [sg](double) { return sg; };
    d.beta_ = [a, s](double x) { return a * x * std::exp(-x * x / (s * s)); };
    d.sigma_x_ = [](double) { return 0.0; };
    d.beta_x_ = [a, s](double x) {
      return a * (1.0 - 2.0 * x * x / (s * s)) * std::exp(-x * x / (s * s));
    };
    d.far_ = {sg, 0.0, sg, 0.0};
    return d;
  }

  throw ParameterError("unknown preset '" + name +
                       "'; available: constant, arctan-compressive, "
                       "arctan-rarefactive, remark-family, gaussian-bump");
}

InitialData InitialData::tabulated(std::vector<TabulatedSample> samples) {
  if (samples.size() < 4) {
    throw DataError("tabulated profiles need at least 4 samples");
  }
  std::vector<double> x, sg, bt;
  x.reserve(samples.size());
  sg.reserve(samples.size());
  bt.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.sigma) || !std::isfinite(s.beta)) {
      std::ostringstream msg;
      msg << "non-finite tabulated sample at row " << i;
      throw DataError(msg.str());
    }
    if (i > 0 && !(s.x > samples[i - 1].x)) {
      std::ostringstream msg;
      msg << "tabulated x must be strictly increasing; row " << i << " has x = "
          << s.x << " after " << samples[i - 1].x;
      throw DataError(msg.str());
    }
    if (s.sigma <= 0.0) {
      std::ostringstream msg;
      msg << "tabulated sigma must be positive; row " << i << " has sigma = "
          << s.sigma;
      throw DataError(msg.str());
    }
    x.push_back(s.x);
    sg.push_back(s.sigma);
    bt.push_back(s.beta);
  }

  InitialData d;
  d.kind_ = Kind::tabulated;
  d.name_ = "tabulated";
  d.x_lo_ = x.front();
  d.x_hi_ = x.back();
  d.far_ = {sg.front(), bt.front(), sg.back(), bt.back()};
  auto sigma_interp = std::make_shared<MonotoneCubic>(x, std::move(sg));
  auto beta_interp = std::make_shared<MonotoneCubic>(std::move(x), std::move(bt));
  d.sigma_ = [sigma_interp](double q) { return sigma_interp->value(q); };
  d.sigma_x_ = [sigma_interp](double q) { return sigma_interp->derivative(q); };
  d.beta_ = [beta_interp](double q) { return beta_interp->value(q); };
  d.beta_x_ = [beta_interp](double q) { return beta_interp->derivative(q); };
  return d;
}

RiemannState InitialData::riemann(double x, const GammaParams& p) const {
  return to_riemann({sigma(x), beta(x)}, p);
}

DerivativeField derivative_field(const InitialData& data, double x,
                                 const GammaParams& p) {
  DerivativeField f;
  f.sigma_x = data.sigma_x(x);
  f.beta_x = data.beta_x(x);
  const double sg = data.sigma(x);
  if (sg <= 0.0) {
    throw LiquescenceError("derivative field evaluated where sigma <= 0");
  }
  const double chain = std::pow(sg, p.theta - 1.0) * f.sigma_x;
  f.w1_x = f.beta_x + chain;
  f.w2_x = f.beta_x - chain;
  return f;
}

InitialData ingest_tabulated(std::span<const TabulatedSample> samples) {
  return InitialData::tabulated(
      std::vector<TabulatedSample>(samples.begin(), samples.end()));
}

InitialData read_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open tabulated data file '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("tabulated data file '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,sigma,beta") {
    throw DataError("tabulated data file must start with the header "
                    "\"x,sigma,beta\"; got \"" + line + "\"");
  }
  std::vector<TabulatedSample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    TabulatedSample s;
    char comma1 = 0, comma2 = 0;
    std::istringstream fields(line);
    fields >> s.x >> comma1 >> s.sigma >> comma2 >> s.beta;
    if (!fields || comma1 != ',' || comma2 != ',') {
      std::ostringstream msg;
      msg << "malformed CSV row " << row << " in '" << path << "': \"" << line
          << "\"";
      throw DataError(msg.str());
    }
    samples.push_back(s);
  }
  return InitialData::tabulated(std::move(samples));
}

}  // namespace carroll
