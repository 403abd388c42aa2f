#include "qwg/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qwg/errors.hpp"
#include "qwg/geometry.hpp"

namespace qwg {

namespace {

// polynomial in u = tanh(s/sig); d/ds maps c_k u^k -> k c_k (u^{k-1} - u^{k+1}) / sig
struct TanhPoly {
  std::array<double, 16> c{};
  int deg = 0;
};

TanhPoly tanh_derivative(const TanhPoly& p) {
  TanhPoly q;
  q.deg = p.deg + 1;
  for (int k = 1; k <= p.deg; ++k) {
    q.c[k - 1] += k * p.c[k];
    q.c[k + 1] -= k * p.c[k];
  }
  return q;
}

double poly_eval(const double* c, int deg, double x) {
  double v = c[deg];
  for (int k = deg - 1; k >= 0; --k) v = v * x + c[k];
  return v;
}

// gamma(s) = pre * P0(tanh(s/sig)); returns the order-th s-derivative
double tanh_family_eval(const TanhPoly& p0, double pre, double sig, double s, int order) {
  TanhPoly p = p0;
  for (int n = 0; n < order; ++n) p = tanh_derivative(p);
  const double u = std::tanh(s / sig);
  double v = pre * poly_eval(p.c.data(), p.deg, u);
  for (int n = 0; n < order; ++n) v /= sig;
  return v;
}

// physicists' Hermite polynomials: d^n/dt^n exp(-t^2) = (-1)^n H_n(t) exp(-t^2)
double hermite(int n, double t) {
  switch (n) {
    case 0: return 1.0;
    case 1: return 2.0 * t;
    case 2: return 4.0 * t * t - 2.0;
    case 3: return (8.0 * t * t - 12.0) * t;
    case 4: return (16.0 * t * t - 48.0) * t * t + 12.0;
    default: return ((32.0 * t * t - 160.0) * t * t + 120.0) * t;
  }
}

double gaussian_eval(double a, double sigma, double s, int order) {
  const double t = s / sigma;
  double v = a * hermite(order, t) * std::exp(-t * t);
  if (order & 1) v = -v;
  for (int n = 0; n < order; ++n) v /= sigma;
  return v;
}

// degree-11 smoothstep: S(0)=0, S(1)=1, derivatives 1..5 vanish at both ends
constexpr std::array<double, 12> kSmoothstep = {0, 0, 0, 0, 0, 0, 462, -1980, 3465, -3080, 1386, -252};

double smoothstep_eval(double x, int order) {
  std::array<double, 12> c = kSmoothstep;
  int deg = 11;
  for (int n = 0; n < order; ++n) {
    for (int k = 1; k <= deg; ++k) c[k - 1] = k * c[k];
    c[deg] = 0.0;
    --deg;
  }
  return poly_eval(c.data(), deg, x);
}

// plateau |s| <= sigma at height a, C^5 polynomial falloff over width sigma/2
double bump_eval(double a, double sigma, double s, int order) {
  const double half = 0.5 * sigma;
  const double as = std::abs(s);
  if (as <= sigma) return order == 0 ? a : 0.0;
  if (as >= sigma + half) return 0.0;
  const double x = (as - sigma) / half;
  if (order == 0) return a * (1.0 - smoothstep_eval(x, 0));
  double v = -a * smoothstep_eval(x, order);
  for (int n = 0; n < order; ++n) v /= half;
  return (s < 0.0 && (order & 1)) ? -v : v;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double eval_profile(const CurvatureProfile& p, double s, int order) {
  if (order < 0 || order > 5)
    throw ConfigError("profile derivative order must be in 0..5, got " + std::to_string(order));
  if (order > p.smoothness_class)
    throw ConfigError("profile derivative order " + std::to_string(order) +
                      " exceeds declared smoothness class " + std::to_string(p.smoothness_class));
  switch (p.family) {
    case CurvatureProfile::Family::zero: return 0.0;
    case CurvatureProfile::Family::gaussian: return gaussian_eval(p.a, p.sigma, s, order);
    case CurvatureProfile::Family::sech2: {
      TanhPoly p0;
      p0.c[0] = 1.0;
      p0.c[2] = -1.0;
      p0.deg = 2;
      return tanh_family_eval(p0, p.a, p.sigma, s, order);
    }
    case CurvatureProfile::Family::constant_bump: return bump_eval(p.a, p.sigma, s, order);
  }
  throw ConfigError("unknown profile family");
}

double eval_theta(const TorsionSpec& t, double s, int order) {
  if (order < 0 || order > 5)
    throw ConfigError("torsion derivative order must be in 0..5, got " + std::to_string(order));
  switch (t.family) {
    case TorsionSpec::Family::constant: return order == 0 ? t.theta0 : 0.0;
    case TorsionSpec::Family::ramp_smoothed: {
      TanhPoly p0;
      p0.c[0] = 1.0;
      p0.c[1] = 1.0;
      p0.deg = 1;
      return tanh_family_eval(p0, 0.5 * t.theta_max, t.sigma_theta, s, order);
    }
  }
  throw ConfigError("unknown torsion family");
}

double sup_gamma(const CurvatureProfile& p) {
  return p.family == CurvatureProfile::Family::zero ? 0.0 : std::abs(p.a);
}

AssumptionReport validate_assumptions(const CurvatureProfile& p, const GuideSpec& g) {
  AssumptionReport r;
  r.sup_gamma = sup_gamma(p);
  r.non_trivially_curved = r.sup_gamma > 0.0;
  if (!r.non_trivially_curved)
    r.notes.push_back("non_trivially_curved: curvature is identically zero");
  r.decay_ok = true;
  if (g.dim == 2) {
    const double half = 0.5 * g.d;
    r.half_width_bound_ok = half * r.sup_gamma < 1.0;
    if (!r.half_width_bound_ok)
      r.notes.push_back("half_width_bound: d/2 = " + fmt(half) + " exceeds 1/sup|gamma| = " +
                        fmt(1.0 / r.sup_gamma));
  } else {
    const double aw = g.a_omega();
    r.tube_bound_ok = aw * r.sup_gamma < 1.0;
    if (!r.tube_bound_ok)
      r.notes.push_back("tube_bound: a_omega*sup|k| = " + fmt(aw * r.sup_gamma) + " is not < 1");
    if (g.torsion.require_quarter_range) {
      // both families are monotone or constant, so range endpoints decide
      const double lo = g.torsion.family == TorsionSpec::Family::constant ? g.torsion.theta0 : 0.0;
      const double hi = g.torsion.family == TorsionSpec::Family::constant ? g.torsion.theta0
                                                                          : g.torsion.theta_max;
      r.theta_range_ok = lo >= 0.0 && hi >= 0.0 && std::max(lo, hi) <= 0.5 * std::numbers::pi;
      if (!r.theta_range_ok)
        r.notes.push_back("theta_range: theta spans [" + fmt(std::min(lo, hi)) + ", " +
                          fmt(std::max(lo, hi)) + "] outside [0, pi/2]");
    }
  }
  const double width = g.dim == 2 ? g.d : std::max(g.d2, g.d3);
  const double l_min = 10.0 * p.sigma + 5.0 * width;
  if (r.non_trivially_curved && g.L < l_min)
    r.notes.push_back("truncation_margin: L = " + fmt(g.L) + " below heuristic 10*sigma + 5*d = " +
                      fmt(l_min));
  return r;
}

CurvatureProfile::Family profile_family_from_string(const std::string& name) {
  if (name == "zero") return CurvatureProfile::Family::zero;
  if (name == "constant_bump") return CurvatureProfile::Family::constant_bump;
  if (name == "gaussian") return CurvatureProfile::Family::gaussian;
  if (name == "sech2") return CurvatureProfile::Family::sech2;
  throw ConfigError("unknown profile family '" + name +
                    "' (expected zero|constant_bump|gaussian|sech2)");
}

std::string to_string(CurvatureProfile::Family f) {
  switch (f) {
    case CurvatureProfile::Family::zero: return "zero";
    case CurvatureProfile::Family::constant_bump: return "constant_bump";
    case CurvatureProfile::Family::gaussian: return "gaussian";
    default: return "sech2";
  }
}

TorsionSpec::Family torsion_family_from_string(const std::string& name) {
  if (name == "constant") return TorsionSpec::Family::constant;
  if (name == "ramp_smoothed") return TorsionSpec::Family::ramp_smoothed;
  throw ConfigError("unknown torsion family '" + name + "' (expected constant|ramp_smoothed)");
}

std::string to_string(TorsionSpec::Family f) {
  return f == TorsionSpec::Family::constant ? "constant" : "ramp_smoothed";
}

}  // namespace qwg
