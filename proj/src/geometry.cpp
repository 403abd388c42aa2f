#include "qwg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwg/errors.hpp"

namespace qwg {

namespace {

constexpr double kSubstep = 2e-3;  // RK4 substep; global curve error ~ h^4 * L well below 1e-9

struct State2 {
  double th, x, y;
};

State2 rhs2(const CurvatureProfile& p, double s, const State2& q) {
  return {eval_profile(p, s, 0), std::cos(q.th), std::sin(q.th)};
}

State2 step2(const CurvatureProfile& p, double s, const State2& q, double h) {
  const State2 k1 = rhs2(p, s, q);
  const State2 q2{q.th + 0.5 * h * k1.th, q.x + 0.5 * h * k1.x, q.y + 0.5 * h * k1.y};
  const State2 k2 = rhs2(p, s + 0.5 * h, q2);
  const State2 q3{q.th + 0.5 * h * k2.th, q.x + 0.5 * h * k2.x, q.y + 0.5 * h * k2.y};
  const State2 k3 = rhs2(p, s + 0.5 * h, q3);
  const State2 q4{q.th + h * k3.th, q.x + h * k3.x, q.y + h * k3.y};
  const State2 k4 = rhs2(p, s + h, q4);
  return {q.th + h / 6.0 * (k1.th + 2.0 * (k2.th + k3.th) + k4.th),
          q.x + h / 6.0 * (k1.x + 2.0 * (k2.x + k3.x) + k4.x),
          q.y + h / 6.0 * (k1.y + 2.0 * (k2.y + k3.y) + k4.y)};
}

// advances from s0 to s1 in equal substeps no longer than kSubstep
State2 advance2(const CurvatureProfile& p, State2 q, double s0, double s1) {
  const double span = s1 - s0;
  if (span == 0.0) return q;
  const int n = std::max(1, int(std::ceil(std::abs(span) / kSubstep)));
  const double h = span / n;
  for (int i = 0; i < n; ++i) q = step2(p, s0 + i * h, q, h);
  return q;
}

FrameSample make_sample2(double s, const State2& q) {
  FrameSample f;
  f.s = s;
  f.Gamma = {q.x, q.y, 0.0};
  f.e1 = {std::cos(q.th), std::sin(q.th), 0.0};
  f.e2 = {-std::sin(q.th), std::cos(q.th), 0.0};
  f.e3 = {0.0, 0.0, 1.0};
  f.te2 = f.e2;
  f.te3 = f.e3;
  f.theta = q.th;  // 2D: tangent angle of the reference curve
  return f;
}

struct State3 {
  std::array<double, 12> y;  // Gamma, e1, e2, e3
};

State3 rhs3(const CurvatureProfile& kp, const TorsionSpec& t, double s, const State3& q) {
  const double k = eval_profile(kp, s, 0);
  const double tau = eval_theta(t, s, 1);
  State3 d;
  for (int c = 0; c < 3; ++c) {
    const double e1 = q.y[3 + c], e2 = q.y[6 + c], e3 = q.y[9 + c];
    d.y[0 + c] = e1;
    d.y[3 + c] = k * e2;
    d.y[6 + c] = -k * e1 + tau * e3;
    d.y[9 + c] = -tau * e2;
  }
  return d;
}

void orthonormalize(State3& q) {
  auto dot = [&](int a, int b) {
    return q.y[a] * q.y[b] + q.y[a + 1] * q.y[b + 1] + q.y[a + 2] * q.y[b + 2];
  };
  auto scale = [&](int a, double f) {
    q.y[a] *= f;
    q.y[a + 1] *= f;
    q.y[a + 2] *= f;
  };
  auto reject = [&](int a, int b) {
    const double c = dot(a, b);
    q.y[a] -= c * q.y[b];
    q.y[a + 1] -= c * q.y[b + 1];
    q.y[a + 2] -= c * q.y[b + 2];
  };
  scale(3, 1.0 / std::sqrt(dot(3, 3)));
  reject(6, 3);
  scale(6, 1.0 / std::sqrt(dot(6, 6)));
  reject(9, 3);
  reject(9, 6);
  scale(9, 1.0 / std::sqrt(dot(9, 9)));
}

State3 step3(const CurvatureProfile& kp, const TorsionSpec& t, double s, State3 q, double h) {
  const State3 k1 = rhs3(kp, t, s, q);
  State3 q2 = q, q3 = q, q4 = q;
  for (int i = 0; i < 12; ++i) q2.y[i] += 0.5 * h * k1.y[i];
  const State3 k2 = rhs3(kp, t, s + 0.5 * h, q2);
  for (int i = 0; i < 12; ++i) q3.y[i] += 0.5 * h * k2.y[i];
  const State3 k3 = rhs3(kp, t, s + 0.5 * h, q3);
  for (int i = 0; i < 12; ++i) q4.y[i] += h * k3.y[i];
  const State3 k4 = rhs3(kp, t, s + h, q4);
  for (int i = 0; i < 12; ++i)
    q.y[i] += h / 6.0 * (k1.y[i] + 2.0 * (k2.y[i] + k3.y[i]) + k4.y[i]);
  orthonormalize(q);
  return q;
}

State3 advance3(const CurvatureProfile& kp, const TorsionSpec& t, State3 q, double s0, double s1) {
  const double span = s1 - s0;
  if (span == 0.0) return q;
  const int n = std::max(1, int(std::ceil(std::abs(span) / kSubstep)));
  const double h = span / n;
  for (int i = 0; i < n; ++i) q = step3(kp, t, s0 + i * h, q, h);
  return q;
}

FrameSample make_sample3(const TorsionSpec& t, double s, const State3& q) {
  FrameSample f;
  f.s = s;
  f.Gamma = {q.y[0], q.y[1], q.y[2]};
  f.e1 = {q.y[3], q.y[4], q.y[5]};
  f.e2 = {q.y[6], q.y[7], q.y[8]};
  f.e3 = {q.y[9], q.y[10], q.y[11]};
  f.theta = eval_theta(t, s, 0);
  const double c = std::cos(f.theta), sn = std::sin(f.theta);
  for (int i = 0; i < 3; ++i) {
    f.te2[i] = c * f.e2[i] - sn * f.e3[i];
    f.te3[i] = sn * f.e2[i] + c * f.e3[i];
  }
  return f;
}

// visits targets in input order by integrating outward from s = 0 in both directions
template <class Emit>
void sweep_targets(const std::vector<double>& s_samples, Emit&& emit) {
  std::vector<int> order(s_samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return s_samples[a] < s_samples[b]; });
  // non-negative targets ascending, then negative targets descending, each from 0
  for (int pass = 0; pass < 2; ++pass) {
    double cur = 0.0;
    if (pass == 0) {
      for (int idx : order)
        if (s_samples[idx] >= 0.0) {
          emit(idx, cur, s_samples[idx]);
          cur = s_samples[idx];
        }
    } else {
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (s_samples[*it] < 0.0) {
          emit(*it, cur, s_samples[*it]);
          cur = s_samples[*it];
        }
    }
  }
}

void coarse_step_warning(const CurvatureProfile& p, const std::vector<double>& s_samples,
                         std::vector<std::string>& warnings) {
  if (s_samples.size() < 2) return;
  double max_gap = 0.0;
  std::vector<double> sorted = s_samples;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    max_gap = std::max(max_gap, sorted[i] - sorted[i - 1]);
  if (max_gap * sup_gamma(p) > 0.1)
    warnings.push_back("curve sampling coarser than 0.1/sup|gamma|; bends may be under-resolved");
}

}  // namespace

CurveResult reference_curve_2d(const CurvatureProfile& p, const std::vector<double>& s_samples) {
  CurveResult r;
  r.samples.resize(s_samples.size());
  coarse_step_warning(p, s_samples, r.warnings);
  State2 q0{0.0, 0.0, 0.0};
  State2 q = q0;
  sweep_targets(s_samples, [&](int idx, double from, double to) {
    if (from == 0.0) q = q0;  // re-arm at the origin when the sweep switches direction
    q = advance2(p, q, from, to);
    r.samples[idx] = make_sample2(to, q);
  });
  return r;
}

CurveResult reference_curve_3d(const CurvatureProfile& k, const TorsionSpec& t,
                               const std::vector<double>& s_samples) {
  CurveResult r;
  r.samples.resize(s_samples.size());
  coarse_step_warning(k, s_samples, r.warnings);
  State3 q0;
  q0.y = {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1};
  State3 q = q0;
  sweep_targets(s_samples, [&](int idx, double from, double to) {
    if (from == 0.0) q = q0;
    q = advance3(k, t, q, from, to);
    r.samples[idx] = make_sample3(t, to, q);
  });
  return r;
}

FrameSample frame_at(const GuideSpec& spec, const CurvatureProfile& p, double s) {
  const std::vector<double> one{s};
  const CurveResult r = spec.dim == 2 ? reference_curve_2d(p, one)
                                      : reference_curve_3d(p, spec.torsion, one);
  return r.samples[0];
}

Vec3 map_to_guide(const GuideSpec& spec, const CurvatureProfile& p, double s, double u,
                  double u3) {
  const FrameSample f = frame_at(spec, p, s);
  if (spec.dim == 2) {
    if (u3 != 0.0) throw ConfigError("2D guide has a single transverse coordinate");
    if (!(std::abs(u) < 0.5 * spec.d))
      throw ConfigError("transverse coordinate outside the cross-section");
    return {f.Gamma[0] + u * f.e2[0], f.Gamma[1] + u * f.e2[1], 0.0};
  }
  if (!(std::abs(u) < 0.5 * spec.d2 && std::abs(u3) < 0.5 * spec.d3))
    throw ConfigError("transverse coordinate outside the cross-section");
  Vec3 x;
  for (int i = 0; i < 3; ++i) x[i] = f.Gamma[i] + u * f.te2[i] + u3 * f.te3[i];
  return x;
}

MetricSample metric_factor(const GuideSpec& spec, const CurvatureProfile& p, double s, double u) {
  if (spec.dim == 3) return metric_factor3(p, spec.torsion, s, u, 0.0);
  MetricSample m;
  m.jacobian = 1.0 - u * eval_profile(p, s, 0);
  m.ds_h = -u * eval_profile(p, s, 1);
  m.ds2_h = -u * eval_profile(p, s, 2);
  if (m.jacobian <= 0.0)
    throw AssumptionError("metric factor nonpositive at s = " + std::to_string(s) +
                          ": guide width exceeds curvature radius");
  return m;
}

MetricSample metric_factor3(const CurvatureProfile& kp, const TorsionSpec& t, double s, double u2,
                            double u3) {
  const double k = eval_profile(kp, s, 0);
  const double k1 = eval_profile(kp, s, 1);
  const double k2 = eval_profile(kp, s, 2);
  const double th = eval_theta(t, s, 0);
  const double tp = eval_theta(t, s, 1);
  const double tpp = eval_theta(t, s, 2);
  const double c = std::cos(th), sn = std::sin(th);
  const double alpha = c * u2 + sn * u3;
  const double beta = -sn * u2 + c * u3;
  MetricSample m;
  m.jacobian = 1.0 - k * alpha;
  m.ds_h = -(k1 * alpha + k * tp * beta);
  m.ds2_h = -(k2 * alpha + 2.0 * k1 * tp * beta + k * tpp * beta - k * tp * tp * alpha);
  if (m.jacobian <= 0.0)
    throw AssumptionError("metric factor nonpositive at s = " + std::to_string(s) +
                          ": tube cross-section exceeds curvature radius");
  return m;
}

InjectivityReport check_injectivity(const GuideSpec& spec, const CurvatureProfile& p,
                                    int n_samples) {
  InjectivityReport rep;
  rep.self_approach = kSelfApproachSentinel;
  const int n = std::max(n_samples, 16);
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = -spec.L + 2.0 * spec.L * i / (n - 1);
  const CurveResult curve = spec.dim == 2 ? reference_curve_2d(p, s)
                                          : reference_curve_3d(p, spec.torsion, s);
  std::vector<std::array<Vec3, 4>> pts(n);
  int npts = 0;
  for (int i = 0; i < n; ++i) {
    const FrameSample& f = curve.samples[i];
    if (spec.dim == 2) {
      npts = 2;
      for (int q = 0; q < 2; ++q) {
        const double u = (q == 0 ? 0.5 : -0.5) * spec.d;
        for (int c = 0; c < 3; ++c) pts[i][q][c] = f.Gamma[c] + u * f.e2[c];
      }
    } else {
      npts = 4;
      for (int q = 0; q < 4; ++q) {
        const double a = (q & 1 ? -0.5 : 0.5) * spec.d2;
        const double b = (q & 2 ? -0.5 : 0.5) * spec.d3;
        for (int c = 0; c < 3; ++c) pts[i][q][c] = f.Gamma[c] + a * f.te2[c] + b * f.te3[c];
      }
    }
  }
  // a pair counts as a re-approach only when far apart along the curve yet close in space
  const double min_arcsep = 4.0 * spec.a_omega();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double arcsep = s[j] - s[i];
      if (arcsep < min_arcsep) continue;
      for (int qi = 0; qi < npts; ++qi) {
        for (int qj = 0; qj < npts; ++qj) {
          const double dx = pts[i][qi][0] - pts[j][qj][0];
          const double dy = pts[i][qi][1] - pts[j][qj][1];
          const double dz = pts[i][qi][2] - pts[j][qj][2];
          const double e = std::sqrt(dx * dx + dy * dy + dz * dz);
          if (e < 0.5 * arcsep) rep.self_approach = std::min(rep.self_approach, e);
        }
      }
    }
  }
  const double d_min = spec.dim == 2 ? spec.d : std::min(spec.d2, spec.d3);
  rep.injective = !(rep.self_approach < 0.1 * d_min);
  return rep;
}

double signed_curvature_fd(const CurvatureProfile& p, double s, double step) {
  const std::vector<double> pts{s - 2 * step, s - step, s, s + step, s + 2 * step};
  const CurveResult r = reference_curve_2d(p, pts);
  auto g = [&](int i, int c) { return r.samples[i].Gamma[c]; };
  double d1[2], d2[2];
  for (int c = 0; c < 2; ++c) {
    d1[c] = (g(0, c) - 8.0 * g(1, c) + 8.0 * g(3, c) - g(4, c)) / (12.0 * step);
    d2[c] = (-g(0, c) + 16.0 * g(1, c) - 30.0 * g(2, c) + 16.0 * g(3, c) - g(4, c)) /
            (12.0 * step * step);
  }
  return d1[0] * d2[1] - d1[1] * d2[0];
}

}  // namespace qwg
