#include "qwg/operator.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "qwg/errors.hpp"

namespace qwg {

double coeff_c(const CurvatureProfile& p, double s, double u) {
  const double w = 1.0 - u * eval_profile(p, s, 0);
  if (w <= 0.0)
    throw AssumptionError("metric factor nonpositive at s = " + std::to_string(s));
  return 1.0 / (w * w);
}

double potential_v2(const CurvatureProfile& p, double s, double u) {
  const double g = eval_profile(p, s, 0);
  const double gp = eval_profile(p, s, 1);
  const double gpp = eval_profile(p, s, 2);
  const double w = 1.0 - u * g;
  if (w <= 0.0)
    throw AssumptionError("metric factor nonpositive at s = " + std::to_string(s));
  const double w2 = w * w;
  // grouping is fixed: at u = +0.0 the last two terms are signed zeros and the sum
  // returns the first term bitwise, so the centerline value is exactly -(g*g)/4
  const double t1 = -(g * g) / (4.0 * w2);
  const double t2 = -(u * gpp) / (2.0 * (w2 * w));
  const double t3 = -5.0 * (u * u) * (gp * gp) / (4.0 * (w2 * w2));
  return t1 + (t2 + t3);
}

double potential_v3(const CurvatureProfile& k, const TorsionSpec& t, double s, double u2,
                    double u3) {
  const MetricSample m = metric_factor3(k, t, s, u2, u3);
  const double kk = eval_profile(k, s, 0);
  const double h2 = m.jacobian * m.jacobian;
  const double t1 = -(kk * kk) / (4.0 * h2);
  const double t2 = m.ds2_h / (2.0 * (h2 * m.jacobian));
  const double t3 = -5.0 * (m.ds_h * m.ds_h) / (4.0 * (h2 * h2));
  return t1 + (t2 + t3);
}

double DiscreteOperator::diag(std::size_t p) const {
  const std::size_t rs = std::size_t(grid.n2()) * grid.n3();
  const std::size_t i = p / rs, t = p % rs;
  return kern::row_diag(cs[i * rs + t], cs[(i + 1) * rs + t], au2, au3) + v[p];
}

DiscreteOperator assemble(const Grid& g, const GuideSpec& spec, const CurvatureProfile& p) {
  if (g.dim != spec.dim) throw ConfigError("grid/guide dimension mismatch");
  const AssumptionReport rep = validate_assumptions(p, spec);
  if (!rep.bounds_ok()) {
    std::string msg = "assembly preconditions violated:";
    for (const auto& n : rep.notes) msg += " " + n + ";";
    throw AssumptionError(msg);
  }
  DiscreteOperator A;
  A.grid = g;
  const double inv_ds2 = 1.0 / (g.ds * g.ds);
  A.au3 = 1.0 / (g.du3 * g.du3);
  A.au2 = g.dim == 3 ? 1.0 / (g.du2 * g.du2) : 0.0;
  const int n2 = g.n2(), n3 = g.n3();
  A.cs.resize(std::size_t(g.n_s + 1) * n2 * n3);
  A.v.resize(g.size());
  if (g.dim == 2) {
    for (int f = 0; f <= g.n_s; ++f) {
      const double sf = g.s_face(f);
      for (int j = 0; j < n3; ++j)
        A.cs[std::size_t(f) * n3 + j] = coeff_c(p, sf, g.u3(j)) * inv_ds2;
    }
    for (int i = 0; i < g.n_s; ++i) {
      const double si = g.s(i);
      for (int j = 0; j < n3; ++j)
        A.v[std::size_t(i) * n3 + j] = potential_v2(p, si, g.u3(j));
    }
    A.provenance = "profile " + to_string(p.family);
  } else {
    for (int f = 0; f <= g.n_s; ++f) {
      const double sf = g.s_face(f);
      for (int j2 = 0; j2 < n2; ++j2)
        for (int j3 = 0; j3 < n3; ++j3) {
          const double h = metric_factor3(p, spec.torsion, sf, g.u2(j2), g.u3(j3)).jacobian;
          A.cs[(std::size_t(f) * n2 + j2) * n3 + j3] = 1.0 / (h * h) * inv_ds2;
        }
    }
    for (int i = 0; i < g.n_s; ++i) {
      const double si = g.s(i);
      for (int j2 = 0; j2 < n2; ++j2)
        for (int j3 = 0; j3 < n3; ++j3)
          A.v[g.idx(i, j2, j3)] = potential_v3(p, spec.torsion, si, g.u2(j2), g.u3(j3));
    }
    A.provenance = "profile " + to_string(p.family) + ", torsion " + to_string(spec.torsion.family);
  }
  return A;
}

Field apply(const DiscreteOperator& A, const Field& x) {
  if (!(x.grid == A.grid)) throw ConfigError("field grid does not match operator grid");
  Field y(A.grid);
  kern::apply(A.view(), x.v.data(), y.v.data());
  return y;
}

namespace {
double node_jacobian(const GuideSpec& spec, const CurvatureProfile& p, const Grid& g, int i,
                     int j2, int j3) {
  if (g.dim == 2) {
    const double w = 1.0 - g.u3(j3) * eval_profile(p, g.s(i), 0);
    if (w <= 0.0) throw AssumptionError("metric factor nonpositive inside the grid");
    return w;
  }
  return metric_factor3(p, spec.torsion, g.s(i), g.u2(j2), g.u3(j3)).jacobian;
}
}  // namespace

Field straighten_inverse(const GuideSpec& spec, const CurvatureProfile& p, const Field& phi) {
  Field out(phi.grid);
  const Grid& g = phi.grid;
  for (int i = 0; i < g.n_s; ++i)
    for (int j2 = 0; j2 < g.n2(); ++j2)
      for (int j3 = 0; j3 < g.n3(); ++j3) {
        const std::size_t q = g.idx(i, j2, j3);
        out.v[q] = phi.v[q] / std::sqrt(node_jacobian(spec, p, g, i, j2, j3));
      }
  return out;
}

double guide_norm(const GuideSpec& spec, const CurvatureProfile& p, const Field& f,
                  bool weighted) {
  const Grid& g = f.grid;
  const double dv = g.dim == 2 ? g.ds * g.du3 : g.ds * g.du2 * g.du3;
  double acc = 0.0;
  for (int i = 0; i < g.n_s; ++i)
    for (int j2 = 0; j2 < g.n2(); ++j2)
      for (int j3 = 0; j3 < g.n3(); ++j3) {
        const std::size_t q = g.idx(i, j2, j3);
        const double w = weighted ? node_jacobian(spec, p, g, i, j2, j3) : 1.0;
        acc += w * f.v[q] * f.v[q];
      }
  return std::sqrt(acc * dv);
}

void dump_coo(const DiscreteOperator& A, std::ostream& os) {
  std::ostringstream line;
  line.precision(17);
  for_each_entry(A, [&](std::size_t r, std::size_t c, double val) {
    line.str("");
    line << r << ' ' << c << ' ' << val << '\n';
    os << line.str();
  });
}

}  // namespace qwg
