#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qwg/grid.hpp"
#include "qwg/kernels.hpp"

namespace qwg {

// Straightened-operator discretization: divergence-form s-flux with the coefficient
// sampled at s half-points, 3-point transverse differences, potential on the diagonal.
// Faces are stored once and shared by both adjacent rows, so symmetry is exact.
struct DiscreteOperator {
  Grid grid;
  std::vector<double> cs;  // s-face coupling c(s_face, u)/ds^2, (n_s+1)*n2*n3 entries
  std::vector<double> v;   // node potential
  double au2 = 0.0, au3 = 0.0;  // transverse couplings 1/du^2 (au2 = 0 in 2D)
  std::string provenance;

  kern::StencilView view() const {
    return {cs.data(), v.data(), au2, au3, grid.n_s, grid.n2(), grid.n3()};
  }
  // matrix diagonal entry at node p (stencil row sum plus potential)
  double diag(std::size_t p) const;
};

double coeff_c(const CurvatureProfile& p, double s, double u);
double potential_v2(const CurvatureProfile& p, double s, double u);
double potential_v3(const CurvatureProfile& k, const TorsionSpec& t, double s, double u2,
                    double u3);

DiscreteOperator assemble(const Grid& g, const GuideSpec& spec, const CurvatureProfile& p);
Field apply(const DiscreteOperator& A, const Field& x);

// physical-guide field jacobian^{-1/2} * phi; centerline values pass through unchanged
Field straighten_inverse(const GuideSpec& spec, const CurvatureProfile& p, const Field& phi);
// discrete L2 norm with the jacobian quadrature weight (flat norm when weighted = false)
double guide_norm(const GuideSpec& spec, const CurvatureProfile& p, const Field& f,
                  bool weighted);

// visits every nonzero entry as (row, col, value); upper and lower pairs carry
// bit-identical values because faces are shared
template <class F>
void for_each_entry(const DiscreteOperator& A, F&& fn) {
  const Grid& g = A.grid;
  const int n2 = g.n2(), n3 = g.n3();
  const std::size_t rs = std::size_t(n2) * n3;
  for (int i = 0; i < g.n_s; ++i)
    for (int j2 = 0; j2 < n2; ++j2)
      for (int j3 = 0; j3 < n3; ++j3) {
        const std::size_t p = g.idx(i, j2, j3);
        fn(p, p, A.diag(p));
        if (i > 0) fn(p, p - rs, -A.cs[(std::size_t(i) * n2 + j2) * n3 + j3]);
        if (i < g.n_s - 1) fn(p, p + rs, -A.cs[(std::size_t(i + 1) * n2 + j2) * n3 + j3]);
        if (j2 > 0) fn(p, p - n3, -A.au2);
        if (j2 < n2 - 1) fn(p, p + n3, -A.au2);
        if (j3 > 0) fn(p, p - 1, -A.au3);
        if (j3 < n3 - 1) fn(p, p + 1, -A.au3);
      }
}

// coordinate-triplet text dump: row col value per line
void dump_coo(const DiscreteOperator& A, std::ostream& os);

}  // namespace qwg
