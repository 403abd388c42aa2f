#pragma once

#include <cstddef>
#include <vector>

#include "qwg/geometry.hpp"

namespace qwg {

// Interior tensor grid on the truncated straightened domain [-L, L] x cross-section.
// n_u is odd so the centerline u = 0 (and (0,0) in 3D) is an interior node; node
// coordinates are centered differences of exact half-integers so the grid is
// symmetric bitwise and the centerline coordinate is exactly +0.0.
struct Grid {
  int dim = 2;
  int n_s = 0;
  int n_u = 0;  // interior nodes per transverse axis
  double L = 0.0;
  double d2 = 0.0, d3 = 0.0;  // 2D: d3 holds the strip width
  double ds = 0.0, du2 = 0.0, du3 = 0.0;

  static Grid make(const GuideSpec& spec, int n_s, int n_u);

  int n2() const { return dim == 3 ? n_u : 1; }
  int n3() const { return n_u; }
  std::size_t size() const { return std::size_t(n_s) * n2() * n3(); }
  std::size_t idx(int i, int j2, int j3) const {
    return (std::size_t(i) * n2() + j2) * n3() + j3;
  }
  int center_j() const { return (n_u - 1) / 2; }

  double s(int i) const { return ((i + 1) - 0.5 * (n_s + 1)) * ds; }
  double s_face(int f) const { return ((f + 0.5) - 0.5 * (n_s + 1)) * ds; }
  double u2(int j) const { return dim == 3 ? ((j + 1) - 0.5 * (n_u + 1)) * du2 : 0.0; }
  double u3(int j) const { return ((j + 1) - 0.5 * (n_u + 1)) * du3; }

  bool operator==(const Grid&) const = default;
};

// Interior node values; the Dirichlet boundary is an implied ring of exact zeros.
struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(g.size(), 0.0) {}
  double& operator[](std::size_t p) { return v[p]; }
  double operator[](std::size_t p) const { return v[p]; }
  std::size_t size() const { return v.size(); }
};

}  // namespace qwg
