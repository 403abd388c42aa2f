#pragma once

#include <cmath>
#include <cstddef>

namespace qwg::kern {

// Stencil operand for the assembled operator. Node (i, j2, j3) lives at
// (i*n2 + j2)*n3 + j3 (s-major). cs holds the s-face couplings c(s_face, u)/ds^2
// with face f in [0, ns] at (f*n2 + j2)*n3 + j3; face f is shared by node i=f-1
// (as its high face) and node i=f (as its low face), which makes the operator
// symmetric bitwise. au2/au3 are the transverse couplings 1/du^2 (au2 = 0 in 2D,
// where n2 == 1). Dirichlet neighbors are folded in as exact zeros.
struct StencilView {
  const double* cs;
  const double* v;
  double au2, au3;
  int ns, n2, n3;
  std::size_t size() const { return std::size_t(ns) * std::size_t(n2) * std::size_t(n3); }
  std::size_t faces() const { return std::size_t(ns + 1) * std::size_t(n2) * std::size_t(n3); }
};

// One stencil row in the fixed evaluation order shared by every backend and by the
// centerline reconstruction. The order is load-bearing: reconstruction recomputes this
// exact sequence so the row cancels against apply() output to one rounding; reordering
// the sums changes last-ulp results and breaks that identity.
inline double row_diag(double cs_lo, double cs_hi, double au2, double au3) {
  return (cs_lo + cs_hi) + ((au2 + au2) + (au3 + au3));
}

inline double row_acc(double cs_lo, double cs_hi, double au2, double au3, double xc,
                      double x_slo, double x_shi, double x2lo, double x2hi, double x3lo,
                      double x3hi) {
  double acc = row_diag(cs_lo, cs_hi, au2, au3) * xc;
  acc = std::fma(-cs_lo, x_slo, acc);
  acc = std::fma(-cs_hi, x_shi, acc);
  acc = std::fma(-au2, x2lo, acc);
  acc = std::fma(-au2, x2hi, acc);
  acc = std::fma(-au3, x3lo, acc);
  acc = std::fma(-au3, x3hi, acc);
  return acc;
}

enum class Backend { scalar, avx2 };

bool avx2_supported();
const char* backend_name(Backend b);
// QWG_KERNELS=scalar|avx2|auto override, else cpu detection; cached after first call
Backend active_backend();
// test hook; throws ConfigError if the requested backend is unavailable
void force_backend(Backend b);
void clear_forced_backend();

// y = A x
void apply(const StencilView& a, const double* x, double* y);
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
// y += alpha x
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);

// reference and simd entry points, exposed so the equivalence tests can pin
// bitwise-identical results across backends
void apply_scalar(const StencilView& a, const double* x, double* y);
double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scal_scalar(double alpha, double* x, std::size_t n);
void apply_avx2(const StencilView& a, const double* x, double* y);
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scal_avx2(double alpha, double* x, std::size_t n);

}  // namespace qwg::kern
