#include "qwg/kernels.hpp"

namespace qwg::kern {

void apply_scalar(const StencilView& a, const double* x, double* y) {
  const int ns = a.ns, n2 = a.n2, n3 = a.n3;
  const std::size_t rs = std::size_t(n2) * n3;  // s-stride
  for (int i = 0; i < ns; ++i) {
    for (int j2 = 0; j2 < n2; ++j2) {
      const std::size_t r = (std::size_t(i) * n2 + j2) * n3;
      const double* clo = a.cs + (std::size_t(i) * n2 + j2) * n3;
      const double* chi = a.cs + (std::size_t(i + 1) * n2 + j2) * n3;
      for (int j3 = 0; j3 < n3; ++j3) {
        const std::size_t p = r + j3;
        const double xc = x[p];
        const double xsl = i > 0 ? x[p - rs] : 0.0;
        const double xsh = i < ns - 1 ? x[p + rs] : 0.0;
        const double x2l = j2 > 0 ? x[p - n3] : 0.0;
        const double x2h = j2 < n2 - 1 ? x[p + n3] : 0.0;
        const double x3l = j3 > 0 ? x[p - 1] : 0.0;
        const double x3h = j3 < n3 - 1 ? x[p + 1] : 0.0;
        const double acc =
            row_acc(clo[j3], chi[j3], a.au2, a.au3, xc, xsl, xsh, x2l, x2h, x3l, x3h);
        y[p] = std::fma(a.v[p], xc, acc);
      }
    }
  }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  // four independent accumulators combined pairwise: matches the avx2 lane layout so
  // the reduction is bitwise backend-independent
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = std::fma(x[i], y[i], a0);
    a1 = std::fma(x[i + 1], y[i + 1], a1);
    a2 = std::fma(x[i + 2], y[i + 2], a2);
    a3 = std::fma(x[i + 3], y[i + 3], a3);
  }
  double s = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) s = std::fma(x[i], y[i], s);
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void scal_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace qwg::kern
