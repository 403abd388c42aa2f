// avx2/fma variants; compiled with -mavx2 -mfma, selected at runtime.
// Every lane performs the same operation sequence as the scalar reference
// (mul, fnmadd, fmadd per row_acc), so results are bitwise identical.

#include <immintrin.h>

#include <vector>

#include "qwg/kernels.hpp"

namespace qwg::kern {

void apply_avx2(const StencilView& a, const double* x, double* y) {
  const int ns = a.ns, n2 = a.n2, n3 = a.n3;
  const std::size_t rs = std::size_t(n2) * n3;
  const std::vector<double> zeros(std::size_t(n3), 0.0);
  const double tdiag = (a.au2 + a.au2) + (a.au3 + a.au3);
  const __m256d vtdiag = _mm256_set1_pd(tdiag);
  const __m256d vau2 = _mm256_set1_pd(a.au2);
  const __m256d vau3 = _mm256_set1_pd(a.au3);
  for (int i = 0; i < ns; ++i) {
    for (int j2 = 0; j2 < n2; ++j2) {
      const std::size_t r = (std::size_t(i) * n2 + j2) * n3;
      const double* xc = x + r;
      const double* clo = a.cs + (std::size_t(i) * n2 + j2) * n3;
      const double* chi = a.cs + (std::size_t(i + 1) * n2 + j2) * n3;
      const double* xsl = i > 0 ? x + r - rs : zeros.data();
      const double* xsh = i < ns - 1 ? x + r + rs : zeros.data();
      const double* x2l = j2 > 0 ? x + r - n3 : zeros.data();
      const double* x2h = j2 < n2 - 1 ? x + r + n3 : zeros.data();
      const double* vp = a.v + r;
      double* yp = y + r;

      auto lane = [&](int j3) {
        const double x3l = j3 > 0 ? xc[j3 - 1] : 0.0;
        const double x3h = j3 < n3 - 1 ? xc[j3 + 1] : 0.0;
        const double acc = row_acc(clo[j3], chi[j3], a.au2, a.au3, xc[j3], xsl[j3],
                                   xsh[j3], x2l[j3], x2h[j3], x3l, x3h);
        yp[j3] = std::fma(vp[j3], xc[j3], acc);
      };

      if (n3 > 0) lane(0);
      int j = 1;
      for (; j + 4 <= n3 - 1; j += 4) {
        const __m256d c_lo = _mm256_loadu_pd(clo + j);
        const __m256d c_hi = _mm256_loadu_pd(chi + j);
        const __m256d vx = _mm256_loadu_pd(xc + j);
        // (cs_lo + cs_hi) + tdiag, then * xc: same association as row_diag
        __m256d acc =
            _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(c_lo, c_hi), vtdiag), vx);
        acc = _mm256_fnmadd_pd(c_lo, _mm256_loadu_pd(xsl + j), acc);
        acc = _mm256_fnmadd_pd(c_hi, _mm256_loadu_pd(xsh + j), acc);
        acc = _mm256_fnmadd_pd(vau2, _mm256_loadu_pd(x2l + j), acc);
        acc = _mm256_fnmadd_pd(vau2, _mm256_loadu_pd(x2h + j), acc);
        acc = _mm256_fnmadd_pd(vau3, _mm256_loadu_pd(xc + j - 1), acc);
        acc = _mm256_fnmadd_pd(vau3, _mm256_loadu_pd(xc + j + 1), acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(vp + j), vx, acc);
        _mm256_storeu_pd(yp + j, acc);
      }
      for (; j < n3; ++j) lane(j);
    }
  }
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  alignas(32) double a[4];
  _mm256_store_pd(a, acc);
  // lane k holds indices k, k+4, ...: same partials as the scalar reference
  double s = (a[0] + a[1]) + (a[2] + a[3]);
  for (; i < n; ++i) s = std::fma(x[i], y[i], s);
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void scal_avx2(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace qwg::kern
