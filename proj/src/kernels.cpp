#include "qwg/kernels.hpp"

#include <cstdlib>
#include <optional>
#include <string>

#include "qwg/errors.hpp"

namespace qwg::kern {

namespace {
std::optional<Backend> g_forced;
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

namespace {
Backend detect() {
  const char* env = std::getenv("QWG_KERNELS");
  const std::string req = env ? env : "auto";
  if (req == "scalar") return Backend::scalar;
  if (req == "avx2") {
    if (!avx2_supported()) throw ConfigError("QWG_KERNELS=avx2 but cpu lacks avx2+fma");
    return Backend::avx2;
  }
  if (req == "auto") return avx2_supported() ? Backend::avx2 : Backend::scalar;
  throw ConfigError("QWG_KERNELS must be scalar|avx2|auto, got '" + req + "'");
}
}  // namespace

Backend active_backend() {
  if (g_forced) return *g_forced;
  static const Backend detected = detect();
  return detected;
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw ConfigError("cannot force avx2 backend: cpu lacks avx2+fma");
  g_forced = b;
}

void clear_forced_backend() { g_forced.reset(); }

void apply(const StencilView& a, const double* x, double* y) {
  if (active_backend() == Backend::avx2) return apply_avx2(a, x, y);
  apply_scalar(a, x, y);
}

double dot(const double* x, const double* y, std::size_t n) {
  if (active_backend() == Backend::avx2) return dot_avx2(x, y, n);
  return dot_scalar(x, y, n);
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  if (active_backend() == Backend::avx2) return axpy_avx2(alpha, x, y, n);
  axpy_scalar(alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) {
  if (active_backend() == Backend::avx2) return scal_avx2(alpha, x, n);
  scal_scalar(alpha, x, n);
}

}  // namespace qwg::kern
