#include <arm_neon.h>

#include "ipm/kernels.hpp"

namespace ipm::simd {
namespace {

double dot_neon(std::size_t n, const double* x, const double* y) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_neon(std::size_t n, double alpha, const double* x, double* y) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_neon(std::size_t rows, std::size_t cols, const double* a, const double* x,
               double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(cols, a + r * cols, x);
}

void hadamard_neon(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(z + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{"neon", dot_neon, axpy_neon, gemv_neon, hadamard_neon};
  return table;
}

}  // namespace ipm::simd
