#pragma once

#include <cstddef>
#include <string_view>

namespace ipm::simd {

// y <- y + alpha * x
using AxpyFn = void (*)(std::size_t n, double alpha, const double* x, double* y);
using DotFn = double (*)(std::size_t n, const double* x, const double* y);
// y <- A x, A row-major rows x cols
using GemvFn = void (*)(std::size_t rows, std::size_t cols, const double* a,
                        const double* x, double* y);
// z <- x .* y
using HadamardFn = void (*)(std::size_t n, const double* x, const double* y, double* z);

struct KernelTable {
  std::string_view name;
  DotFn dot;
  AxpyFn axpy;
  GemvFn gemv;
  HadamardFn hadamard;
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Chosen once per process; IPM_SIMD=scalar forces the reference path.
const KernelTable& active_kernels();

inline double dot(std::size_t n, const double* x, const double* y) {
  return active_kernels().dot(n, x, y);
}
inline void axpy(std::size_t n, double alpha, const double* x, double* y) {
  active_kernels().axpy(n, alpha, x, y);
}
inline void gemv(std::size_t rows, std::size_t cols, const double* a, const double* x,
                 double* y) {
  active_kernels().gemv(rows, cols, a, x, y);
}
inline void hadamard(std::size_t n, const double* x, const double* y, double* z) {
  active_kernels().hadamard(n, x, y, z);
}

}  // namespace ipm::simd
