#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ipm/dense.hpp"
#include "ipm/kernels.hpp"

using namespace ipm;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

std::vector<const simd::KernelTable*> variants() {
  std::vector<const simd::KernelTable*> out;
  if (auto* t = simd::avx2_kernels()) out.push_back(t);
  if (auto* t = simd::neon_kernels()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("active table is one of the known variants") {
  const auto& a = simd::active_kernels();
  MESSAGE("active kernels: " << a.name);
  CHECK((a.name == "scalar" || a.name == "avx2" || a.name == "neon"));
}

TEST_CASE("SIMD variants match the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(7);
  for (const auto* var : variants()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 15u, 16u, 17u, 63u, 256u, 511u}) {
      auto x = random_vector(rng, n);
      auto y = random_vector(rng, n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
      CHECK(std::abs(var->dot(n, x.data(), y.data()) - ref.dot(n, x.data(), y.data())) <=
            1e-14 * (mag + 1.0));

      auto y1 = y, y2 = y;
      var->axpy(n, 0.37, x.data(), y1.data());
      ref.axpy(n, 0.37, x.data(), y2.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15);

      std::vector<double> z1(n), z2(n);
      var->hadamard(n, x.data(), y.data(), z1.data());
      ref.hadamard(n, x.data(), y.data(), z2.data());
      CHECK(z1 == z2);
    }
    for (std::size_t rows : {1u, 4u, 7u, 33u}) {
      for (std::size_t cols : {1u, 5u, 64u, 129u}) {
        auto a = random_vector(rng, rows * cols);
        auto x = random_vector(rng, cols);
        std::vector<double> y1(rows), y2(rows);
        var->gemv(rows, cols, a.data(), x.data(), y1.data());
        ref.gemv(rows, cols, a.data(), x.data(), y2.data());
        for (std::size_t r = 0; r < rows; ++r)
          CHECK(std::abs(y1[r] - y2[r]) <= 1e-14 * static_cast<double>(cols));
      }
    }
  }
}

TEST_CASE("dense matrix products") {
  DenseMatrix a(2, 3), b(3, 2);
  double v = 1.0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) a(r, c) = v++;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) b(r, c) = v++;
  DenseMatrix p = a * b;
  // [1 2 3; 4 5 6] * [7 8; 9 10; 11 12]
  CHECK(p(0, 0) == doctest::Approx(58));
  CHECK(p(0, 1) == doctest::Approx(64));
  CHECK(p(1, 0) == doctest::Approx(139));
  CHECK(p(1, 1) == doctest::Approx(154));
  auto y = a.apply(std::vector<double>{1.0, 0.0, -1.0});
  CHECK(y[0] == doctest::Approx(-2));
  CHECK(y[1] == doctest::Approx(-2));
  CHECK(a.transpose()(2, 1) == 6.0);
}
