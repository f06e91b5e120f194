#include "ipm/angular_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ipm/errors.hpp"
#include "ipm/kernels.hpp"

namespace ipm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kUniformAccuracy = 4;
constexpr int kUniformInterpPoints = 6;

int pidx(Parity p) { return p == Parity::even ? 0 : 1; }

// Coefficients (ascending) of the Lagrange basis polynomial for node m.
std::vector<double> lagrange_basis(std::span<const double> t, std::size_t m) {
  std::vector<double> c{1.0};
  double denom = 1.0;
  for (std::size_t l = 0; l < t.size(); ++l) {
    if (l == m) continue;
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t q = 0; q < c.size(); ++q) {
      next[q + 1] += c[q];
      next[q] -= t[l] * c[q];
    }
    c = std::move(next);
    denom *= t[m] - t[l];
  }
  for (double& v : c) v /= denom;
  return c;
}

double poly_integral(const std::vector<double>& c, double a, double b) {
  double s = 0.0;
  double pa = a, pb = b;
  for (std::size_t q = 0; q < c.size(); ++q) {
    s += c[q] * (pb - pa) / static_cast<double>(q + 1);
    pa *= a;
    pb *= b;
  }
  return s;
}

double poly_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t q = c.size(); q-- > 0;) s = s * x + c[q];
  return s;
}

// Scatter a stencil weight to a node, folding ghost indices through θ = 0.
void scatter(std::vector<double>& row, int m, double w, double sign) {
  if (m < 0)
    row[static_cast<std::size_t>(-m)] += sign * w;
  else
    row[static_cast<std::size_t>(m)] += w;
}

}  // namespace

std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x,
                                                  int max_order) {
  const std::size_t np = x.size();
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(np, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < np; ++i) {
    const int mn = std::min(static_cast<int>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

AngularGrid::AngularGrid(GridKind kind, double L, std::size_t n) : kind_(kind), L_(L) {
  if (!(L > 0.0) || !(L < kPi / 2)) throw DomainError("grid half-angle must lie in (0, pi/2)");
  if (n < 3) throw ResolutionError("grid needs at least 3 nodes");
  nodes_.resize(n);
  const double M = 2.0 * static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (kind == GridKind::clustered)
      nodes_[j] = L * std::sin(kPi * static_cast<double>(j) / M);
    else
      nodes_[j] = L * static_cast<double>(j) / static_cast<double>(n - 1);
  }
  nodes_.front() = 0.0;
  nodes_.back() = L;
}

std::shared_ptr<const AngularGrid> AngularGrid::clustered(double L, std::size_t n) {
  return std::shared_ptr<const AngularGrid>(new AngularGrid(GridKind::clustered, L, n));
}

std::shared_ptr<const AngularGrid> AngularGrid::uniform(double L, std::size_t n) {
  if (n < 10) throw ResolutionError("uniform grid needs at least 10 nodes");
  return std::shared_ptr<const AngularGrid>(new AngularGrid(GridKind::uniform, L, n));
}

double AngularGrid::min_spacing() const {
  double h = L_;
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::min(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

const std::vector<double>& AngularGrid::quad_weights() const {
  std::call_once(weights_once_, [this] {
    const DenseMatrix& c = cumulative_matrix(Parity::even);
    const double* last = c.row(n() - 1);
    weights_.assign(last, last + n());
  });
  return weights_;
}

// ---------------------------------------------------------------- clustered

DenseMatrix AngularGrid::build_derivative_clustered(int order, Parity p) const {
  const std::size_t n = this->n();
  const std::size_t M = 2 * (n - 1);
  const std::size_t N = M + 1;

  // Rows k <= n-1 of the Chebyshev-Lobatto differentiation matrices on
  // [-1, 1], built by the Weideman-Reddy recursion. Each row depends only on
  // itself, so the nonnegative half suffices.
  std::vector<double> z(n * N, 0.0), cw(N);
  for (std::size_t l = 0; l < N; ++l) {
    cw[l] = ((l == 0 || l == M) ? 2.0 : 1.0) * ((l % 2 == 0) ? 1.0 : -1.0);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < N; ++l) {
      if (l == k) continue;
      const double diff = 2.0 * std::sin(kPi * static_cast<double>(k + l) / (2.0 * M)) *
                          std::sin(kPi * (static_cast<double>(l) - static_cast<double>(k)) /
                                   (2.0 * M));
      z[k * N + l] = 1.0 / diff;
    }
  }
  std::vector<double> d(n * N, 0.0);
  for (std::size_t k = 0; k < n; ++k) d[k * N + k] = 1.0;
  for (int ell = 1; ell <= order; ++ell) {
    for (std::size_t k = 0; k < n; ++k) {
      double* row = d.data() + k * N;
      const double dkk = row[k];
      double sum = 0.0;
      for (std::size_t l = 0; l < N; ++l) {
        if (l == k) continue;
        row[l] = ell * z[k * N + l] * ((cw[k] / cw[l]) * dkk - row[l]);
        sum += row[l];
      }
      row[k] = -sum;
    }
  }

  const double s = parity_sign(p);
  const double scale = std::pow(L_, -order);
  DenseMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = n - 1 - j;
    const double* row = d.data() + k * N;
    out(j, 0) = row[n - 1] * scale;
    for (std::size_t i = 1; i < n; ++i) out(j, i) = (row[n - 1 - i] + s * row[n - 1 + i]) * scale;
  }
  return out;
}

std::vector<double> AngularGrid::chebyshev_coefficients(std::span<const double> values,
                                                        Parity p) const {
  const std::size_t n = this->n();
  const std::size_t M = 2 * (n - 1);
  std::vector<double> u(M + 1);
  const double s = parity_sign(p);
  u[n - 1] = values[0];
  for (std::size_t i = 1; i < n; ++i) {
    u[n - 1 - i] = values[i];
    u[n - 1 + i] = s * values[i];
  }
  std::vector<double> a(M + 1, 0.0);
  for (std::size_t m = 0; m <= M; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= M; ++k) {
      const double h = (k == 0 || k == M) ? 0.5 : 1.0;
      acc += h * u[k] * std::cos(kPi * static_cast<double>((m * k) % (2 * M)) / M);
    }
    a[m] = 2.0 * acc / M;
  }
  a[0] *= 0.5;
  a[M] *= 0.5;
  return a;
}

namespace {

// Antiderivative coefficients b (length a.size()+1) with b_0 = 0.
std::vector<double> chebyshev_antiderivative(const std::vector<double>& a) {
  const std::size_t M = a.size() - 1;
  std::vector<double> b(M + 2, 0.0);
  auto at = [&](std::size_t m) { return m <= M ? a[m] : 0.0; };
  b[1] = at(0) - 0.5 * at(2);
  for (std::size_t m = 2; m <= M + 1; ++m)
    b[m] = (at(m - 1) - at(m + 1)) / (2.0 * static_cast<double>(m));
  return b;
}

double chebyshev_at_zero(const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t m = 0; m < b.size(); m += 2) s += ((m / 2) % 2 == 0 ? 1.0 : -1.0) * b[m];
  return s;
}

}  // namespace

DenseMatrix AngularGrid::build_cumulative_clustered(Parity p) const {
  const std::size_t n = this->n();
  const std::size_t M = 2 * (n - 1);
  std::vector<double> ct(2 * M);
  for (std::size_t q = 0; q < 2 * M; ++q) ct[q] = std::cos(kPi * static_cast<double>(q) / M);
  const double s = parity_sign(p);

  DenseMatrix c(n, n);
  std::vector<double> a(M + 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Coefficients of the parity extension of the i-th unit vector.
    const std::size_t k1 = n - 1 - i;
    const std::size_t k2 = n - 1 + i;
    const double h1 = (k1 == 0) ? 0.5 : 1.0;
    const double h2 = (k2 == M) ? 0.5 : 1.0;
    for (std::size_t m = 0; m <= M; ++m) {
      double acc = h1 * ct[(m * k1) % (2 * M)];
      if (i > 0) acc += s * h2 * ct[(m * k2) % (2 * M)];
      a[m] = 2.0 * acc / M;
    }
    a[0] *= 0.5;
    a[M] *= 0.5;
    const std::vector<double> b = chebyshev_antiderivative(a);
    const double f0 = chebyshev_at_zero(b);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = n - 1 - j;
      double acc = 0.0;
      for (std::size_t m = 1; m < b.size(); ++m) acc += b[m] * ct[(m * k) % (2 * M)];
      c(j, i) = L_ * (acc - f0);
    }
  }
  return c;
}

// ---------------------------------------------------------------- uniform

DenseMatrix AngularGrid::build_derivative_uniform(int order, Parity p) const {
  const int n = static_cast<int>(this->n());
  const int wc = 2 * ((order + 1) / 2) - 1 + kUniformAccuracy;
  const int wb = order + kUniformAccuracy;
  if (n < std::max(wc, wb) + 1) throw ResolutionError("too few nodes for the requested order");
  const int q = (wc - 1) / 2;
  const double h = L_ / static_cast<double>(n - 1);
  const double s = parity_sign(p);
  DenseMatrix d(n, n);
  std::vector<double> row(n);
  for (int j = 0; j < n; ++j) {
    int start, width;
    if (j + q <= n - 1) {
      start = j - q;
      width = wc;
    } else {
      start = n - wb;
      width = wb;
    }
    std::vector<double> off(width);
    for (int t = 0; t < width; ++t) off[t] = static_cast<double>(start + t - j);
    const auto w = fornberg_weights(0.0, off, order);
    std::fill(row.begin(), row.end(), 0.0);
    for (int t = 0; t < width; ++t) scatter(row, start + t, w[order][t], s);
    const double scale = std::pow(h, -order);
    for (int i = 0; i < n; ++i) d(j, i) = row[i] * scale;
  }
  return d;
}

DenseMatrix AngularGrid::build_upwind_uniform(Parity p, int dir) const {
  const int n = static_cast<int>(this->n());
  constexpr int width = 5;
  if (n < width + 1) throw ResolutionError("too few nodes for the upwind stencil");
  const double h = L_ / static_cast<double>(n - 1);
  const double s = parity_sign(p);
  DenseMatrix d(n, n);
  std::vector<double> row(n);
  std::vector<double> off(width);
  for (int j = 0; j < n; ++j) {
    int start = dir > 0 ? j - 3 : j - 1;
    start = std::min(start, n - width);
    for (int t = 0; t < width; ++t) off[t] = static_cast<double>(start + t - j);
    const auto w = fornberg_weights(0.0, off, 1);
    std::fill(row.begin(), row.end(), 0.0);
    for (int t = 0; t < width; ++t) scatter(row, start + t, w[1][t], s);
    for (int i = 0; i < n; ++i) d(j, i) = row[i] / h;
  }
  return d;
}

int AngularGrid::uniform_window_start(std::size_t interval) const {
  const int n = static_cast<int>(this->n());
  int start = static_cast<int>(interval) - 2;
  if (start + kUniformInterpPoints - 1 > n - 1) start = n - kUniformInterpPoints;
  return start;
}

DenseMatrix AngularGrid::build_cumulative_uniform(Parity p) const {
  const std::size_t n = this->n();
  const double h = L_ / static_cast<double>(n - 1);
  const double s = parity_sign(p);
  DenseMatrix c(n, n);
  std::vector<double> acc(n, 0.0);
  std::vector<double> t(kUniformInterpPoints);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int start = uniform_window_start(i);
    for (int m = 0; m < kUniformInterpPoints; ++m)
      t[m] = static_cast<double>(start + m) - static_cast<double>(i);
    for (int m = 0; m < kUniformInterpPoints; ++m) {
      const double w = h * poly_integral(lagrange_basis(t, m), 0.0, 1.0);
      scatter(acc, start + m, w, s);
    }
    std::copy(acc.begin(), acc.end(), c.row(i + 1));
  }
  return c;
}

// ---------------------------------------------------------------- shared

const DenseMatrix& AngularGrid::derivative_matrix(int order, Parity p) const {
  if (order < 1 || order > kMaxDerivativeOrder)
    throw UnsupportedOrderError("derivative order must be 1..5");
  if (kind_ == GridKind::clustered && 2 * (n() - 1) < static_cast<std::size_t>(order) + 1)
    throw ResolutionError("too few nodes for the requested order");
  const int pi = pidx(p);
  std::call_once(deriv_once_[order][pi], [&] {
    DenseMatrix d;
    if (kind_ == GridKind::clustered) {
      d = build_derivative_clustered(order, p);
    } else {
      d = build_derivative_uniform(order, p);
    }
    // Odd outputs vanish at θ = 0 exactly.
    if (flip(p, order) == Parity::odd) std::fill(d.row(0), d.row(0) + d.cols(), 0.0);
    deriv_[order][pi] = std::move(d);
  });
  return deriv_[order][pi];
}

const DenseMatrix& AngularGrid::upwind_derivative_matrix(Parity p, int dir) const {
  if (kind_ == GridKind::clustered) return derivative_matrix(1, p);
  const int pi = pidx(p), di = dir > 0 ? 0 : 1;
  std::call_once(upwind_once_[di][pi], [&] {
    DenseMatrix d = build_upwind_uniform(p, dir);
    if (flip(p) == Parity::odd) std::fill(d.row(0), d.row(0) + d.cols(), 0.0);
    upwind_[di][pi] = std::move(d);
  });
  return upwind_[di][pi];
}

const DenseMatrix& AngularGrid::cumulative_matrix(Parity p) const {
  const int pi = pidx(p);
  std::call_once(cumul_once_[pi], [&] {
    cumul_[pi] = kind_ == GridKind::clustered ? build_cumulative_clustered(p)
                                              : build_cumulative_uniform(p);
  });
  return cumul_[pi];
}

std::vector<double> AngularGrid::derivative_row(double theta, int order, Parity p) const {
  const double one = 1.0;
  return derivative_row(std::span<const double>(&theta, 1), std::span<const double>(&one, 1), order,
                        p);
}

std::vector<double> AngularGrid::derivative_row(std::span<const double> thetas,
                                                std::span<const double> w, int order,
                                                Parity p) const {
  if (order < 0 || order > kMaxDerivativeOrder)
    throw UnsupportedOrderError("derivative order must be 0..5");
  if (thetas.size() != w.size()) throw DomainError("points and weights differ in length");
  const std::size_t n = this->n();
  std::vector<double> row(n, 0.0);
  if (kind_ == GridKind::uniform || order == 0) {
    std::vector<double> ip(n, 0.0);
    for (std::size_t q = 0; q < thetas.size(); ++q) {
      const auto r = interpolation_row(thetas[q], p);
      for (std::size_t k = 0; k < n; ++k) ip[k] += w[q] * r[k];
    }
    if (order == 0) return ip;
    const DenseMatrix& d = derivative_matrix(order, p);
    for (std::size_t k = 0; k < n; ++k)
      if (ip[k] != 0.0)
        for (std::size_t j = 0; j < n; ++j) row[j] += ip[k] * d(k, j);
    return row;
  }
  const std::size_t M = 2 * (n - 1);
  // T_m^(order)(x) by T_{m+1}^(k) = 2x T_m^(k) + 2k T_m^(k-1) − T_{m-1}^(k).
  std::vector<double> t(M + 1, 0.0);
  std::vector<std::vector<double>> T(order + 1, std::vector<double>(M + 1));
  for (std::size_t q = 0; q < thetas.size(); ++q) {
    if (thetas[q] < 0.0 || thetas[q] > L_ * (1.0 + 1e-14))
      throw DomainError("derivative point outside [0, L]");
    const double x = std::min(thetas[q], L_) / L_;
    T[0][0] = 1.0;
    T[0][1] = x;
    for (std::size_t m = 1; m < M; ++m) T[0][m + 1] = 2 * x * T[0][m] - T[0][m - 1];
    for (int k = 1; k <= order; ++k) {
      T[k][0] = 0.0;
      T[k][1] = k == 1 ? 1.0 : 0.0;
      for (std::size_t m = 1; m < M; ++m)
        T[k][m + 1] = 2 * x * T[k][m] + 2 * k * T[k - 1][m] - T[k][m - 1];
    }
    for (std::size_t m = 0; m <= M; ++m) t[m] += w[q] * T[order][m];
  }
  std::call_once(dct_once_, [&] {
    // Coefficient m = (2/M) Σ'' u_k cos(πmk/M), u the parity-folded values.
    dct_ = DenseMatrix(M + 1, M + 1);
    for (std::size_t k = 0; k <= M; ++k) {
      const double ck = (k == 0 || k == M) ? 0.5 : 1.0;
      for (std::size_t m = 0; m <= M; ++m) {
        const double cm = (m == 0 || m == M) ? 0.5 : 1.0;
        dct_(k, m) = 2.0 * ck * cm / M *
                     std::cos(kPi * static_cast<double>((m * k) % (2 * M)) / M);
      }
    }
  });
  const double s = parity_sign(p);
  const double scale = std::pow(L_, -order);
  auto u = [&](std::size_t k) { return simd::dot(M + 1, dct_.row(k), t.data()); };
  row[0] = u(n - 1) * scale;
  for (std::size_t i = 1; i < n; ++i) row[i] = (u(n - 1 - i) + s * u(n - 1 + i)) * scale;
  return row;
}

std::vector<double> AngularGrid::interpolation_row(double theta, Parity p) const {
  const std::size_t n = this->n();
  std::vector<double> row(n, 0.0);
  if (theta < 0.0 || theta > L_ * (1.0 + 1e-14))
    throw DomainError("interpolation point outside [0, L]");
  theta = std::min(theta, L_);
  const double s = parity_sign(p);

  if (kind_ == GridKind::clustered) {
    const std::size_t M = 2 * (n - 1);
    const double x = theta / L_;
    std::vector<double> r(M + 1);
    double denom = 0.0;
    for (std::size_t k = 0; k <= M; ++k) {
      const double off = static_cast<double>(n - 1) - static_cast<double>(k);
      const double xk = std::sin(kPi * off / M);
      const double diff = x - xk;
      if (diff == 0.0) {
        // Exact hit on a node.
        if (k <= n - 1) {
          row[n - 1 - k] = 1.0;
        } else {
          row[k - (n - 1)] = s;
        }
        return row;
      }
      double w = (k % 2 == 0) ? 1.0 : -1.0;
      if (k == 0 || k == M) w *= 0.5;
      r[k] = w / diff;
      denom += r[k];
    }
    row[0] = r[n - 1] / denom;
    for (std::size_t i = 1; i < n; ++i) row[i] = (r[n - 1 - i] + s * r[n - 1 + i]) / denom;
    return row;
  }

  const double h = L_ / static_cast<double>(n - 1);
  const std::size_t interval = std::min(static_cast<std::size_t>(theta / h), n - 2);
  const int start = uniform_window_start(interval);
  std::vector<double> t(kUniformInterpPoints);
  for (int m = 0; m < kUniformInterpPoints; ++m)
    t[m] = static_cast<double>(start + m) - static_cast<double>(interval);
  const double x = theta / h - static_cast<double>(interval);
  for (int m = 0; m < kUniformInterpPoints; ++m)
    scatter(row, start + m, poly_eval(lagrange_basis(t, m), x), s);
  return row;
}

double AngularGrid::interpolate(std::span<const double> values, Parity p, double theta) const {
  const std::vector<double> row = interpolation_row(theta, p);
  return simd::dot(row.size(), row.data(), values.data());
}

double AngularGrid::antiderivative_at(std::span<const double> values, Parity p,
                                      double theta) const {
  if (theta < 0.0 || theta > L_ * (1.0 + 1e-14))
    throw DomainError("integration limit outside [0, L]");
  theta = std::min(theta, L_);
  const std::size_t n = this->n();
  if (kind_ == GridKind::clustered) {
    const std::vector<double> a = chebyshev_coefficients(values, p);
    const std::vector<double> b = chebyshev_antiderivative(a);
    const double x = theta / L_;
    const double ax = std::acos(std::clamp(x, -1.0, 1.0));
    double acc = 0.0;
    for (std::size_t m = 1; m < b.size(); ++m)
      acc += b[m] * std::cos(static_cast<double>(m) * ax);
    return L_ * (acc - chebyshev_at_zero(b));
  }

  const double h = L_ / static_cast<double>(n - 1);
  const std::size_t interval = std::min(static_cast<std::size_t>(theta / h), n - 2);
  const DenseMatrix& c = cumulative_matrix(p);
  double acc = simd::dot(n, c.row(interval), values.data());
  const int start = uniform_window_start(interval);
  std::vector<double> t(kUniformInterpPoints);
  for (int m = 0; m < kUniformInterpPoints; ++m)
    t[m] = static_cast<double>(start + m) - static_cast<double>(interval);
  const double tau = theta / h - static_cast<double>(interval);
  const double s = parity_sign(p);
  for (int m = 0; m < kUniformInterpPoints; ++m) {
    const int idx = start + m;
    const double v = idx < 0 ? s * values[-idx] : values[idx];
    acc += h * poly_integral(lagrange_basis(t, m), 0.0, tau) * v;
  }
  return acc;
}

// ---------------------------------------------------------------- GridFunction

GridFunction::GridFunction(GridPtr g, std::vector<double> v, Parity p)
    : grid(std::move(g)), values(std::move(v)), parity(p) {
  if (!grid) throw DomainError("grid function without a grid");
  if (values.size() != grid->n()) throw DomainError("grid function length mismatch");
}

GridFunction GridFunction::zeros(GridPtr g, Parity p) {
  const std::size_t n = g->n();
  return GridFunction(std::move(g), std::vector<double>(n, 0.0), p);
}

GridFunction GridFunction::sample(GridPtr g, const std::function<double(double)>& fn, Parity p) {
  std::vector<double> v(g->n());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g->node(i));
  return GridFunction(std::move(g), std::move(v), p);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void check_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid != b.grid) throw DomainError("grid functions live on different grids");
}

Parity product_parity(Parity a, Parity b) { return a == b ? Parity::even : Parity::odd; }

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  check_same_grid(a, b);
  if (a.parity != b.parity) throw ParityError("sum of functions with different parity");
  GridFunction out = a;
  simd::axpy(out.size(), 1.0, b.values.data(), out.values.data());
  return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  check_same_grid(a, b);
  if (a.parity != b.parity) throw ParityError("difference of functions with different parity");
  GridFunction out = a;
  simd::axpy(out.size(), -1.0, b.values.data(), out.values.data());
  return out;
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  check_same_grid(a, b);
  GridFunction out(a.grid, std::vector<double>(a.size()), product_parity(a.parity, b.parity));
  simd::hadamard(a.size(), a.values.data(), b.values.data(), out.values.data());
  return out;
}

GridFunction operator*(double s, const GridFunction& a) {
  GridFunction out = a;
  for (double& v : out.values) v *= s;
  return out;
}

GridFunction operator-(const GridFunction& a) { return -1.0 * a; }

GridFunction multiply(const GridFunction& a, const std::function<double(double)>& w, Parity wp) {
  GridFunction out(a.grid, a.values, product_parity(a.parity, wp));
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= w(a.grid->node(i));
  return out;
}

GridFunction differentiate(const GridFunction& f, int order) {
  const DenseMatrix& d = f.grid->derivative_matrix(order, f.parity);
  return GridFunction(f.grid, d.apply(f.values), flip(f.parity, order));
}

GridFunction differentiate_upwind(const GridFunction& f, std::span<const double> velocity) {
  if (velocity.size() != f.size()) throw DomainError("velocity size differs from the grid");
  if (f.grid->kind() == GridKind::clustered) return differentiate(f, 1);
  const DenseMatrix& fwd = f.grid->upwind_derivative_matrix(f.parity, +1);
  const DenseMatrix& bwd = f.grid->upwind_derivative_matrix(f.parity, -1);
  GridFunction out(f.grid, std::vector<double>(f.size()), flip(f.parity));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const DenseMatrix& d = velocity[i] >= 0.0 ? fwd : bwd;
    out[i] = simd::dot(f.size(), d.row(i), f.values.data());
  }
  return out;
}

double integrate(const GridFunction& f, double a, double b) {
  if (a > b) throw DomainError("integration limits out of order");
  if (a < 0.0) throw DomainError("integration limit below 0");
  return f.grid->antiderivative_at(f.values, f.parity, b) -
         f.grid->antiderivative_at(f.values, f.parity, a);
}

GridFunction integrate_indefinite(const GridFunction& f) {
  const DenseMatrix& c = f.grid->cumulative_matrix(f.parity);
  return GridFunction(f.grid, c.apply(f.values), flip(f.parity));
}

double interpolate(const GridFunction& f, double theta) {
  return f.grid->interpolate(f.values, f.parity, theta);
}

TaylorJet taylor_jet(const GridFunction& f, int k) {
  if (k < 0 || k > 4) throw UnsupportedOrderError("taylor jet order must be 0..4");
  TaylorJet jet;
  jet.values.assign(k + 1, 0.0);
  jet.condition = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (flip(f.parity, j) == Parity::odd) continue;
    if (j == 0) {
      jet.values[0] = f.values[0];
      continue;
    }
    const DenseMatrix& d = f.grid->derivative_matrix(j, f.parity);
    const double* row = d.row(0);
    jet.values[j] = simd::dot(f.size(), row, f.values.data());
    double norm1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) norm1 += std::abs(row[i]);
    jet.condition = std::max(jet.condition, norm1);
  }
  return jet;
}

}  // namespace ipm
