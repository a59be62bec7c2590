#pragma once

// Finite-difference solve of the MFC master equation on an (x, m) grid,
// independent of the coefficient ODEs. Test fixture only.

#include <cmath>
#include <vector>

namespace mfcoop::testing {

struct DpGrid {
  int n = 201;
  double lo = -5.0;
  double hi = 5.0;
  double h() const { return (hi - lo) / (n - 1); }
  double at(int i) const { return lo + i * h(); }
};

struct DpSolution {
  DpGrid grid;
  std::vector<double> V;  // V[i * n + j] at (x_i, m_j), time 0
  double operator()(int i, int j) const { return V[static_cast<std::size_t>(i) * grid.n + j]; }
};

namespace detail {

// First and second differences along a line, second order with one-sided
// stencils at the ends (exact for quadratics).
inline void diffs(const double* v, std::ptrdiff_t stride, int n, double h, double* d1, double* d2) {
  auto V = [&](int k) { return v[k * stride]; };
  for (int k = 1; k < n - 1; ++k) {
    d1[k] = (V(k + 1) - V(k - 1)) / (2 * h);
    if (d2) d2[k] = (V(k + 1) - 2 * V(k) + V(k - 1)) / (h * h);
  }
  d1[0] = (-3 * V(0) + 4 * V(1) - V(2)) / (2 * h);
  d1[n - 1] = (3 * V(n - 1) - 4 * V(n - 2) + V(n - 3)) / (2 * h);
  if (d2) {
    d2[0] = (2 * V(0) - 5 * V(1) + 4 * V(2) - V(3)) / (h * h);
    d2[n - 1] = (2 * V(n - 1) - 5 * V(n - 2) + 4 * V(n - 3) - V(n - 4)) / (h * h);
  }
}

}  // namespace detail

/// Backward method-of-lines RK4 for
///   V_t + a V_x + sigma^2/2 V_xx + a^2/2 + x^2/2 + b V_m = 0,
///   a(x, m) = -V_x(x, m) - V_m(m, m),  b(m) = a(m, m),
/// with V(T, x, m) = (x - q m)^2 / 2.
inline DpSolution solve_master_dp(double q, double T, double sigma, int time_steps = 400,
                                  DpGrid grid = {}) {
  const int n = grid.n;
  const double h = grid.h();
  const std::size_t N = static_cast<std::size_t>(n) * n;
  std::vector<double> V(N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = grid.at(i) - q * grid.at(j);
      V[i * n + j] = 0.5 * d * d;
    }

  std::vector<double> Vx(N), Vxx(N), Vm(N), line1(n), line2(n);
  auto rhs = [&](const std::vector<double>& U, std::vector<double>& out) {
    for (int j = 0; j < n; ++j) {
      detail::diffs(&U[j], n, n, h, line1.data(), line2.data());
      for (int i = 0; i < n; ++i) {
        Vx[i * n + j] = line1[i];
        Vxx[i * n + j] = line2[i];
      }
    }
    for (int i = 0; i < n; ++i) detail::diffs(&U[i * n], 1, n, h, &Vm[i * n], nullptr);
    for (int j = 0; j < n; ++j) {
      const double diag = Vx[j * n + j] + Vm[j * n + j];
      const double b = -diag;
      const double vm_mean = Vm[j * n + j];
      for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i) * n + j;
        const double a = -Vx[k] - vm_mean;
        const double x = grid.at(i);
        // dV/dt = -(...), stepping backward in time.
        out[k] = a * Vx[k] + 0.5 * sigma * sigma * Vxx[k] + 0.5 * a * a + 0.5 * x * x + b * Vm[k];
      }
    }
  };

  const double dt = T / time_steps;
  std::vector<double> k1(N), k2(N), k3(N), k4(N), tmp(N);
  for (int s = 0; s < time_steps; ++s) {
    rhs(V, k1);
    for (std::size_t k = 0; k < N; ++k) tmp[k] = V[k] + 0.5 * dt * k1[k];
    rhs(tmp, k2);
    for (std::size_t k = 0; k < N; ++k) tmp[k] = V[k] + 0.5 * dt * k2[k];
    rhs(tmp, k3);
    for (std::size_t k = 0; k < N; ++k) tmp[k] = V[k] + dt * k3[k];
    rhs(tmp, k4);
    for (std::size_t k = 0; k < N; ++k) V[k] += dt / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
  }
  return {grid, std::move(V)};
}

}  // namespace mfcoop::testing
