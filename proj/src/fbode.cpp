#include "mfcoop/fbode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mfcoop/error.hpp"

namespace mfcoop {

namespace {

void check_system(const FbodeSystem& sys, const TimeGrid& grid) {
  const std::array<double, 9> values = {sys.eta_T,         sys.r_terminal.a,   sys.r_terminal.b,
                                        sys.s_terminal.c0, sys.s_terminal.c1,  sys.s_terminal.c2,
                                        sys.x0,            sys.sigma,          sys.T};
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "FBODE system has non-finite data");
  }
  if (grid.n_steps < 2) throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2");
  if (std::abs(grid.horizon - sys.T) > 1e-12 * sys.T) {
    throw Error(ErrorCode::kGridMismatch, "grid horizon differs from system horizon");
  }
}

using Backward = std::array<double, 3>;  // eta, r, s

Backward backward_rhs(const Backward& y, double sigma2) {
  return {y[0] * y[0] - 1.0, y[0] * y[1], 0.5 * (y[1] * y[1] - sigma2 * y[0])};
}

// Backward sweep on a grid of 2 n_steps half steps, so the forward RK4 for
// xbar finds eta and r at its stage midpoints without interpolation.
struct FineSweep {
  std::vector<double> eta, r, s;
};

FineSweep backward_sweep(const FbodeSystem& sys, const TimeGrid& grid, double r_T, double s_T) {
  const int n = 2 * grid.n_steps;
  const double h = grid.horizon / n;
  const double sigma2 = sys.sigma * sys.sigma;
  FineSweep out;
  out.eta.resize(n + 1);
  out.r.resize(n + 1);
  out.s.resize(n + 1);
  Backward y = {sys.eta_T, r_T, s_T};
  out.eta[n] = y[0];
  out.r[n] = y[1];
  out.s[n] = y[2];
  for (int k = n; k > 0; --k) {
    // Integrate from t_k down to t_{k-1}: dy/dt = f(y) with step -h.
    const Backward k1 = backward_rhs(y, sigma2);
    Backward tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] - 0.5 * h * k1[i];
    const Backward k2 = backward_rhs(tmp, sigma2);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] - 0.5 * h * k2[i];
    const Backward k3 = backward_rhs(tmp, sigma2);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] - h * k3[i];
    const Backward k4 = backward_rhs(tmp, sigma2);
    for (int i = 0; i < 3; ++i) y[i] -= h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2])) {
      throw Error(ErrorCode::kSingularRiccati, "backward sweep diverged");
    }
    out.eta[k - 1] = y[0];
    out.r[k - 1] = y[1];
    out.s[k - 1] = y[2];
  }
  return out;
}

std::vector<double> forward_sweep(const FineSweep& fine, const TimeGrid& grid, double x0) {
  const double dt = grid.dt();
  std::vector<double> xbar(grid.size());
  xbar[0] = x0;
  auto f = [&](int j, double x) { return -(fine.eta[j] * x + fine.r[j]); };
  for (int k = 0; k < grid.n_steps; ++k) {
    const int j = 2 * k;
    const double x = xbar[k];
    const double k1 = f(j, x);
    const double k2 = f(j + 1, x + 0.5 * dt * k1);
    const double k3 = f(j + 1, x + 0.5 * dt * k2);
    const double k4 = f(j + 2, x + dt * k3);
    xbar[k + 1] = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return xbar;
}

std::vector<double> coarsen(const std::vector<double>& fine) {
  std::vector<double> out(fine.size() / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fine[2 * k];
  return out;
}

}  // namespace

std::vector<double> riccati_closed_form(double eta_T, const TimeGrid& grid) {
  if (!std::isfinite(eta_T)) throw Error(ErrorCode::kNonFinite, "eta_T must be finite");
  if (grid.n_steps < 2) throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2");
  // With tau = T - t and u = e^{2 tau}:
  //   eta = ((1 + eta_T) u - (1 - eta_T)) / ((1 + eta_T) u + (1 - eta_T)).
  // Divided through by u to stay finite for long horizons.
  std::vector<double> eta(grid.size());
  for (int k = 0; k <= grid.n_steps; ++k) {
    const double w = std::exp(-2.0 * (grid.horizon - grid.t(k)));
    const double num = (1.0 + eta_T) - (1.0 - eta_T) * w;
    const double den = (1.0 + eta_T) + (1.0 - eta_T) * w;
    if (std::abs(den) <= 1e-12 * (std::abs(1.0 + eta_T) + std::abs(1.0 - eta_T))) {
      throw Error(ErrorCode::kSingularRiccati,
                  "Riccati solution blows up at t = " + std::to_string(grid.t(k)));
    }
    eta[k] = num / den;
  }
  // A sign change of the denominator between grid points is a blow-up too.
  for (int k = 0; k < grid.n_steps; ++k) {
    const double w0 = std::exp(-2.0 * (grid.horizon - grid.t(k)));
    const double w1 = std::exp(-2.0 * (grid.horizon - grid.t(k + 1)));
    const double d0 = (1.0 + eta_T) + (1.0 - eta_T) * w0;
    const double d1 = (1.0 + eta_T) + (1.0 - eta_T) * w1;
    if (d0 * d1 < 0.0) throw Error(ErrorCode::kSingularRiccati, "Riccati solution blows up");
  }
  return eta;
}

FbodeSolution solve_closed_form(const FbodeSystem& sys, const TimeGrid& grid) {
  check_system(sys, grid);
  if (std::abs(sys.eta_T - 1.0) > 1e-12 || std::abs(sys.sigma - 1.0) > 1e-12) {
    throw Error(ErrorCode::kUnsupportedForm, "closed form needs eta_T = 1 and sigma = 1");
  }
  const double T = sys.T;
  const double half_gain = 0.5 * (1.0 - std::exp(-2.0 * T));
  // eta = 1, r_t = r_T e^{t-T}, so xbar_T = e^{-T} x0 - r_T (1 - e^{-2T}) / 2.
  const double coef = 1.0 + sys.r_terminal.b * half_gain;
  if (std::abs(coef) <= kSingularTolerance) {
    throw Error(ErrorCode::kSingularSystem, "terminal mean is not determined (coefficient 0)");
  }
  const double xbar_T = (std::exp(-T) * sys.x0 - sys.r_terminal.a * half_gain) / coef;
  const double r_T = sys.r_terminal(xbar_T);
  const double s_T = sys.s_terminal(xbar_T);

  FbodeSolution sol;
  sol.grid = grid;
  sol.method = SolveMethod::kClosedForm;
  sol.xbar_T = xbar_T;
  sol.eta.assign(grid.size(), 1.0);
  sol.r.resize(grid.size());
  sol.s.resize(grid.size());
  sol.xbar.resize(grid.size());
  for (int k = 0; k <= grid.n_steps; ++k) {
    const double t = grid.t(k);
    const double decay = std::exp(t - T);
    sol.r[k] = r_T * decay;
    sol.s[k] = s_T - 0.25 * r_T * r_T * (1.0 - decay * decay) + 0.5 * (T - t);
    sol.xbar[k] = std::exp(-t) * sys.x0 - r_T * std::exp(-T) * std::sinh(t);
  }
  sol.xbar[grid.n_steps] = xbar_T;
  return sol;
}

double shooting_map(const FbodeSystem& sys, const TimeGrid& grid, double guess) {
  check_system(sys, grid);
  const FineSweep fine = backward_sweep(sys, grid, sys.r_terminal(guess), sys.s_terminal(guess));
  return forward_sweep(fine, grid, sys.x0).back();
}

FbodeSolution solve_numeric(const FbodeSystem& sys, const TimeGrid& grid,
                            const ShootingOptions& options) {
  check_system(sys, grid);
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error(ErrorCode::kOutOfRange, "shooting needs tol > 0 and max_iter >= 1");
  }

  // realized(g) = intercept + slope * g exactly, so two probes give the
  // fixed point; the remaining sweeps only polish rounding.
  int evaluations = 0;
  auto realized = [&](double g) {
    ++evaluations;
    return shooting_map(sys, grid, g);
  };
  const double at_zero = realized(0.0);
  const double at_one = realized(1.0);
  const double slope = at_one - at_zero;
  if (std::abs(1.0 - slope) <= options.tol) {
    throw Error(ErrorCode::kSingularSystem, "shooting map has slope 1");
  }
  double guess = at_zero / (1.0 - slope);

  for (int iter = 0;; ++iter) {
    const FineSweep fine =
        backward_sweep(sys, grid, sys.r_terminal(guess), sys.s_terminal(guess));
    ++evaluations;
    std::vector<double> xbar = forward_sweep(fine, grid, sys.x0);
    const double residual = xbar.back() - guess;
    if (std::abs(residual) <= options.tol) {
      FbodeSolution sol;
      sol.grid = grid;
      sol.method = SolveMethod::kNumeric;
      sol.eta = coarsen(fine.eta);
      sol.r = coarsen(fine.r);
      sol.s = coarsen(fine.s);
      sol.xbar = std::move(xbar);
      // Report the point at which the terminal data was evaluated so that
      // r and s are exactly consistent with it.
      sol.xbar_T = guess;
      sol.evaluations = evaluations;
      return sol;
    }
    if (iter + 1 >= options.max_iter) {
      throw Error(ErrorCode::kNoConvergence,
                  "shooting did not converge, residual " + std::to_string(residual));
    }
    guess += residual / (1.0 - slope);
  }
}

OdeResiduals ode_residuals(const FbodeSolution& sol, double sigma) {
  OdeResiduals res;
  const double dt = sol.grid.dt();
  const double sigma2 = sigma * sigma;
  for (int k = 1; k < sol.grid.n_steps; ++k) {
    const double deta = (sol.eta[k + 1] - sol.eta[k - 1]) / (2.0 * dt);
    const double dr = (sol.r[k + 1] - sol.r[k - 1]) / (2.0 * dt);
    const double ds = (sol.s[k + 1] - sol.s[k - 1]) / (2.0 * dt);
    const double dx = (sol.xbar[k + 1] - sol.xbar[k - 1]) / (2.0 * dt);
    res.eta = std::max(res.eta, std::abs(deta - (sol.eta[k] * sol.eta[k] - 1.0)));
    res.r = std::max(res.r, std::abs(dr - sol.eta[k] * sol.r[k]));
    res.s = std::max(res.s, std::abs(ds - 0.5 * (sol.r[k] * sol.r[k] - sigma2 * sol.eta[k])));
    res.xbar = std::max(res.xbar, std::abs(dx + sol.eta[k] * sol.xbar[k] + sol.r[k]));
  }
  return res;
}

}  // namespace mfcoop
