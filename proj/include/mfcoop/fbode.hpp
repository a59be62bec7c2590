#pragma once

#include <vector>

#include "mfcoop/model.hpp"

namespace mfcoop {

/// r_T = a + b * xbar_T
struct AffineTerminal {
  double a = 0.0;
  double b = 0.0;
  double operator()(double xbar_T) const { return a + b * xbar_T; }
};

/// s_T = c0 + c1 * xbar_T + c2 * xbar_T^2
struct QuadraticTerminal {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double operator()(double xbar_T) const { return c0 + (c1 + c2 * xbar_T) * xbar_T; }
};

/// Forward-backward system produced by the ansatz u(t,x) = eta x^2/2 + r x + s:
///
///   eta' = eta^2 - 1                 eta_T given
///   r'   = eta r                     r_T = r_terminal(xbar_T)
///   s'   = (r^2 - sigma^2 eta) / 2   s_T = s_terminal(xbar_T)
///   xbar' = -(eta xbar + r)          xbar_0 = x0
struct FbodeSystem {
  double eta_T = 1.0;
  AffineTerminal r_terminal;
  QuadraticTerminal s_terminal;
  double x0 = 1.0;
  double sigma = 1.0;
  double T = 1.0;
};

enum class SolveMethod { kClosedForm, kNumeric };

struct FbodeSolution {
  TimeGrid grid;
  std::vector<double> eta;
  std::vector<double> r;
  std::vector<double> s;
  std::vector<double> xbar;
  double xbar_T = 0.0;
  SolveMethod method = SolveMethod::kClosedForm;
  int evaluations = 0;  // shooting sweeps (numeric only)
};

struct ShootingOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// eta_t solving eta' = eta^2 - 1 with eta(T) = eta_T, sampled on the grid.
/// Throws SingularRiccati if the solution blows up inside [0, T].
std::vector<double> riccati_closed_form(double eta_T, const TimeGrid& grid);

/// Exact solution for eta_T = 1 and sigma = 1. Throws UnsupportedForm
/// otherwise and SingularSystem if xbar_T is not determined.
FbodeSolution solve_closed_form(const FbodeSystem& system, const TimeGrid& grid);

/// RK4 backward sweep for (eta, r, s), RK4 forward sweep for xbar, and an
/// affine shooting on xbar_T. Works for any eta_T and sigma > 0.
FbodeSolution solve_numeric(const FbodeSystem& system, const TimeGrid& grid,
                            const ShootingOptions& options = {});

/// One shooting sweep: xbar_T realized when the terminal data is evaluated
/// at `guess`. Affine in `guess`.
double shooting_map(const FbodeSystem& system, const TimeGrid& grid, double guess);

/// Max central-difference residual of each equation over interior points.
struct OdeResiduals {
  double eta = 0.0;
  double r = 0.0;
  double s = 0.0;
  double xbar = 0.0;
};
OdeResiduals ode_residuals(const FbodeSolution& solution, double sigma);

}  // namespace mfcoop
