#include "mfcoop/incentives.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mfcoop/equilibria.hpp"
#include "mfcoop/error.hpp"

namespace mfcoop {

double LambdaCosts::terminal_cost(double x, double mean) const {
  return 0.5 * x * x + c_x_mean * x * mean + c_mean_sq * mean * mean;
}

double LambdaCosts::terminal_gradient(double x, double mean) const {
  return x + c_x_mean * mean;
}

double terminal_flat_derivative(double q, double x_tilde, double mean, double x) {
  return -q * (x_tilde - q * mean) * x;
}

LambdaCosts build_lambda_costs(const ModelParams& params, double lambda) {
  check_params(params);
  if (!std::isfinite(lambda)) throw Error(ErrorCode::kNonFinite, "lambda must be finite");
  if (lambda < 0.0 || lambda > 1.0) throw Error(ErrorCode::kOutOfRange, "lambda must be in [0, 1]");
  const double q = params.q;
  LambdaCosts out;
  out.lambda = lambda;
  out.q = q;
  // g(x, m) = x^2/2 - q x m + q^2 m^2 / 2, and averaging the flat derivative
  // over x_tilde ~ mu gives -q (1 - q) m x.
  out.c_x_mean = -q - lambda * q * (1.0 - q);
  out.c_mean_sq = 0.5 * q * q;
  return out;
}

LambdaEndpointReport verify_lambda1_equals_mfc(const ModelParams& params, const TimeGrid& grid,
                                               double tol) {
  return verify_lambda1_equals_mfc(params, grid, tol, SolveOptions{});
}

LambdaEndpointReport verify_lambda1_equals_mfc(const ModelParams& params, const TimeGrid& grid,
                                               double tol, const SolveOptions& options) {
  const Equilibrium lam = solve_lambda_interpolated(params, 1.0, grid, options);
  const Equilibrium mfc = solve_mfc(params, grid, options);
  LambdaEndpointReport rep;
  auto track = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      rep.max_path_deviation = std::max(rep.max_path_deviation, std::abs(a[i] - b[i]));
    }
  };
  track(lam.solution.eta, mfc.solution.eta);
  track(lam.solution.r, mfc.solution.r);
  track(lam.solution.s, mfc.solution.s);
  track(lam.solution.xbar, mfc.solution.xbar);
  rep.cost_deviation = std::abs(lam.cost - mfc.cost);
  rep.equal = rep.max_path_deviation <= tol && rep.cost_deviation <= tol;
  return rep;
}

double ValueCoeffs::value(int k, double x, double mean) const {
  return 0.5 * eta[k] * x * x + rho[k] * x * mean + 0.5 * kappa[k] * mean * mean + c[k];
}

double ValueCoeffs::measure_derivative(int k, double x, double mean) const {
  return rho[k] * x + kappa[k] * mean;
}

double ValueCoeffs::marginal_value(int k, double mean, double variance) const {
  return 0.5 * eta[k] * (mean * mean + variance) + rho[k] * mean * mean +
         0.5 * kappa[k] * mean * mean + c[k];
}

ValueCoeffs mfc_value_coeffs(const ModelParams& params, const TimeGrid& grid) {
  check_params(params);
  if (grid.n_steps < 2) throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2");
  const double q = params.q;
  const double sigma2 = params.sigma * params.sigma;
  using State = std::array<double, 4>;
  auto rhs = [&](const State& y) -> State {
    const double eta = y[0], rho = y[1], kappa = y[2];
    return {eta * eta - 1.0, 2.0 * eta * rho + 2.0 * rho * rho + kappa * rho,
            2.0 * eta * kappa + 2.0 * rho * kappa + kappa * kappa, -0.5 * sigma2 * eta};
  };

  ValueCoeffs out;
  out.grid = grid;
  const int n = grid.n_steps;
  out.eta.resize(grid.size());
  out.rho.resize(grid.size());
  out.kappa.resize(grid.size());
  out.c.resize(grid.size());
  State y = {1.0, -q, q * q, 0.0};
  auto store = [&](int k) {
    out.eta[k] = y[0];
    out.rho[k] = y[1];
    out.kappa[k] = y[2];
    out.c[k] = y[3];
  };
  store(n);
  const double h = grid.dt();
  for (int k = n; k > 0; --k) {
    const State k1 = rhs(y);
    State tmp;
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] - 0.5 * h * k1[i];
    const State k2 = rhs(tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] - 0.5 * h * k2[i];
    const State k3 = rhs(tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] - h * k3[i];
    const State k4 = rhs(tmp);
    for (int i = 0; i < 4; ++i) y[i] -= h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(y[1]) || !std::isfinite(y[2])) {
      throw Error(ErrorCode::kSingularRiccati, "value coefficients blow up");
    }
    store(k - 1);
  }
  return out;
}

double ValueMatchingIncentive::running_cost(int k, double x, double mean) const {
  return 0.5 * x * x + A[k] * mean * mean + B[k] * mean * x;
}

ValueMatchingIncentive value_matching_incentive(const ValueCoeffs& coeffs) {
  ValueMatchingIncentive out;
  out.grid = coeffs.grid;
  out.A.resize(coeffs.grid.size());
  out.B.resize(coeffs.grid.size());
  for (std::size_t k = 0; k < coeffs.grid.size(); ++k) {
    // d_mu V(t, x', mu)(x) = rho x' + kappa m, so its mu-average over x' is
    // (rho + kappa) m.
    const double avg = coeffs.rho[k] + coeffs.kappa[k];
    out.A[k] = 0.5 * avg * avg - avg * coeffs.kappa[k];
    out.B[k] = -avg * coeffs.rho[k];
  }
  return out;
}

ValueMatchingIncentive value_matching_incentive(const ModelParams& params, const TimeGrid& grid) {
  return value_matching_incentive(mfc_value_coeffs(params, grid));
}

IncentivizedEquilibrium solve_incentivized_mfg(const ModelParams& params, const TimeGrid& grid) {
  check_params(params);
  if (grid.n_steps < 2) throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2");
  // Coefficients on the half-step grid so RK4 stages need no interpolation.
  const TimeGrid fine{grid.horizon, 2 * grid.n_steps};
  const ValueMatchingIncentive inc = value_matching_incentive(params, fine);
  const std::vector<double> eta = riccati_closed_form(1.0, fine);
  const double q = params.q;
  const double sigma2 = params.sigma * params.sigma;

  // Forward state (r, m, S) with S_t = int_0^t s' ds:
  //   r' = eta r - B m,  m' = -(eta m + r),  s' = (r^2 - sigma^2 eta)/2 - A m^2.
  using State = std::array<double, 3>;
  auto rhs = [&](int j, const State& y) -> State {
    const double r = y[0], m = y[1];
    return {eta[j] * r - inc.B[j] * m, -(eta[j] * m + r),
            0.5 * (r * r - sigma2 * eta[j]) - inc.A[j] * m * m};
  };
  const double dt = grid.dt();
  auto sweep = [&](double r0, std::vector<State>* path) {
    State y = {r0, params.x0, 0.0};
    if (path) path->push_back(y);
    for (int k = 0; k < grid.n_steps; ++k) {
      const int j = 2 * k;
      const State k1 = rhs(j, y);
      State tmp;
      for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
      const State k2 = rhs(j + 1, tmp);
      for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
      const State k3 = rhs(j + 1, tmp);
      for (int i = 0; i < 3; ++i) tmp[i] = y[i] + dt * k3[i];
      const State k4 = rhs(j + 2, tmp);
      for (int i = 0; i < 3; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (path) path->push_back(y);
    }
    return y;
  };
  // Terminal mismatch r_T + q m_T is affine in r_0.
  auto mismatch = [&](double r0) {
    const State y = sweep(r0, nullptr);
    return y[0] + q * y[1];
  };
  const double f0 = mismatch(0.0);
  const double f1 = mismatch(1.0);
  if (std::abs(f1 - f0) <= kSingularTolerance) {
    throw Error(ErrorCode::kSingularSystem, "incentivized MFG has no unique initial adjoint");
  }
  const double r0 = -f0 / (f1 - f0);
  std::vector<State> path;
  path.reserve(grid.size());
  sweep(r0, &path);

  IncentivizedEquilibrium out;
  out.grid = grid;
  out.eta.resize(grid.size());
  out.r.resize(grid.size());
  out.s.resize(grid.size());
  out.xbar.resize(grid.size());
  const double m_T = path.back()[1];
  const double s_T = 0.5 * q * q * m_T * m_T;
  const double S_T = path.back()[2];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.eta[k] = eta[2 * k];
    out.r[k] = path[k][0];
    out.xbar[k] = path[k][1];
    out.s[k] = s_T - (S_T - path[k][2]);
  }
  return out;
}

ValueMatchingReport verify_value_matching(const ModelParams& params, const TimeGrid& grid,
                                          double tol, double probe_x) {
  const ValueCoeffs coeffs = mfc_value_coeffs(params, grid);
  const IncentivizedEquilibrium inc = solve_incentivized_mfg(params, grid);
  const Equilibrium mfc = solve_mfc(params, grid);

  ValueMatchingReport rep;
  const double x0 = params.x0;
  rep.equilibrium_value = inc.value(0, x0);
  rep.mfc_value = coeffs.value(0, x0, x0);
  rep.value_gap = std::abs(rep.equilibrium_value - rep.mfc_value);
  rep.probe_value_gap = std::abs(inc.value(0, probe_x) - coeffs.value(0, probe_x, x0));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    rep.control_gap = std::max(rep.control_gap, std::abs(inc.eta[k] - mfc.solution.eta[k]));
    rep.control_gap = std::max(rep.control_gap, std::abs(inc.r[k] - mfc.solution.r[k]));
  }
  rep.value_matched = rep.value_gap <= tol && rep.probe_value_gap <= tol;
  rep.control_matched = rep.control_gap <= tol;
  return rep;
}

}  // namespace mfcoop
