#pragma once

#include <vector>

#include "mfcoop/model.hpp"

namespace mfcoop {

struct SolveOptions;

/// Terminal cost of the control-matching transform, written in the terminal
/// mean m of the population:
///   g_lambda(x, m) = x^2/2 + c_x_mean * x * m + c_mean_sq * m^2.
/// The running cost is unchanged because f_0 does not depend on the measure.
struct LambdaCosts {
  double lambda = 0.0;
  double q = 0.0;
  double c_x_mean = 0.0;
  double c_mean_sq = 0.0;

  double terminal_cost(double x, double mean) const;
  /// d/dx g_lambda(x, m); at lambda = 1 this is the MFC adjoint terminal value.
  double terminal_gradient(double x, double mean) const;
};

LambdaCosts build_lambda_costs(const ModelParams& params, double lambda);

/// Flat derivative of mu -> g(x_tilde, mu) at the point x, without the
/// normalization constant:  -q (x_tilde - q mean) x.
double terminal_flat_derivative(double q, double x_tilde, double mean, double x);

struct LambdaEndpointReport {
  bool equal = false;
  double max_path_deviation = 0.0;  // over eta, r, s, xbar
  double cost_deviation = 0.0;
};

/// The MFG with costs (f_1, g_1) against the original MFC.
LambdaEndpointReport verify_lambda1_equals_mfc(const ModelParams& params, const TimeGrid& grid,
                                               double tol);
LambdaEndpointReport verify_lambda1_equals_mfc(const ModelParams& params, const TimeGrid& grid,
                                               double tol, const SolveOptions& options);

/// Coefficients of the MFC extended value function
///   V(t, x, m) = eta x^2/2 + rho x m + kappa m^2/2 + c
/// for measures with mean m.
struct ValueCoeffs {
  TimeGrid grid;
  std::vector<double> eta;
  std::vector<double> rho;
  std::vector<double> kappa;
  std::vector<double> c;

  double value(int k, double x, double mean) const;
  /// Lions derivative d_mu V(t_k, x, mu)(y); constant in y.
  double measure_derivative(int k, double x, double mean) const;
  /// v(t_k, mu) = int V(t_k, x, mu) dmu(x) for mu with the given mean and variance.
  double marginal_value(int k, double mean, double variance = 0.0) const;
};

/// Backward RK4 solve of the coefficient ODEs obtained from the MKV master
/// equation under the quadratic ansatz:
///   eta'   = eta^2 - 1                          eta_T   = 1
///   rho'   = 2 eta rho + 2 rho^2 + kappa rho    rho_T   = -q
///   kappa' = 2 eta kappa + 2 rho kappa + kappa^2  kappa_T = q^2
///   c'     = -sigma^2 eta / 2                   c_T     = 0
ValueCoeffs mfc_value_coeffs(const ModelParams& params, const TimeGrid& grid);

/// f0~(t, x, m) = x^2/2 + A_t m^2 + B_t m x.
struct ValueMatchingIncentive {
  TimeGrid grid;
  std::vector<double> A;
  std::vector<double> B;

  double running_cost(int k, double x, double mean) const;
};

ValueMatchingIncentive value_matching_incentive(const ValueCoeffs& coeffs);
ValueMatchingIncentive value_matching_incentive(const ModelParams& params, const TimeGrid& grid);

/// Equilibrium of the MFG with running cost a^2/2 + f0~ and terminal cost g.
struct IncentivizedEquilibrium {
  TimeGrid grid;
  std::vector<double> eta;
  std::vector<double> r;
  std::vector<double> s;
  std::vector<double> xbar;

  double value(int k, double x) const { return 0.5 * eta[k] * x * x + r[k] * x + s[k]; }
};

IncentivizedEquilibrium solve_incentivized_mfg(const ModelParams& params, const TimeGrid& grid);

struct ValueMatchingReport {
  double value_gap = 0.0;        // |u(0, x0) - V(0, x0, x0)|
  double probe_value_gap = 0.0;  // same at x = probe_x
  double control_gap = 0.0;      // max_t |r~_t - r^MFC_t| (eta agrees)
  double equilibrium_value = 0.0;
  double mfc_value = 0.0;
  bool value_matched = false;    // value gaps <= tol
  bool control_matched = false;  // control gap <= tol
};

ValueMatchingReport verify_value_matching(const ModelParams& params, const TimeGrid& grid,
                                          double tol, double probe_x = 2.0);

}  // namespace mfcoop
