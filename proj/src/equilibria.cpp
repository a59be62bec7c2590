#include "mfcoop/equilibria.hpp"

#include <array>
#include <cmath>

#include "mfcoop/error.hpp"
#include "mfcoop/incentives.hpp"

namespace mfcoop {

const char* to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::kMfg: return "mfg";
    case EquilibriumKind::kMfc: return "mfc";
    case EquilibriumKind::kLambda: return "lambda";
    case EquilibriumKind::kPPartialDeviator: return "p_partial";
    case EquilibriumKind::kBestResponse: return "best_response";
  }
  return "unknown";
}

FeedbackControl feedback_of(const FbodeSolution& solution) {
  return FeedbackControl{solution.grid, solution.eta, solution.r};
}

namespace {

void check_unit_interval(double v, const char* name) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, std::string(name) + " must be finite");
  if (v < 0.0 || v > 1.0) {
    throw Error(ErrorCode::kOutOfRange, std::string(name) + " must lie in [0, 1]");
  }
}

FbodeSystem base_system(const ModelParams& params) {
  FbodeSystem sys;
  sys.x0 = params.x0;
  sys.sigma = params.sigma;
  sys.T = params.T;
  return sys;
}

void check_grid(const ModelParams& params, const TimeGrid& grid) {
  check_params(params);
  if (grid.n_steps < 2) throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2");
  if (std::abs(grid.horizon - params.T) > 1e-12 * params.T) {
    throw Error(ErrorCode::kGridMismatch, "grid horizon differs from model horizon");
  }
}

Equilibrium make_equilibrium(EquilibriumKind kind, double parameter, FbodeSolution sol) {
  Equilibrium eq;
  eq.kind = kind;
  eq.parameter = parameter;
  eq.control = feedback_of(sol);
  eq.xbar_T = sol.xbar_T;
  eq.solution = std::move(sol);
  return eq;
}

}  // namespace

FbodeSystem mfg_system(const ModelParams& params) {
  FbodeSystem sys = base_system(params);
  const double q = params.q;
  sys.r_terminal = {0.0, -q};
  sys.s_terminal = {0.0, 0.0, 0.5 * q * q};
  return sys;
}

FbodeSystem mfc_system(const ModelParams& params) {
  FbodeSystem sys = base_system(params);
  const double q = params.q;
  sys.r_terminal = {0.0, -(2.0 * q - q * q)};
  sys.s_terminal = {0.0, 0.0, 0.5 * q * q};
  return sys;
}

FbodeSystem p_partial_system(const ModelParams& params, double p, double xbar_mfc_T) {
  check_unit_interval(p, "p");
  FbodeSystem sys = base_system(params);
  const double q = params.q;
  // (q p X + q (1-p) M)^2 / 2 expanded in X.
  const double env_part = q * (1.0 - p) * xbar_mfc_T;
  sys.r_terminal = {-env_part, -q * p};
  sys.s_terminal = {0.5 * env_part * env_part, env_part * q * p, 0.5 * q * q * p * p};
  return sys;
}

FbodeSystem lambda_system(const ModelParams& params, double lambda) {
  const LambdaCosts costs = build_lambda_costs(params, lambda);
  FbodeSystem sys = base_system(params);
  // u(T, x) = g_lambda(x, Xbar_T) = x^2/2 + c_xm x Xbar_T + c_mm Xbar_T^2
  sys.r_terminal = {0.0, costs.c_x_mean};
  sys.s_terminal = {0.0, 0.0, costs.c_mean_sq};
  return sys;
}

FbodeSystem best_response_system(const ModelParams& params, const EnvironmentMean& env) {
  if (!std::isfinite(env.xbar_env_T)) {
    throw Error(ErrorCode::kNonFinite, "environment mean must be finite");
  }
  FbodeSystem sys = base_system(params);
  const double target = params.q * env.xbar_env_T;
  sys.r_terminal = {-target, 0.0};
  sys.s_terminal = {0.5 * target * target, 0.0, 0.0};
  return sys;
}

FbodeSystem mfg_mean_system(const ModelParams& params) {
  FbodeSystem sys = base_system(params);
  sys.eta_T = 1.0 - params.q;
  return sys;
}

FbodeSystem mfc_mean_system(const ModelParams& params) {
  FbodeSystem sys = base_system(params);
  sys.eta_T = (1.0 - params.q) * (1.0 - params.q);
  return sys;
}

FbodeSystem p_partial_mean_system(const ModelParams& params, double p, double xbar_mfc_T) {
  check_unit_interval(p, "p");
  FbodeSystem sys = base_system(params);
  sys.eta_T = 1.0 - params.q * p;
  sys.r_terminal = {-params.q * (1.0 - p) * xbar_mfc_T, 0.0};
  return sys;
}

FbodeSolution solve_system(const FbodeSystem& system, const TimeGrid& grid,
                           const SolveOptions& options) {
  switch (options.method) {
    case SolverChoice::kClosedForm:
      return solve_closed_form(system, grid);
    case SolverChoice::kNumeric:
      return solve_numeric(system, grid, options.shooting);
    case SolverChoice::kAuto:
      break;
  }
  if (std::abs(system.eta_T - 1.0) <= 1e-12 && std::abs(system.sigma - 1.0) <= 1e-12) {
    return solve_closed_form(system, grid);
  }
  return solve_numeric(system, grid, options.shooting);
}

double ansatz_value(const FbodeSolution& solution, double x0) {
  return 0.5 * solution.eta[0] * x0 * x0 + solution.r[0] * x0 + solution.s[0];
}

Equilibrium solve_mfg(const ModelParams& params, const TimeGrid& grid,
                      const SolveOptions& options) {
  check_grid(params, grid);
  Equilibrium eq =
      make_equilibrium(EquilibriumKind::kMfg, 0.0, solve_system(mfg_system(params), grid, options));
  eq.cost = ansatz_value(eq.solution, params.x0);
  return eq;
}

Equilibrium solve_mfc(const ModelParams& params, const TimeGrid& grid,
                      const SolveOptions& options) {
  check_grid(params, grid);
  Equilibrium eq =
      make_equilibrium(EquilibriumKind::kMfc, 0.0, solve_system(mfc_system(params), grid, options));
  const double q = params.q;
  // The ansatz value includes the term -q(1-q) Xbar_T X_T of the MFC
  // terminal condition, which is not part of the player's cost.
  eq.cost = ansatz_value(eq.solution, params.x0) + (1.0 - q) * q * eq.xbar_T * eq.xbar_T;
  return eq;
}

PPartialEquilibrium solve_p_partial(const ModelParams& params, double p, const TimeGrid& grid,
                                    const SolveOptions& options) {
  check_unit_interval(p, "p");
  const Equilibrium mfc = solve_mfc(params, grid, options);
  return solve_p_partial(params, p, grid, mfc, options);
}

PPartialEquilibrium solve_p_partial(const ModelParams& params, double p, const TimeGrid& grid,
                                    const Equilibrium& mfc, const SolveOptions& options) {
  check_grid(params, grid);
  check_unit_interval(p, "p");
  if (mfc.kind != EquilibriumKind::kMfc) {
    throw Error(ErrorCode::kOutOfRange, "solve_p_partial needs an MFC equilibrium");
  }
  PPartialEquilibrium out;
  out.p = p;
  out.xbar_mfc_T = mfc.xbar_T;
  out.deviator = make_equilibrium(EquilibriumKind::kPPartialDeviator, p,
                                  solve_system(p_partial_system(params, p, mfc.xbar_T), grid,
                                               options));
  out.hat_J_p = ansatz_value(out.deviator.solution, params.x0);
  out.deviator.cost = out.hat_J_p;
  out.population_xbar_T = p * out.deviator.xbar_T + (1.0 - p) * mfc.xbar_T;
  out.star_J_p = evaluate_cost(mfc.control, out.population_xbar_T, params, grid);
  return out;
}

Equilibrium solve_lambda_interpolated(const ModelParams& params, double lambda,
                                      const TimeGrid& grid, const SolveOptions& options) {
  check_grid(params, grid);
  check_unit_interval(lambda, "lambda");
  Equilibrium eq = make_equilibrium(EquilibriumKind::kLambda, lambda,
                                    solve_system(lambda_system(params, lambda), grid, options));
  // At the equilibrium the flow is generated by the control itself, so the
  // MFG and MFC parts of the interpolated cost coincide. The ansatz value
  // carries the extra -lambda q(1-q) Xbar_T x terminal term; remove it.
  const double q = params.q;
  eq.cost = ansatz_value(eq.solution, params.x0) + lambda * q * (1.0 - q) * eq.xbar_T * eq.xbar_T;
  return eq;
}

Equilibrium best_response(const ModelParams& params, const EnvironmentMean& env,
                          const TimeGrid& grid, const SolveOptions& options) {
  check_grid(params, grid);
  Equilibrium eq = make_equilibrium(EquilibriumKind::kBestResponse, env.xbar_env_T,
                                    solve_system(best_response_system(params, env), grid, options));
  eq.cost = evaluate_cost(eq.control, env.xbar_env_T, params, grid);
  return eq;
}

namespace {

// Cubic Lagrange interpolation of grid values at the midpoint of cell k.
double midpoint(const std::vector<double>& v, int k) {
  const int n = static_cast<int>(v.size()) - 1;
  if (n < 3) return 0.5 * (v[k] + v[k + 1]);
  int j = k - 1;
  if (j < 0) j = 0;
  if (j + 3 > n) j = n - 3;
  // Nodes j..j+3 at integer offsets; evaluate at k + 1/2.
  const double x = k + 0.5 - j;
  const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double l1 = x * (x - 2) * (x - 3) / 2.0;
  const double l2 = -x * (x - 1) * (x - 3) / 2.0;
  const double l3 = x * (x - 1) * (x - 2) / 6.0;
  return l0 * v[j] + l1 * v[j + 1] + l2 * v[j + 2] + l3 * v[j + 3];
}

}  // namespace

double evaluate_cost(const FeedbackControl& control, double env_terminal_mean,
                     const ModelParams& params, const TimeGrid& grid) {
  check_grid(params, grid);
  if (control.grid.n_steps != grid.n_steps ||
      std::abs(control.grid.horizon - grid.horizon) > 1e-12 * grid.horizon ||
      control.eta.size() != grid.size() || control.r.size() != grid.size()) {
    throw Error(ErrorCode::kGridMismatch, "control paths do not live on the cost grid");
  }
  if (!std::isfinite(env_terminal_mean)) {
    throw Error(ErrorCode::kNonFinite, "environment mean must be finite");
  }
  const double sigma2 = params.sigma * params.sigma;
  // State: mean m, variance v, accumulated running cost c.
  using State = std::array<double, 3>;
  auto rhs = [&](double eta, double r, const State& y) -> State {
    const double m = y[0];
    const double v = y[1];
    const double drift = eta * m + r;
    return {-drift, -2.0 * eta * v + sigma2, 0.5 * ((m * m + v) + drift * drift + eta * eta * v)};
  };

  const double dt = grid.dt();
  State y = {params.x0, 0.0, 0.0};
  for (int k = 0; k < grid.n_steps; ++k) {
    const double eta_mid = midpoint(control.eta, k);
    const double r_mid = midpoint(control.r, k);
    const State k1 = rhs(control.eta[k], control.r[k], y);
    State tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const State k2 = rhs(eta_mid, r_mid, tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const State k3 = rhs(eta_mid, r_mid, tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + dt * k3[i];
    const State k4 = rhs(control.eta[k + 1], control.r[k + 1], tmp);
    for (int i = 0; i < 3; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  const double gap = y[0] - params.q * env_terminal_mean;
  return y[2] + 0.5 * (gap * gap + y[1]);
}

}  // namespace mfcoop
