#pragma once

#include <vector>

#include "mfcoop/fbode.hpp"
#include "mfcoop/model.hpp"

namespace mfcoop {

enum class EquilibriumKind { kMfg, kMfc, kLambda, kPPartialDeviator, kBestResponse };

const char* to_string(EquilibriumKind kind);

/// Feedback alpha(t_k, x) = -(eta_k x + r_k) on a grid.
struct FeedbackControl {
  TimeGrid grid;
  std::vector<double> eta;
  std::vector<double> r;

  double operator()(int k, double x) const { return -(eta[k] * x + r[k]); }
};

FeedbackControl feedback_of(const FbodeSolution& solution);

struct Equilibrium {
  EquilibriumKind kind = EquilibriumKind::kMfg;
  // lambda for kLambda, p for kPPartialDeviator, the environment terminal
  // mean for kBestResponse, unused otherwise.
  double parameter = 0.0;
  FbodeSolution solution;
  FeedbackControl control;
  // kMfg: J-hat_1; kMfc: J*; kLambda: J^{lambda,MF} at the equilibrium;
  // kPPartialDeviator: J-hat_p; kBestResponse: cost against the environment.
  double cost = 0.0;
  double xbar_T = 0.0;
};

/// Population terminal mean frozen for a best responder.
struct EnvironmentMean {
  double xbar_env_T = 0.0;
};

struct PPartialEquilibrium {
  double p = 0.0;
  Equilibrium deviator;
  double xbar_mfc_T = 0.0;
  double population_xbar_T = 0.0;  // p * deviator + (1 - p) * MFC
  double hat_J_p = 0.0;
  double star_J_p = 0.0;
};

enum class SolverChoice {
  kAuto,        // closed form when sigma = 1, numeric otherwise
  kClosedForm,
  kNumeric,
};

struct SolveOptions {
  SolverChoice method = SolverChoice::kAuto;
  ShootingOptions shooting;
};

// Systems in the eta_T = 1 form, where the ansatz coefficients are those of
// the representative player's value function.
FbodeSystem mfg_system(const ModelParams& params);
FbodeSystem mfc_system(const ModelParams& params);
FbodeSystem p_partial_system(const ModelParams& params, double p, double xbar_mfc_T);
FbodeSystem lambda_system(const ModelParams& params, double lambda);
FbodeSystem best_response_system(const ModelParams& params, const EnvironmentMean& env);

// Same equilibria written as mean systems  Ybar = eta Xbar + r  with the
// interaction folded into eta_T (e.g. eta_T = (1-q)^2 for the MFC).
// Only xbar is meaningful; used to cross-check the primary systems.
FbodeSystem mfg_mean_system(const ModelParams& params);
FbodeSystem mfc_mean_system(const ModelParams& params);
FbodeSystem p_partial_mean_system(const ModelParams& params, double p, double xbar_mfc_T);

FbodeSolution solve_system(const FbodeSystem& system, const TimeGrid& grid,
                           const SolveOptions& options = {});

Equilibrium solve_mfg(const ModelParams& params, const TimeGrid& grid,
                      const SolveOptions& options = {});
Equilibrium solve_mfc(const ModelParams& params, const TimeGrid& grid,
                      const SolveOptions& options = {});

PPartialEquilibrium solve_p_partial(const ModelParams& params, double p, const TimeGrid& grid,
                                    const SolveOptions& options = {});
/// Same, reusing an already solved MFC.
PPartialEquilibrium solve_p_partial(const ModelParams& params, double p, const TimeGrid& grid,
                                    const Equilibrium& mfc, const SolveOptions& options = {});

Equilibrium solve_lambda_interpolated(const ModelParams& params, double lambda,
                                      const TimeGrid& grid, const SolveOptions& options = {});

Equilibrium best_response(const ModelParams& params, const EnvironmentMean& env,
                          const TimeGrid& grid, const SolveOptions& options = {});

/// Expected cost of one player using `control` while the population terminal
/// mean is frozen at `env_terminal_mean`. Propagates the player's mean and
/// variance, so no sampling is involved.
double evaluate_cost(const FeedbackControl& control, double env_terminal_mean,
                     const ModelParams& params, const TimeGrid& grid);

/// x0^2 eta_0 / 2 + r_0 x0 + s_0, the ansatz value at the initial state.
double ansatz_value(const FbodeSolution& solution, double x0);

}  // namespace mfcoop
