#pragma once

#include <optional>
#include <vector>

#include "mfcoop/equilibria.hpp"
#include "mfcoop/model.hpp"

namespace mfcoop {

struct CostReport {
  double p = 0.0;
  double hat_J_p = 0.0;
  double star_J_p = 0.0;
  double J_star = 0.0;
  double hat_J_0 = 0.0;
  double hat_J_1 = 0.0;
  double PoI = 0.0;
  std::optional<double> PoA;  // set only when J_star > 0
};

CostReport cost_report(const ModelParams& params, double p, const TimeGrid& grid,
                       const SolveOptions& options = {});

struct AdjointDiagnostic {
  std::vector<double> Y_path;
  double integral_Y_sq = 0.0;
  // Y vanishes identically, so the lower bound on PoI carries no information.
  bool vanishes = false;
};

AdjointDiagnostic poi_adjoint(const ModelParams& params, const TimeGrid& grid);

enum class PStarStatus {
  kFound,
  kIdenticallyEqual,  // q = 0: J-hat_p equals J* for every p
  kNoSignChange,
};

const char* to_string(PStarStatus status);

struct PStarResult {
  PStarStatus status = PStarStatus::kFound;
  double p_star = 0.0;
  double gap = 0.0;  // J-hat_{p*} - J* at the returned point
  double gap_at_0 = 0.0;
  double gap_at_1 = 0.0;
  double J_star = 0.0;
};

/// Smallest root of p -> J-hat_p - J* found by a 101-point scan and bisection.
PStarResult p_star(const ModelParams& params, const TimeGrid& grid, double tol = 1e-12);

struct OrderingReport {
  double p = 0.0;
  bool hat0_le_star = false;        // J-hat_0 <= J*
  bool star_le_hat1 = false;        // J* <= J-hat_1
  bool mixture_le_hat_p = false;    // (1-p) J-hat_0 + p J* <= J-hat_p
  bool hat_p_le_star_p = false;     // J-hat_p <= J*_p
  bool concavity_hypothesis = false;
  CostReport costs;
};

/// Inequalities are checked with slack tol.
OrderingReport ordering_diagnostics(const ModelParams& params, double p, const TimeGrid& grid,
                                    double tol = 1e-12);

}  // namespace mfcoop
