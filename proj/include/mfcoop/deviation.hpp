#pragma once

#include <vector>

#include "mfcoop/model.hpp"

namespace mfcoop {

/// Mixing weights q^{n,j} over past policies alpha^0..alpha^n.
class WeightSchedule {
 public:
  enum class Mode { kFixedPoint, kFictitious, kCustom };

  static WeightSchedule fixed_point(std::vector<double> p_sequence);
  static WeightSchedule constant(double p);  // p_i = p for every i
  static WeightSchedule fictitious(double q_tilde);
  static WeightSchedule custom(std::vector<std::vector<double>> rows);

  Mode mode() const { return mode_; }
  /// Row m, of length m + 1: weights of the population after m best responses.
  std::vector<double> row(int m) const;
  /// Q_n = prod_{i <= n} (1 - p_i); fixed-point mode only. Q_{-1} = 1.
  double cumulative_stay(int n) const;
  /// p_i, with entries past the supplied sequence read as 0 (or the constant).
  double p_at(int i) const;

 private:
  Mode mode_ = Mode::kFixedPoint;
  std::vector<double> p_;
  bool constant_ = false;
  double q_tilde_ = 0.0;
  std::vector<std::vector<double>> rows_;
};

/// Throws InvalidSchedule unless the row is nonnegative and sums to 1.
void check_weight_row(const std::vector<double>& row);

struct IterationRecord {
  int n = 0;
  double Q_n = 1.0;  // NaN outside fixed-point mode
  double population_xbar_T = 0.0;
  double best_response_xbar_T = 0.0;
  double residual = 0.0;  // |X^{n+1}_T - X^n_T|
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  double limit = 0.0;
  double p_star_inf = 0.0;  // 1 - prod (1 - p_i); fixed-point mode only
  double condition_constant = 0.0;
  double C_x = 0.0;  // +inf when the condition fails
  double distance_to_partial = 0.0;  // fictitious play only
};

struct ConvergenceCondition {
  double constant = 0.0;
  bool satisfied = false;
};

ConvergenceCondition check_convergence_condition(const ModelParams& params);

/// Step-1 bound (|C0| + |C1|) / (1 - |C2|) on the iterates.
double iterate_bound(const ModelParams& params, const TimeGrid& grid);

/// Terminal mean of the best response to a population with terminal mean env.
double best_response_map(const ModelParams& params, double env);

IterationTrace run_generic(const ModelParams& params, const WeightSchedule& schedule, int N,
                           const TimeGrid& grid);

IterationTrace run_fixed_point(const ModelParams& params, const std::vector<double>& p_sequence,
                               int N, double tol, const TimeGrid& grid);
IterationTrace run_fixed_point(const ModelParams& params, const WeightSchedule& schedule, int N,
                               double tol, const TimeGrid& grid);

IterationTrace run_fictitious_play(const ModelParams& params, double q_tilde, int N,
                                   const TimeGrid& grid);

double identify_limit(const ModelParams& params, double p_star, const TimeGrid& grid);

}  // namespace mfcoop
