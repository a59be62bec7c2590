#include "mfcoop/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mfcoop/equilibria.hpp"
#include "mfcoop/error.hpp"

namespace mfcoop {

namespace {

constexpr double kRowSumTolerance = 1e-12;

void check_proportion(double p, const char* what) {
  if (!std::isfinite(p)) throw Error(ErrorCode::kNonFinite, std::string(what) + " must be finite");
  if (p < 0.0 || p > 1.0) {
    throw Error(ErrorCode::kInvalidSchedule, std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

void check_weight_row(const std::vector<double>& row) {
  if (row.empty()) throw Error(ErrorCode::kInvalidSchedule, "empty weight row");
  double sum = 0.0;
  for (double w : row) {
    if (!std::isfinite(w)) throw Error(ErrorCode::kNonFinite, "weight must be finite");
    if (w < 0.0) throw Error(ErrorCode::kInvalidSchedule, "weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw Error(ErrorCode::kInvalidSchedule, "weight row sums to " + std::to_string(sum));
  }
}

WeightSchedule WeightSchedule::fixed_point(std::vector<double> p_sequence) {
  for (double p : p_sequence) check_proportion(p, "p_i");
  WeightSchedule s;
  s.mode_ = Mode::kFixedPoint;
  s.p_ = std::move(p_sequence);
  return s;
}

WeightSchedule WeightSchedule::constant(double p) {
  check_proportion(p, "p");
  WeightSchedule s;
  s.mode_ = Mode::kFixedPoint;
  s.p_ = {p};
  s.constant_ = true;
  return s;
}

WeightSchedule WeightSchedule::fictitious(double q_tilde) {
  if (!std::isfinite(q_tilde)) throw Error(ErrorCode::kNonFinite, "q_tilde must be finite");
  if (q_tilde <= 0.0 || q_tilde >= 1.0) {
    throw Error(ErrorCode::kInvalidSchedule, "q_tilde must lie in (0, 1)");
  }
  WeightSchedule s;
  s.mode_ = Mode::kFictitious;
  s.q_tilde_ = q_tilde;
  return s;
}

WeightSchedule WeightSchedule::custom(std::vector<std::vector<double>> rows) {
  for (std::size_t m = 0; m < rows.size(); ++m) {
    if (rows[m].size() != m + 1) {
      throw Error(ErrorCode::kInvalidSchedule, "custom row " + std::to_string(m) + " must have " +
                                                   std::to_string(m + 1) + " entries");
    }
    check_weight_row(rows[m]);
  }
  WeightSchedule s;
  s.mode_ = Mode::kCustom;
  s.rows_ = std::move(rows);
  return s;
}

double WeightSchedule::p_at(int i) const {
  if (constant_) return p_.front();
  return i >= 0 && static_cast<std::size_t>(i) < p_.size() ? p_[i] : 0.0;
}

double WeightSchedule::cumulative_stay(int n) const {
  double Q = 1.0;
  for (int i = 0; i <= n; ++i) Q *= 1.0 - p_at(i);
  return Q;
}

std::vector<double> WeightSchedule::row(int m) const {
  if (m < 0) throw Error(ErrorCode::kOutOfRange, "row index must be nonnegative");
  std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
  switch (mode_) {
    case Mode::kFixedPoint: {
      if (m == 0) {
        w[0] = 1.0;
      } else {
        const double Q = cumulative_stay(m - 1);
        w[0] = Q;
        w[m] += 1.0 - Q;
      }
      break;
    }
    case Mode::kFictitious: {
      const double share = q_tilde_ / (m + 1);
      w[0] = 1.0 - m * share;
      for (int j = 1; j <= m; ++j) w[j] = share;
      break;
    }
    case Mode::kCustom: {
      if (static_cast<std::size_t>(m) >= rows_.size()) {
        throw Error(ErrorCode::kInvalidSchedule, "custom schedule has no row " + std::to_string(m));
      }
      w = rows_[m];
      break;
    }
  }
  return w;
}

ConvergenceCondition check_convergence_condition(const ModelParams& params) {
  check_params(params);
  ConvergenceCondition c;
  c.constant = std::abs(0.5 * params.q * (1.0 - std::exp(-2.0 * params.T)));
  c.satisfied = c.constant < 1.0;
  return c;
}

double best_response_map(const ModelParams& params, double env) {
  // The mean of a best responder does not depend on sigma.
  const double e = std::exp(-params.T);
  return e * params.x0 + 0.5 * params.q * env * (1.0 - e * e);
}

double iterate_bound(const ModelParams& params, const TimeGrid& grid) {
  const ConvergenceCondition cond = check_convergence_condition(params);
  if (!cond.satisfied) return std::numeric_limits<double>::infinity();
  const double M = solve_mfc(params, grid).xbar_T;
  const double C0 = std::exp(-params.T) * params.x0;
  const double C1 = M - C0;
  return (std::abs(C0) + std::abs(C1)) / (1.0 - cond.constant);
}

namespace {

IterationTrace start_trace(const ModelParams& params, const TimeGrid& grid) {
  IterationTrace trace;
  const ConvergenceCondition cond = check_convergence_condition(params);
  trace.condition_constant = cond.constant;
  trace.C_x = iterate_bound(params, grid);
  return trace;
}

bool residuals_decayed(const IterationTrace& trace, double tol) {
  if (trace.records.empty()) return false;
  return trace.records.back().residual <= tol * std::max(1.0, std::abs(trace.limit));
}

}  // namespace

IterationTrace run_generic(const ModelParams& params, const WeightSchedule& schedule, int N,
                           const TimeGrid& grid) {
  if (N < 1) throw Error(ErrorCode::kOutOfRange, "N must be >= 1");
  IterationTrace trace = start_trace(params, grid);
  const bool fixed = schedule.mode() == WeightSchedule::Mode::kFixedPoint;

  // Terminal means of alpha^0 (MFC), alpha^1, ..., the sufficient statistic
  // of each past policy here.
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(N) + 1);
  means.push_back(solve_mfc(params, grid).xbar_T);
  auto population = [&](int m) {
    const std::vector<double> w = schedule.row(m);
    check_weight_row(w);
    double x = 0.0;
    for (int j = 0; j <= m; ++j) x += w[j] * means[j];
    return x;
  };

  double pop = population(0);
  for (int n = 0; n < N; ++n) {
    IterationRecord rec;
    rec.n = n;
    rec.Q_n = fixed ? schedule.cumulative_stay(n) : std::numeric_limits<double>::quiet_NaN();
    rec.population_xbar_T = pop;
    rec.best_response_xbar_T = best_response_map(params, pop);
    means.push_back(rec.best_response_xbar_T);
    const double next = population(n + 1);
    rec.residual = std::abs(next - pop);
    trace.records.push_back(rec);
    pop = next;
  }
  trace.limit = pop;
  if (fixed) trace.p_star_inf = 1.0 - schedule.cumulative_stay(N - 1);
  trace.converged = trace.condition_constant < 1.0 && residuals_decayed(trace, 1e-10);
  return trace;
}

IterationTrace run_fixed_point(const ModelParams& params, const std::vector<double>& p_sequence,
                               int N, double tol, const TimeGrid& grid) {
  return run_fixed_point(params, WeightSchedule::fixed_point(p_sequence), N, tol, grid);
}

IterationTrace run_fixed_point(const ModelParams& params, const WeightSchedule& schedule, int N,
                               double tol, const TimeGrid& grid) {
  if (N < 1) throw Error(ErrorCode::kOutOfRange, "N must be >= 1");
  if (schedule.mode() != WeightSchedule::Mode::kFixedPoint) {
    throw Error(ErrorCode::kInvalidSchedule, "run_fixed_point needs a fixed-point schedule");
  }
  if (!std::isfinite(tol) || tol < 0.0) throw Error(ErrorCode::kOutOfRange, "tol must be >= 0");
  IterationTrace trace = start_trace(params, grid);
  const double M = solve_mfc(params, grid).xbar_T;

  double pop = M;
  double Q = 1.0;
  int last = 0;
  for (int n = 0; n < N; ++n) {
    const double Q_prev = Q;
    Q *= 1.0 - schedule.p_at(n);
    IterationRecord rec;
    rec.n = n;
    rec.Q_n = Q;
    rec.population_xbar_T = pop;
    rec.best_response_xbar_T = best_response_map(params, pop);
    const double next = Q * M + (1.0 - Q) * rec.best_response_xbar_T;
    rec.residual = std::abs(next - pop);
    trace.records.push_back(rec);
    pop = next;
    last = n;
    if (rec.residual <= tol && std::abs(Q - Q_prev) <= tol && n > 0) break;
  }
  trace.limit = pop;
  trace.p_star_inf = 1.0 - schedule.cumulative_stay(last);
  const double stop = std::max(tol, 1e-300);
  trace.converged = trace.condition_constant < 1.0 && trace.records.back().residual <= stop;
  return trace;
}

IterationTrace run_fictitious_play(const ModelParams& params, double q_tilde, int N,
                                   const TimeGrid& grid) {
  if (N < 2) throw Error(ErrorCode::kOutOfRange, "N must be >= 2");
  IterationTrace trace = run_generic(params, WeightSchedule::fictitious(q_tilde), N, grid);
  const PPartialEquilibrium partial = solve_p_partial(params, q_tilde, grid);
  trace.distance_to_partial = std::abs(trace.limit - partial.population_xbar_T);
  return trace;
}

double identify_limit(const ModelParams& params, double p_star, const TimeGrid& grid) {
  if (!std::isfinite(p_star)) throw Error(ErrorCode::kNonFinite, "p_star must be finite");
  if (p_star < 0.0 || p_star > 1.0) throw Error(ErrorCode::kOutOfRange, "p_star must lie in [0, 1]");
  return solve_p_partial(params, p_star, grid).population_xbar_T;
}

}  // namespace mfcoop
