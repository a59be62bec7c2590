#include "mfcoop/model.hpp"

#include <cmath>
#include <string>

#include "mfcoop/error.hpp"

namespace mfcoop {

void check_params(const ModelParams& params) {
  if (!std::isfinite(params.q) || !std::isfinite(params.T) || !std::isfinite(params.x0) ||
      !std::isfinite(params.sigma)) {
    throw Error(ErrorCode::kNonFinite, "model parameters must be finite");
  }
  if (params.T <= 0.0) throw Error(ErrorCode::kOutOfRange, "horizon T must be positive");
  if (params.sigma <= 0.0) throw Error(ErrorCode::kOutOfRange, "sigma must be positive");
}

TimeGrid make_grid(const ModelParams& params, int n_steps) {
  if (n_steps < 2) {
    throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2, got " + std::to_string(n_steps));
  }
  return TimeGrid{params.T, n_steps};
}

double response_coefficient(double k, double T) {
  return 1.0 - 0.5 * k * (1.0 - std::exp(-2.0 * T));
}

ModelDiagnostics validate(const ModelParams& params, const TimeGrid& grid) {
  check_params(params);
  if (grid.n_steps < 2) throw Error(ErrorCode::kInvalidGrid, "n_steps must be >= 2");
  if (!std::isfinite(grid.horizon) || std::abs(grid.horizon - params.T) > 1e-12 * params.T) {
    throw Error(ErrorCode::kGridMismatch, "grid horizon differs from model horizon");
  }

  const double q = params.q;
  const double T = params.T;
  const double mfc_k = 2.0 * q - q * q;

  ModelDiagnostics d;
  const double mfg_gap = std::abs(q * T - 1.0);
  const double mfc_gap = std::abs(mfc_k * T - 1.0);
  d.mfg_singular = mfg_gap <= kSingularTolerance;
  d.mfc_singular = mfc_gap <= kSingularTolerance;
  d.mfg_near_singular = mfg_gap <= kNearSingularTolerance;
  d.mfc_near_singular = mfc_gap <= kNearSingularTolerance;
  d.mfg_response_coefficient = response_coefficient(q, T);
  d.mfc_response_coefficient = response_coefficient(mfc_k, T);
  d.mfg_degenerate = std::abs(d.mfg_response_coefficient) <= kSingularTolerance;
  d.mfc_degenerate = std::abs(d.mfc_response_coefficient) <= kSingularTolerance;
  d.monotone = monotonicity_flag(q);
  d.contraction_constant = std::abs(0.5 * q * (1.0 - std::exp(-2.0 * T)));
  return d;
}

bool monotonicity_flag(double q) {
  if (!std::isfinite(q)) throw Error(ErrorCode::kNonFinite, "q must be finite");
  return q <= 0.0;
}

double DiscreteMeasure::mean() const {
  return integrate([](double x) { return x; });
}

double terminal_cost(double q, double x, double mean) {
  const double d = x - q * mean;
  return 0.5 * d * d;
}

double lasry_lions_integral(double q, const DiscreteMeasure& m, const DiscreteMeasure& m_prime) {
  const double mean = m.mean();
  const double mean_prime = m_prime.mean();
  auto g_prime = [&](double x) { return terminal_cost(q, x, mean_prime); };
  auto g = [&](double x) { return terminal_cost(q, x, mean); };
  return (m_prime.integrate(g_prime) - m.integrate(g_prime)) -
         (m_prime.integrate(g) - m.integrate(g));
}

}  // namespace mfcoop
