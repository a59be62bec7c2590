#include "mfcoop/costs.hpp"

#include <algorithm>
#include <cmath>

#include "mfcoop/error.hpp"

namespace mfcoop {

CostReport cost_report(const ModelParams& params, double p, const TimeGrid& grid,
                       const SolveOptions& options) {
  const Equilibrium mfc = solve_mfc(params, grid, options);
  const PPartialEquilibrium at_p = solve_p_partial(params, p, grid, mfc, options);
  const PPartialEquilibrium at_0 = solve_p_partial(params, 0.0, grid, mfc, options);
  const PPartialEquilibrium at_1 = solve_p_partial(params, 1.0, grid, mfc, options);

  CostReport rep;
  rep.p = p;
  rep.hat_J_p = at_p.hat_J_p;
  rep.star_J_p = at_p.star_J_p;
  rep.J_star = mfc.cost;
  rep.hat_J_0 = at_0.hat_J_p;
  rep.hat_J_1 = at_1.hat_J_p;
  rep.PoI = rep.J_star - rep.hat_J_0;
  if (rep.J_star > 0.0) rep.PoA = rep.hat_J_1 / rep.J_star;
  return rep;
}

AdjointDiagnostic poi_adjoint(const ModelParams& params, const TimeGrid& grid) {
  const Equilibrium mfc = solve_mfc(params, grid);
  const double q = params.q;
  // f_0 carries no measure, and averaging dg/dmu(x~, mu)(x) = -q (x~ - q m)
  // over x~ ~ mu_T^MFC leaves -q (1 - q) m, constant in time.
  const double y = -q * (1.0 - q) * mfc.xbar_T;
  AdjointDiagnostic out;
  out.Y_path.assign(grid.size(), y);
  out.integral_Y_sq = grid.horizon * y * y;
  out.vanishes = y == 0.0;
  return out;
}

const char* to_string(PStarStatus status) {
  switch (status) {
    case PStarStatus::kFound: return "found";
    case PStarStatus::kIdenticallyEqual: return "identically_equal";
    case PStarStatus::kNoSignChange: return "no_sign_change";
  }
  return "unknown";
}

PStarResult p_star(const ModelParams& params, const TimeGrid& grid, double tol) {
  if (!std::isfinite(tol) || tol <= 0.0) throw Error(ErrorCode::kOutOfRange, "tol must be positive");
  const Equilibrium mfc = solve_mfc(params, grid);
  auto gap = [&](double p) {
    return solve_p_partial(params, p, grid, mfc).hat_J_p - mfc.cost;
  };

  PStarResult out;
  out.J_star = mfc.cost;
  out.gap_at_0 = gap(0.0);
  out.gap_at_1 = gap(1.0);
  if (params.q == 0.0) {
    out.status = PStarStatus::kIdenticallyEqual;
    out.p_star = 0.0;
    out.gap = out.gap_at_0;
    return out;
  }

  const double target = tol * std::max(1.0, std::abs(mfc.cost));
  constexpr int kScan = 101;
  double p_lo = 0.0;
  double g_lo = out.gap_at_0;
  if (std::abs(g_lo) <= target) {
    out.p_star = 0.0;
    out.gap = g_lo;
    return out;
  }
  for (int i = 1; i < kScan; ++i) {
    const double p_hi = static_cast<double>(i) / (kScan - 1);
    const double g_hi = i == kScan - 1 ? out.gap_at_1 : gap(p_hi);
    if (std::abs(g_hi) <= target) {
      out.p_star = p_hi;
      out.gap = g_hi;
      return out;
    }
    if ((g_lo < 0.0) != (g_hi < 0.0)) {
      double a = p_lo, b = p_hi, ga = g_lo;
      double mid = 0.5 * (a + b);
      double gm = gap(mid);
      for (int it = 0; it < 200 && std::abs(gm) > target && b - a > 0.0; ++it) {
        if ((ga < 0.0) == (gm < 0.0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
        const double next = 0.5 * (a + b);
        if (next == a || next == b) break;
        mid = next;
        gm = gap(mid);
      }
      out.p_star = mid;
      out.gap = gm;
      return out;
    }
    p_lo = p_hi;
    g_lo = g_hi;
  }
  out.status = PStarStatus::kNoSignChange;
  // Boundary report: the endpoint with the smaller gap.
  out.p_star = std::abs(out.gap_at_0) <= std::abs(out.gap_at_1) ? 0.0 : 1.0;
  out.gap = out.p_star == 0.0 ? out.gap_at_0 : out.gap_at_1;
  return out;
}

OrderingReport ordering_diagnostics(const ModelParams& params, double p, const TimeGrid& grid,
                                    double tol) {
  OrderingReport rep;
  rep.p = p;
  rep.costs = cost_report(params, p, grid);
  const CostReport& c = rep.costs;
  rep.hat0_le_star = c.hat_J_0 <= c.J_star + tol;
  rep.star_le_hat1 = c.J_star <= c.hat_J_1 + tol;
  rep.mixture_le_hat_p = (1.0 - p) * c.hat_J_0 + p * c.J_star <= c.hat_J_p + tol;
  rep.hat_p_le_star_p = c.hat_J_p <= c.star_J_p + tol;
  // g(x, mu) = (x - q mean)^2 / 2 is displacement convex in mu unless q = 0.
  rep.concavity_hypothesis = params.q == 0.0;
  return rep;
}

}  // namespace mfcoop
