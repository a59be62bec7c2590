#include <doctest.h>

#include <cmath>

#include "mfcoop/costs.hpp"
#include "mfcoop/equilibria.hpp"

using namespace mfcoop;

namespace {

struct Row {
  double q, J_star, hat0, hat1, poi;
};

// Reference values from an independent high-precision evaluation.
const Row kRows[] = {
    {-1.0, 1.08837752866625, 1.06619873659047, 1.11320947293937, 0.0221787920757719},
    {-0.5, 1.05491022057326, 1.04797523473169, 1.06213288770979, 0.00693498584157435},
    {0.0, 1.0, 1.0, 1.0, 0.0},
    {0.25, 0.963489639873799, 0.961925356734414, 0.965084084897271, 0.00156428313938429},
    {0.5, 0.924897260380946, 0.920893152672705, 0.92930122963826, 0.00400410770824137},
    {0.75, 0.89332495383821, 0.890416766550514, 0.89711233313264, 0.00290818728769648},
};

}  // namespace

TEST_CASE("cost report against reference values") {
  for (const Row& row : kRows) {
    CAPTURE(row.q);
    const ModelParams p{row.q, 1.0, 1.0, 1.0};
    const CostReport c = cost_report(p, 0.5, make_grid(p));
    CHECK(c.J_star == doctest::Approx(row.J_star).epsilon(1e-12));
    CHECK(c.hat_J_0 == doctest::Approx(row.hat0).epsilon(1e-12));
    CHECK(c.hat_J_1 == doctest::Approx(row.hat1).epsilon(1e-12));
    CHECK(std::abs(c.PoI - row.poi) <= 1e-12);
    CHECK(std::abs(c.PoI - (c.J_star - c.hat_J_0)) <= 1e-12);
    CHECK(c.PoI >= -1e-9);
    REQUIRE(c.PoA.has_value());
    CHECK(*c.PoA == doctest::Approx(c.hat_J_1 / c.J_star));
  }
}

TEST_CASE("q = 0 has no interaction") {
  const ModelParams p{0.0, 1.0, 1.0, 1.0};
  for (double pp : {0.0, 0.3, 1.0}) {
    const CostReport c = cost_report(p, pp, make_grid(p));
    CHECK(c.PoI == 0.0);
    CHECK(*c.PoA == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.hat_J_p == doctest::Approx(c.J_star).epsilon(1e-15));
  }
}

TEST_CASE("cost report endpoints") {
  const ModelParams p{0.5, 1.0, 1.0, 1.0};
  const CostReport c0 = cost_report(p, 0.0, make_grid(p));
  CHECK(c0.hat_J_0 < c0.J_star);
  const CostReport c1 = cost_report(p, 1.0, make_grid(p));
  CHECK(c1.hat_J_p == c1.hat_J_1);
}

TEST_CASE("adjoint diagnostic") {
  SUBCASE("q = 0 and q = 1 vanish") {
    for (double q : {0.0, 1.0}) {
      const ModelParams p{q, 1.0, 1.0, 1.0};
      const AdjointDiagnostic y = poi_adjoint(p, make_grid(p));
      CHECK(y.vanishes);
      CHECK(y.integral_Y_sq == 0.0);
    }
  }
  SUBCASE("q = 0.5") {
    const ModelParams p{0.5, 1.0, 1.0, 1.0};
    const TimeGrid grid = make_grid(p);
    const AdjointDiagnostic y = poi_adjoint(p, grid);
    CHECK(y.integral_Y_sq == doctest::Approx(0.0185232848322043).epsilon(1e-12));
    for (double v : y.Y_path) CHECK(v == y.Y_path.front());
  }
  SUBCASE("Y is the Gateaux derivative of the cost gap along a constant shift") {
    // Shift the feedback r by -eps. With eta = 1 the realized control moves
    // by eps e^{-t}, and to first order
    //   J(alpha_eps; own flow) - J(alpha_eps; MFC flow)
    // changes by eps * int Y_t e^{-t} dt.
    const ModelParams p{0.5, 1.0, 1.0, 1.0};
    const TimeGrid grid = make_grid(p);
    const Equilibrium mfc = solve_mfc(p, grid);
    const AdjointDiagnostic y = poi_adjoint(p, grid);
    const double eps = 1e-4;
    auto gap = [&](double e) {
      FeedbackControl c = mfc.control;
      for (double& r : c.r) r -= e;
      // The mean of the shifted control: xbar_T moves by e (1 - e^{-T}).
      const double own = mfc.xbar_T + e * (1.0 - std::exp(-p.T));
      return evaluate_cost(c, own, p, grid) - evaluate_cost(c, mfc.xbar_T, p, grid);
    };
    const double fd = (gap(eps) - gap(-eps)) / (2 * eps);
    CHECK(std::abs(fd - y.Y_path.front() * (1.0 - std::exp(-p.T))) <= 1e-6);
  }
}

TEST_CASE("p* reference values and free-rider window") {
  const std::pair<double, double> refs[] = {
      {0.25, 0.526184340637778}, {0.5, 0.548835193694267}, {0.75, 0.564601591787667}, {-0.5, 0.446202533577098}};
  for (auto [q, expected] : refs) {
    CAPTURE(q);
    const ModelParams p{q, 1.0, 1.0, 1.0};
    const TimeGrid grid = make_grid(p);
    const PStarResult r = p_star(p, grid, 1e-12);
    CHECK(r.status == PStarStatus::kFound);
    CHECK(r.p_star == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(r.gap) <= 1e-8);
  }
  const ModelParams p{0.0, 1.0, 1.0, 1.0};
  const PStarResult r = p_star(p, make_grid(p));
  CHECK(r.status == PStarStatus::kIdenticallyEqual);
  CHECK(r.p_star == 0.0);
}

TEST_CASE("ordering diagnostics") {
  SUBCASE("q = 0 holds with equality") {
    const ModelParams p{0.0, 1.0, 1.0, 1.0};
    const OrderingReport o = ordering_diagnostics(p, 0.4, make_grid(p));
    CHECK(o.hat0_le_star);
    CHECK(o.star_le_hat1);
    CHECK(o.mixture_le_hat_p);
    CHECK(o.hat_p_le_star_p);
    CHECK(o.concavity_hypothesis);
  }
  SUBCASE("q = 0.5 keeps the chain; the hypothesis flag is off") {
    const ModelParams p{0.5, 1.0, 1.0, 1.0};
    const OrderingReport o = ordering_diagnostics(p, 0.3, make_grid(p));
    CHECK(o.hat0_le_star);
    CHECK(o.star_le_hat1);
    CHECK_FALSE(o.concavity_hypothesis);
  }
}
