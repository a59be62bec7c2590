#pragma once

#include <cstddef>
#include <vector>

namespace mfcoop {

/// The linear-quadratic scenario: dX = a dt + sigma dW, X_0 = x0,
/// running cost (x^2 + a^2)/2, terminal cost (x - q * mean)^2 / 2.
struct ModelParams {
  double q = 0.0;
  double T = 1.0;
  double x0 = 1.0;
  double sigma = 1.0;
};

/// Uniform grid t_k = k * dt, k = 0..n_steps, covering [0, horizon].
struct TimeGrid {
  double horizon = 1.0;
  int n_steps = 2000;

  double dt() const { return horizon / n_steps; }
  double t(int k) const { return k == n_steps ? horizon : k * dt(); }
  std::size_t size() const { return static_cast<std::size_t>(n_steps) + 1; }
};

/// Grid over the scenario horizon. Throws InvalidGrid for n_steps < 2.
TimeGrid make_grid(const ModelParams& params, int n_steps = 2000);

struct ModelDiagnostics {
  // Conditions as stated alongside the example's FBODE systems.
  bool mfg_singular = false;       // qT = 1
  bool mfc_singular = false;       // (2q - q^2) T = 1
  bool mfg_near_singular = false;  // within 1e-6
  bool mfc_near_singular = false;
  // Coefficient multiplying the terminal mean in the reduced linear
  // equation, 1 - k (1 - e^{-2T}) / 2 with k = q (MFG) or 2q - q^2 (MFC).
  // The solvers fail exactly when this vanishes.
  double mfg_response_coefficient = 1.0;
  double mfc_response_coefficient = 1.0;
  bool mfg_degenerate = false;
  bool mfc_degenerate = false;
  bool monotone = true;
  double contraction_constant = 0.0;  // |q/2 (1 - e^{-2T})|

  bool operator==(const ModelDiagnostics&) const = default;
};

inline constexpr double kSingularTolerance = 1e-12;
inline constexpr double kNearSingularTolerance = 1e-6;

/// Throws NonFinite / InvalidGrid / GridMismatch / OutOfRange on bad input.
void check_params(const ModelParams& params);

ModelDiagnostics validate(const ModelParams& params, const TimeGrid& grid);

/// Lasry-Lions monotonicity of g(x, mu) = (x - q mean(mu))^2 / 2, i.e. q <= 0.
bool monotonicity_flag(double q);

/// Finite probability measure on the real line.
struct DiscreteMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;

  double mean() const;
  /// Integral of h against the measure.
  template <typename F>
  double integrate(F&& h) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) acc += weights[i] * h(atoms[i]);
    return acc;
  }
};

/// Example terminal cost g(x, mu) = (x - q mean(mu))^2 / 2.
double terminal_cost(double q, double x, double mean);

/// int (g(x, m') - g(x, m)) d(m' - m)(x) for the example terminal cost.
double lasry_lions_integral(double q, const DiscreteMeasure& m, const DiscreteMeasure& m_prime);

/// 1 - k (1 - e^{-2T}) / 2.
double response_coefficient(double k, double T);

}  // namespace mfcoop
