#pragma once

// Efficiency at maximum power of the STA engine under the minimum-time
// constraint tau = 1/w1 + 1/w2 = (1 + x)/w1, with w1 and both temperatures fixed.

namespace otto {

struct EmpConfig {
  double omega1 = 1.0;
  double beta1 = 1.0;
  double beta2 = 0.1;
  /// Use <H>_C = 1/beta2 (equipartition), independent of x.
  bool high_T_hot = false;
  /// Use <H>_A = 1/beta1.
  bool high_T_cold = false;

  void validate() const;
};

/// gamma = <H>_A / <H>_C at frequency ratio x = w1/w2.
double gamma_beta(const EmpConfig& cfg, double x);

/// x = [gamma + sqrt(2 gamma (1 + gamma))] / (2 + gamma)
double optimal_x_analytic(double gamma);

/// Printed efficiency at maximum power, 1 - [gamma + sqrt(4 gamma (1 + gamma))] / (2 + gamma).
/// Not equal to 1 - optimal_x_analytic(gamma).
double eta_max_power_analytic(double gamma);

/// P(x) = [<H>_A (1 - 1/x) + <H>_C (1 - x)] w1 / (1 + x)
double constrained_power(const EmpConfig& cfg, double x);

struct EmpResult {
  double x_opt;
  double P_max;
  /// 1 - x_opt, the adiabatic efficiency at the optimum.
  double eta_at_max;
  /// gamma evaluated at x_opt.
  double gamma;
  /// False when P(x) <= 0 on the whole interval; x_opt is then meaningless.
  bool engine_regime;
};

inline constexpr double kEmpTolerance = 1e-10;

EmpResult maximize_power_numeric(const EmpConfig& cfg, double x_tol = kEmpTolerance);

/// 1 - sqrt(beta_ratio)
double curzon_ahlborn(double beta_ratio);

}  // namespace otto
