#include "otto/optimizer.hpp"

#include <cmath>

#include "otto/errors.hpp"
#include "otto/numerics.hpp"

namespace otto {
namespace {

double thermal_energy(double beta, double omega) {
  return 0.5 * omega / std::tanh(0.5 * beta * omega);
}

double energy_A(const EmpConfig& cfg) {
  return cfg.high_T_cold ? 1.0 / cfg.beta1 : thermal_energy(cfg.beta1, cfg.omega1);
}

double energy_C(const EmpConfig& cfg, double x) {
  return cfg.high_T_hot ? 1.0 / cfg.beta2 : thermal_energy(cfg.beta2, cfg.omega1 / x);
}

void require_ratio(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("frequency ratio x must lie in (0, 1)");
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
}

}  // namespace

void EmpConfig::validate() const {
  if (!(omega1 > 0.0) || !(beta2 > 0.0) || !(beta1 > beta2) || std::isinf(beta1)) {
    throw DomainError("EMP config requires omega1 > 0 and beta1 > beta2 > 0");
  }
}

double gamma_beta(const EmpConfig& cfg, double x) {
  cfg.validate();
  require_ratio(x);
  return energy_A(cfg) / energy_C(cfg, x);
}

double optimal_x_analytic(double gamma) {
  require_gamma(gamma);
  return (gamma + std::sqrt(2.0 * gamma * (1.0 + gamma))) / (2.0 + gamma);
}

double eta_max_power_analytic(double gamma) {
  require_gamma(gamma);
  return 1.0 - (gamma + std::sqrt(4.0 * gamma * (1.0 + gamma))) / (2.0 + gamma);
}

double constrained_power(const EmpConfig& cfg, double x) {
  require_ratio(x);
  const double hA = energy_A(cfg);
  const double hC = energy_C(cfg, x);
  return (hA * (1.0 - 1.0 / x) + hC * (1.0 - x)) * cfg.omega1 / (1.0 + x);
}

EmpResult maximize_power_numeric(const EmpConfig& cfg, double x_tol) {
  cfg.validate();
  // P -> -inf as x -> 0 and P -> 0 as x -> 1; stay strictly inside.
  constexpr double lo = 1e-9;
  constexpr double hi = 1.0 - 1e-9;
  const ScalarMaximum m =
      golden_section_maximize([&](double x) { return constrained_power(cfg, x); }, lo, hi, x_tol);
  return {m.x, m.value, 1.0 - m.x, gamma_beta(cfg, m.x), m.value > 0.0};
}

double curzon_ahlborn(double beta_ratio) {
  if (!(beta_ratio > 0.0 && beta_ratio <= 1.0)) {
    throw DomainError("Curzon-Ahlborn efficiency needs a beta ratio in (0, 1]");
  }
  return 1.0 - std::sqrt(beta_ratio);
}

}  // namespace otto
