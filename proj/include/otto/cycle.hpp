#pragma once

// Quantum Otto cycle with a harmonic working medium:
//   A --(compression, tau1)--> B --(hot isochore)--> C --(expansion, tau3)--> D --(cold isochore)--> A
// Thermalisation is instantaneous, so tau_cycle = tau1 + tau3.

#include <string_view>

#include "otto/dynamics.hpp"
#include "otto/numerics.hpp"
#include "otto/protocols.hpp"

namespace otto {

struct CycleConfig {
  double omega1 = 0.35;  // cold-side (low) frequency
  double omega2 = 1.0;   // hot-side (high) frequency
  double beta1 = 2.0;    // cold bath
  double beta2 = 0.2;    // hot bath
  double tau1 = 3.0;     // compression
  double tau3 = 3.0;     // expansion
  RampKind kind = RampKind::Poly5;

  double x() const { return omega1 / omega2; }
  double tau_cycle() const { return tau1 + tau3; }
  /// omega1 -> omega2 in tau1.
  FrequencyProtocol compression() const { return {kind, omega1, omega2, tau1}; }
  /// omega2 -> omega1 in tau3.
  FrequencyProtocol expansion() const { return {kind, omega2, omega1, tau3}; }
  /// Thermal energy at A, (w1/2) coth(beta1 w1 / 2).
  double energy_A() const;
  /// Thermal energy at C, (w2/2) coth(beta2 w2 / 2).
  double energy_C() const;

  /// Throws DomainError unless 0 < omega1 < omega2, beta1 > beta2 > 0, taus > 0.
  void validate() const;
};

enum class Accounting { Adiabatic, Nonadiabatic, STAWithCost, TimeAveraged };

std::string_view to_string(Accounting a);

struct CycleResult {
  Accounting accounting = Accounting::Adiabatic;
  double W1 = 0.0;
  double W3 = 0.0;
  double Q2 = 0.0;
  double Q4 = 0.0;
  double Q1star = 1.0;
  double Q3star = 1.0;
  /// Time-averaged STA driving term of each stroke (zero without CD driving).
  double cost1 = 0.0;
  double cost3 = 0.0;
  double eta = 0.0;
  double power = 0.0;
  double dS_tot = 0.0;
  /// W1 + W3 < 0 and Q2 > 0.
  bool engine_mode = false;

  double first_law_residual() const { return W1 + W3 + Q2 + Q4; }
};

/// A figure of merit that is only meaningful in engine mode; outside it the
/// value is still the formula's, and engine_mode says why not to trust it.
struct EngineFigure {
  double value;
  bool engine_mode;
};

struct StrokeWorks {
  double W1;
  double W3;
};

StrokeWorks stroke_works(const CycleConfig& cfg, double q1, double q3);
double heat_hot(const CycleConfig& cfg, double q1);
/// From the first law: Q4 = -(W1 + W3) - Q2.
double heat_cold(const StrokeWorks& w, double q2);
bool is_engine(const StrokeWorks& w, double q2);

EngineFigure efficiency_exact(const CycleConfig& cfg, double q1, double q3);
EngineFigure power_exact(const CycleConfig& cfg, double q1, double q3);

struct CycleOptions {
  IntegratorTolerance tol{};
  int nodes = kDefaultQuadratureNodes;
};

/// Bare-drive Q* of the compression and expansion strokes.
struct BareAdiabaticity {
  double q1;
  double q3;
};
BareAdiabaticity bare_adiabaticity(const CycleConfig& cfg, const IntegratorTolerance& tol = {});

/// Time-averaged STA driving terms <H_STA^1>_tau1, <H_STA^3>_tau3.
struct StaCosts {
  double cost1;
  double cost3;
};
StaCosts sta_costs(const CycleConfig& cfg, int nodes = kDefaultQuadratureNodes);

double sta_efficiency(const CycleConfig& cfg, const CycleOptions& opts = {});
double sta_power(const CycleConfig& cfg, const CycleOptions& opts = {});

struct TimeAveragedPerformance {
  double eta_avg;
  double power_avg;
};
TimeAveragedPerformance time_averaged_performance(const CycleConfig& cfg,
                                                  const CycleOptions& opts = {});

/// dS_tot = -beta2 Q2 - beta1 Q4; throws InvariantViolation below -1e-9.
double entropy_production(const CycleConfig& cfg, const CycleResult& result);

/// Full cycle bookkeeping under one accounting convention.
CycleResult evaluate_cycle(const CycleConfig& cfg, Accounting accounting,
                           const CycleOptions& opts = {});

inline double carnot_efficiency(const CycleConfig& cfg) { return 1.0 - cfg.beta2 / cfg.beta1; }

}  // namespace otto
