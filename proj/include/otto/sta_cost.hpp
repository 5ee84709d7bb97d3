#pragma once

// Energetic cost of counterdiabatic driving along one stroke.

#include "otto/dynamics.hpp"
#include "otto/numerics.hpp"
#include "otto/protocols.hpp"

namespace otto {

/// One stroke: the ramp plus the inverse temperature of the bath the
/// oscillator was thermalised with before the stroke.
class StrokeContext {
 public:
  StrokeContext(const FrequencyProtocol& protocol, double beta);

  const FrequencyProtocol& protocol() const noexcept { return protocol_; }
  double beta() const noexcept { return beta_; }
  /// 1 / (exp(beta w_i) - 1)
  double n_bar() const noexcept { return n_bar_; }
  /// (w_i / 2) coth(beta w_i / 2)
  double h0_mean() const noexcept { return h0_mean_; }
  /// Thermal number variance n_bar (n_bar + 1).
  double number_variance() const noexcept { return n_bar_ * (n_bar_ + 1.0); }

 private:
  FrequencyProtocol protocol_;
  double beta_;
  double n_bar_;
  double h0_mean_;
};

/// <H_STA(t)> = (w_t / w_i) (Q*_CD - 1) <H(0)>; the work difference deltaW(t).
double mean_sta_term(const StrokeContext& ctx, double t);

/// <deltaW>_tau, time average of mean_sta_term over the ramp.
double avg_work_cost(const StrokeContext& ctx, int nodes = kDefaultQuadratureNodes);

/// delta(DeltaW)^2(t) = [(w_t Q*_CD - w_i)^2 - (w_t - w_i)^2] n_bar (n_bar + 1).
double work_variance_excess(const StrokeContext& ctx, double t);

/// <deltaDeltaW>_tau = (1/tau) int sqrt(delta(DeltaW)^2) dt.
double avg_variance_cost(const StrokeContext& ctx, int nodes = kDefaultQuadratureNodes);

/// W_fric(t) = <H0(w_t)>_bare - (w_t / w_i) <H(0)>.
double friction(const StrokeContext& ctx, double t, const IntegratorTolerance& tol = {});

/// Adiabatic work of the stroke, (w_f / w_i - 1) <H(0)>.
double adiabatic_work(const StrokeContext& ctx);

}  // namespace otto
