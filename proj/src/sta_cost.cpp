#include "otto/sta_cost.hpp"

#include <algorithm>
#include <cmath>

#include "otto/errors.hpp"

namespace otto {

StrokeContext::StrokeContext(const FrequencyProtocol& protocol, double beta)
    : protocol_(protocol), beta_(beta) {
  if (!(beta > 0.0)) throw DomainError("stroke context requires beta > 0");
  const double wi = protocol.omega_i();
  n_bar_ = std::isinf(beta) ? 0.0 : 1.0 / std::expm1(beta * wi);
  h0_mean_ = mean_energy(thermal_state(beta, wi), wi);
}

double mean_sta_term(const StrokeContext& ctx, double t) {
  const FrequencyProtocol& p = ctx.protocol();
  const double q = q_cd(p, t);
  return p.eval(t).omega / p.omega_i() * (q - 1.0) * ctx.h0_mean();
}

double avg_work_cost(const StrokeContext& ctx, int nodes) {
  const double tau = ctx.protocol().tau();
  return simpson([&](double t) { return mean_sta_term(ctx, t); }, 0.0, tau, nodes) / tau;
}

double work_variance_excess(const StrokeContext& ctx, double t) {
  const FrequencyProtocol& p = ctx.protocol();
  const double wi = p.omega_i();
  const double wt = p.eval(t).omega;
  const double q = q_cd(p, t);
  const double cd_gap = wt * q - wi;
  const double ad_gap = wt - wi;
  return (cd_gap * cd_gap - ad_gap * ad_gap) * ctx.number_variance();
}

double avg_variance_cost(const StrokeContext& ctx, int nodes) {
  const double tau = ctx.protocol().tau();
  // Rounding can leave -0-ish values at the ends where Q*_CD = 1.
  auto fluctuation = [&](double t) { return std::sqrt(std::max(0.0, work_variance_excess(ctx, t))); };
  return simpson(fluctuation, 0.0, tau, nodes) / tau;
}

double friction(const StrokeContext& ctx, double t, const IntegratorTolerance& tol) {
  const FrequencyProtocol& p = ctx.protocol();
  const double wi = p.omega_i();
  const GaussianState s = propagate(thermal_state(ctx.beta(), wi), p, t, Drive::Bare, tol);
  const double wt = p.eval(t).omega;
  return mean_energy(s, wt) - wt / wi * ctx.h0_mean();
}

double adiabatic_work(const StrokeContext& ctx) {
  const FrequencyProtocol& p = ctx.protocol();
  return (p.omega_f() / p.omega_i() - 1.0) * ctx.h0_mean();
}

}  // namespace otto
