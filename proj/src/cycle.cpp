#include "otto/cycle.hpp"

#include <cmath>
#include <sstream>

#include "otto/errors.hpp"
#include "otto/sta_cost.hpp"

namespace otto {
namespace {

double coth(double z) { return 1.0 / std::tanh(z); }

}  // namespace

double CycleConfig::energy_A() const { return 0.5 * omega1 * coth(0.5 * beta1 * omega1); }
double CycleConfig::energy_C() const { return 0.5 * omega2 * coth(0.5 * beta2 * omega2); }

void CycleConfig::validate() const {
  std::ostringstream msg;
  if (!(omega1 > 0.0 && omega2 > omega1)) {
    msg << "cycle requires 0 < omega1 < omega2 (got " << omega1 << ", " << omega2 << ")";
  } else if (!(beta2 > 0.0 && beta1 > beta2) || std::isinf(beta1)) {
    msg << "cycle requires beta1 > beta2 > 0, both finite (got " << beta1 << ", " << beta2 << ")";
  } else if (!(tau1 > 0.0 && tau3 > 0.0)) {
    msg << "cycle requires tau1, tau3 > 0";
  } else {
    return;
  }
  throw DomainError(msg.str());
}

std::string_view to_string(Accounting a) {
  switch (a) {
    case Accounting::Adiabatic: return "adiabatic";
    case Accounting::Nonadiabatic: return "nonadiabatic";
    case Accounting::STAWithCost: return "sta";
    case Accounting::TimeAveraged: return "time_averaged";
  }
  return "unknown";
}

StrokeWorks stroke_works(const CycleConfig& cfg, double q1, double q3) {
  const double x = cfg.x();
  const double half_w1 = 0.5 * cfg.omega1;
  return {half_w1 * (q1 / x - 1.0) * coth(0.5 * cfg.beta1 * cfg.omega1),
          half_w1 * (q3 - 1.0 / x) * coth(0.5 * cfg.beta2 * cfg.omega2)};
}

double heat_hot(const CycleConfig& cfg, double q1) {
  return 0.5 * cfg.omega2 *
         (coth(0.5 * cfg.beta2 * cfg.omega2) - q1 * coth(0.5 * cfg.beta1 * cfg.omega1));
}

double heat_cold(const StrokeWorks& w, double q2) { return -(w.W1 + w.W3) - q2; }

bool is_engine(const StrokeWorks& w, double q2) { return w.W1 + w.W3 < 0.0 && q2 > 0.0; }

EngineFigure efficiency_exact(const CycleConfig& cfg, double q1, double q3) {
  const double x = cfg.x();
  const double hA = cfg.energy_A();
  const double hC = cfg.energy_C();
  const double eta = 1.0 - x * (x * q3 * hC - hA) / (x * hC - q1 * hA);
  const StrokeWorks w = stroke_works(cfg, q1, q3);
  return {eta, is_engine(w, heat_hot(cfg, q1))};
}

EngineFigure power_exact(const CycleConfig& cfg, double q1, double q3) {
  const double x = cfg.x();
  const double hA = cfg.energy_A();
  const double hC = cfg.energy_C();
  const double p = (hA * (1.0 - q1 / x) + (1.0 - x * q3) * hC) / cfg.tau_cycle();
  const StrokeWorks w = stroke_works(cfg, q1, q3);
  return {p, is_engine(w, heat_hot(cfg, q1))};
}

BareAdiabaticity bare_adiabaticity(const CycleConfig& cfg, const IntegratorTolerance& tol) {
  const FrequencyProtocol comp = cfg.compression();
  const FrequencyProtocol exp = cfg.expansion();
  return {adiabaticity_Q(comp, cfg.beta1, comp.tau(), Drive::Bare, tol),
          adiabaticity_Q(exp, cfg.beta2, exp.tau(), Drive::Bare, tol)};
}

StaCosts sta_costs(const CycleConfig& cfg, int nodes) {
  return {avg_work_cost(StrokeContext(cfg.compression(), cfg.beta1), nodes),
          avg_work_cost(StrokeContext(cfg.expansion(), cfg.beta2), nodes)};
}

double sta_efficiency(const CycleConfig& cfg, const CycleOptions& opts) {
  return evaluate_cycle(cfg, Accounting::STAWithCost, opts).eta;
}

double sta_power(const CycleConfig& cfg, const CycleOptions& opts) {
  return evaluate_cycle(cfg, Accounting::STAWithCost, opts).power;
}

TimeAveragedPerformance time_averaged_performance(const CycleConfig& cfg,
                                                  const CycleOptions& opts) {
  const CycleResult r = evaluate_cycle(cfg, Accounting::TimeAveraged, opts);
  return {r.eta, r.power};
}

double entropy_production(const CycleConfig& cfg, const CycleResult& result) {
  const double ds = -cfg.beta2 * result.Q2 - cfg.beta1 * result.Q4;
  if (ds < -1e-9) {
    std::ostringstream msg;
    msg << "negative cycle entropy production " << ds;
    throw InvariantViolation(msg.str());
  }
  return ds;
}

CycleResult evaluate_cycle(const CycleConfig& cfg, Accounting accounting,
                           const CycleOptions& opts) {
  cfg.validate();
  CycleResult r;
  r.accounting = accounting;

  if (accounting == Accounting::Nonadiabatic) {
    const BareAdiabaticity q = bare_adiabaticity(cfg, opts.tol);
    r.Q1star = q.q1;
    r.Q3star = q.q3;
  }
  if (accounting == Accounting::STAWithCost || accounting == Accounting::TimeAveraged) {
    if (!is_sta_kind(cfg.kind)) {
      throw DomainError("STA accounting needs a ramp with vanishing end slopes (poly5, poly3, cosine)");
    }
    const StaCosts c = sta_costs(cfg, opts.nodes);
    r.cost1 = c.cost1;
    r.cost3 = c.cost3;
  }

  // CD endpoints reproduce the adiabatic works, so every STA variant starts from Q* = 1.
  StrokeWorks w = stroke_works(cfg, r.Q1star, r.Q3star);
  r.Q2 = heat_hot(cfg, r.Q1star);

  const double cost = r.cost1 + r.cost3;
  switch (accounting) {
    case Accounting::Adiabatic:
    case Accounting::Nonadiabatic:
      r.eta = -(w.W1 + w.W3) / r.Q2;
      r.power = -(w.W1 + w.W3) / cfg.tau_cycle();
      break;
    case Accounting::STAWithCost:
      r.eta = -(w.W1 + w.W3) / (r.Q2 + cost);
      r.power = (-(w.W1 + w.W3) - cost) / cfg.tau_cycle();
      break;
    case Accounting::TimeAveraged:
      // <W_i(t)>_tau = W_i,AD + <H_STA^i>_tau
      w.W1 += r.cost1;
      w.W3 += r.cost3;
      r.eta = -(w.W1 + w.W3) / r.Q2;
      r.power = -(w.W1 + w.W3) / cfg.tau_cycle();
      break;
  }
  r.engine_mode = is_engine(w, r.Q2);
  r.W1 = w.W1;
  r.W3 = w.W3;
  r.Q4 = heat_cold(w, r.Q2);
  r.dS_tot = entropy_production(cfg, r);
  return r;
}

}  // namespace otto
