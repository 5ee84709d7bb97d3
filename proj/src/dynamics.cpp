#include "otto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "otto/errors.hpp"

namespace otto {
namespace {

namespace odeint = boost::numeric::odeint;

// mean_x, mean_p, cov_xx, cov_xp, cov_pp
using MomentVector = std::array<double, 5>;
// X, Xdot, Y, Ydot
using PairVector = std::array<double, 4>;

[[noreturn]] void throw_trap_inversion(double t, double margin) {
  std::ostringstream msg;
  msg << "counterdiabatic trap inverted at t = " << t << " (1 - wdot^2/(4 w^4) = " << margin
      << ")";
  throw TrapInversionError(msg.str(), t, margin);
}

// Drift matrix entries a = [[g, 1], [-w^2, -g]].
struct Generator {
  double w2;
  double g;
};

Generator generator_at(const FrequencyProtocol& protocol, double t, Drive drive) {
  const RampSample s = protocol.eval(t);
  if (drive == Drive::Bare) return {s.omega * s.omega, 0.0};
  const double margin = cd_margin(s);
  if (!(margin > 0.0)) throw_trap_inversion(t, margin);
  return {s.omega * s.omega, -s.omega_dot / (2.0 * s.omega)};
}

struct MomentSystem {
  const FrequencyProtocol& protocol;
  Drive drive;

  void operator()(const MomentVector& y, MomentVector& dy, double t) const {
    const auto [w2, g] = generator_at(protocol, t, drive);
    dy[0] = g * y[0] + y[1];
    dy[1] = -w2 * y[0] - g * y[1];
    dy[2] = 2.0 * (g * y[2] + y[3]);
    dy[3] = y[4] - w2 * y[2];
    dy[4] = -2.0 * (w2 * y[3] + g * y[4]);
  }
};

struct PairSystem {
  const FrequencyProtocol& protocol;

  void operator()(const PairVector& y, PairVector& dy, double t) const {
    const double w = protocol.eval(t).omega;
    dy[0] = y[1];
    dy[1] = -w * w * y[0];
    dy[2] = y[3];
    dy[3] = -w * w * y[2];
  }
};

void require_times(const FrequencyProtocol& protocol, std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= 0.0 && t <= protocol.tau() * (1.0 + 1e-14))) {
      std::ostringstream msg;
      msg << "time " << t << " outside ramp [0, " << protocol.tau() << "]";
      throw DomainError(msg.str());
    }
    if (t < prev) throw DomainError("propagation times must be non-decreasing");
    prev = t;
  }
}

void require_cd_valid_until(const FrequencyProtocol& protocol, double t_end) {
  if (t_end <= 0.0) return;
  constexpr int kScan = kDefaultValiditySamples;
  for (int k = 0; k < kScan; ++k) {
    const double t = t_end * k / (kScan - 1);
    const double g = cd_margin(protocol.eval(t));
    if (!(g > 0.0)) throw_trap_inversion(t, g);
  }
}

// Integrates `system` through each requested time, calling record(state) there.
template <class State, class System, class Record>
void integrate_through(System system, State y, const FrequencyProtocol& protocol,
                       std::span<const double> times, const IntegratorTolerance& tol,
                       Record record) {
  auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  double t = 0.0;
  const double dt0 = 1e-3 * std::min(1.0, protocol.tau());
  for (double target : times) {
    target = std::min(target, protocol.tau());
    if (target > t) {
      try {
        odeint::integrate_adaptive(stepper, system, y, t, target, std::min(dt0, target - t));
      } catch (const TrapInversionError&) {
        throw;
      } catch (const std::exception& e) {
        throw NumericsError(std::string("ODE integration failed: ") + e.what());
      }
      t = target;
    }
    for (double v : y) {
      if (!std::isfinite(v)) throw NumericsError("ODE integration produced a non-finite state");
    }
    record(y);
  }
}

}  // namespace

GaussianState thermal_state(double beta, double omega) {
  if (!(beta > 0.0) || !(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("thermal_state requires beta > 0 and omega > 0");
  }
  // coth(beta w / 2); the ground state is the beta -> inf limit.
  const double occupation_factor = std::isinf(beta) ? 1.0 : 1.0 / std::tanh(0.5 * beta * omega);
  GaussianState s;
  s.cov = {occupation_factor / (2.0 * omega), 0.0, 0.5 * omega * occupation_factor};
  return s;
}

double mean_energy(const GaussianState& state, double omega) {
  const double w2 = omega * omega;
  return 0.5 * (state.cov.pp + w2 * state.cov.xx) +
         0.5 * (state.mean[1] * state.mean[1] + w2 * state.mean[0] * state.mean[0]);
}

std::vector<GaussianState> propagate_trajectory(const GaussianState& state0,
                                                const FrequencyProtocol& protocol,
                                                std::span<const double> times, Drive drive,
                                                const IntegratorTolerance& tol) {
  require_times(protocol, times);
  if (drive == Drive::CD && !times.empty()) require_cd_valid_until(protocol, times.back());

  std::vector<GaussianState> out;
  out.reserve(times.size());
  const MomentVector y0{state0.mean[0], state0.mean[1], state0.cov.xx, state0.cov.xp,
                        state0.cov.pp};
  integrate_through(MomentSystem{protocol, drive}, y0, protocol, times, tol,
                    [&](const MomentVector& y) {
                      GaussianState s;
                      s.mean = {y[0], y[1]};
                      s.cov = {y[2], y[3], y[4]};
                      out.push_back(s);
                    });
  return out;
}

GaussianState propagate(const GaussianState& state0, const FrequencyProtocol& protocol, double t,
                        Drive drive, const IntegratorTolerance& tol) {
  const double times[] = {t};
  return propagate_trajectory(state0, protocol, times, drive, tol).front();
}

std::vector<double> adiabaticity_Q_curve(const FrequencyProtocol& protocol, double beta,
                                         std::span<const double> times, Drive drive,
                                         const IntegratorTolerance& tol) {
  const double wi = protocol.omega_i();
  const GaussianState s0 = thermal_state(beta, wi);
  const double e0 = mean_energy(s0, wi);
  const auto states = propagate_trajectory(s0, protocol, times, drive, tol);
  std::vector<double> q(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double wt = protocol.eval(times[k]).omega;
    q[k] = mean_energy(states[k], wt) / ((wt / wi) * e0);
  }
  return q;
}

double adiabaticity_Q(const FrequencyProtocol& protocol, double beta, double t, Drive drive,
                      const IntegratorTolerance& tol) {
  const double times[] = {t};
  return adiabaticity_Q_curve(protocol, beta, times, drive, tol).front();
}

std::vector<ClassicalPair> classical_pair_trajectory(const FrequencyProtocol& protocol,
                                                     std::span<const double> times,
                                                     const IntegratorTolerance& tol) {
  require_times(protocol, times);
  std::vector<ClassicalPair> out;
  out.reserve(times.size());
  integrate_through(PairSystem{protocol}, PairVector{0.0, 1.0, 1.0, 0.0}, protocol, times, tol,
                    [&](const PairVector& y) { out.push_back({y[0], y[1], y[2], y[3]}); });
  return out;
}

ClassicalPair classical_pair(const FrequencyProtocol& protocol, double t,
                             const IntegratorTolerance& tol) {
  const double times[] = {t};
  return classical_pair_trajectory(protocol, times, tol).front();
}

double husimi_q(const ClassicalPair& c, double omega_i, double omega_t) {
  const double wt2 = omega_t * omega_t;
  return (omega_i * omega_i * (wt2 * c.X * c.X + c.Xdot * c.Xdot) +
          (wt2 * c.Y * c.Y + c.Ydot * c.Ydot)) /
         (2.0 * omega_i * omega_t);
}

double adiabaticity_Q_husimi(const FrequencyProtocol& protocol, double t,
                             const IntegratorTolerance& tol) {
  return husimi_q(classical_pair(protocol, t, tol), protocol.omega_i(), protocol.eval(t).omega);
}

double q_cd(const FrequencyProtocol& protocol, double t) {
  const double g = cd_margin(protocol.eval(t));
  if (!(g > 0.0)) throw_trap_inversion(t, g);
  return 1.0 / std::sqrt(g);
}

}  // namespace otto
