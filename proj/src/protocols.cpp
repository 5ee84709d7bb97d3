#include "otto/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "otto/errors.hpp"

namespace otto {

std::string_view to_string(RampKind kind) {
  switch (kind) {
    case RampKind::Poly5: return "poly5";
    case RampKind::Poly3: return "poly3";
    case RampKind::Cosine: return "cosine";
    case RampKind::Linear: return "linear";
    case RampKind::Constant: return "constant";
  }
  return "unknown";
}

RampKind ramp_kind_from_string(std::string_view name) {
  for (RampKind k : {RampKind::Poly5, RampKind::Poly3, RampKind::Cosine, RampKind::Linear,
                     RampKind::Constant}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown ramp kind '" + std::string(name) + "'");
}

FrequencyProtocol::FrequencyProtocol(RampKind kind, double omega_i, double omega_f, double tau)
    : kind_(kind), omega_i_(omega_i), omega_f_(omega_f), tau_(tau) {
  if (!(omega_i > 0.0) || !(omega_f > 0.0) || !(tau > 0.0) || !std::isfinite(omega_i) ||
      !std::isfinite(omega_f) || !std::isfinite(tau)) {
    std::ostringstream msg;
    msg << "protocol requires omega_i, omega_f, tau > 0 (got " << omega_i << ", " << omega_f
        << ", " << tau << ")";
    throw DomainError(msg.str());
  }
}

RampSample FrequencyProtocol::eval(double t) const {
  // Integrators land on tau up to rounding; accept a few ulps past the ends.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * tau_;
  if (!(t >= -slack && t <= tau_ + slack)) {
    std::ostringstream msg;
    msg << "time " << t << " outside ramp [0, " << tau_ << "]";
    throw DomainError(msg.str());
  }
  const double s = std::clamp(t / tau_, 0.0, 1.0);
  const double delta = omega_f_ - omega_i_;
  const double inv_tau = 1.0 / tau_;

  switch (kind_) {
    case RampKind::Poly5: {
      const double s2 = s * s;
      const double s3 = s2 * s;
      return {omega_i_ + delta * s3 * (10.0 - 15.0 * s + 6.0 * s2),
              delta * 30.0 * s2 * (1.0 - s) * (1.0 - s) * inv_tau,
              delta * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) * inv_tau * inv_tau};
    }
    case RampKind::Poly3:
      return {omega_i_ + delta * s * s * (3.0 - 2.0 * s),
              delta * 6.0 * s * (1.0 - s) * inv_tau,
              delta * 6.0 * (1.0 - 2.0 * s) * inv_tau * inv_tau};
    case RampKind::Cosine: {
      // w^2 = w_i^2 [(a^2 + 1) - (a^2 - 1) cos(pi s)] / 2
      const double a2 = (omega_f_ / omega_i_) * (omega_f_ / omega_i_);
      const double wi2 = omega_i_ * omega_i_;
      const double k = std::numbers::pi * inv_tau;
      const double c = std::cos(std::numbers::pi * s);
      const double sn = std::sin(std::numbers::pi * s);
      const double w2 = 0.5 * wi2 * ((a2 + 1.0) - (a2 - 1.0) * c);
      const double w = std::sqrt(w2);
      const double dw2 = 0.5 * wi2 * (a2 - 1.0) * k * sn;
      const double ddw2 = 0.5 * wi2 * (a2 - 1.0) * k * k * c;
      const double wdot = dw2 / (2.0 * w);
      return {w, wdot, ddw2 / (2.0 * w) - dw2 * dw2 / (4.0 * w * w2)};
    }
    case RampKind::Linear:
      return {omega_i_ + delta * s, delta * inv_tau, 0.0};
    case RampKind::Constant:
      return {omega_i_, 0.0, 0.0};
  }
  throw DomainError("unhandled ramp kind");
}

BoundaryReport check_sta_boundary(const FrequencyProtocol& protocol, double tol) {
  const RampSample start = protocol.eval(0.0);
  const RampSample end = protocol.eval(protocol.tau());
  BoundaryReport r;
  r.omega_start = std::abs(start.omega - protocol.omega_i()) <= tol;
  r.omega_end = std::abs(end.omega - protocol.omega_f()) <= tol;
  r.rate_start = std::abs(start.omega_dot) <= tol;
  r.rate_end = std::abs(end.omega_dot) <= tol;
  r.accel_start = std::abs(start.omega_ddot) <= tol;
  r.accel_end = std::abs(end.omega_ddot) <= tol;
  return r;
}

double cd_margin(const RampSample& sample) {
  const double w2 = sample.omega * sample.omega;
  return 1.0 - sample.omega_dot * sample.omega_dot / (4.0 * w2 * w2);
}

CdValidity check_cd_validity(const FrequencyProtocol& protocol, int n_samples) {
  if (n_samples < 2) throw DomainError("check_cd_validity needs at least 2 samples");
  CdValidity out{true, std::numeric_limits<double>::infinity(), 0.0};
  const double h = protocol.tau() / (n_samples - 1);
  for (int k = 0; k < n_samples; ++k) {
    const double t = (k == n_samples - 1) ? protocol.tau() : k * h;
    const double g = cd_margin(protocol.eval(t));
    if (g < out.min_margin) {
      out.min_margin = g;
      out.argmin_time = t;
    }
  }
  out.valid = out.min_margin > 0.0;
  return out;
}

}  // namespace otto
