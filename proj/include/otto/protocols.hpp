#pragma once

// Frequency ramps w(t) for the compression and expansion strokes.
// Units: hbar = m = 1, frequencies in units of the reference frequency.

#include <string>
#include <string_view>

namespace otto {

enum class RampKind { Poly5, Poly3, Cosine, Linear, Constant };

std::string_view to_string(RampKind kind);
/// Accepts the lowercase config names ("poly5", "cosine", ...).
RampKind ramp_kind_from_string(std::string_view name);

/// True for the ramps built to satisfy w'(0) = w'(tau) = 0.
constexpr bool is_sta_kind(RampKind kind) {
  return kind == RampKind::Poly5 || kind == RampKind::Poly3 || kind == RampKind::Cosine;
}

struct RampSample {
  double omega;
  double omega_dot;
  double omega_ddot;
};

class FrequencyProtocol {
 public:
  FrequencyProtocol(RampKind kind, double omega_i, double omega_f, double tau);

  RampKind kind() const noexcept { return kind_; }
  double omega_i() const noexcept { return omega_i_; }
  double omega_f() const noexcept { return omega_f_; }
  double tau() const noexcept { return tau_; }

  /// w(t) and its first two time derivatives from the closed forms.
  /// Throws DomainError for t outside [0, tau].
  RampSample eval(double t) const;

  /// Same ramp shape run from omega_f back to omega_i.
  FrequencyProtocol reversed() const { return {kind_, omega_f_, omega_i_, tau_}; }

  /// Same endpoints, different duration.
  FrequencyProtocol with_tau(double tau) const { return {kind_, omega_i_, omega_f_, tau}; }

 private:
  RampKind kind_;
  double omega_i_;
  double omega_f_;
  double tau_;
};

/// Per-condition boundary flags; Poly3 and Cosine only satisfy the first-order set.
struct BoundaryReport {
  bool omega_start = false;
  bool omega_end = false;
  bool rate_start = false;
  bool rate_end = false;
  bool accel_start = false;
  bool accel_end = false;

  bool first_order() const { return omega_start && omega_end && rate_start && rate_end; }
  bool all() const { return first_order() && accel_start && accel_end; }
};

BoundaryReport check_sta_boundary(const FrequencyProtocol& protocol, double tol);

/// g = 1 - wdot^2 / (4 w^4); the counterdiabatic trap is confining iff g > 0.
double cd_margin(const RampSample& sample);

struct CdValidity {
  bool valid;
  double min_margin;
  double argmin_time;
};

inline constexpr int kDefaultValiditySamples = 1001;

/// Samples g(t) on a uniform grid over [0, tau].
CdValidity check_cd_validity(const FrequencyProtocol& protocol,
                             int n_samples = kDefaultValiditySamples);

}  // namespace otto
