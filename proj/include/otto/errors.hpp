#pragma once

#include <stdexcept>
#include <string>

namespace otto {

/// Argument outside the mathematical domain of an operation (non-positive
/// frequency, time outside the ramp, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The counterdiabatic Hamiltonian stops being a confining oscillator:
/// 1 - wdot^2 / (4 w^4) <= 0 somewhere on the requested interval.
class TrapInversionError : public std::runtime_error {
 public:
  TrapInversionError(const std::string& what, double time, double margin)
      : std::runtime_error(what), time_(time), margin_(margin) {}
  double time() const noexcept { return time_; }
  double margin() const noexcept { return margin_; }

 private:
  double time_;
  double margin_;
};

/// Integrator or quadrature failure.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Population leaked to the top of a truncated Fock basis.
class CutoffError : public NumericsError {
 public:
  CutoffError(const std::string& what, double leakage)
      : NumericsError(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

/// A thermodynamic invariant (second law, ...) is violated beyond tolerance.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace otto
