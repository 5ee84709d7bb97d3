#pragma once

// Exact dynamics of the parametric oscillator for Gaussian states.
//
// Quadratic Hamiltonians H = p^2/2 + w^2 x^2/2 + g (xp + px)/2 generate the
// linear flow  d(x,p)/dt = A (x,p),  A = Omega G,  G = [[w^2, g], [g, 1]],
// so the covariance obeys dSigma/dt = A Sigma + Sigma A^T. The bare drive has
// g = 0; the counterdiabatic drive has g = -wdot / (2 w).

#include <array>
#include <span>
#include <vector>

#include "otto/protocols.hpp"

namespace otto {

enum class Drive { Bare, CD };

struct IntegratorTolerance {
  double rel = 1e-10;
  double abs = 1e-12;
};

struct Covariance {
  double xx;
  double xp;  // symmetrised <(xp + px)/2> - <x><p>
  double pp;

  double det() const { return xx * pp - xp * xp; }
};

struct GaussianState {
  std::array<double, 2> mean{0.0, 0.0};
  Covariance cov{0.5, 0.0, 0.5};
};

/// Thermal state of H0(omega); beta = +inf gives the ground state.
GaussianState thermal_state(double beta, double omega);

/// <H0(omega)> including the coherent part.
double mean_energy(const GaussianState& state, double omega);

/// Propagates state0 from t = 0 to t under the chosen drive.
/// CD drive throws TrapInversionError as soon as the integrator samples a
/// time where the CD trap is not confining.
GaussianState propagate(const GaussianState& state0, const FrequencyProtocol& protocol, double t,
                        Drive drive, const IntegratorTolerance& tol = {});

/// States at each of the (non-decreasing) times, one integration pass.
std::vector<GaussianState> propagate_trajectory(const GaussianState& state0,
                                                const FrequencyProtocol& protocol,
                                                std::span<const double> times, Drive drive,
                                                const IntegratorTolerance& tol = {});

/// Q*(t) = <H0(w_t)>_evolved / [(w_t / w_i) <H0(w_i)>_initial] for a thermal
/// initial state at (beta, w_i).
double adiabaticity_Q(const FrequencyProtocol& protocol, double beta, double t, Drive drive,
                      const IntegratorTolerance& tol = {});

std::vector<double> adiabaticity_Q_curve(const FrequencyProtocol& protocol, double beta,
                                         std::span<const double> times, Drive drive,
                                         const IntegratorTolerance& tol = {});

/// Classical solutions of  X'' + w_t^2 X = 0  with X(0) = 0, X'(0) = 1 and
/// Y(0) = 1, Y'(0) = 0.
struct ClassicalPair {
  double X;
  double Xdot;
  double Y;
  double Ydot;

  /// X Ydot - Y Xdot; equals -1 for the initial conditions above.
  double wronskian() const { return X * Ydot - Y * Xdot; }
};

ClassicalPair classical_pair(const FrequencyProtocol& protocol, double t,
                             const IntegratorTolerance& tol = {});

std::vector<ClassicalPair> classical_pair_trajectory(const FrequencyProtocol& protocol,
                                                     std::span<const double> times,
                                                     const IntegratorTolerance& tol = {});

/// Husimi form of the bare-drive adiabaticity parameter (temperature independent):
/// Q* = [w_i^2 (w_t^2 X^2 + Xdot^2) + (w_t^2 Y^2 + Ydot^2)] / (2 w_i w_t).
double husimi_q(const ClassicalPair& pair, double omega_i, double omega_t);

double adiabaticity_Q_husimi(const FrequencyProtocol& protocol, double t,
                             const IntegratorTolerance& tol = {});

/// Q*_CD = 1 / sqrt(1 - wdot^2 / (4 w^4)); throws TrapInversionError when the
/// radicand is not positive.
double q_cd(const FrequencyProtocol& protocol, double t);

}  // namespace otto
