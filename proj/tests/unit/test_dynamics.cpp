#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "otto/dynamics.hpp"
#include "otto/errors.hpp"
#include "test_support.hpp"

using namespace otto;
using namespace otto::testing;

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Mat2 transpose(const Mat2& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }

Mat2 axpy(const Mat2& a, double s, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + s * b[i][j];
  return c;
}

// Fixed-step RK4 on dSigma/dt = A Sigma + Sigma A^T, written from the
// Heisenberg equations of H = p^2/2 + w^2 x^2/2 - k(xp + px): dx/dt = p - 2k x,
// dp/dt = -w^2 x + 2k p.
Mat2 rk4_covariance(const FrequencyProtocol& p, Drive drive, Mat2 sigma, double t_end, int steps) {
  auto rhs = [&](double t, const Mat2& s) {
    const RampSample r = p.eval(std::min(t, p.tau()));
    const double k = drive == Drive::CD ? r.omega_dot / (4.0 * r.omega) : 0.0;
    const Mat2 a{{{-2.0 * k, 1.0}, {-r.omega * r.omega, 2.0 * k}}};
    const Mat2 as = mul(a, s);
    return axpy(as, 1.0, transpose(as));
  };
  const double h = t_end / steps;
  double t = 0.0;
  for (int n = 0; n < steps; ++n) {
    const Mat2 k1 = rhs(t, sigma);
    const Mat2 k2 = rhs(t + h / 2, axpy(sigma, h / 2, k1));
    const Mat2 k3 = rhs(t + h / 2, axpy(sigma, h / 2, k2));
    const Mat2 k4 = rhs(t + h, axpy(sigma, h, k3));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        sigma[i][j] += h / 6.0 * (k1[i][j] + 2 * k2[i][j] + 2 * k3[i][j] + k4[i][j]);
    t += h;
  }
  return sigma;
}

}  // namespace

TEST_CASE("thermal state moments") {
  const GaussianState s = thermal_state(2.0, 0.35);
  const double c = 1.0 / std::tanh(0.35);
  CHECK(s.cov.xx == doctest::Approx(c / 0.7).epsilon(1e-14));
  CHECK(s.cov.pp == doctest::Approx(0.35 * c / 2.0).epsilon(1e-14));
  CHECK(s.cov.xp == 0.0);
  CHECK(mean_energy(s, 0.35) == doctest::Approx(0.520251852).epsilon(1e-9));
  const GaussianState g = thermal_state(INFINITY, 0.5);
  CHECK(g.cov.det() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mean_energy(g, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("covariance propagation matches an independent RK4 oracle") {
  for (int trial = 0; trial < 12; ++trial) {
    const RampKind k = kStaKinds[trial % 3];
    const Drive d = trial % 2 ? Drive::Bare : Drive::CD;
    const double tau = uniform(3.0, 6.0);
    const FrequencyProtocol p(k, uniform(0.4, 0.6), uniform(0.9, 1.2), tau);
    const double beta = uniform(0.3, 3.0);
    const GaussianState s0 = thermal_state(beta, p.omega_i());
    const GaussianState s = propagate(s0, p, tau, d);
    const Mat2 ref = rk4_covariance(p, d, {{{s0.cov.xx, 0.0}, {0.0, s0.cov.pp}}}, tau, 20000);
    INFO("trial " << trial);
    CHECK(rel_diff(s.cov.xx, ref[0][0]) < 1e-8);
    CHECK(rel_diff(s.cov.pp, ref[1][1]) < 1e-8);
    CHECK(std::abs(s.cov.xp - ref[0][1]) < 1e-8 * (std::abs(ref[0][0]) + std::abs(ref[1][1])));
  }
}

TEST_CASE("det Sigma and the Wronskian are conserved") {
  for (int trial = 0; trial < 40; ++trial) {
    const RampKind k = random_kind();
    const double tau = uniform(0.2, 10.0);
    const FrequencyProtocol p(k, uniform(0.2, 1.0), uniform(0.5, 2.0), tau);
    const GaussianState s0 = thermal_state(uniform(0.2, 5.0), p.omega_i());
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(tau * i / 10.0);
    const auto traj = propagate_trajectory(s0, p, times, Drive::Bare);
    for (const auto& s : traj) CHECK(std::abs(s.cov.det() / s0.cov.det() - 1.0) < 1e-8);
    for (const auto& c : classical_pair_trajectory(p, times))
      CHECK(std::abs(c.wronskian() + 1.0) < 1e-8);
  }
}

TEST_CASE("Husimi form reproduces the Gaussian adiabaticity parameter") {
  for (int trial = 0; trial < 30; ++trial) {
    const RampKind k = random_kind();
    const double tau = uniform(0.1, 8.0);
    const FrequencyProtocol p(k, uniform(0.2, 1.0), uniform(0.5, 2.0), tau);
    const double t = uniform(0.0, tau);
    const double beta = uniform(0.1, 10.0);
    CHECK(rel_diff(adiabaticity_Q(p, beta, t, Drive::Bare), adiabaticity_Q_husimi(p, t)) < 1e-8);
  }
}

TEST_CASE("bare Q* is at least one and tends to one for slow ramps") {
  for (int trial = 0; trial < 50; ++trial) {
    const double tau = uniform(0.05, 20.0);
    const FrequencyProtocol p(random_kind(), uniform(0.2, 1.0), uniform(0.5, 2.0), tau);
    const double q = adiabaticity_Q_husimi(p, uniform(0.0, tau));
    INFO("Q - 1 = " << q - 1.0);
    CHECK(q >= 1.0 - 1e-8);  // integrator tolerance
  }
  const FrequencyProtocol slow(RampKind::Poly5, 0.35, 1.0, 50.0);
  CHECK(adiabaticity_Q_husimi(slow, 50.0) - 1.0 < 1e-3);
}

TEST_CASE("sudden quench limit") {
  const double expected = (0.35 * 0.35 + 1.0) / 0.7;
  CHECK(expected == doctest::Approx(1.603571429).epsilon(1e-9));
  for (RampKind k : {RampKind::Poly5, RampKind::Linear}) {
    const FrequencyProtocol p(k, 0.35, 1.0, 1e-4);
    CHECK(std::abs(adiabaticity_Q(p, 2.0, 1e-4, Drive::Bare) - expected) < 1e-3);
    CHECK(std::abs(adiabaticity_Q_husimi(p, 1e-4) - expected) < 1e-3);
  }
}

TEST_CASE("CD drive keeps the instantaneous thermal state") {
  for (RampKind k : kStaKinds) {
    const FrequencyProtocol p(k, 0.35, 1.0, 3.0);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(0.15 * i);
    const auto q = adiabaticity_Q_curve(p, 2.0, times, Drive::CD);
    for (double v : q) CHECK(std::abs(v - 1.0) < 1e-8);
  }
}

TEST_CASE("q_cd closed form") {
  const FrequencyProtocol p(RampKind::Poly5, 0.35, 1.0, 3.0);
  // oracle value (arbitrary precision evaluation of 1/sqrt(1 - wdot^2/(4 w^4)))
  CHECK(q_cd(p, 1.5) == doctest::Approx(1.1171630).epsilon(1e-7));
  CHECK(q_cd(p, 0.0) == 1.0);
  CHECK(q_cd(p, 3.0) == 1.0);
  for (int i = 0; i < 50; ++i) {
    const double t = uniform(0.0, 3.0);
    CHECK(q_cd(p, t) == doctest::Approx(1.0 / std::sqrt(cd_margin(p.eval(t)))).epsilon(1e-14));
    CHECK(q_cd(p, t) >= 1.0);
  }
  CHECK_THROWS_AS(q_cd(p.with_tau(1.5), 0.4), TrapInversionError);
}

TEST_CASE("CD propagation refuses an inverted trap") {
  const FrequencyProtocol p(RampKind::Poly5, 0.35, 1.0, 1.5);
  CHECK_THROWS_AS(propagate(thermal_state(2.0, 0.35), p, 1.5, Drive::CD), TrapInversionError);
  // bare drive is fine at the same tau
  CHECK_NOTHROW(propagate(thermal_state(2.0, 0.35), p, 1.5, Drive::Bare));
}

TEST_CASE("trajectory time validation") {
  const FrequencyProtocol p(RampKind::Poly5, 0.35, 1.0, 3.0);
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(propagate_trajectory(thermal_state(2.0, 0.35), p, bad, Drive::Bare), DomainError);
  const std::vector<double> outside{4.0};
  CHECK_THROWS_AS(propagate_trajectory(thermal_state(2.0, 0.35), p, outside, Drive::Bare),
                  DomainError);
}

TEST_CASE("coherent displacement follows the classical trajectory") {
  const FrequencyProtocol p(RampKind::Linear, 0.5, 1.5, 2.0);
  GaussianState s0 = thermal_state(1.0, 0.5);
  s0.mean = {0.3, -0.2};
  const GaussianState s = propagate(s0, p, 2.0, Drive::Bare);
  const ClassicalPair c = classical_pair(p, 2.0);
  // x(t) = x0 Y + p0 X
  CHECK(s.mean[0] == doctest::Approx(0.3 * c.Y - 0.2 * c.X).epsilon(1e-8));
  CHECK(s.mean[1] == doctest::Approx(0.3 * c.Ydot - 0.2 * c.Xdot).epsilon(1e-8));
}
