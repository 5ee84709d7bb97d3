#include <doctest.h>

#include <cmath>

#include "otto/errors.hpp"
#include "otto/fock.hpp"
#include "otto/sta_cost.hpp"
#include "test_support.hpp"

using namespace otto;
using namespace otto::testing;

namespace {

const FrequencyProtocol kRef(RampKind::Poly5, 0.35, 1.0, 3.0);

double trapezoid(auto f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

}  // namespace

TEST_CASE("stroke context thermal data") {
  const StrokeContext ctx(kRef, 2.0);
  CHECK(ctx.n_bar() == doctest::Approx(0.986433864).epsilon(1e-9));
  CHECK(ctx.number_variance() == doctest::Approx(1.959485631).epsilon(1e-9));
  CHECK(ctx.h0_mean() == doctest::Approx(0.520251852).epsilon(1e-9));
  const StrokeContext cold(kRef, INFINITY);
  CHECK(cold.n_bar() == 0.0);
  CHECK(cold.h0_mean() == doctest::Approx(0.175).epsilon(1e-15));
  CHECK_THROWS_AS(StrokeContext(kRef, -1.0), DomainError);
}

TEST_CASE("midpoint cost values") {
  const StrokeContext ctx(kRef, 2.0);
  // arbitrary-precision evaluation of the closed-form chain
  CHECK(mean_sta_term(ctx, 1.5) == doctest::Approx(0.1175547).epsilon(1e-6));
  CHECK(work_variance_excess(ctx, 1.5) == doctest::Approx(0.1129834).epsilon(1e-6));
  CHECK(std::sqrt(work_variance_excess(ctx, 1.5)) == doctest::Approx(0.3361300).epsilon(1e-6));
}

TEST_CASE("STA terms vanish at the ends of an STA ramp and not for a linear one") {
  for (RampKind k : kStaKinds) {
    const StrokeContext ctx(FrequencyProtocol(k, 0.35, 1.0, 3.0), 2.0);
    CHECK(std::abs(mean_sta_term(ctx, 0.0)) < 1e-15);
    CHECK(std::abs(mean_sta_term(ctx, 3.0)) < 1e-15);
    CHECK(std::abs(work_variance_excess(ctx, 3.0)) < 1e-14);
  }
  const StrokeContext lin(FrequencyProtocol(RampKind::Linear, 0.35, 1.0, 3.0), 2.0);
  CHECK(mean_sta_term(lin, 3.0) > 1e-3);
  CHECK(work_variance_excess(lin, 3.0) > 1e-3);
}

TEST_CASE("ground state has no variance cost") {
  const StrokeContext ctx(kRef, INFINITY);
  for (double t : {0.3, 1.5, 2.7}) CHECK(work_variance_excess(ctx, t) == 0.0);
  CHECK(avg_variance_cost(ctx) == 0.0);
  CHECK(avg_work_cost(ctx) > 0.0);
}

TEST_CASE("mean STA term and variance excess agree with Fock two-point statistics") {
  for (double beta : {0.5, 2.0, 5.0}) {
    const StrokeContext ctx(kRef, beta);
    const int dim = fock::default_cutoff(beta, 0.35);
    for (double t : {0.6, 1.5, 2.4}) {
      const auto tp = fock::two_point_work_cd(kRef, beta, t, dim);
      INFO("beta=" << beta << " t=" << t);
      CHECK(rel_diff(tp.variance_excess(), work_variance_excess(ctx, t)) < 1e-5);
      CHECK(rel_diff(tp.mean_cd - tp.mean_ad, mean_sta_term(ctx, t)) < 1e-6);
    }
  }
}

TEST_CASE("time averages converge and match a fine trapezoid oracle") {
  for (RampKind k : kStaKinds) {
    const StrokeContext ctx(FrequencyProtocol(k, 0.35, 1.0, 4.0), 2.0);
    const double w = avg_work_cost(ctx);
    const double v = avg_variance_cost(ctx);
    const double w_ref =
        trapezoid([&](double t) { return mean_sta_term(ctx, t); }, 0.0, 4.0, 200000) / 4.0;
    const double v_ref = trapezoid([&](double t) { return std::sqrt(work_variance_excess(ctx, t)); },
                                   0.0, 4.0, 200000) / 4.0;
    CHECK(rel_diff(w, w_ref) < 1e-8);
    CHECK(rel_diff(v, v_ref) < 1e-7);
    CHECK(rel_diff(avg_work_cost(ctx, 2001), w) < 1e-10);
  }
}

TEST_CASE("costs are positive and decrease with tau") {
  for (RampKind k : kStaKinds) {
    double prev_w = INFINITY, prev_v = INFINITY, prev_f = INFINITY;
    for (double tau : {2.5, 3.0, 6.0, 12.0}) {
      const StrokeContext ctx(FrequencyProtocol(k, 0.35, 1.0, tau), 2.0);
      const double w = avg_work_cost(ctx), v = avg_variance_cost(ctx), f = friction(ctx, tau);
      INFO(to_string(k) << " tau=" << tau);
      CHECK(w > 0.0);
      CHECK(v > 0.0);
      CHECK(f > 0.0);
      CHECK(w < prev_w);
      CHECK(v < prev_v);
      CHECK(f < prev_f);
      prev_w = w, prev_v = v, prev_f = f;
    }
  }
}

TEST_CASE("cost of an invalid CD ramp raises trap inversion") {
  const StrokeContext ctx(kRef.with_tau(1.5), 2.0);
  CHECK_THROWS_AS(avg_work_cost(ctx), TrapInversionError);
  CHECK_THROWS_AS(mean_sta_term(ctx, 0.4), TrapInversionError);
}

TEST_CASE("friction is the bare excess energy") {
  for (int trial = 0; trial < 30; ++trial) {
    const double tau = uniform(0.2, 10.0);
    const FrequencyProtocol p(random_kind(), uniform(0.2, 0.8), uniform(0.9, 2.0), tau);
    const StrokeContext ctx(p, uniform(0.2, 5.0));
    const double t = uniform(0.0, tau);
    const double wt = p.eval(t).omega;
    const double expected =
        (adiabaticity_Q(p, ctx.beta(), t, Drive::Bare) - 1.0) * wt / p.omega_i() * ctx.h0_mean();
    CHECK(std::abs(friction(ctx, t) - expected) < 1e-9 * ctx.h0_mean() * wt / p.omega_i());
    CHECK(friction(ctx, t) >= -1e-9);
  }
}

TEST_CASE("adiabatic work of the reference compression") {
  const StrokeContext ctx(kRef, 2.0);
  CHECK(adiabatic_work(ctx) == doctest::Approx(0.966182011).epsilon(1e-9));
}
