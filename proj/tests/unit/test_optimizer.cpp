#include <doctest.h>

#include <cmath>

#include "otto/errors.hpp"
#include "otto/numerics.hpp"
#include "otto/optimizer.hpp"
#include "test_support.hpp"

using namespace otto;
using namespace otto::testing;

namespace {

EmpConfig high_t(double ratio) { return {1.0, 1.0, ratio, true, true}; }

}  // namespace

TEST_CASE("golden section search on known maxima") {
  const auto m = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3) + 2.0; },
                                         0.0, 1.0, 1e-12);
  // comparison-based search resolves x only to ~sqrt(2 eps |f| / |f''|) = 2.1e-8 here
  CHECK(std::abs(m.x - 0.3) < 3e-8);
  CHECK(m.value == doctest::Approx(2.0).epsilon(1e-15));
  const auto s = golden_section_maximize([](double x) { return std::sin(x); }, 0.0, 3.0, 1e-12);
  CHECK(std::abs(s.x - M_PI / 2) < 3e-8);
  CHECK_THROWS_AS(golden_section_maximize([](double x) { return x; }, 1.0, 0.0, 1e-9), DomainError);
}

TEST_CASE("Simpson rule is exact for cubics") {
  auto f = [](double x) { return 3 * x * x * x - x * x + 2; };
  CHECK(simpson(f, 0.0, 2.0, 3) == doctest::Approx(12.0 - 8.0 / 3.0 + 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(simpson(f, 0.0, 1.0, 4), DomainError);
}

TEST_CASE("high-temperature optimum at gamma = 0.1") {
  const EmpResult r = maximize_power_numeric(high_t(0.1));
  CHECK(r.engine_regime);
  CHECK(r.gamma == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(std::abs(r.x_opt - optimal_x_analytic(0.1)) < 1e-8);
  CHECK(std::abs(r.x_opt - 0.270972179039) < 1e-8);
  CHECK(std::abs(eta_max_power_analytic(0.1) - 0.636511924728) < 1e-11);
  CHECK(std::abs(curzon_ahlborn(0.1) - 0.683772233983) < 1e-11);
  // the printed eta* is not 1 - x_opt
  CHECK(std::abs((1.0 - r.x_opt) - eta_max_power_analytic(0.1) - 0.092515896) < 1e-6);
}

TEST_CASE("numeric optimum matches the analytic x for random gamma") {
  for (int trial = 0; trial < 50; ++trial) {
    const double g = uniform(0.01, 0.95);
    const EmpResult r = maximize_power_numeric(high_t(g));
    CHECK(std::abs(r.x_opt - optimal_x_analytic(g)) < 1e-8);
    CHECK(r.eta_at_max < curzon_ahlborn(g) + 0.1);
  }
}

TEST_CASE("optimum beats a brute-force grid and has zero slope") {
  for (const EmpConfig cfg : {high_t(0.1), EmpConfig{1.0, 1.0, 0.1, false, false},
                              EmpConfig{0.5, 3.0, 0.4, false, true}}) {
    const EmpResult r = maximize_power_numeric(cfg);
    double best_x = 0.0, best = -INFINITY;
    const int n = 200000;
    for (int i = 1; i < n; ++i) {
      const double x = static_cast<double>(i) / n;
      const double p = constrained_power(cfg, x);
      if (p > best) best = p, best_x = x;
    }
    CHECK(r.P_max >= best - 1e-14);
    CHECK(std::abs(r.x_opt - best_x) <= 1.0 / n);
    const double h = 1e-5;
    const double slope =
        (constrained_power(cfg, r.x_opt + h) - constrained_power(cfg, r.x_opt - h)) / (2 * h);
    CHECK(std::abs(slope) < 1e-6);
  }
}

TEST_CASE("gamma and power definitions") {
  const EmpConfig cfg{1.0, 1.0, 0.1, false, false};
  const double x = 0.4;
  const double hA = 0.5 / std::tanh(0.5);
  const double hC = 0.5 * 2.5 / std::tanh(0.5 * 0.1 * 2.5);
  CHECK(gamma_beta(cfg, x) == doctest::Approx(hA / hC).epsilon(1e-14));
  CHECK(constrained_power(cfg, x) ==
        doctest::Approx((hA * (1 - 1 / x) + hC * (1 - x)) / (1 + x)).epsilon(1e-14));
  CHECK(constrained_power(high_t(0.1), 1.0 - 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("Curzon-Ahlborn bound") {
  CHECK(curzon_ahlborn(1.0) == 0.0);
  CHECK(curzon_ahlborn(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(curzon_ahlborn(0.0), DomainError);
  CHECK_THROWS_AS(curzon_ahlborn(1.5), DomainError);
}

TEST_CASE("invalid EMP configs") {
  CHECK_THROWS_AS(maximize_power_numeric(EmpConfig{1.0, 0.1, 1.0, true, true}), DomainError);
  CHECK_THROWS_AS(maximize_power_numeric(EmpConfig{-1.0, 1.0, 0.1, true, true}), DomainError);
  CHECK_THROWS_AS(optimal_x_analytic(0.0), DomainError);
  CHECK_THROWS_AS(constrained_power(high_t(0.1), 1.5), DomainError);
}
