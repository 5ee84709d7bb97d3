#pragma once

#include <cmath>
#include <span>

#include "otto/errors.hpp"

namespace otto {

inline constexpr int kDefaultQuadratureNodes = 1001;

/// Composite Simpson rule on equally spaced samples; needs an odd count >= 3.
inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) throw DomainError("Simpson quadrature needs an odd node count >= 3");
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) (k % 2 ? odd : even) += f[k];
  return h / 3.0 * (f.front() + 4.0 * odd + 2.0 * even + f.back());
}

/// Simpson rule for f on [a, b] with `nodes` equally spaced nodes.
template <class F>
double simpson(F&& f, double a, double b, int nodes = kDefaultQuadratureNodes) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw DomainError("Simpson quadrature needs an odd node count >= 3");
  }
  const double h = (b - a) / (nodes - 1);
  double odd = 0.0;
  double even = 0.0;
  for (int k = 1; k < nodes - 1; ++k) (k % 2 ? odd : even) += f(a + k * h);
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

struct ScalarMaximum {
  double x;
  double value;
  int iterations;
};

/// Golden-section search for the maximum of a unimodal f on [a, b], stopping
/// once the bracket is narrower than x_tol.
template <class F>
ScalarMaximum golden_section_maximize(F&& f, double a, double b, double x_tol,
                                      int max_iterations = 500) {
  if (!(b > a)) throw DomainError("golden-section search needs a < b");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; b - a > x_tol && it < max_iterations; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (b - a > x_tol) throw NumericsError("golden-section search did not converge");
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace otto
