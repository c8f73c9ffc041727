#pragma once

#include <cmath>

#include "cclab/types.hpp"

namespace cclab::fd {

// Finite-difference kernels. Every callable is evaluated in long double:
// the acceptance floors (flat-case cross-curvature at 1e-7, h-values at
// 1e-8) sit below the double-precision round-off of fourth- and
// second-order stencils at the pinned step sizes.

struct Estimate {
  double value = 0.0;
  double residual = 0.0;  // |coarse - fine| / 3, the Richardson defect
};

// d/ds at 0, fourth-order five-point stencil.
template <class F>
double deriv1(F&& f, double h) {
  const long double hl = h;
  long double v = (8.0L * (f(hl) - f(-hl)) - (f(2.0L * hl) - f(-2.0L * hl))) / (12.0L * hl);
  return static_cast<double>(v);
}

// d²/ds² at 0, three-point stencils at steps {h, 2h}, one Richardson level.
template <class F>
Estimate deriv2(F&& f, double h) {
  const long double hl = h;
  const long double f0 = f(0.0L);
  long double fine = (f(hl) - 2.0L * f0 + f(-hl)) / (hl * hl);
  long double coarse = (f(2.0L * hl) - 2.0L * f0 + f(-2.0L * hl)) / (4.0L * hl * hl);
  Estimate e;
  e.value = static_cast<double>((4.0L * fine - coarse) / 3.0L);
  e.residual = static_cast<double>(std::abs(fine - coarse) / 3.0L);
  return e;
}

// ∂²/∂s∂t at (0,0), four-corner stencils at steps {h, 2h}, one Richardson level.
template <class F>
Estimate mixed2(F&& f, double h) {
  auto corner = [&](long double s) {
    return (f(s, s) + f(-s, -s) - f(s, -s) - f(-s, s)) / (4.0L * s * s);
  };
  const long double hl = h;
  long double fine = corner(hl);
  long double coarse = corner(2.0L * hl);
  Estimate e;
  e.value = static_cast<double>((4.0L * fine - coarse) / 3.0L);
  e.residual = static_cast<double>(std::abs(fine - coarse) / 3.0L);
  return e;
}

// ∂⁴/∂s²∂t² at (0,0) on the 5x5 tensor grid {0,±h,±2h}²: the tensor product
// of three-point second differences at steps h and 2h, one Richardson level.
// Smaller steps are round-off dominated (ε/h⁴ amplified by the weights), so
// h is the finest step used.
template <class F>
Estimate mixed4(F&& f, double h) {
  const long double hl = h;
  long double g[5][5];
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) g[i + 2][j + 2] = f(i * hl, j * hl);

  auto tensor = [&](int step) {
    const long double w[3] = {1.0L, -2.0L, 1.0L};
    long double sum = 0.0L;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) sum += w[a] * w[b] * g[2 + (a - 1) * step][2 + (b - 1) * step];
    const long double hh = hl * step;
    return sum / (hh * hh * hh * hh);
  };

  long double fine = tensor(1);
  long double coarse = tensor(2);
  Estimate e;
  e.value = static_cast<double>((4.0L * fine - coarse) / 3.0L);
  e.residual = static_cast<double>(std::abs(fine - coarse) / 3.0L);
  return e;
}

}  // namespace cclab::fd
