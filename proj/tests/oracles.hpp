#pragma once

// Test-only reference computations. Nothing here calls into the library, so
// these stay independent of the code paths they check.

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Adaptive Gauss-Kronrod (7/15) quadrature.
inline double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-14, int depth = 0) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wk[7] * fc, g = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * xk[j]), f2 = f(c + h * xk[j]);
    k += wk[j] * (f1 + f2);
    if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
  }
  k *= h;
  g *= h;
  if (std::abs(k - g) <= tol * std::max(1.0, std::abs(k)) || depth > 40) return k;
  return gauss_kronrod(f, a, c, tol, depth + 1) + gauss_kronrod(f, c, b, tol, depth + 1);
}

// Fixed-step classical RK4 for y'' = rhs(t, y).  Returns (y, y') at t_end.
inline std::pair<double, double> rk4_second_order(const std::function<double(double, double)>& rhs,
                                                  double y0, double dy0, double t_end, int steps) {
  const double h = t_end / steps;
  double t = 0, y = y0, v = dy0;
  for (int i = 0; i < steps; ++i) {
    const double k1y = v, k1v = rhs(t, y);
    const double k2y = v + 0.5 * h * k1v, k2v = rhs(t + 0.5 * h, y + 0.5 * h * k1y);
    const double k3y = v + 0.5 * h * k2v, k3v = rhs(t + 0.5 * h, y + 0.5 * h * k2y);
    const double k4y = v + h * k3v, k4v = rhs(t + h, y + h * k3y);
    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    t += h;
  }
  return {y, v};
}

// 4th-order central differences.
template <class F>
auto d1(const F& f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12 * h);
}
template <class F>
auto d2(const F& f, double x, double h) {
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}
template <class F>
auto d3(const F& f, double x, double h) {
  return (-f(x + 3 * h) + 8.0 * f(x + 2 * h) - 13.0 * f(x + h) + 13.0 * f(x - h) -
          8.0 * f(x - 2 * h) + f(x - 3 * h)) /
         (8 * h * h * h);
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// Golden-section maximization on [a, b].
inline double argmax(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
