#pragma once

// Uniform 1-D grids, FFTW-backed spectral differentiation, and high-order
// finite differences for non-periodic windows.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include "solitons/errors.hpp"

namespace solitons {

using cplx = std::complex<double>;

// Samples x_i = x_min + i h, i = 0..n-1, h = (x_max - x_min)/n. For periodic
// use x_max is identified with x_min.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
      throw GridError("grid: require finite x_min < x_max");
    if (n < 16) throw GridError("grid: at least 16 samples required");
  }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double length() const { return x_max_ - x_min_; }
  std::size_t n() const { return n_; }
  double h() const { return length() / double(n_); }
  double x(std::size_t i) const { return x_min_ + double(i) * h(); }
  std::vector<double> points() const {
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = x(i);
    return v;
  }
  bool operator==(const Grid& o) const { return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_; }

  // Checks the stricter requirements of the time integrators.
  void require_simulation_grid() const {
    if (n_ < 64 || (n_ & (n_ - 1)) != 0) {
      std::ostringstream os;
      os << "grid: simulation needs a power-of-two n >= 64, got " << n_;
      throw GridError(os.str());
    }
  }

 private:
  double x_min_, x_max_;
  std::size_t n_;
};

// Builds a Grid from explicit sample positions; rejects non-uniform spacing.
inline Grid grid_from_points(const std::vector<double>& x) {
  if (x.size() < 16) throw GridError("grid: at least 16 samples required");
  const double h = (x.back() - x.front()) / double(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * std::abs(h)) {
      std::ostringstream os;
      os << "grid: non-uniform spacing at index " << i;
      throw GridError(os.str());
    }
  return Grid(x.front(), x.back() + h, x.size());
}

namespace detail {
// FFTW planning is not thread-safe; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Complex-to-complex transforms on a periodic grid. FFTW_ESTIMATE keeps the
// plans, and therefore the floating-point results, deterministic.
class Spectral {
 public:
  explicit Spectral(const Grid& g) : n_(g.n()), k_(g.n()) {
    in_ = fftw_alloc_complex(n_);
    out_ = fftw_alloc_complex(n_);
    {
      std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
      fwd_ = fftw_plan_dft_1d(int(n_), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_1d(int(n_), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    const double dk = 2 * std::numbers::pi / g.length();
    for (std::size_t j = 0; j < n_; ++j) {
      const long s = j <= n_ / 2 ? long(j) : long(j) - long(n_);
      k_[j] = dk * double(s);
    }
    // The Nyquist mode has no well-defined odd derivative.
    nyquist_ = n_ / 2;
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;
  ~Spectral() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }

  std::size_t n() const { return n_; }
  const std::vector<double>& wavenumbers() const { return k_; }
  std::size_t nyquist() const { return nyquist_; }

  void forward(const std::vector<cplx>& x, std::vector<cplx>& X) {
    run(fwd_, x, X, 1.0);
  }
  // Normalized inverse.
  void inverse(const std::vector<cplx>& X, std::vector<cplx>& x) {
    run(bwd_, X, x, 1.0 / double(n_));
  }

  // d^order/dx^order of periodic samples.
  std::vector<cplx> derivative(const std::vector<cplx>& u, int order) {
    std::vector<cplx> U, out;
    forward(u, U);
    const cplx i(0, 1);
    for (std::size_t j = 0; j < n_; ++j) {
      if (order % 2 == 1 && j == nyquist_) {
        U[j] = 0;
        continue;
      }
      U[j] *= std::pow(i * k_[j], order);
    }
    inverse(U, out);
    return out;
  }

 private:
  void run(fftw_plan p, const std::vector<cplx>& src, std::vector<cplx>& dst, double scale) {
    if (src.size() != n_) throw GridError("spectral: sample count does not match the plan");
    std::copy(src.begin(), src.end(), reinterpret_cast<cplx*>(in_));
    fftw_execute(p);
    dst.resize(n_);
    const cplx* o = reinterpret_cast<const cplx*>(out_);
    for (std::size_t j = 0; j < n_; ++j) dst[j] = o[j] * scale;
  }

  std::size_t n_;
  std::vector<double> k_;
  std::size_t nyquist_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan fwd_, bwd_;
};

// Finite-difference weights for the derivative of the given order at x0 from
// samples at `nodes` (Fornberg's recursion).
inline std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(int(i), order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

// Derivative of non-periodic uniform samples, at least 6th order everywhere:
// centred stencils inside, one-sided closures of the same width at the ends.
inline std::vector<cplx> fd_derivative(const std::vector<cplx>& u, double h, int order) {
  const int width = (order + 6) % 2 == 1 ? order + 6 : order + 7;
  const std::size_t n = u.size();
  if (n < std::size_t(width)) throw GridError("finite differences: too few samples for the stencil");
  std::vector<cplx> out(n);
  const int half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const long start = std::clamp<long>(long(i) - half, 0, long(n) - width);
    std::vector<double> nodes(width);
    for (int j = 0; j < width; ++j) nodes[j] = double(start + j - long(i));
    const auto w = fd_weights(0.0, nodes, order);
    cplx acc = 0;
    for (int j = 0; j < width; ++j) acc += w[j] * u[start + j];
    out[i] = acc / std::pow(h, order);
  }
  return out;
}

}  // namespace solitons
