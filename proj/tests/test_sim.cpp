#include <gtest/gtest.h>

#include <cmath>
#include <future>
#include <numbers>

#include "oracles.hpp"
#include "solitons/sim.hpp"

using namespace solitons;

namespace {

Field kdv_field(const Grid& g, double c, double x0 = 0) {
  const KdVSolitonParams p(c);
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = kdv_soliton(p, g.x(i) - x0);
  return f;
}

double sech_exact_error(const Trajectory& tr, double c, double t) {
  const KdVSolitonParams p(c);
  const auto& u = tr.frames.back().u;
  const Grid& g = tr.grid();
  double e = 0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    double d = g.x(i) - c * t;
    d -= g.length() * std::round(d / g.length());
    e = std::max(e, std::abs(u[i].real() - kdv_soliton(p, d)));
  }
  return e;
}

}  // namespace

TEST(Sim, KdvSolitonPropagates) {
  const Grid g(-20, 20, 512);
  const SimConfig cfg{pde::KdV{}, g, 1e-4, 5.0, Scheme::SpectralRK4, 0.5};
  const auto tr = integrate(cfg, kdv_field(g, 1.0));
  ASSERT_EQ(tr.frames.size(), 11u);
  EXPECT_NEAR(measure_speed(tr), 1.0, 0.01);
  const auto peaks = track_peak(tr);
  EXPECT_NEAR(peaks.back().x - peaks.front().x, 5.0, 0.05);
  const KdVSolitonParams p(1.0);
  const double shape = shape_error(g, tr.frames.back().u, [&](double x) { return kdv_soliton(p, x); }, peaks.back().x);
  EXPECT_LE(shape, 1e-3);
  const auto& q0 = tr.frames.front().conserved;
  const auto& q1 = tr.frames.back().conserved;
  EXPECT_LE(relative_drift(q1.mass, q0.mass), 1e-6);
  EXPECT_LE(relative_drift(q1.momentum, q0.momentum), 1e-6);
  EXPECT_LE(relative_drift(q1.energy, q0.energy), 1e-5);
}

TEST(Sim, KdvSlowSoliton) {
  const Grid g(-40, 40, 512);
  const SimConfig cfg{pde::KdV{}, g, 1e-2, 20.0, Scheme::SpectralRK4, 1.0};
  const auto tr = integrate(cfg, kdv_field(g, 0.2, -10));
  EXPECT_NEAR(measure_speed(tr), 0.2, 0.01);
}

TEST(Sim, KdvTimeRefinementIsFourthOrder) {
  const Grid g(-20, 20, 256);
  auto run = [&](double dt) {
    const SimConfig cfg{pde::KdV{}, g, dt, 2.0, Scheme::SpectralRK4, 2.0};
    return sech_exact_error(integrate(cfg, kdv_field(g, 1.0)), 1.0, 2.0);
  };
  const double e1 = run(0.04), e2 = run(0.02);
  EXPECT_GE(e1 / e2, 8.0) << e1 << " " << e2;
}

TEST(Sim, MkdvWaveKeepsInvariants) {
  const Grid g(-20, 20, 512);
  const MKdVWaveParams p(1.0);
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = mkdv_wave(p, g.x(i));
  const SimConfig cfg{pde::MKdV{}, g, 1e-4, 5.0, Scheme::SpectralRK4, 1.0};
  const auto tr = integrate(cfg, f);
  const auto& q0 = tr.frames.front().conserved;
  const auto& q1 = tr.frames.back().conserved;
  EXPECT_LE(relative_drift(q1.mass, q0.mass), 1e-6);
  EXPECT_LE(relative_drift(q1.momentum, q0.momentum), 1e-6);
  EXPECT_LE(relative_drift(q1.energy, q0.energy), 1e-5);
  EXPECT_NEAR(measure_speed(tr), 1.0, 0.01);
}

TEST(Sim, MovingFrameReportsLabSpeed) {
  const Grid g(-20, 20, 256);
  const SimConfig cfg{pde::KdV{}, g, 1e-3, 4.0, Scheme::SpectralRK4, 0.5, 1.0};
  const auto tr = integrate(cfg, kdv_field(g, 1.0));
  EXPECT_NEAR(measure_speed(tr), 1.0, 0.01);
  // In the co-moving frame the peak stays put.
  EXPECT_NEAR(detail::local_peaks(g, tr.frames.back().u).front().x, 0.0, 0.01);
}

TEST(Sim, TransportShiftsExactly) {
  const Grid g(-10, 10, 128);
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = std::exp(-g.x(i) * g.x(i));
  const SimConfig cfg{pde::Transport{0.75}, g, 0.01, 2.0, Scheme::SpectralRK4, 0.5};
  const auto tr = integrate(cfg, f);
  EXPECT_NEAR(measure_speed(tr), 0.75, 1e-3);
}

TEST(Sim, NlsBellIsStationary) {
  const Grid g(-20, 20, 512);
  const double lambda = 2;
  const auto bell = nls_bell_profile(lambda);
  const NLSParams p(lambda, 0.0, nls_bell_eta(lambda, 0.0));
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = nls_ansatz(bell, p, g.x(i), 0.0);
  const SimConfig cfg{pde::NLS{lambda}, g, 1e-3, 2.0, Scheme::SplitStep, 0.25};
  const auto tr = integrate(cfg, f);
  for (const auto& fr : tr.frames)
    EXPECT_LE(shape_error(g, fr.u, [](double x) { return 1 / std::cosh(x); }, 0.0), 1e-3) << fr.t;
  EXPECT_LE(tr.max_step_mass_change, 1e-10);
  EXPECT_NEAR(measure_speed(tr), 0.0, 0.01);
  // The carrier phase advances at eta.
  const auto mid = g.n() / 2;
  EXPECT_NEAR(std::arg(tr.frames.back().u[mid]), 2.0 * p.eta(), 1e-3);
}

TEST(Sim, NlsMovingBellTravels) {
  const Grid g(-20, 20, 512);
  const double lambda = 2, c = 0.4;
  const auto bell = nls_bell_profile(lambda);
  const NLSParams p(lambda, c, nls_bell_eta(lambda, c));
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = nls_ansatz(bell, p, g.x(i), 0.0);
  const SimConfig cfg{pde::NLS{lambda}, g, 1e-3, 5.0, Scheme::SplitStep, 0.5};
  const auto tr = integrate(cfg, f);
  EXPECT_NEAR(measure_speed(tr), c, 0.01);
  for (std::size_t i = 0; i < g.n(); ++i)
    EXPECT_NEAR(std::abs(tr.frames.back().u[i]), std::abs(nls_ansatz(bell, p, g.x(i), 5.0)), 1e-3);
}

TEST(Sim, ZeroFieldStaysZero) {
  const Grid g(-10, 10, 64);
  const Field z{g, std::vector<cplx>(g.n()), std::vector<cplx>(g.n())};
  const std::vector<SimConfig> cfgs = {
      {pde::KdV{}, g, 1e-3, 0.1, Scheme::SpectralRK4, 0.05},
      {pde::MKdV{}, g, 1e-3, 0.1, Scheme::SpectralRK4, 0.05},
      {pde::GmKdV{-2, 2}, g, 1e-3, 0.1, Scheme::SpectralRK4, 0.05},
      {pde::NLS{2}, g, 1e-3, 0.1, Scheme::SplitStep, 0.05},
      {pde::SineGordon{}, g, 1e-2, 0.1, Scheme::Leapfrog, 0.05},
      {pde::RosenauHyman{2, 2}, g, 1e-3, 0.1, Scheme::FiniteDifference, 0.05},
  };
  for (const auto& c : cfgs) {
    const auto tr = integrate(c, z);
    for (const auto& fr : tr.frames)
      for (auto v : fr.u) ASSERT_EQ(v, cplx(0)) << pde_name(c.kind);
    EXPECT_EQ(tr.frames.back().conserved.mass, 0.0);
    EXPECT_EQ(tr.frames.back().conserved.energy, 0.0);
  }
}

TEST(Sim, ConservedExamples) {
  const Grid g(-40, 40, 2048);
  const auto f = kdv_field(g, 1.0);
  const auto q = conserved(pde::KdV{}, f);
  EXPECT_NEAR(q.mass, 2.0, 1e-9);
  // int (c/2)^2 sech^4(x/2) = (1/4)(8/3) for c = 1
  EXPECT_NEAR(q.momentum, 2.0 / 3.0, 1e-9);

  const Field zero{g, std::vector<cplx>(g.n())};
  const auto q0 = conserved(pde::KdV{}, zero);
  EXPECT_EQ(q0.mass, 0);
  EXPECT_EQ(q0.momentum, 0);
  EXPECT_EQ(q0.energy, 0);

  // Static kink: energy 8, integrand checked independently by quadrature.
  const auto k = SineGordonKinkParams::from_speed(0.0, Polarity::Kink);
  const Grid w(-20, 20, 1024);
  Field kink{w, std::vector<cplx>(w.n()), std::vector<cplx>(w.n())};
  for (std::size_t i = 0; i < w.n(); ++i) kink.u[i] = sg_kink(k, w.x(i));
  const double e = conserved(pde::SineGordon{}, kink).energy;
  const double oracle = oracle::gauss_kronrod(
      [](double x) {
        const double s = 1 / std::cosh(x);
        return 2 * s * s + (1 - std::cos(4 * std::atan(std::exp(x))));
      },
      -20, 20);
  EXPECT_NEAR(e, 8.0, 0.08);
  EXPECT_NEAR(e, oracle, 1e-3);
}

TEST(Sim, SineGordonEnergyOscillatesWithoutDrift) {
  const Grid g(-40, 40, 512);
  auto run = [&](double factor) {
    const SimConfig cfg{pde::SineGordon{}, g, factor * g.h(), 40.0, Scheme::Leapfrog, 0.5};
    return integrate(cfg, sg_kink_pair(g, 0.5, 10));
  };
  const auto tr = run(0.9);
  const double e0 = tr.frames.front().conserved.energy;
  EXPECT_NEAR(e0, 16 / std::sqrt(1 - 0.25), 0.05);
  auto worst = [&](const Trajectory& t, double t_max) {
    double m = 0;
    for (const auto& f : t.frames)
      if (f.t <= t_max) m = std::max(m, relative_drift(f.conserved.energy, t.frames.front().conserved.energy));
    return m;
  };
  // The excursion while the pair overlaps is an O(dt^2) oscillation of the
  // discrete energy; it decays once the kinks separate again.
  EXPECT_LE(worst(tr, 20.0), 1e-2);
  EXPECT_LE(relative_drift(tr.frames.back().conserved.energy, e0), 1e-6);
  EXPECT_GE(worst(tr, 40.0) / worst(run(0.45), 40.0), 2.0);
}

TEST(Sim, SineGordonNeedsVelocity) {
  const Grid g(-10, 10, 64);
  const Field f{g, std::vector<cplx>(g.n())};
  EXPECT_THROW(integrate({pde::SineGordon{}, g, 0.1, 1, Scheme::Leapfrog, 0.5}, f), ParameterError);
}

TEST(Sim, ConfigValidation) {
  const Grid g(-10, 10, 64);
  const Field f{g, std::vector<cplx>(g.n())};
  EXPECT_THROW(integrate({pde::KdV{}, g, 0.1, 1, Scheme::SplitStep, 0.5}, f), ParameterError);
  EXPECT_THROW(integrate({pde::NLS{1}, g, 0.1, 1, Scheme::SpectralRK4, 0.5}, f), ParameterError);
  EXPECT_THROW(integrate({pde::KdV{}, g, -0.1, 1, Scheme::SpectralRK4, 0.5}, f), ParameterError);
  EXPECT_THROW(integrate({pde::KdV{}, Grid(-10, 10, 96), 0.1, 1, Scheme::SpectralRK4, 0.5}, f), GridError);
  EXPECT_THROW(integrate({pde::KdV{}, Grid(-10, 10, 128), 0.1, 1, Scheme::SpectralRK4, 0.5}, f), GridError);
  Field complex_u{g, std::vector<cplx>(g.n(), cplx(0, 1))};
  EXPECT_THROW(integrate({pde::KdV{}, g, 0.1, 1, Scheme::SpectralRK4, 0.5}, complex_u), ParameterError);
  // Nonlinear explicit bound: dt * 6 max|u| k_max must stay below 2.5.
  EXPECT_THROW(integrate({pde::KdV{}, g, 0.5, 1, Scheme::SpectralRK4, 0.5}, kdv_field(g, 1.0)), ParameterError);
}

TEST(Sim, BlowUpIsReportedWithTime) {
  const Grid g(-20, 20, 256);
  SimConfig cfg{pde::KdV{}, g, 0.5, 50.0, Scheme::SpectralRK4, 1.0};
  cfg.check_stability = false;
  try {
    integrate(cfg, kdv_field(g, 1.0));
    FAIL() << "expected a blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LE(e.time(), 50.0);
  }
}

TEST(Sim, AmbiguousPeaksRejected) {
  const Grid g(-40, 40, 512);
  Field f = kdv_field(g, 1.0, -15);
  const auto b = kdv_field(g, 1.0, 15);
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] += b.u[i];
  const auto tr = integrate({pde::KdV{}, g, 1e-2, 1.0, Scheme::SpectralRK4, 0.5}, f);
  EXPECT_THROW(measure_speed(tr), AmbiguityError);
}

TEST(Sim, IndependentRunsInParallelMatchSerial) {
  const Grid g(-20, 20, 256);
  auto run = [g](double c) {
    return measure_speed(integrate({pde::KdV{}, g, 1e-3, 2.0, Scheme::SpectralRK4, 0.5}, kdv_field(g, c)));
  };
  auto a = std::async(std::launch::async, run, 0.8);
  auto b = std::async(std::launch::async, run, 1.2);
  EXPECT_EQ(a.get(), run(0.8));
  EXPECT_EQ(b.get(), run(1.2));
}

TEST(Collision, AmplitudesRecoverAndPhasesShift) {
  const auto rep = collide_kdv(1.0, 0.5, 48.0);
  EXPECT_LT(rep.initial_overlap, 1e-8);
  EXPECT_NEAR(rep.post_amplitude_fast, 0.50, 0.005);
  EXPECT_NEAR(rep.post_amplitude_slow, 0.25, 0.0025);
  EXPECT_NEAR(rep.post_speed_fast, 1.0, 0.01);
  EXPECT_NEAR(rep.post_speed_slow, 0.5, 0.01);
  EXPECT_GT(rep.phase_shift_fast, 0.0);
  EXPECT_LT(rep.phase_shift_slow, 0.0);
  // Two-soliton phase shifts for u_t + 6 u u_x + u_xxx with k_i = sqrt(c_i)/2:
  // fast +(1/k1) ln((k1+k2)/(k1-k2)), slow -(1/k2) of the same logarithm.
  const double k1 = 0.5, k2 = 0.5 * std::sqrt(0.5);
  const double lg = std::log((k1 + k2) / (k1 - k2));
  EXPECT_NEAR(rep.phase_shift_fast, lg / k1, 0.1);
  EXPECT_NEAR(rep.phase_shift_slow, -lg / k2, 0.1);
  EXPECT_LE(rep.mass_drift, 1e-6);
}

TEST(Collision, Preconditions) {
  EXPECT_THROW(collide_kdv(1.0, 1.0, 48.0), ParameterError);
  EXPECT_THROW(collide_kdv(0.5, 1.0, 48.0), ParameterError);
  EXPECT_THROW(collide_kdv(1.0, 0.5, 10.0), ParameterError);  // overlapping tails
}

TEST(Collision, ShortRunIsIncomplete) {
  CollisionConfig cc;
  cc.t_end = 40.0;
  EXPECT_THROW(collide_kdv(1.0, 0.5, 48.0, cc), IncompleteCollisionError);
}

TEST(Compacton, SupportStaysFiniteAndMassIsConserved) {
  const Grid g(-20, 20, 512);
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    f.u[i] = std::abs(x) < 2 * std::numbers::pi ? std::pow(std::cos(x / 4), 4) : 0.0;
  }
  SimConfig cfg{pde::RosenauHyman{2, 2}, g, 2e-4, 1.0, Scheme::FiniteDifference, 0.1};
  cfg.hyperviscosity = 1e-2;
  const auto run = compacton_run(2, 2, f, cfg);
  ASSERT_EQ(run.support.width.size(), run.trajectory.frames.size());
  for (double w : run.support.width) EXPECT_LT(w, run.support.window);
  EXPECT_LE(run.support.max_mass_drift, 1e-4);
}

TEST(Compacton, ZeroAndPreconditions) {
  const Grid g(-20, 20, 128);
  const Field z{g, std::vector<cplx>(g.n())};
  const SimConfig cfg{pde::RosenauHyman{2, 2}, g, 1e-3, 0.1, Scheme::FiniteDifference, 0.05};
  const auto run = compacton_run(2, 2, z, cfg);
  for (double w : run.support.width) EXPECT_EQ(w, 0.0);
  EXPECT_THROW(compacton_run(1, 2, z, cfg), ParameterError);
  EXPECT_THROW(compacton_run(2, 1, z, cfg), ParameterError);
  EXPECT_THROW(compacton_run(2, 4, z, cfg), ParameterError);
}
