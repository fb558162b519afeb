#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spectral/riccati.hpp"

using namespace spectral;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

TransferState<double> right_state(const EffectiveProblem& p, cplx z, double X) {
  SolverConfig cfg;
  return right_admissible<double>(p, z, X, cfg);
}

}  // namespace

TEST(Riccati, GroundStateTransfer) {
  SolverConfig cfg;
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  const double X = 8;
  const auto init = right_state(p, 1.0, X);
  EXPECT_NEAR(std::abs(init.value - cplx(-X)), 0, 1e-6);
  for (double x : {2.0, 1.0, 0.0, -1.5}) {
    const auto t = integrate_transfer<double>(p, 1.0, X, x, init, cfg);
    EXPECT_NEAR(std::abs(t.endpoint.g() - cplx(-x)), 0, 1e-7) << x;
  }
}

TEST(Riccati, ComplexCouplingGroundState) {
  SolverConfig cfg;
  const cplx c = sqrt_i(), sc = principal_sqrt(c);
  const auto p = effective_problem(Harmonic{c}, Parity::WholeLine);
  const auto init = right_state(p, sc, 8.0);
  for (double x : {3.0, 1.0, 0.25}) {
    const auto t = integrate_transfer<double>(p, sc, 8.0, x, init, cfg);
    EXPECT_NEAR(std::abs(t.endpoint.g() + sc * x), 0, 1e-7) << x;
  }
}

// f = x e^{-x^2/2} at z = 3: g = 1/x - x has a pole at the zero of f.
TEST(Riccati, PassesThroughPole) {
  SolverConfig cfg;
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  const auto init = right_state(p, 3.0, 8.0);
  const auto t = integrate_transfer<double>(p, 3.0, 8.0, -2.0, init, cfg);
  EXPECT_GE(t.switches, 1);
  EXPECT_NEAR(std::abs(t.endpoint.g() - cplx(-0.5 + 2.0)), 0, 1e-7);
}

// f = (2x^2 - 1) e^{-x^2/2} at z = 5.
TEST(Riccati, SecondExcitedState) {
  SolverConfig cfg;
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  const auto init = right_state(p, 5.0, 8.0);
  for (double x : {1.0, 0.3, -0.9}) {
    const auto t = integrate_transfer<double>(p, 5.0, 8.0, x, init, cfg);
    const double g = 4 * x / (2 * x * x - 1) - x;
    EXPECT_NEAR(std::abs(t.endpoint.g() - g), 0, 1e-6 * std::max(1.0, std::abs(g))) << x;
  }
}

TEST(Riccati, OriginStates) {
  EXPECT_EQ(origin_state<double>(Parity::EvenNeumann).repr, Repr::Direct);
  EXPECT_EQ(origin_state<double>(Parity::OddDirichlet).repr, Repr::Inverse);
  EXPECT_EQ(origin_state<double>(Parity::OddDirichlet).value, cplx(0));
  EXPECT_THROW(origin_state<double>(Parity::WholeLine), Error);
}

TEST(Riccati, DecayingConditionRejectsCut) {
  try {
    admissible_init_decaying<double>(cplx(4.0, 0.0), 20.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OnEssentialSpectrum);
  }
  const auto s = admissible_init_decaying<double>(cplx(-4.0, 0.0), 20.0);
  EXPECT_NEAR(std::abs(s.value - cplx(-2.0)), 0, 1e-15);
}

TEST(Riccati, HarmonicConditionNeedsLargeWindow) {
  try {
    admissible_init_harmonic<double>(cplx(400.0), cplx(1.0), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowTooSmall);
  }
}

TEST(Riccati, AlphaRelation) {
  const cplx c = sqrt_i();
  EXPECT_NEAR(std::abs(alpha_to_g<double>(cplx(-1.0), 3.0, c) + principal_sqrt(c) * 3.0), 0, 1e-15);
}

// Companion q' = s - 2 g q with q(X) = 0 satisfies q f^2 = -int_x^X s f^2.
TEST(Riccati, CompanionIsWeightedIntegral) {
  SolverConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-12;
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  SweepOptions<double> opt;
  opt.companions.push_back({CompanionKind::Complex, [](double) { return cplx(-1); }, cplx(0)});
  const auto r = sweep<double>(p, 1.0, 8.0, 0.0, right_state(p, 1.0, 8.0), cfg, opt);
  EXPECT_NEAR(std::abs(r.end.companions[0].direct() - kSqrtPi / 2), 0, 1e-8);
}

TEST(Riccati, CompanionThroughZeroOfF) {
  SolverConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-12;
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  SweepOptions<double> opt;
  opt.companions.push_back({CompanionKind::Complex, [](double) { return cplx(-1); }, cplx(0)});
  const double a = -0.5;
  const auto r = sweep<double>(p, 3.0, 8.0, a, right_state(p, 3.0, 8.0), cfg, opt);
  const double f2 = a * a * std::exp(-a * a);
  const double integral = kSqrtPi / 4 * (1 + std::erf(0.5)) - 0.25 * std::exp(-0.25);
  EXPECT_GE(r.switches, 1);
  EXPECT_NEAR(r.end.companions[0].direct().real() * f2, integral, 1e-8);
}

TEST(Riccati, ModulusCompanionForComplexCoupling) {
  SolverConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-12;
  const cplx c = sqrt_i(), sc = principal_sqrt(c);
  const auto p = effective_problem(Harmonic{c}, Parity::WholeLine);
  SweepOptions<double> opt;
  opt.companions.push_back({CompanionKind::Complex, [](double) { return cplx(-1); }, cplx(0)});
  opt.companions.push_back({CompanionKind::Modulus, [](double) { return cplx(-1); }, cplx(0)});
  const auto r = sweep<double>(p, sc, 8.0, 0.0, right_state(p, sc, 8.0), cfg, opt);
  // f = exp(-sqrt(c) x^2 / 2), f(0) = 1
  const cplx h = std::sqrt(std::numbers::pi / sc) / 2.0;
  const double k = std::sqrt(std::numbers::pi / sc.real()) / 2;
  EXPECT_NEAR(std::abs(r.end.companions[0].direct() - h), 0, 1e-8);
  EXPECT_NEAR(r.end.companions[1].direct().real(), k, 1e-8);
}

TEST(Riccati, LogAmplitude) {
  SolverConfig cfg;
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  SweepOptions<double> opt;
  opt.log_amplitude = true;
  opt.log_init = cplx(-32.0);  // log f(8)
  const auto r = sweep<double>(p, 1.0, 8.0, 0.5, right_state(p, 1.0, 8.0), cfg, opt);
  EXPECT_NEAR(r.end.log_f.real(), -0.125, 1e-7);
}

TEST(Riccati, DefaultWindows) {
  // at least 1.5 turning points, and the decay exponent int Re sqrt(c x^2 - z) reaches 40
  auto exponent = [](cplx c, cplx z, double X) {
    double s = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) s += principal_sqrt(c * std::pow((i + 0.5) * X / n, 2) - z).real() * X / n;
    return s;
  };
  for (cplx c : {cplx(1.0), sqrt_i(), std::polar(1.0, 2 * std::numbers::pi / 3)}) {
    const auto ph = effective_problem(Harmonic{c}, Parity::EvenNeumann);
    for (cplx z : {cplx(1.0), cplx(21.0), cplx(400.0)}) {
      const double X = default_x_plus<double>(ph, z);
      const double x_min = std::max(8.0, 1.5 * std::sqrt(std::abs(z)));
      EXPECT_GE(X, x_min);
      EXPECT_GE(exponent(c, z, X), 40 - 0.5) << c << " " << z;
      if (X - 1 > x_min) {
        EXPECT_LT(exponent(c, z, X - 1), 40) << c << " " << z;
      }
    }
  }
  const auto pd = effective_problem(DilatedGaussian{10, 0.5}, Parity::EvenNeumann);
  const double xd = default_x_plus<double>(pd, pd.to_internal(5.0));
  EXPECT_GE(xd, 12.0);
  EXPECT_LE(xd, 200.0);
}
