#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spectral/potentials.hpp"

using namespace spectral;

namespace {

constexpr double kPi = std::numbers::pi;

// x^2 exp(-x^2/b^2) evaluated at a complex argument.
cplx barrier_at(cplx w, double b) { return w * w * std::exp(-w * w / (b * b)); }

}  // namespace

TEST(Potentials, EvalExamples) {
  EXPECT_DOUBLE_EQ(eval_potential(Harmonic{1.0}, 2.0).real(), 4.0);
  EXPECT_EQ(eval_potential(GaussianBarrier{100}, 0.0), cplx(0));
  EXPECT_NEAR(std::abs(eval_potential(PerturbedHarmonic{1.0, 0.5, 0.0}, 1.0) - 1.5), 0, 1e-15);
}

TEST(Potentials, PrincipalSqrtOfSqrtI) {
  const cplx r = principal_sqrt(sqrt_i());
  EXPECT_NEAR(std::abs(r - std::polar(1.0, kPi / 8)), 0, 1e-15);
  EXPECT_GT(r.real(), 0);
}

TEST(Potentials, HarmonicReduction) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::EvenNeumann);
  EXPECT_EQ(p.zmul(), cplx(1));
  ASSERT_TRUE(p.harmonic_like());
  EXPECT_EQ(p.c_eff(), sqrt_i());
  EXPECT_TRUE(p.parity_allowed());
  EXPECT_NEAR(std::abs(p.veff(3.0) - sqrt_i() * 9.0), 0, 1e-14);
}

TEST(Potentials, DilatedReductionExample) {
  const auto p = effective_problem(DilatedGaussian{100, kPi / 4}, Parity::EvenNeumann);
  EXPECT_NEAR(std::abs(p.zmul() - std::polar(1.0, kPi / 4)), 0, 1e-15);
  EXPECT_FALSE(p.harmonic_like());
  for (double x : {0.5, 3.0, 40.0, 150.0}) {
    const cplx expect = cplx(0, 1) * x * x * std::exp(-std::polar(1.0, kPi / 4) * x * x / 1e4);
    EXPECT_NEAR(std::abs(p.veff(x) - expect), 0, 1e-12 * std::max(1.0, std::abs(expect))) << x;
  }
}

// The dilated operator -e^{-i theta} d^2 + V(e^{i theta/2} x) gives
// f'' = (veff - zmul z) f with veff = zmul V(e^{i theta/2} x).
TEST(Potentials, DilatedVeffIsScaledComplexRotation) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(-60, 60), ub(2, 200), ut(0.01, 1.5);
  for (int k = 0; k < 100; ++k) {
    const double b = ub(rng), th = ut(rng), x = ux(rng);
    const auto p = effective_problem(DilatedGaussian{b, th}, Parity::WholeLine);
    const cplx v_dil = barrier_at(std::polar(1.0, th / 2) * x, b);
    EXPECT_NEAR(std::abs(p.veff(x) - p.zmul() * v_dil), 0, 1e-12 * std::max(1.0, std::abs(v_dil)));
    EXPECT_NEAR(std::abs(p.zmul()), 1.0, 1e-15);
  }
}

TEST(Potentials, NuZeroIsRotatedOscillator) {
  const auto d = dilated_gaussian_nu(0, kPi / 8);
  EXPECT_TRUE(std::isinf(d.b));
  const auto p = effective_problem(d, Parity::EvenNeumann);
  for (double x : {0.3, 2.0, 9.0}) EXPECT_NEAR(std::abs(p.veff(x) - sqrt_i() * x * x), 0, 1e-12);
  EXPECT_DOUBLE_EQ(dilated_gaussian_nu(1e-4, 0.1).b, 100.0);
  EXPECT_DOUBLE_EQ(nu_of(DilatedGaussian{10, 0.1}), 1e-2);
}

TEST(Potentials, EvennessOfEvenVariants) {
  const std::vector<PotentialSpec> specs = {Harmonic{sqrt_i()}, GaussianBarrier{10}, DilatedGaussian{10, 0.7},
                                            PerturbedHarmonic{sqrt_i(), 0.1, 3.0, true},
                                            WorstCaseJwkb{sqrt_i(), 0.1, 2.0, true}};
  for (const auto& s : specs) {
    const auto p = effective_problem(s, Parity::EvenNeumann);
    for (double x = 0.1; x < 20; x += 0.37) EXPECT_EQ(p.veff(x), p.veff(-x));
  }
}

TEST(Potentials, EpsZeroCollapse) {
  const auto h = effective_problem(Harmonic{sqrt_i()}, Parity::WholeLine);
  const auto ph = effective_problem(PerturbedHarmonic{sqrt_i(), 0.0, 5.0}, Parity::WholeLine);
  const auto pw = effective_problem(WorstCaseJwkb{sqrt_i(), 0.0, 5.0}, Parity::WholeLine);
  for (double x = -10; x <= 10; x += 0.25) {
    EXPECT_EQ(h.veff(x), ph.veff(x));
    EXPECT_EQ(h.veff(x), pw.veff(x));
  }
  EXPECT_TRUE(ph.parity_allowed());
}

TEST(Potentials, ParityMismatch) {
  try {
    effective_problem(PerturbedHarmonic{sqrt_i(), 1e-3, 6.0}, Parity::EvenNeumann);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParityMismatch);
  }
  EXPECT_NO_THROW(effective_problem(PerturbedHarmonic{sqrt_i(), 1e-3, 6.0}, Parity::WholeLine));
}

TEST(Potentials, Validation) {
  auto code_of = [](const PotentialSpec& s) {
    try {
      validate(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NotAnEigenvalue;  // no error
  };
  EXPECT_EQ(code_of(Harmonic{-1.0}), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(GaussianBarrier{0}), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(DilatedGaussian{10, 0}), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(DilatedGaussian{10, kPi / 2}), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(PerturbedHarmonic{1.0, -1e-3, 1}), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(Harmonic{sqrt_i()}), ErrorCode::NotAnEigenvalue);
}

TEST(Potentials, OriginCoefficient) {
  EXPECT_EQ(effective_problem(GaussianBarrier{5}, Parity::EvenNeumann).origin_c(), cplx(1));
  EXPECT_NEAR(std::abs(effective_problem(DilatedGaussian{5, 0.3}, Parity::EvenNeumann).origin_c() -
                       std::polar(1.0, 0.6)),
              0, 1e-15);
  EXPECT_EQ(effective_problem(Harmonic{cplx(2, 1)}, Parity::EvenNeumann).origin_c(), cplx(2, 1));
}
