#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spectral/locator.hpp"

using namespace spectral;

namespace {

constexpr double kPi = std::numbers::pi;

Parity parity_of(int n) { return n % 2 ? Parity::OddDirichlet : Parity::EvenNeumann; }

Rect box_around(cplx z, double r) { return {z.real() - r, z.real() + r, z.imag() - r, z.imag() + r}; }

}  // namespace

TEST(Locator, RefineRealOscillator) {
  const auto p = effective_problem(Harmonic{1.0}, Parity::EvenNeumann);
  const auto r = refine_eigenvalue<double>(p, Parity::EvenNeumann, cplx(1.1), NAN, SolverConfig{});
  EXPECT_NEAR(std::abs(r.lambda - 1.0), 0, 1e-10);
  EXPECT_LT(r.residual, 1e-8);
}

TEST(Locator, RefineRotatedOscillatorLevelTen) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::EvenNeumann);
  const cplx exact = std::polar(1.0, kPi / 8) * 21.0;
  const auto r = refine_eigenvalue<double>(p, Parity::EvenNeumann, exact * 1.01, NAN, SolverConfig{});
  EXPECT_NEAR(std::abs(r.lambda - exact), 0, 1e-6);
}

TEST(Locator, WholeLineMatchesParityProblems) {
  const auto pe = effective_problem(Harmonic{sqrt_i()}, Parity::EvenNeumann);
  const auto pw = effective_problem(Harmonic{sqrt_i()}, Parity::WholeLine);
  const cplx sc = principal_sqrt(sqrt_i());
  for (int n = 0; n < 6; ++n) {
    const cplx guess = sc * (2.0 * n + 1) + cplx(0.05, -0.03);
    const auto rp = refine_eigenvalue<double>(pe, parity_of(n), guess, NAN, SolverConfig{});
    const auto rw = refine_eigenvalue<double>(pw, Parity::WholeLine, guess, NAN, SolverConfig{});
    EXPECT_NEAR(std::abs(rp.lambda - rw.lambda), 0, 1e-8) << n;
  }
}

TEST(Locator, WronskianCountsOneLevel) {
  const auto p = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  const auto w = winding_number(p, Parity::WholeLine, box_around(1.0, 0.5), 0.0, SolverConfig{},
                                WindingTarget::Wronskian);
  EXPECT_EQ(w.count, 1);
  const auto w2 = winding_number(p, Parity::WholeLine, {0.2, 5.7, -0.6, 0.4}, 0.0, SolverConfig{},
                                 WindingTarget::Wronskian);
  EXPECT_EQ(w2.count, 3);
}

// With a = 0 the poles of the even F are the odd eigenvalues and the odd
// F (reciprocal form) has poles at the even ones.
TEST(Locator, EvenOddPoleDuality) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::EvenNeumann);
  const cplx sc = principal_sqrt(sqrt_i());
  for (int n = 0; n < 6; ++n) {
    const Rect box = box_around(sc * (2.0 * n + 1), 0.6);
    const int even = winding_number(p, Parity::EvenNeumann, box, 0.0, SolverConfig{}).count;
    const int odd = winding_number(p, Parity::OddDirichlet, box, 0.0, SolverConfig{}).count;
    EXPECT_EQ(even, n % 2 ? -1 : 1) << n;
    EXPECT_EQ(odd, -even) << n;
  }
}

TEST(Locator, WindingAdditivity) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::WholeLine);
  const Rect r{0.3, 9.7, -0.4, 4.3};
  auto count = [&](const Rect& q) {
    return winding_number(p, Parity::WholeLine, q, 0.7, SolverConfig{}, WindingTarget::Wronskian).count;
  };
  const cplx m(4.1, 1.9);
  const int total = count(r);
  const int parts = count({r.re_lo, m.real(), r.im_lo, m.imag()}) + count({m.real(), r.re_hi, r.im_lo, m.imag()}) +
                    count({m.real(), r.re_hi, m.imag(), r.im_hi}) + count({r.re_lo, m.real(), m.imag(), r.im_hi});
  EXPECT_EQ(total, parts);
  EXPECT_EQ(total, 5);
}

TEST(Locator, LocalizeFindsOscillatorLevels) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::WholeLine);
  const cplx sc = principal_sqrt(sqrt_i());
  const auto boxes = localize_eigenvalues(p, Parity::WholeLine, {0.2, 9.5, -0.5, 4.0}, {0.7, 0.0}, SolverConfig{});
  ASSERT_EQ(boxes.size(), 5u);
  for (int n = 0; n < 5; ++n) {
    EXPECT_EQ(boxes[n].count, 1);
    const auto r = refine_eigenvalue<double>(p, Parity::WholeLine, boxes[n].rect.center(), boxes[n].a,
                                             SolverConfig{});
    EXPECT_NEAR(std::abs(r.lambda - sc * (2.0 * n + 1)), 0, 1e-7) << n;
  }
}

TEST(Locator, MatchingPointInvariance) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::EvenNeumann);
  const cplx guess = principal_sqrt(sqrt_i()) * 13.0 + 0.1;
  for (double a2 : {0.5, 1.7, 3.0}) {
    const auto r1 = refine_eigenvalue<double>(p, Parity::EvenNeumann, guess, 0.0, SolverConfig{});
    const auto r2 = refine_eigenvalue<double>(p, Parity::EvenNeumann, guess, a2, SolverConfig{});
    EXPECT_LT(std::abs(r1.lambda - r2.lambda), 1e-8) << a2;
  }
}

TEST(Locator, SmallGridIsFinite) {
  const auto p = effective_problem(Harmonic{1.0}, Parity::EvenNeumann);
  const auto g = grid_map(p, Parity::EvenNeumann, {0.5, 2.5, 0.2, 1.0}, 2, 2, 0.0, SolverConfig{});
  ASSERT_EQ(g.nodes.size(), 4u);
  for (const auto& n : g.nodes) {
    EXPECT_TRUE(n.ok);
    EXPECT_TRUE(std::isfinite(std::abs(n.f)));
  }
  EXPECT_EQ(g.nodes[1].z, cplx(2.5, 0.2));  // re fastest
}

// Different matching points change F but not its zeros.  a = 4 lies past
// the turning point of levels below 16, where the outward sweep is swamped
// by the growing solution, so the comparison uses levels above it.
TEST(Locator, GridDependsOnMatchingPointZerosDoNot) {
  const auto p = effective_problem(DilatedGaussian{100, kPi / 6}, Parity::EvenNeumann);
  const Rect r{18.5, 30.5, -1, 1};
  const auto g0 = grid_map(p, Parity::EvenNeumann, r, 4, 3, 0.0, SolverConfig{});
  const auto g4 = grid_map(p, Parity::EvenNeumann, r, 4, 3, 4.0, SolverConfig{});
  double diff = 0;
  for (std::size_t i = 0; i < g0.nodes.size(); ++i)
    if (g0.nodes[i].ok && g4.nodes[i].ok) diff = std::max(diff, std::abs(g0.nodes[i].f - g4.nodes[i].f));
  EXPECT_GT(diff, 1e-3);
  for (double z0 : {21.0, 25.0, 29.0}) {
    const auto r0 = refine_eigenvalue<double>(p, Parity::EvenNeumann, cplx(z0 + 0.01), 0.0, SolverConfig{});
    const auto r4 = refine_eigenvalue<double>(p, Parity::EvenNeumann, cplx(z0 + 0.01), 4.0, SolverConfig{});
    EXPECT_LT(std::abs(r0.lambda - r4.lambda), 1e-6) << z0;
  }
}

TEST(Locator, SearchRegionStaysAboveRotatedCut) {
  const double th = kPi / 4;
  const auto p = effective_problem(DilatedGaussian{10, th}, Parity::EvenNeumann);
  const auto poly = search_region(p, {-1, 50, -12, 0.5});
  ASSERT_GE(poly.size(), 3u);
  for (const cplx& v : poly) EXPECT_GE((p.zmul() * v).imag(), 1e-3 - 1e-12);
  // a box entirely below the line has nothing left
  EXPECT_TRUE(search_region(p, {0, 5, -45, -41}).empty());
  // harmonic problems keep the rectangle
  EXPECT_EQ(search_region(effective_problem(Harmonic{1.0}, Parity::EvenNeumann), {0, 1, 0, 1}).size(), 4u);
}

TEST(Locator, RejectsBadInputs) {
  const auto p = effective_problem(Harmonic{1.0}, Parity::EvenNeumann);
  EXPECT_THROW(localize_eigenvalues(p, Parity::EvenNeumann, {1, 0, 0, 1}, {0.0}, SolverConfig{}), Error);
  EXPECT_THROW(localize_eigenvalues(p, Parity::EvenNeumann, {0, 1, 0, 1}, {}, SolverConfig{}), Error);
  EXPECT_THROW(grid_map(p, Parity::EvenNeumann, {0, 1, 0, 1}, 1, 3, 0.0, SolverConfig{}), Error);
}

TEST(Locator, DefaultMatchingPointFollowsJwkb) {
  const auto p = effective_problem(Harmonic{sqrt_i()}, Parity::EvenNeumann);
  const cplx z = principal_sqrt(sqrt_i()) * 41.0;
  // sqrt(Im z / Im c)
  EXPECT_NEAR(default_matching_point<double>(p, Parity::EvenNeumann, z), std::sqrt(z.imag() / sqrt_i().imag()),
              1e-12);
  const auto pr = effective_problem(Harmonic{1.0}, Parity::EvenNeumann);
  EXPECT_EQ(default_matching_point<double>(pr, Parity::EvenNeumann, cplx(5.0)), 0.0);
  // odd levels vanish at the origin, so the whole line uses the turning point
  const auto pw = effective_problem(Harmonic{4.0}, Parity::WholeLine);
  EXPECT_NEAR(default_matching_point<double>(pw, Parity::WholeLine, cplx(6.0)), std::sqrt(1.5), 1e-15);
  const auto pe = effective_problem(Harmonic{1.0}, Parity::WholeLine);
  const auto r = refine_eigenvalue<double>(pe, Parity::WholeLine, cplx(3.1, 0.05), NAN, SolverConfig{});
  EXPECT_NEAR(std::abs(r.lambda - 3.0), 0, 1e-9);
}

// Neumann F with a = 0 at b = 100: zeros at the even levels and poles at
// the odd ones, so the winding of F alternates along the real axis.
TEST(Locator, BarrierZerosAndPolesInterchange) {
  const auto p = effective_problem(DilatedGaussian{100, kPi / 6}, Parity::EvenNeumann);
  for (int n = 0; n < 8; ++n) {
    const double c = 2 * n + 1;
    const int w = winding_number(p, Parity::EvenNeumann, box_around(c, 0.6), 0.0, SolverConfig{},
                                 WindingTarget::MatchingFunction)
                      .count;
    EXPECT_EQ(w, n % 2 ? -1 : 1) << n;
  }
}
