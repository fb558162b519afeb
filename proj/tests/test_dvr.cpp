#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "spectral/resonance.hpp"

using namespace spectral;

namespace {

// Sinc-DVR levels of -d^2 + x^2 exp(-x^2/b^2) on [-L, L] with spacing h.
// The barrier top b^2/e sits far above the compared levels, so the
// resonances there are real to well below the tolerance.
Eigen::VectorXd dvr_levels(double b, double L, double h) {
  const int m = static_cast<int>(std::round(L / h));
  const int n = 2 * m + 1;
  Eigen::MatrixXd H(n, n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    const double x = (i - m) * h;
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        H(i, j) = pi2 / (3 * h * h) + x * x * std::exp(-x * x / (b * b));
      } else {
        const int d = i - j;
        H(i, j) = 2.0 * ((d % 2) ? -1.0 : 1.0) / (h * h * d * d);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST(Dvr, RiccatiResonancesMatchRealWellLevels) {
  const double b = 100, theta = std::numbers::pi / 60;
  const auto ev = dvr_levels(b, 25, 0.05);
  const auto ev_fine = dvr_levels(b, 25, 0.04);
  const auto dg = DilatedGaussian{b, theta};
  for (int n : {1, 10, 30, 50}) {
    ASSERT_LT(std::abs(ev[n] - ev_fine[n]), 1e-8) << "DVR not converged at n = " << n;
    const Parity par = n % 2 ? Parity::OddDirichlet : Parity::EvenNeumann;
    const auto r = refine_eigenvalue<double>(effective_problem(dg, par), par, cplx(ev[n] + 1e-3), NAN,
                                             SolverConfig{});
    EXPECT_NEAR(r.lambda.real(), ev[n], 1e-6) << n;
    EXPECT_LT(std::abs(r.lambda.imag()), 1e-6) << n;
  }
}

// Complex-scaled sinc-DVR of -e^{-i theta} d^2 + w^2 exp(-nu w^2), w = e^{i theta/2} x,
// against the continuation in nu at strong barriers.
TEST(Dvr, ComplexScaledLevelsMatchContinuation) {
  const double theta = std::numbers::pi / 4, L = 15, h = 0.05;
  const int m = static_cast<int>(std::round(L / h)), n = 2 * m + 1;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (const auto& [nu, level] : {std::pair{0.2, 0}, std::pair{0.25, 1}}) {
    Eigen::MatrixXcd H(n, n);
    const cplx rot = std::polar(1.0, -theta);
    for (int i = 0; i < n; ++i) {
      const cplx w = std::polar(1.0, theta / 2) * ((i - m) * h);
      for (int j = 0; j < n; ++j) {
        const int d = i - j;
        const double t = d == 0 ? pi2 / (3 * h * h) : 2.0 * ((d % 2) ? -1.0 : 1.0) / (h * h * d * d);
        H(i, j) = rot * t;
      }
      H(i, i) += w * w * std::exp(-nu * w * w);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H, false);
    const cplx ref = continue_in_nu(theta, level, nu, SolverConfig{});
    cplx best = es.eigenvalues()(0);
    for (int k = 1; k < n; ++k)
      if (std::abs(es.eigenvalues()(k) - ref) < std::abs(best - ref)) best = es.eigenvalues()(k);
    EXPECT_NEAR(std::abs(best - ref), 0, 1e-5) << nu;
  }
}
