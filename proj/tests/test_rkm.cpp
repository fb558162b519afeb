#include <gtest/gtest.h>

#include <cmath>

#include "spectral/rkm.hpp"

using namespace spectral;

TEST(Merson, ComplexExponential) {
  using C = std::complex<double>;
  const C k(0.3, 2.0);
  auto rhs = [&](double, const CState<double, 1>& y, CState<double, 1>& dy) { dy[0] = k * y[0]; };
  CState<double, 1> y{C(1)};
  double h = 0;
  MersonStats st;
  merson_integrate(rhs, 0.0, 3.0, y, 1, h, MersonControl{}, st, [](double, CState<double, 1>&) {});
  EXPECT_NEAR(std::abs(y[0] - std::exp(k * 3.0)), 0, 1e-7);
  EXPECT_GT(st.accepted, 0);
}

TEST(Merson, BackwardIntegration) {
  auto rhs = [](double x, const CState<double, 2>& y, CState<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0] + std::complex<double>(0 * x);
  };
  CState<double, 2> y{std::complex<double>(std::sin(2.0)), std::complex<double>(std::cos(2.0))};
  double h = 0;
  MersonStats st;
  merson_integrate(rhs, 2.0, -1.0, y, 2, h, MersonControl{}, st, [](double, CState<double, 2>&) {});
  EXPECT_NEAR(y[0].real(), std::sin(-1.0), 1e-8);
  EXPECT_NEAR(y[1].real(), std::cos(-1.0), 1e-8);
}

TEST(Merson, ErrorScalesWithTolerance) {
  auto rhs = [](double x, const CState<double, 1>& y, CState<double, 1>& dy) { dy[0] = -2.0 * x * y[0]; };
  double errs[2];
  int i = 0;
  for (double tol : {1e-6, 1e-10}) {
    CState<double, 1> y{std::complex<double>(1)};
    double h = 0;
    MersonStats st;
    MersonControl ctl;
    ctl.abs_tol = ctl.rel_tol = tol;
    merson_integrate(rhs, 0.0, 4.0, y, 1, h, ctl, st, [](double, CState<double, 1>&) {});
    errs[i++] = std::abs(y[0] - std::exp(-16.0));
  }
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[1], 1e-9);
}

TEST(Merson, StepLimit) {
  auto rhs = [](double, const CState<double, 1>& y, CState<double, 1>& dy) { dy[0] = y[0]; };
  CState<double, 1> y{std::complex<double>(1)};
  double h = 0;
  MersonStats st;
  MersonControl ctl;
  ctl.max_steps = 3;
  EXPECT_THROW(merson_integrate(rhs, 0.0, 10.0, y, 1, h, ctl, st, [](double, CState<double, 1>&) {}), Error);
}
