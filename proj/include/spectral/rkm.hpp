#ifndef SPECTRAL_RKM_HPP_
#define SPECTRAL_RKM_HPP_

// Adaptive Runge-Kutta-Merson (4th order, 5 stages, embedded error
// estimate) for small complex systems.  The driver exposes an after-step
// hook so callers can swap a variable for its reciprocal between steps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "spectral/errors.hpp"

namespace spectral {

template <class Real, std::size_t N>
using CState = std::array<std::complex<Real>, N>;

struct MersonControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_steps = 1'000'000;
};

struct MersonStats {
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

template <class Real, std::size_t N>
inline bool all_finite(const CState<Real, N>& y, std::size_t active) {
  for (std::size_t i = 0; i < active; ++i)
    if (!std::isfinite(y[i].real()) || !std::isfinite(y[i].imag())) return false;
  return true;
}

}  // namespace detail

// One Merson step of size h.  Returns the scaled error norm (<= 1 accepts).
template <class Real, std::size_t N, class Rhs>
Real merson_step(Rhs& rhs, Real x, const CState<Real, N>& y, Real h, std::size_t active,
                 const MersonControl& ctl, CState<Real, N>& y_new) {
  using C = std::complex<Real>;
  CState<Real, N> k1{}, k2{}, k3{}, k4{}, k5{}, tmp{};
  const Real third = Real(1) / 3;

  rhs(x, y, k1);
  for (std::size_t i = 0; i < active; ++i) tmp[i] = y[i] + h * k1[i] * third;
  rhs(x + h * third, tmp, k2);
  for (std::size_t i = 0; i < active; ++i) tmp[i] = y[i] + h * (k1[i] + k2[i]) / Real(6);
  rhs(x + h * third, tmp, k3);
  for (std::size_t i = 0; i < active; ++i) tmp[i] = y[i] + h * (k1[i] + Real(3) * k3[i]) / Real(8);
  rhs(x + h / 2, tmp, k4);
  for (std::size_t i = 0; i < active; ++i)
    tmp[i] = y[i] + h * (k1[i] / Real(2) - Real(1.5) * k3[i] + Real(2) * k4[i]);
  rhs(x + h, tmp, k5);

  Real err = 0;
  for (std::size_t i = 0; i < active; ++i) {
    y_new[i] = y[i] + h * (k1[i] + Real(4) * k4[i] + k5[i]) / Real(6);
    const C e = h * (Real(2) * k1[i] - Real(9) * k3[i] + Real(8) * k4[i] - k5[i]) / Real(30);
    const Real scale = static_cast<Real>(ctl.abs_tol) +
                       static_cast<Real>(ctl.rel_tol) * std::max(std::abs(y[i]), std::abs(y_new[i]));
    err = std::max(err, std::abs(e) / scale);
  }
  if (!detail::all_finite(y_new, active) || !std::isfinite(err)) return std::numeric_limits<Real>::infinity();
  return err;
}

// Integrates y from x to x_end (either direction).  `h` carries the step
// size between calls; pass 0 to let the driver pick one.  after_step(x, y)
// runs after every accepted step and may rewrite y.
template <class Real, std::size_t N, class Rhs, class AfterStep>
void merson_integrate(Rhs& rhs, Real x, Real x_end, CState<Real, N>& y, std::size_t active, Real& h,
                      const MersonControl& ctl, MersonStats& stats, AfterStep&& after_step) {
  const Real span = x_end - x;
  if (span == Real(0)) return;
  const Real dir = span > 0 ? Real(1) : Real(-1);
  if (h == Real(0) || (h > 0) != (dir > 0)) h = dir * std::min(std::abs(span), Real(1e-2));

  CState<Real, N> y_new{};
  while ((x_end - x) * dir > 0) {
    if (stats.accepted + stats.rejected >= ctl.max_steps)
      throw Error(ErrorCode::StepLimitExceeded, "Merson integrator exceeded max_steps");
    const Real remaining = x_end - x;
    bool last = false;
    if (std::abs(h) >= std::abs(remaining)) {
      h = remaining;
      last = true;
    }
    const Real err = merson_step(rhs, x, y, h, active, ctl, y_new);
    const Real h_min = Real(64) * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(x));
    if (err <= Real(1)) {
      x = last ? x_end : x + h;
      y = y_new;
      ++stats.accepted;
      after_step(x, y);
      const Real grow = err == Real(0) ? Real(5) : std::min(Real(5), Real(0.9) * std::pow(err, Real(-0.2)));
      if (!last) h *= std::max(Real(0.2), grow);
    } else {
      ++stats.rejected;
      const Real shrink = std::isfinite(err) ? std::max(Real(0.1), Real(0.9) * std::pow(err, Real(-0.25)))
                                             : Real(0.1);
      h *= shrink;
      if (std::abs(h) < h_min)
        throw Error(ErrorCode::BlowUpAtEndpoint, "step size underflow (solution singular near x)");
    }
  }
}

}  // namespace spectral

#endif  // SPECTRAL_RKM_HPP_
