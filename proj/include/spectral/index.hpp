#ifndef SPECTRAL_INDEX_HPP_
#define SPECTRAL_INDEX_HPP_

// Instability index kappa = int |f|^2 / |int f^2| of an isolated eigenvalue
// via the auxiliary equations
//
//   left of a:   h' =  1 - 2 g h,   k' =  1 - 2 Re(g) k   (from 0 or X_-)
//   right of a:  h' = -1 - 2 g h,   k' = -1 - 2 Re(g) k   (from X_+)
//
// so that h(a) = int f^2 / f(a)^2 and k(a) = int |f|^2 / |f(a)|^2 over each
// side.  Both sides are integrated towards the matching point, which is the
// stable direction.  Near zeros of f the sweep carries h f^2 / f'^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/locator.hpp"
#include "spectral/potentials.hpp"
#include "spectral/riccati.hpp"

namespace spectral {

enum class Side { LeftOfA, RightOfA };

template <class Real = double>
struct HK {
  std::complex<Real> h{};
  Real k = 0;
  double sup_g = 0;
  TransferState<Real> transfer;  // g at a from this side
  int h_switches = 0;
};

template <class Real = double>
struct IndexResult {
  Real kappa = 1;
  std::complex<Real> h_left{}, h_right{};
  Real k_left = 0, k_right = 0;
  double x_minus = 0, x_plus = 0;
  double a_used = 0;
  double sup_g = 0;
  double residual = 0;  // |F(lambda; a)| seen by the index sweeps
};

struct IndexOptions {
  // Largest |F(lambda; a)| / max(1, |g|) accepted as "lambda is an eigenvalue".
  double residual_tol = 1e-5;
};

namespace detail {

template <class Real>
Real window_right(const EffectiveProblem& prob, std::complex<Real> zt, const SolverConfig& cfg) {
  return cfg.x_plus > 0 ? static_cast<Real>(cfg.x_plus) : default_x_plus<Real>(prob, zt);
}

template <class Real>
Real window_left(Real xp, const SolverConfig& cfg) {
  return cfg.x_minus < 0 ? static_cast<Real>(cfg.x_minus) : -xp;
}

// Start of the left sweep for a half-line parity problem.  The odd start
// is shifted off the origin, where g has a simple pole: f ~ x gives
// w ~ x and h ~ k ~ x/3.
template <class Real>
Real parity_start(Parity parity, Real a) {
  return parity == Parity::OddDirichlet ? std::min(Real(1e-6), a / 2) : Real(0);
}

}  // namespace detail

namespace detail {

// Sweeps one side of the matching point carrying the given companions
// (sources already signed for the side, zero initial data).  The odd
// half-line start at x0 uses q(x0) ~ s(0) x0 / 3 from f ~ x.
template <class Real>
SweepResult<Real> sweep_to_a(const EffectiveProblem& prob, Parity parity, std::complex<Real> z_eff, Side side,
                             Real a, const SolverConfig& cfg, SweepOptions<Real> opt) {
  const Real xp = window_right<Real>(prob, z_eff, cfg);
  if (!(a < xp)) throw Error(ErrorCode::WindowExceeded, "matching point beyond the window");
  if (side == Side::RightOfA)
    return sweep<Real>(prob, z_eff, xp, a, right_admissible<Real>(prob, z_eff, xp, cfg), cfg, opt);
  if (parity == Parity::WholeLine) {
    const Real xm = window_left<Real>(xp, cfg);
    if (!(xm < a)) throw Error(ErrorCode::WindowExceeded, "matching point left of the window");
    return sweep<Real>(prob, z_eff, xm, a, left_admissible<Real>(prob, z_eff, xm, cfg), cfg, opt);
  }
  if (a < 0) throw Error(ErrorCode::WindowExceeded, "matching point must be >= 0 on the half line");
  if (parity == Parity::OddDirichlet && a == Real(0))
    throw Error(ErrorCode::WindowExceeded, "odd eigenfunctions vanish at the origin; choose a > 0");
  if (a == Real(0)) {
    SweepResult<Real> r;
    r.end.transfer = origin_state<Real>(parity);
    return r;
  }
  const Real x0 = parity_start<Real>(parity, a);
  TransferState<Real> init = origin_state<Real>(parity);
  if (x0 > 0) {
    init.value = x0;
    for (auto& c : opt.companions) c.init = c.source(Real(0)) * (x0 / 3);
  }
  return sweep<Real>(prob, z_eff, x0, a, init, cfg, opt);
}

// |u_l v_r - v_l u_r| relative to the sizes of both sides.
template <class Real>
Real relative_cross(const TransferState<Real>& left, const TransferState<Real>& right) {
  std::complex<Real> ul, vl, ur, vr;
  amplitude_pair(left, ul, vl);
  amplitude_pair(right, ur, vr);
  const Real norm_l = std::max(std::abs(ul), std::abs(vl));
  const Real norm_r = std::max(std::abs(ur), std::abs(vr));
  return std::abs(ul * vr - vl * ur) / (norm_l * norm_r);
}

}  // namespace detail

/// h and k at the matching point from one side of it, for internal
/// eigenvalue z_eff.
template <class Real = double>
HK<Real> integrate_hk(const EffectiveProblem& prob, Parity parity, std::complex<Real> z_eff, Side side, Real a,
                      const SolverConfig& cfg) {
  using C = std::complex<Real>;
  const Real s = side == Side::RightOfA ? Real(-1) : Real(1);
  SweepOptions<Real> opt;
  opt.companions.push_back({CompanionKind::Complex, [s](Real) { return C(s); }, C(0)});
  opt.companions.push_back({CompanionKind::Modulus, [s](Real) { return C(s); }, C(0)});
  const auto r = detail::sweep_to_a<Real>(prob, parity, z_eff, side, a, cfg, opt);
  HK<Real> out;
  out.h = r.end.companions[0].direct();
  out.k = r.end.companions[1].direct().real();
  out.sup_g = r.sup_g;
  out.transfer = r.end.transfer;
  out.h_switches = r.end.companions[0].switches;
  return out;
}

/// Matching point for the index: JWKB estimate of argmax |f| for
/// harmonic-type problems with nonreal coupling, otherwise a scan of |f|.
template <class Real = double>
Real index_matching_point(const EffectiveProblem& prob, Parity parity, std::complex<Real> lambda,
                          const SolverConfig& cfg) {
  if (prob.harmonic_like() && prob.c_eff().imag() != 0) {
    const Real a = default_matching_point<Real>(prob, parity, lambda);
    if (a > 0 || parity != Parity::OddDirichlet) return a;
  }
  // Scan log|f| of the solution decaying at +infinity, integrated from the
  // right end towards the origin (the stable direction).
  const std::complex<Real> zt = to<Real>(prob.zmul()) * lambda;
  const Real xp = detail::window_right<Real>(prob, zt, cfg);
  SweepOptions<Real> opt;
  opt.log_amplitude = true;
  const int n = 400;
  for (int i = n - 1; i >= 1; --i) opt.outputs.push_back(xp * Real(i) / Real(n));
  const auto r = sweep<Real>(prob, zt, xp, Real(0), right_admissible<Real>(prob, zt, xp, cfg), cfg, opt);
  Real best = -std::numeric_limits<Real>::infinity();
  Real a = xp / Real(n);
  for (std::size_t i = 0; i < r.outputs.size(); ++i) {
    const Real lf = r.outputs[i].log_f.real();
    if (lf > best) {
      best = lf;
      a = opt.outputs[i];
    }
  }
  if (parity == Parity::EvenNeumann && r.end.log_f.real() >= best) return Real(0);
  return a;
}

/// kappa(lambda) for a refined eigenvalue lambda (user frame).  Pass
/// a = NaN for the automatic matching point.
template <class Real = double>
IndexResult<Real> instability_index(const EffectiveProblem& prob, Parity parity, std::complex<Real> lambda, Real a,
                                    const SolverConfig& cfg, const IndexOptions& iopt = {}) {
  using C = std::complex<Real>;
  if (parity != Parity::WholeLine && !prob.parity_allowed())
    throw Error(ErrorCode::ParityMismatch, "potential is not even");
  const C zt = to<Real>(prob.zmul()) * lambda;
  SolverConfig wcfg = cfg;
  const Real xp = detail::window_right<Real>(prob, zt, cfg);
  wcfg.x_plus = static_cast<double>(xp);
  if (!std::isfinite(static_cast<double>(a))) {
    a = std::isfinite(cfg.a) ? static_cast<Real>(cfg.a) : index_matching_point<Real>(prob, parity, lambda, wcfg);
  }
  const auto left = integrate_hk<Real>(prob, parity, zt, Side::LeftOfA, a, wcfg);
  const auto right = integrate_hk<Real>(prob, parity, zt, Side::RightOfA, a, wcfg);

  const Real rel = detail::relative_cross<Real>(left.transfer, right.transfer);
  if (!(rel <= static_cast<Real>(iopt.residual_tol)))
    throw Error(ErrorCode::NotAnEigenvalue, "lambda does not satisfy the matching condition");

  IndexResult<Real> res;
  res.h_left = left.h;
  res.h_right = right.h;
  res.k_left = left.k;
  res.k_right = right.k;
  res.x_plus = static_cast<double>(xp);
  res.x_minus = parity == Parity::WholeLine ? static_cast<double>(detail::window_left<Real>(xp, wcfg)) : 0.0;
  res.a_used = static_cast<double>(a);
  res.sup_g = std::max(left.sup_g, right.sup_g);
  res.residual = static_cast<double>(rel);
  const Real den = std::abs(res.h_left + res.h_right);
  const Real num = res.k_left + res.k_right;
  if (!(den > std::numeric_limits<Real>::min() * num) || den == Real(0))
    throw Error(ErrorCode::DenominatorUnderflow, "|h_- + h_+| underflows; use the high-precision oracle");
  res.kappa = num / den;
  return res;
}

/// kappa |F'(lambda)| sup|g|, bounded below by 1 when g is bounded.
inline double derivative_bound_product(double kappa, cplx f_prime, double sup_g) { return kappa * std::abs(f_prime) * sup_g; }

/// Eigenfunction values at xs, normalised by f(a) = 1.  Half-line problems
/// accept negative xs and extend by parity.
template <class Real = double>
std::vector<std::complex<Real>> recover_eigenfunction(const EffectiveProblem& prob, Parity parity,
                                                      std::complex<Real> lambda, const std::vector<Real>& xs, Real a,
                                                      const SolverConfig& cfg) {
  using C = std::complex<Real>;
  const C zt = to<Real>(prob.zmul()) * lambda;
  const Real xp = detail::window_right<Real>(prob, zt, cfg);
  const Real xm = parity == Parity::WholeLine ? detail::window_left<Real>(xp, cfg) : -xp;
  if (!std::isfinite(static_cast<double>(a))) a = index_matching_point<Real>(prob, parity, lambda, cfg);
  if (!(a < xp) || !(a > xm)) throw Error(ErrorCode::WindowExceeded, "matching point outside the window");

  std::vector<C> out(xs.size());
  // Map each abscissa to the integration variable and a parity sign.
  std::vector<Real> u(xs.size());
  std::vector<Real> sign(xs.size(), Real(1));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > xp || xs[i] < xm) throw Error(ErrorCode::WindowExceeded, "abscissa outside the window");
    u[i] = xs[i];
    if (parity != Parity::WholeLine && xs[i] < 0) {
      u[i] = -xs[i];
      if (parity == Parity::OddDirichlet) sign[i] = -1;
    }
  }

  auto collect = [&](bool right_side) {
    std::vector<std::pair<Real, std::size_t>> pts;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (right_side ? u[i] >= a : u[i] < a) pts.push_back({u[i], i});
    return pts;
  };

  SweepOptions<Real> opt;
  opt.log_amplitude = true;
  // Right of a: from X_+ down to a, outputs in decreasing order.
  {
    auto pts = collect(true);
    std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    opt.outputs.clear();
    for (const auto& p : pts) opt.outputs.push_back(p.first);
    const auto r = sweep<Real>(prob, zt, xp, a, right_admissible<Real>(prob, zt, xp, cfg), cfg, opt);
    for (std::size_t j = 0; j < pts.size(); ++j) out[pts[j].second] = std::exp(r.outputs[j].log_f - r.end.log_f);
  }
  // Left of a: from the origin (or X_-) up to a.
  {
    auto pts = collect(false);
    if (!pts.empty()) {
      std::sort(pts.begin(), pts.end());
      opt.outputs.clear();
      Real x0;
      TransferState<Real> init;
      if (parity == Parity::WholeLine) {
        x0 = xm;
        init = left_admissible<Real>(prob, zt, xm, cfg);
      } else {
        x0 = 0;
        init = origin_state<Real>(parity);
      }
      for (const auto& p : pts) opt.outputs.push_back(p.first);
      const auto r = sweep<Real>(prob, zt, x0, a, init, cfg, opt);
      for (std::size_t j = 0; j < pts.size(); ++j) {
        out[pts[j].second] = r.outputs[j].log_f.real() == -std::numeric_limits<Real>::infinity()
                                 ? C(0)
                                 : std::exp(r.outputs[j].log_f - r.end.log_f);
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= sign[i];
  return out;
}

}  // namespace spectral

#endif  // SPECTRAL_INDEX_HPP_
