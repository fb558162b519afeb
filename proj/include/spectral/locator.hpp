#ifndef SPECTRAL_LOCATOR_HPP_
#define SPECTRAL_LOCATOR_HPP_

// Matching function F(z; a) = g_+(a) - g_-(a) (or g_+(a) - g_0(a) on the
// half line), argument-principle counting, eigenvalue refinement and
// z-plane grids.
//
// Each side of the match is carried as f = A u, f' = A v with A the
// tracked amplitude and (u, v) = (1, g) or (w, 1) depending on the
// representation.  Then
//
//   F = (u_l v_r - v_l u_r) / (u_l u_r),    D = A_l A_r (u_l v_r - v_l u_r)
//
// where D is the Wronskian of the two normalised solutions.  F has poles
// at the Dirichlet eigenvalues of the two split problems; D is pole-free
// and vanishes exactly at the eigenvalues, so localisation counts zeros
// of D while F remains the reported matching function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/parallel.hpp"
#include "spectral/potentials.hpp"
#include "spectral/riccati.hpp"

namespace spectral {

template <class Real = double>
struct FValue {
  std::complex<Real> value{};   // F(z; a), possibly infinite at a pole
  bool near_pole = false;       // both sides arrived in reciprocal form
  std::complex<Real> cross{};   // u_l v_r - v_l u_r
  std::complex<Real> log_amp{}; // log A_l + log A_r
  TransferState<Real> right, left;
  double sup_g = 0;
  long steps = 0;
  int switches = 0;
  Real x_plus = 0;

  // Phase of the pole-free Wronskian D.
  Real wronskian_phase() const { return log_amp.imag() + std::arg(cross); }
};

template <class Real = double>
struct EigenResult {
  std::complex<Real> lambda{};  // user frame
  double residual = 0;          // |F(lambda; a)|
  std::complex<Real> f_prime{}; // dF/dz_eff at lambda
  double a_used = 0;
  int iterations = 0;
  double x_plus = 0;
};

struct Rect {
  double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;

  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  double diameter() const { return std::hypot(width(), height()); }
  cplx center() const { return {(re_lo + re_hi) / 2, (im_lo + im_hi) / 2}; }
  bool contains(cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
  bool valid() const { return re_hi > re_lo && im_hi > im_lo; }
};

enum class WindingTarget { MatchingFunction, Wronskian };

struct WindingReport {
  Rect rect;
  int count = 0;             // zeros - poles (F) or zeros (Wronskian)
  double max_phase_jump = 0;
  double total_phase = 0;
  int evaluations = 0;
};

struct LocalizedBox {
  Rect rect;
  int count = 0;  // +1 for an isolated eigenvalue, >= 2 for an unresolved cluster
  double a = 0;
};

struct GridNode {
  cplx z;
  cplx f;
  bool ok = false;
};

struct ContourGrid {
  double re_lo = 0, re_hi = 0;
  int nx = 0;
  double im_lo = 0, im_hi = 0;
  int ny = 0;
  double a_used = 0;
  std::vector<GridNode> nodes;  // row-major, re fastest
};

namespace detail {

template <class Real>
void amplitude_pair(const TransferState<Real>& s, std::complex<Real>& u, std::complex<Real>& v) {
  if (s.repr == Repr::Direct) {
    u = 1;
    v = s.value;
  } else {
    u = s.value;
    v = 1;
  }
}

}  // namespace detail

/// Window used for a whole region: the default for the largest |z| in it.
template <class Real = double>
Real region_x_plus(const EffectiveProblem& prob, const std::vector<std::complex<Real>>& zs, const SolverConfig& cfg) {
  if (cfg.x_plus > 0) return static_cast<Real>(cfg.x_plus);
  Real xp = 0;
  for (const auto& z : zs) xp = std::max(xp, default_x_plus<Real>(prob, to<Real>(prob.zmul()) * z));
  return xp;
}

template <class Real = double>
FValue<Real> f_value(const EffectiveProblem& prob, Parity parity, std::complex<Real> z, Real a,
                     const SolverConfig& cfg) {
  using C = std::complex<Real>;
  const C zt = to<Real>(prob.zmul()) * z;
  const Real xp = cfg.x_plus > 0 ? static_cast<Real>(cfg.x_plus) : default_x_plus<Real>(prob, zt);
  if (!(a < xp)) throw Error(ErrorCode::WindowExceeded, "matching point beyond the right window edge");

  SweepOptions<Real> opt;
  opt.log_amplitude = true;

  FValue<Real> out;
  out.x_plus = xp;
  const auto rinit = right_admissible<Real>(prob, zt, xp, cfg);
  const auto rr = sweep<Real>(prob, zt, xp, a, rinit, cfg, opt);

  SweepResult<Real> lr;
  if (parity == Parity::WholeLine) {
    const Real xm = cfg.x_minus < 0 ? static_cast<Real>(cfg.x_minus) : -xp;
    if (!(xm < a)) throw Error(ErrorCode::WindowExceeded, "matching point left of the window");
    const auto linit = left_admissible<Real>(prob, zt, xm, cfg);
    lr = sweep<Real>(prob, zt, xm, a, linit, cfg, opt);
  } else {
    if (!prob.parity_allowed()) throw Error(ErrorCode::ParityMismatch, "potential is not even");
    if (a < 0) throw Error(ErrorCode::WindowExceeded, "matching point must be >= 0 on the half line");
    const auto linit = origin_state<Real>(parity);
    if (a == Real(0)) {
      lr.end.transfer = linit;
    } else {
      lr = sweep<Real>(prob, zt, Real(0), a, linit, cfg, opt);
    }
  }

  out.right = rr.end.transfer;
  out.left = lr.end.transfer;
  out.sup_g = std::max(rr.sup_g, lr.sup_g);
  out.steps = rr.stats.accepted + lr.stats.accepted;
  out.switches = rr.switches + lr.switches;

  C ul, vl, ur, vr;
  detail::amplitude_pair(out.left, ul, vl);
  detail::amplitude_pair(out.right, ur, vr);
  out.cross = ul * vr - vl * ur;
  out.log_amp = lr.end.log_a + rr.end.log_a;

  const Real thr_inv = Real(1) / static_cast<Real>(cfg.switch_threshold);
  if (parity == Parity::OddDirichlet && a == Real(0)) {
    // g_0 is infinite at the Dirichlet point: use the reciprocal difference
    // w_0(0) - w_+(0) = -w_+(0), whose zeros are the odd eigenvalues.
    out.value = vr == C(0) ? C(std::numeric_limits<Real>::infinity()) : -ur / vr;
    return out;
  }
  const C den = ul * ur;
  out.near_pole = out.left.repr == Repr::Inverse && out.right.repr == Repr::Inverse &&
                  std::abs(ul) < thr_inv && std::abs(ur) < thr_inv;
  out.value = den == C(0) ? C(std::numeric_limits<Real>::infinity()) : out.cross / den;
  return out;
}

/// Matching point used when none is given: the JWKB location of max |f|
/// of the small-x oscillator veff ~ c0 x^2 when c0 is nonreal.  For real
/// c0 the half-line problems match at the origin; on the whole line the
/// origin is a node of every odd level, so the turning point is used.
template <class Real = double>
Real default_matching_point(const EffectiveProblem& prob, Parity parity, std::complex<Real> z) {
  const cplx c0 = prob.origin_c();
  const cplx zt = prob.zmul() * cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  double a2 = 0;
  if (c0.imag() != 0)
    a2 = zt.imag() / c0.imag();
  else if (parity == Parity::WholeLine && c0.real() > 0)
    a2 = zt.real() / c0.real();
  if (a2 > 0) {
    double a = std::sqrt(a2);
    if (const auto* d = std::get_if<DilatedGaussian>(&prob.spec())) a = std::min(a, d->b / 2);
    return static_cast<Real>(a);
  }
  return Real(0);
}

namespace detail {

template <class Real>
Real resolve_a(const EffectiveProblem& prob, Parity parity, std::complex<Real> z, Real a, const SolverConfig& cfg) {
  if (std::isfinite(static_cast<double>(a))) return a;
  if (std::isfinite(cfg.a)) return static_cast<Real>(cfg.a);
  return default_matching_point<Real>(prob, parity, z);
}

}  // namespace detail

/// Complex secant iteration for a zero of F(.; a) started from z0.
/// Pass a = NaN to use cfg.a or the default matching point.
template <class Real = double>
EigenResult<Real> refine_eigenvalue(const EffectiveProblem& prob, Parity parity, std::complex<Real> z0, Real a,
                                    const SolverConfig& cfg, int max_iter = 60) {
  using C = std::complex<Real>;
  a = detail::resolve_a<Real>(prob, parity, z0, a, cfg);
  // Fix the window once so that every iterate sees the same function.
  SolverConfig wcfg = cfg;
  if (!(wcfg.x_plus > 0)) {
    const Real r = std::abs(z0) * Real(1.05) + Real(1);
    wcfg.x_plus = static_cast<double>(std::max(default_x_plus<Real>(prob, to<Real>(prob.zmul()) * z0),
                                               default_x_plus<Real>(prob, to<Real>(prob.zmul()) * C(r))));
  }
  auto F = [&](C z) { return f_value<Real>(prob, parity, z, a, wcfg); };

  C z_prev = z0;
  C z = z0 == C(0) ? C(Real(1e-4)) : z0 * (Real(1) + Real(1e-4));
  auto fv_prev = F(z_prev);
  auto fv = F(z);
  if (std::abs(fv_prev.value) < std::abs(fv.value)) {
    std::swap(z, z_prev);
    std::swap(fv, fv_prev);
  }
  // Convergence scale: |F| relative to the local slope times |z|, so the
  // test reads as a relative step bound even when F' is exponentially small.
  int grow = 0;
  int stall = 0;
  C z_best = z;
  auto fv_best = fv;
  int it = 0;
  bool done = false;
  for (; it < max_iter && !done; ++it) {
    const C df = fv.value - fv_prev.value;
    if (df == C(0) || !std::isfinite(std::abs(df))) break;
    const C slope = df / (z - z_prev);
    const Real fabs = std::abs(fv.value);
    const Real scale = std::abs(slope) * std::max(Real(1), std::abs(z)) * Real(1e-2);
    if (std::isfinite(fabs) && fabs < Real(1e-10) * scale) break;
    C step = fv.value / slope;
    // Damp wild secant steps.
    const Real lim = Real(0.5) * std::max(Real(1), std::abs(z));
    if (std::abs(step) > lim) step *= lim / std::abs(step);
    z_prev = z;
    fv_prev = fv;
    z = z - step;
    fv = F(z);
    const Real fnew = std::abs(fv.value);
    if (fnew > std::abs(fv_prev.value)) {
      if (++grow >= 6 && fnew > Real(1e6) * std::abs(fv_best.value))
        throw Error(ErrorCode::SuspectedPole, "|F| grows monotonically during refinement");
    } else {
      grow = 0;
    }
    if (fnew < Real(0.5) * std::abs(fv_best.value)) {
      stall = 0;
    } else if (++stall >= 8 && std::abs(z - z_best) < Real(1e-6) * std::max(Real(1), std::abs(z))) {
      // Iterates circle the working-precision floor of F: keep the best one.
      done = true;
    }
    if (fnew <= std::abs(fv_best.value)) {
      z_best = z;
      fv_best = fv;
    }
    if (std::abs(step) < Real(1e-12) * std::max(Real(1), std::abs(z))) done = true;
  }
  if (!done && it >= max_iter) throw Error(ErrorCode::NoConvergence, "secant iteration did not converge");
  z = z_best;
  fv = fv_best;

  EigenResult<Real> res;
  res.lambda = z;
  res.residual = static_cast<double>(std::abs(fv.value));
  res.a_used = static_cast<double>(a);
  res.iterations = it;
  res.x_plus = wcfg.x_plus;
  const Real h = Real(1e-6) * std::max(Real(1), std::abs(z));
  const C zm = to<Real>(prob.zmul());
  const C fp = F(z + h / zm).value;
  const C fm = F(z - h / zm).value;
  res.f_prime = (fp - fm) / (Real(2) * h);
  return res;
}

namespace detail {

// F (or Wronskian phase) evaluations along a contour, memoised by z.
class ContourEvaluator {
 public:
  ContourEvaluator(const EffectiveProblem& prob, Parity parity, double a, const SolverConfig& cfg,
                   WindingTarget target)
      : prob_(prob), parity_(parity), a_(a), cfg_(cfg), target_(target) {}

  // Returns a unit phasor e^{i phase}; throws when F vanishes or blows up.
  cplx phasor(cplx z) {
    const auto key = std::make_pair(z.real(), z.imag());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto fv = f_value<double>(prob_, parity_, z, a_, cfg_);
    ++evaluations_;
    double ph;
    if (target_ == WindingTarget::Wronskian) {
      if (fv.cross == cplx(0) || !std::isfinite(std::abs(fv.cross)))
        throw Error(ErrorCode::PhaseResolutionFailure, "Wronskian vanishes on the contour");
      ph = fv.wronskian_phase();
    } else {
      const double m = std::abs(fv.value);
      if (m == 0 || !std::isfinite(m))
        throw Error(ErrorCode::PhaseResolutionFailure, "F vanishes or is singular on the contour");
      ph = std::arg(fv.value);
    }
    const cplx u = std::polar(1.0, ph);
    cache_.emplace(key, u);
    return u;
  }

  int evaluations() const { return evaluations_; }
  const EffectiveProblem& problem() const { return prob_; }

 private:
  const EffectiveProblem& prob_;
  Parity parity_;
  double a_;
  SolverConfig cfg_;
  WindingTarget target_;
  std::map<std::pair<double, double>, cplx> cache_;
  int evaluations_ = 0;
};

// Positively oriented polygon boundary (vertices without repetition).
inline WindingReport winding_with(ContourEvaluator& ev, const std::vector<cplx>& poly, int max_evaluations) {
  if (poly.size() < 3) throw Error(ErrorCode::InvalidSpec, "degenerate contour");
  const int n0 = 16;
  std::vector<cplx> pts;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const cplx p0 = poly[e], p1 = poly[(e + 1) % poly.size()];
    for (int k = 0; k < n0; ++k) pts.push_back(p0 + (p1 - p0) * (double(k) / n0));
  }
  pts.push_back(poly[0]);

  WindingReport rep;
  const int start_evals = ev.evaluations();
  double total = 0;
  double max_jump = 0;
  // Depth-first adaptive bisection of every boundary segment.
  struct Seg {
    cplx z0, z1;
    cplx u0, u1;
    int depth;
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    std::vector<Seg> stack{{pts[i], pts[i + 1], ev.phasor(pts[i]), ev.phasor(pts[i + 1]), 0}};
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      const double jump = std::arg(s.u1 / s.u0);
      if (std::abs(jump) < std::numbers::pi / 2) {
        total += jump;
        max_jump = std::max(max_jump, std::abs(jump));
        continue;
      }
      if (s.depth > 40 || ev.evaluations() - start_evals > max_evaluations)
        throw Error(ErrorCode::PhaseResolutionFailure, "phase could not be resolved along the contour");
      const cplx zm = (s.z0 + s.z1) / 2.0;
      const cplx um = ev.phasor(zm);
      // Push second half first so that the first half is processed first.
      stack.push_back({zm, s.z1, um, s.u1, s.depth + 1});
      stack.push_back({s.z0, zm, s.u0, um, s.depth + 1});
    }
  }
  rep.total_phase = total;
  rep.count = static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
  if (std::abs(total / (2 * std::numbers::pi) - rep.count) > 0.25)
    throw Error(ErrorCode::PhaseResolutionFailure, "winding total is not close to an integer");
  rep.max_phase_jump = max_jump;
  rep.evaluations = ev.evaluations() - start_evals;
  return rep;
}

inline std::vector<cplx> rect_polygon(const Rect& r) {
  return {{r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi}};
}

inline WindingReport winding_with(ContourEvaluator& ev, const Rect& rect, int max_evaluations) {
  if (!rect.valid()) throw Error(ErrorCode::InvalidSpec, "degenerate rectangle");
  auto rep = winding_with(ev, rect_polygon(rect), max_evaluations);
  rep.rect = rect;
  return rep;
}

// Sutherland-Hodgman clip of a convex polygon to {Im(rot z) >= margin}.
inline std::vector<cplx> clip_half_plane(const std::vector<cplx>& poly, cplx rot, double margin) {
  std::vector<cplx> out;
  auto h = [&](cplx z) { return (rot * z).imag() - margin; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const cplx p = poly[i], q = poly[(i + 1) % poly.size()];
    const double hp = h(p), hq = h(q);
    if (hp >= 0) out.push_back(p);
    if ((hp >= 0) != (hq >= 0)) out.push_back(p + (q - p) * (hp / (hp - hq)));
  }
  return out;
}

inline Rect bounding_rect(const std::vector<cplx>& poly) {
  Rect r{poly[0].real(), poly[0].real(), poly[0].imag(), poly[0].imag()};
  for (const auto& p : poly) {
    r.re_lo = std::min(r.re_lo, p.real());
    r.re_hi = std::max(r.re_hi, p.real());
    r.im_lo = std::min(r.im_lo, p.imag());
    r.im_hi = std::max(r.im_hi, p.imag());
  }
  return r;
}

}  // namespace detail

/// Argument-principle count over the positively oriented boundary of rect
/// (user frame).  MatchingFunction counts zeros - poles of F(.; a);
/// Wronskian counts eigenvalues only.
inline WindingReport winding_number(const EffectiveProblem& prob, Parity parity, const Rect& rect, double a,
                                    const SolverConfig& cfg,
                                    WindingTarget target = WindingTarget::MatchingFunction,
                                    int max_evaluations = 20000) {
  SolverConfig wcfg = cfg;
  const cplx corners[4] = {{rect.re_lo, rect.im_lo}, {rect.re_hi, rect.im_lo}, {rect.re_hi, rect.im_hi},
                           {rect.re_lo, rect.im_hi}};
  wcfg.x_plus = region_x_plus<double>(prob, {corners[0], corners[1], corners[2], corners[3]}, cfg);
  detail::ContourEvaluator ev(prob, parity, a, wcfg, target);
  return detail::winding_with(ev, rect, max_evaluations);
}

/// Part of a rectangle (user frame) where eigenvalues are sought: for
/// decaying problems the rectangle is cut `margin` above the line through
/// the essential-spectrum ray zmul^{-1} [0, inf); zeros below it belong to
/// growing solutions.  Empty when nothing is left.
inline std::vector<cplx> search_region(const EffectiveProblem& prob, const Rect& r, double margin = 1e-3) {
  auto poly = detail::rect_polygon(r);
  if (prob.harmonic_like()) return poly;
  poly = detail::clip_half_plane(poly, prob.zmul(), margin);
  if (poly.size() < 3) return {};
  const Rect bb = detail::bounding_rect(poly);
  if (!(bb.width() > 1e-3 * margin) || !(bb.height() > 1e-3 * margin)) return {};
  return poly;
}

/// Recursive quad-subdivision down to boxes of diameter < tol, each holding
/// exactly one eigenvalue (count >= 2 flags an unresolved cluster).  Counting
/// uses the pole-free Wronskian over search_region() of each box with the
/// first matching point; the others are fallbacks when a contour cannot be
/// resolved (a zero sitting on it).
inline std::vector<LocalizedBox> localize_eigenvalues(const EffectiveProblem& prob, Parity parity, const Rect& rect,
                                                      const std::vector<double>& a_list, const SolverConfig& cfg,
                                                      double localize_tol = 0) {
  if (a_list.empty()) throw Error(ErrorCode::InvalidSpec, "a_list must be nonempty");
  if (!rect.valid()) throw Error(ErrorCode::InvalidSpec, "degenerate rectangle");
  if (!(localize_tol > 0)) localize_tol = std::max(1e-2 * rect.diameter(), 1e-3);
  std::vector<LocalizedBox> out;

  SolverConfig wcfg = cfg;
  wcfg.x_plus = region_x_plus<double>(prob,
                                      {cplx(rect.re_lo, rect.im_lo), cplx(rect.re_hi, rect.im_lo),
                                       cplx(rect.re_hi, rect.im_hi), cplx(rect.re_lo, rect.im_hi)},
                                      cfg);
  std::vector<detail::ContourEvaluator> evs;
  evs.reserve(a_list.size());
  for (double a : a_list) evs.emplace_back(prob, parity, a, wcfg, WindingTarget::Wronskian);

  auto count_poly = [&](const std::vector<cplx>& poly, double& a_used) -> std::optional<int> {
    for (std::size_t i = 0; i < evs.size(); ++i) {
      try {
        a_used = a_list[i];
        return detail::winding_with(evs[i], poly, 20000).count;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PhaseResolutionFailure) throw;
      }
    }
    return std::nullopt;
  };

  std::vector<Rect> stack{rect};
  while (!stack.empty()) {
    Rect r = stack.back();
    stack.pop_back();
    auto poly = search_region(prob, r);
    if (poly.empty()) continue;
    double a_used = a_list.front();
    auto c = count_poly(poly, a_used);
    if (!c) {
      // Shift the box slightly and retry once.
      const double dx = 0.7e-3 * r.diameter(), dy = 0.9e-3 * r.diameter();
      r.re_lo += dx; r.re_hi += dx; r.im_lo += dy; r.im_hi += dy;
      poly = search_region(prob, r);
      if (!poly.empty()) c = count_poly(poly, a_used);
      if (!c) throw Error(ErrorCode::PhaseResolutionFailure, "could not count zeros in a box");
    }
    if (*c <= 0) continue;
    const Rect bb = detail::bounding_rect(poly);
    if (bb.diameter() < localize_tol) {
      out.push_back({bb, *c, a_used});
      continue;
    }
    // off-centre split
    const cplx m(bb.re_lo + 0.4817 * bb.width(), bb.im_lo + 0.5263 * bb.height());
    stack.push_back({bb.re_lo, m.real(), bb.im_lo, m.imag()});
    stack.push_back({m.real(), bb.re_hi, bb.im_lo, m.imag()});
    stack.push_back({m.real(), bb.re_hi, m.imag(), bb.im_hi});
    stack.push_back({bb.re_lo, m.real(), m.imag(), bb.im_hi});
  }
  std::sort(out.begin(), out.end(), [](const LocalizedBox& l, const LocalizedBox& r) {
    const cplx a = l.rect.center(), b = r.rect.center();
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

/// F on an nx-by-ny node grid; nodes where the transfer integration fails
/// are flagged (ok = false) and written as NaN.
inline ContourGrid grid_map(const EffectiveProblem& prob, Parity parity, const Rect& rect, int nx, int ny, double a,
                            const SolverConfig& cfg, unsigned workers = 0) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidSpec, "grid needs at least 2x2 nodes");
  ContourGrid g;
  g.re_lo = rect.re_lo;
  g.re_hi = rect.re_hi;
  g.im_lo = rect.im_lo;
  g.im_hi = rect.im_hi;
  g.nx = nx;
  g.ny = ny;
  g.a_used = a;
  g.nodes.resize(static_cast<std::size_t>(nx) * ny);
  SolverConfig wcfg = cfg;
  const cplx corners[4] = {{rect.re_lo, rect.im_lo}, {rect.re_hi, rect.im_lo}, {rect.re_hi, rect.im_hi},
                           {rect.re_lo, rect.im_hi}};
  wcfg.x_plus = region_x_plus<double>(prob, {corners[0], corners[1], corners[2], corners[3]}, cfg);
  parallel_for(g.nodes.size(), workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % nx);
    const int j = static_cast<int>(idx / nx);
    const cplx z(rect.re_lo + (rect.re_hi - rect.re_lo) * i / (nx - 1),
                 rect.im_lo + (rect.im_hi - rect.im_lo) * j / (ny - 1));
    GridNode node{z, cplx(std::nan(""), std::nan("")), false};
    try {
      const auto fv = f_value<double>(prob, parity, z, a, wcfg);
      if (std::isfinite(std::abs(fv.value))) {
        node.f = fv.value;
        node.ok = true;
      }
    } catch (const Error&) {
    }
    g.nodes[idx] = node;
  });
  return g;
}

}  // namespace spectral

#endif  // SPECTRAL_LOCATOR_HPP_
