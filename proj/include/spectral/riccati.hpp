#ifndef SPECTRAL_RICCATI_HPP_
#define SPECTRAL_RICCATI_HPP_

// Transfer functions g = f'/f of the reduced equation f'' = (veff - z) f.
//
// A sweep integrates the Riccati equation g' = veff - z - g^2 along a
// segment, carrying the value on the Riemann sphere: whenever |g| passes
// the switch threshold the reciprocal w = 1/g (w' = 1 - (veff - z) w^2) is
// integrated instead.  For harmonic-type tails and |x| >= 1 the rescaled
// variable alpha = g / (sqrt(c) x) (and its reciprocal beta) is used, which
// stays O(1) where g itself grows linearly.
//
// A sweep can also carry a log-amplitude (log f, or log f' while the
// reciprocal form is active) and up to three "companions" of the form
//
//   q' = s(x) - 2 g q        (complex)      or   k' = s(x) - 2 Re(g) k   (real)
//
// which is the structure shared by the instability-index integrals and the
// first-order perturbation integrals: q = int s f^2 / f^2.  While the
// reciprocal form is active the companion is carried as r = q w^2
// = int s f^2 / f'^2 instead, with
//
//   r' = s w^2 - 2 (veff - z) w r     (|w|^2 and Re((veff - z) w) for k)
//
// which stays well conditioned through zeros of f.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/potentials.hpp"
#include "spectral/rkm.hpp"

namespace spectral {

enum class Repr { Direct, Inverse };

template <class Real = double>
struct TransferState {
  Repr repr = Repr::Direct;
  std::complex<Real> value{};
  Real x = 0;

  // g itself; infinite when an Inverse state sits exactly on a zero of f.
  std::complex<Real> g() const {
    if (repr == Repr::Direct) return value;
    if (value == std::complex<Real>(0)) return {std::numeric_limits<Real>::infinity(), 0};
    return Real(1) / value;
  }
};

struct SolverConfig {
  double x_plus = 0;   // 0 selects the default window for each z
  double x_minus = 0;  // 0 means -x_plus (whole-line problems)
  double a = std::numeric_limits<double>::quiet_NaN();  // NaN: automatic matching point
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double switch_threshold = 10;
  long max_steps = 1'000'000;
  // Admissible harmonic condition: bound on the X^-4 term.  Errors in the
  // condition are damped exponentially by the leftward integration.
  double admissible_tol = 0.05;
};

template <class Real = double>
struct TransferTrajectory {
  TransferState<Real> endpoint;
  std::vector<TransferState<Real>> samples;
  double sup_g = 0;
  long steps = 0;
  int switches = 0;
};

enum class CompanionKind { Complex, Modulus };

template <class Real = double>
struct Companion {
  CompanionKind kind = CompanionKind::Complex;
  std::function<std::complex<Real>(Real)> source;
  std::complex<Real> init{};
};

template <class Real = double>
struct CompanionValue {
  bool prime_scaled = false;  // value = q w^2 (or k |w|^2) instead of q
  bool modulus = false;
  std::complex<Real> value{};
  std::complex<Real> w{};     // 1/g at the point, used when prime_scaled
  int switches = 0;

  std::complex<Real> direct() const {
    if (!prime_scaled) return value;
    const Real w2 = std::norm(w);
    if (w2 == Real(0)) return {std::numeric_limits<Real>::infinity(), 0};
    return modulus ? value / w2 : value / (w * w);
  }
};

inline constexpr std::size_t kMaxCompanions = 3;

template <class Real = double>
struct SweepOptions {
  std::vector<Companion<Real>> companions;
  bool log_amplitude = false;
  std::complex<Real> log_init{};   // log f (Direct start) or log f' (Inverse start)
  std::vector<Real> outputs;       // recorded in integration order
  bool record_samples = false;
};

template <class Real = double>
struct SweepPoint {
  TransferState<Real> transfer;
  std::complex<Real> log_f{};  // log f(x); -inf real part on an exact zero
  std::complex<Real> log_a{};  // tracked amplitude: log f (Direct) or log f' (Inverse)
  std::array<CompanionValue<Real>, kMaxCompanions> companions{};
};

template <class Real = double>
struct SweepResult {
  SweepPoint<Real> end;
  std::vector<SweepPoint<Real>> outputs;
  std::vector<TransferState<Real>> samples;
  double sup_g = 0;
  MersonStats stats;
  int switches = 0;
};

namespace detail {

enum class Form { G, W, Alpha, Beta };

template <class Real>
class Sweeper {
 public:
  using C = std::complex<Real>;
  static constexpr std::size_t N = 2 + kMaxCompanions;

  Sweeper(const EffectiveProblem& prob, C z, const SolverConfig& cfg, const SweepOptions<Real>& opt)
      : prob_(prob), z_(z), thr_(static_cast<Real>(cfg.switch_threshold)), opt_(opt) {
    harmonic_ = prob.harmonic_like();
    if (harmonic_) sc_ = principal_sqrt(to<Real>(prob.c_eff()));
    ncomp_ = opt.companions.size();
    if (ncomp_ > kMaxCompanions) throw Error(ErrorCode::InvalidSpec, "too many companions");
    ctl_.abs_tol = cfg.abs_tol;
    ctl_.rel_tol = cfg.rel_tol;
    ctl_.max_steps = cfg.max_steps;
  }

  SweepResult<Real> run(Real from, Real to, const TransferState<Real>& init) {
    SweepResult<Real> res;
    CState<Real, N> y{};
    form_ = init.repr == Repr::Direct ? Form::G : Form::W;
    y[0] = init.value;
    y[1] = opt_.log_amplitude ? opt_.log_init : C(0);
    for (std::size_t j = 0; j < ncomp_; ++j) {
      y[2 + j] = opt_.companions[j].init;
      comp_switches_[j] = 0;
      if (form_ == Form::W) y[2 + j] *= scale_to_prime(j, y[0]);
    }
    const std::size_t active = 2 + ncomp_;

    // Breakpoints: alpha/g handoff at |x| = 1, requested outputs, endpoint.
    const Real dir = to >= from ? Real(1) : Real(-1);
    std::vector<std::pair<Real, int>> marks;  // (x, tag) tag: 0 handoff, 1 output, 2 end
    if (harmonic_) {
      for (Real s : {Real(-1), Real(1)})
        if ((s - from) * dir > 0 && (to - s) * dir > 0) marks.push_back({s, 0});
    }
    for (std::size_t i = 0; i < opt_.outputs.size(); ++i) {
      const Real xo = opt_.outputs[i];
      if ((xo - from) * dir < 0 || (to - xo) * dir < 0)
        throw Error(ErrorCode::WindowExceeded, "output point outside the sweep segment");
      marks.push_back({xo, 1});
    }
    marks.push_back({to, 2});
    std::stable_sort(marks.begin(), marks.end(),
                     [dir](const auto& l, const auto& r) { return (l.first - r.first) * dir < 0; });

    Real x = from;
    Real h = 0;
    adjust_family(x, harmonic_ && std::abs(x + dir * Real(1e-3)) > Real(1), y);
    update_sup(x, y);
    if (opt_.record_samples) res.samples.push_back(public_state(x, y));

    auto after = [&](Real xs, CState<Real, N>& ys) {
      update_sup(xs, ys);
      switch_transfer(xs, ys);
      if (opt_.record_samples) res.samples.push_back(public_state(xs, ys));
    };

    for (const auto& [xm, tag] : marks) {
      if ((xm - x) * dir > 0) merson_integrate<Real, N>(*this, x, xm, y, active, h, ctl_, res.stats, after);
      x = xm;
      if (tag == 0) {
        // Entering or leaving the alpha region.
        adjust_family(x, std::abs(x + dir * Real(1e-3)) > Real(1), y);
      } else if (tag == 1) {
        res.outputs.push_back(point(x, y));
      }
    }
    res.end = point(to, y);
    res.sup_g = sup_g_;
    res.switches = switches_;
    return res;
  }

  // Right-hand side for the Merson driver.
  void operator()(Real x, const CState<Real, N>& y, CState<Real, N>& dy) const {
    const C q = prob_.veff<Real>(x) - z_;
    C g{};
    switch (form_) {
      case Form::G:
        dy[0] = q - y[0] * y[0];
        g = y[0];
        dy[1] = opt_.log_amplitude ? g : C(0);
        break;
      case Form::W:
        dy[0] = Real(1) - q * y[0] * y[0];
        dy[1] = opt_.log_amplitude ? q * y[0] : C(0);
        break;
      case Form::Alpha: {
        const C scx = sc_ * x;
        dy[0] = -scx * y[0] * y[0] - (sc_ * y[0] - q) / scx;
        g = scx * y[0];
        dy[1] = opt_.log_amplitude ? g : C(0);
        break;
      }
      case Form::Beta: {
        const C scx = sc_ * x;
        dy[0] = scx + (sc_ * y[0] - q * y[0] * y[0]) / scx;
        dy[1] = opt_.log_amplitude ? q * (y[0] / scx) : C(0);
        break;
      }
    }
    C w{};
    if (form_ == Form::W) w = y[0];
    if (form_ == Form::Beta) w = y[0] / (sc_ * x);
    const bool prime = form_ == Form::W || form_ == Form::Beta;
    for (std::size_t j = 0; j < ncomp_; ++j) {
      const auto& cp = opt_.companions[j];
      const C s = cp.source(x);
      const C v = y[2 + j];
      if (cp.kind == CompanionKind::Complex) {
        dy[2 + j] = prime ? s * w * w - Real(2) * q * w * v : s - Real(2) * g * v;
      } else {
        const Real vr = v.real();
        dy[2 + j] = prime ? C(s.real() * std::norm(w) - Real(2) * (q * w).real() * vr)
                          : C(s.real() - Real(2) * g.real() * vr);
      }
    }
  }

 private:
  bool alpha_family() const { return form_ == Form::Alpha || form_ == Form::Beta; }

  C current_g(Real x, const CState<Real, N>& y) const {
    switch (form_) {
      case Form::G: return y[0];
      case Form::W: return y[0] == C(0) ? C(std::numeric_limits<Real>::infinity()) : Real(1) / y[0];
      case Form::Alpha: return sc_ * x * y[0];
      case Form::Beta: return y[0] == C(0) ? C(std::numeric_limits<Real>::infinity()) : sc_ * x / y[0];
    }
    return {};
  }

  // Converts between the g-family and the alpha-family at x.
  void adjust_family(Real x, bool want_alpha, CState<Real, N>& y) {
    if (want_alpha == alpha_family()) return;
    const C scx = sc_ * x;
    switch (form_) {
      case Form::G: y[0] = y[0] / scx; form_ = Form::Alpha; break;
      case Form::W: y[0] = y[0] * scx; form_ = Form::Beta; break;
      case Form::Alpha: y[0] = y[0] * scx; form_ = Form::G; break;
      case Form::Beta: y[0] = y[0] / scx; form_ = Form::W; break;
    }
  }

  void update_sup(Real x, const CState<Real, N>& y) {
    if (form_ == Form::G || form_ == Form::Alpha) {
      const double gabs = static_cast<double>(std::abs(current_g(x, y)));
      sup_g_ = std::max(sup_g_, std::min(gabs, static_cast<double>(thr_)));
    }
  }

  void switch_transfer(Real x, CState<Real, N>& y) {
    if (!(std::abs(y[0]) > thr_)) return;
    const bool to_inverse = form_ == Form::G || form_ == Form::Alpha;
    if (opt_.log_amplitude) {
      // log f' = log f + log g ; log f = log f' + log w
      const C g = current_g(x, y);
      y[1] += to_inverse ? std::log(g) : -std::log(g);
    }
    // Companions follow the representation: r = q / g^2 going reciprocal,
    // q = r / w^2 coming back.
    const C t = current_g(x, y);
    for (std::size_t j = 0; j < ncomp_; ++j) {
      y[2 + j] *= scale_to_prime(j, to_inverse ? Real(1) / t : t);
      ++comp_switches_[j];
    }
    y[0] = Real(1) / y[0];
    switch (form_) {
      case Form::G: form_ = Form::W; break;
      case Form::W: form_ = Form::G; break;
      case Form::Alpha: form_ = Form::Beta; break;
      case Form::Beta: form_ = Form::Alpha; break;
    }
    ++switches_;
  }

  // Factor w^2 (|w|^2 for modulus companions) taking q to r.
  C scale_to_prime(std::size_t j, C w) const {
    return opt_.companions[j].kind == CompanionKind::Modulus ? C(std::norm(w)) : w * w;
  }

  TransferState<Real> public_state(Real x, const CState<Real, N>& y) const {
    switch (form_) {
      case Form::G: return {Repr::Direct, y[0], x};
      case Form::W: return {Repr::Inverse, y[0], x};
      case Form::Alpha: return {Repr::Direct, sc_ * x * y[0], x};
      case Form::Beta: return {Repr::Inverse, y[0] / (sc_ * x), x};
    }
    return {};
  }

  SweepPoint<Real> point(Real x, const CState<Real, N>& y) const {
    SweepPoint<Real> p;
    p.transfer = public_state(x, y);
    if (opt_.log_amplitude) {
      p.log_a = y[1];
      if (p.transfer.repr == Repr::Direct) {
        p.log_f = y[1];
      } else if (p.transfer.value == C(0)) {
        p.log_f = C(-std::numeric_limits<Real>::infinity(), 0);
      } else {
        p.log_f = y[1] + std::log(p.transfer.value);
      }
    }
    const bool prime = form_ == Form::W || form_ == Form::Beta;
    for (std::size_t j = 0; j < ncomp_; ++j) {
      p.companions[j] = {prime, opt_.companions[j].kind == CompanionKind::Modulus, y[2 + j],
                         prime ? p.transfer.value : C(0), comp_switches_[j]};
    }
    return p;
  }

  const EffectiveProblem& prob_;
  C z_;
  C sc_{};
  bool harmonic_ = false;
  Real thr_;
  const SweepOptions<Real>& opt_;
  std::size_t ncomp_ = 0;
  MersonControl ctl_;
  Form form_ = Form::G;
  std::array<int, kMaxCompanions> comp_switches_{};
  double sup_g_ = 0;
  int switches_ = 0;
};

}  // namespace detail

/// Integrates the transfer function (plus optional log-amplitude and
/// companions) from `from` to `to`; init.x is ignored in favour of `from`.
template <class Real = double>
SweepResult<Real> sweep(const EffectiveProblem& prob, std::complex<Real> z_eff, Real from, Real to,
                        const TransferState<Real>& init, const SolverConfig& cfg,
                        const SweepOptions<Real>& opt = {}) {
  detail::Sweeper<Real> s(prob, z_eff, cfg, opt);
  return s.run(from, to, init);
}

/// Admissible condition at +infinity for potentials that vanish there:
/// g ~ i sqrt(z) with arg z in (0, 2 pi), so Re g < 0.
template <class Real = double>
TransferState<Real> admissible_init_decaying(std::complex<Real> z_eff, Real X) {
  const std::complex<Real> g = -principal_sqrt(-z_eff);
  const Real scale = std::max(Real(1), std::abs(g));
  if (!(g.real() < -Real(1e-12) * scale))
    throw Error(ErrorCode::OnEssentialSpectrum, "z lies on the cut [0, inf) of the decaying problem");
  return {Repr::Direct, g, X};
}

/// Three-term admissible condition for alpha_+ at X when V ~ c x^2.
template <class Real = double>
TransferState<Real> admissible_init_harmonic(std::complex<Real> z_eff, std::complex<Real> c, Real X,
                                             double admissible_tol = 0.05) {
  using C = std::complex<Real>;
  const C sc = principal_sqrt(c);
  if (!(sc.real() > 0)) throw Error(ErrorCode::InvalidSpec, "Re sqrt(c) must be positive");
  const C d = (z_eff - sc) / (Real(2) * c);
  const Real X2 = X * X;
  const C last = (sc * d * d - d) / (Real(2) * sc * X2 * X2);
  if (std::abs(last) > static_cast<Real>(admissible_tol))
    throw Error(ErrorCode::WindowTooSmall, "admissible X^-4 term too large; enlarge the window");
  return {Repr::Direct, Real(-1) + d / X2 + last, X};
}

template <class Real = double>
std::complex<Real> alpha_to_g(std::complex<Real> alpha, Real x, std::complex<Real> c) {
  return principal_sqrt(c) * x * alpha;
}

/// Default right end of the truncation window for a given internal z.
template <class Real = double>
Real default_x_plus(const EffectiveProblem& prob, std::complex<Real> z_eff) {
  // Accumulate the decay exponent of the decaying solution; stop once the
  // admissible-condition error is damped far below working precision.
  double x_min = 12;
  if (prob.harmonic_like()) {
    const double tp = std::sqrt(static_cast<double>(std::abs(z_eff))) / std::sqrt(std::abs(prob.c_eff()));
    x_min = std::max(8.0, 1.5 * tp);
  }
  const double dx = 0.25;
  double s = 0;
  const std::complex<double> z(static_cast<double>(z_eff.real()), static_cast<double>(z_eff.imag()));
  for (double x = 0; x < 200; x += dx) {
    s += dx * principal_sqrt(prob.veff<double>(x + dx / 2) - z).real();
    if (x + dx >= x_min && s >= 40) return static_cast<Real>(x + dx);
  }
  return Real(200);
}

/// Admissible state at the right end X (value holds g, converted from alpha
/// for harmonic tails).
template <class Real = double>
TransferState<Real> right_admissible(const EffectiveProblem& prob, std::complex<Real> z_eff, Real X,
                                     const SolverConfig& cfg) {
  using C = std::complex<Real>;
  if (prob.harmonic_like()) {
    const C c = to<Real>(prob.c_eff());
    const auto a = admissible_init_harmonic<Real>(z_eff, c, X, cfg.admissible_tol);
    return {Repr::Direct, alpha_to_g<Real>(a.value, X, c), X};
  }
  auto st = admissible_init_decaying<Real>(z_eff, X);
  const C v = prob.veff<Real>(X);
  if (std::abs(v) > Real(1e-12) * std::max(Real(1), std::abs(z_eff))) st.value = -principal_sqrt(v - z_eff);
  return st;
}

/// Admissible state at the left end X < 0 of a whole-line window.
template <class Real = double>
TransferState<Real> left_admissible(const EffectiveProblem& prob, std::complex<Real> z_eff, Real X,
                                    const SolverConfig& cfg) {
  using C = std::complex<Real>;
  if (prob.harmonic_like()) {
    const C c = to<Real>(prob.c_eff());
    const auto a = admissible_init_harmonic<Real>(z_eff, c, X, cfg.admissible_tol);
    return {Repr::Direct, alpha_to_g<Real>(a.value, X, c), X};
  }
  auto st = admissible_init_decaying<Real>(z_eff, -X);
  st.value = -st.value;
  st.x = X;
  const C v = prob.veff<Real>(X);
  if (std::abs(v) > Real(1e-12) * std::max(Real(1), std::abs(z_eff))) st.value = principal_sqrt(v - z_eff);
  return st;
}

template <class Real = double>
TransferTrajectory<Real> integrate_transfer(const EffectiveProblem& prob, std::complex<Real> z_eff, Real from,
                                            Real to, const TransferState<Real>& init, const SolverConfig& cfg,
                                            bool record_samples = false) {
  SweepOptions<Real> opt;
  opt.record_samples = record_samples;
  auto r = sweep<Real>(prob, z_eff, from, to, init, cfg, opt);
  TransferTrajectory<Real> t;
  t.endpoint = r.end.transfer;
  t.samples = std::move(r.samples);
  t.sup_g = r.sup_g;
  t.steps = r.stats.accepted;
  t.switches = r.switches;
  return t;
}

/// Initial state at the origin for a half-line parity problem: g(0) = 0
/// (Neumann) or w(0) = 0 (Dirichlet).
template <class Real = double>
TransferState<Real> origin_state(Parity parity) {
  if (parity == Parity::EvenNeumann) return {Repr::Direct, {}, 0};
  if (parity == Parity::OddDirichlet) return {Repr::Inverse, {}, 0};
  throw Error(ErrorCode::ParityMismatch, "origin condition needs even or odd parity");
}

template <class Real = double>
TransferTrajectory<Real> transfer_at_origin(const EffectiveProblem& prob, Parity parity, std::complex<Real> z_eff,
                                            Real a, const SolverConfig& cfg) {
  if (a < 0) throw Error(ErrorCode::WindowExceeded, "matching point must be >= 0 on the half line");
  const auto init = origin_state<Real>(parity);
  if (a == Real(0)) {
    TransferTrajectory<Real> t;
    t.endpoint = init;
    return t;
  }
  return integrate_transfer<Real>(prob, z_eff, Real(0), a, init, cfg);
}

}  // namespace spectral

#endif  // SPECTRAL_RICCATI_HPP_
