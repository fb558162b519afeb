#ifndef SPECTRAL_PERTURB_HPP_
#define SPECTRAL_PERTURB_HPP_

// Perturbations of the harmonic oscillator: JWKB parameters, first-order
// shifts mu = int W f^2 / int f^2 and refined perturbed eigenvalues.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>

#include "spectral/errors.hpp"
#include "spectral/index.hpp"
#include "spectral/locator.hpp"
#include "spectral/potentials.hpp"
#include "spectral/riccati.hpp"

namespace spectral {

struct JwkbParams {
  int n = 0;
  double a_n = 0;
  double eta_n = 0;
};

/// Solves sqrt(c)(2n+1) = eta^2 + c a^2 for real a, eta >= 0.  The relation
/// is linear in (eta^2, a^2): the imaginary part fixes a^2, the real part eta^2.
inline JwkbParams jwkb_params(cplx c, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "n must be >= 0");
  if (c.imag() == 0) throw Error(ErrorCode::DegenerateReal, "JWKB relation is underdetermined for real c");
  const cplx rhs = principal_sqrt(c) * double(2 * n + 1);
  const double a2 = rhs.imag() / c.imag();
  const double eta2 = rhs.real() - a2 * c.real();
  if (a2 < 0 || eta2 < 0) throw Error(ErrorCode::DegenerateReal, "no nonnegative JWKB pair for this c");
  return {n, std::sqrt(a2), std::sqrt(eta2)};
}

/// First-order coefficient of the Gaussian barrier expansion, nu^1 term.
inline double mu1_gaussian(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "n must be >= 0");
  const double m = n;
  return -0.75 * (2 * m * m + 2 * m + 1);
}

/// mu = int W f^2 / int f^2 for a refined eigenvalue lambda (user frame),
/// W perturbing veff.  Both integrals come from companions of the Riccati
/// sweep (p' = +-W - 2 g p next to h' = +-1 - 2 g h).  Half-line parity
/// problems use f(-x)^2 = f(x)^2, i.e. W is replaced by W(x) + W(-x) and
/// the norm doubled, so W need not be even.  The result is divided by zmul.
template <class Real = double>
std::complex<Real> first_order_shift(const EffectiveProblem& prob, Parity parity, std::complex<Real> lambda,
                                     std::function<std::complex<Real>(Real)> W, Real a, const SolverConfig& cfg,
                                     const IndexOptions& iopt = {}) {
  using C = std::complex<Real>;
  if (parity != Parity::WholeLine && !prob.parity_allowed())
    throw Error(ErrorCode::ParityMismatch, "potential is not even");
  const C zt = to<Real>(prob.zmul()) * lambda;
  SolverConfig wcfg = cfg;
  wcfg.x_plus = static_cast<double>(detail::window_right<Real>(prob, zt, cfg));
  if (!std::isfinite(static_cast<double>(a)))
    a = std::isfinite(cfg.a) ? static_cast<Real>(cfg.a) : index_matching_point<Real>(prob, parity, lambda, wcfg);

  std::function<C(Real)> w = W;
  Real norm_mul = 1;
  if (parity != Parity::WholeLine) {
    w = [W](Real x) { return W(x) + W(-x); };
    norm_mul = 2;
  }
  auto side = [&](Side sd) {
    const Real s = sd == Side::RightOfA ? Real(-1) : Real(1);
    SweepOptions<Real> opt;
    opt.companions.push_back({CompanionKind::Complex, [s](Real) { return C(s); }, C(0)});
    opt.companions.push_back({CompanionKind::Complex, [s, w](Real x) { return s * w(x); }, C(0)});
    return detail::sweep_to_a<Real>(prob, parity, zt, sd, a, wcfg, opt);
  };
  const auto l = side(Side::LeftOfA);
  const auto r = side(Side::RightOfA);
  if (!(detail::relative_cross<Real>(l.end.transfer, r.end.transfer) <= static_cast<Real>(iopt.residual_tol)))
    throw Error(ErrorCode::NotAnEigenvalue, "lambda does not satisfy the matching condition");
  const C h = l.end.companions[0].direct() + r.end.companions[0].direct();
  const C p = l.end.companions[1].direct() + r.end.companions[1].direct();
  if (std::abs(h) == Real(0)) throw Error(ErrorCode::DenominatorUnderflow, "int f^2 vanishes");
  return p / (norm_mul * h) / to<Real>(prob.zmul());
}

struct Perturbation {
  enum class Kind { Fourier, JwkbWorst };
  Kind kind = Kind::Fourier;
  double eps = 0;
  double freq = 0;  // m for eps e^{imx}, eta for eps e^{2 i eta x}
  bool even_extension = false;  // use |x| in the exponent
};

struct PerturbOptions {
  double kappa_estimate = 0;   // 0: computed from the unperturbed problem
  bool first_order = false;    // also evaluate mu at the unperturbed eigenvalue
  double continuation_factor = 10;
};

struct PerturbResult {
  cplx lambda_perturbed{};
  cplx unperturbed{};          // sqrt(c)(2n+1)
  double shift_abs = 0;        // |lambda_perturbed - unperturbed|
  double noise_floor = 0;      // |refined(eps = 0) - unperturbed|
  double kappa_estimate = 0;
  std::optional<cplx> mu1;     // first-order coefficient mu with lambda ~ unperturbed + eps mu
  double a_used = 0;
  int iterations = 0;
};

inline PotentialSpec perturbed_spec(const Harmonic& base, const Perturbation& w) {
  if (w.kind == Perturbation::Kind::Fourier) return PerturbedHarmonic{base.c, w.eps, w.freq, w.even_extension};
  return WorstCaseJwkb{base.c, w.eps, w.freq, w.even_extension};
}

/// Eigenvalue n of the harmonic oscillator base perturbed by W, continued
/// from sqrt(c)(2n+1) on the whole line (half-line parity is used only when
/// W is even).  ContinuationLost when the refined zero leaves the disc of
/// radius continuation_factor * eps * kappa around the start.
inline PerturbResult perturbed_eigenvalue(const Harmonic& base, const Perturbation& w, Parity parity, int n,
                                          const SolverConfig& cfg, const PerturbOptions& opt = {}) {
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "n must be >= 0");
  if (!(w.eps >= 0)) throw Error(ErrorCode::InvalidSpec, "eps must be >= 0");
  const PotentialSpec pspec = perturbed_spec(base, w);
  if (parity != Parity::WholeLine) {
    if (!is_even_potential(pspec)) parity = Parity::WholeLine;
    else parity = n % 2 ? Parity::OddDirichlet : Parity::EvenNeumann;
  }
  const EffectiveProblem prob0 = effective_problem(Harmonic{base.c}, parity);
  const EffectiveProblem prob = effective_problem(pspec, parity);

  PerturbResult res;
  res.unperturbed = principal_sqrt(base.c) * double(2 * n + 1);
  const auto ref0 = refine_eigenvalue<double>(prob0, parity, res.unperturbed, NAN, cfg);
  res.noise_floor = std::abs(ref0.lambda - res.unperturbed);
  res.kappa_estimate = opt.kappa_estimate > 0
                           ? opt.kappa_estimate
                           : instability_index<double>(prob0, parity, ref0.lambda, NAN, cfg).kappa;

  const double radius = std::max(opt.continuation_factor * w.eps * res.kappa_estimate, 10 * res.noise_floor);
  EigenResult<double> er;
  try {
    er = refine_eigenvalue<double>(prob, parity, res.unperturbed, NAN, cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::SuspectedPole)
      throw Error(ErrorCode::ContinuationLost, std::string("refinement failed: ") + e.what());
    throw;
  }
  res.lambda_perturbed = er.lambda;
  res.shift_abs = std::abs(er.lambda - res.unperturbed);
  res.a_used = er.a_used;
  res.iterations = er.iterations;
  if (res.shift_abs > radius) throw Error(ErrorCode::ContinuationLost, "no eigenvalue near the unperturbed one");

  if (opt.first_order) {
    std::function<cplx(double)> W;
    if (w.kind == Perturbation::Kind::Fourier) {
      W = [m = w.freq, e = w.even_extension](double x) { return std::polar(1.0, m * (e ? std::abs(x) : x)); };
    } else {
      W = [eta = w.freq, e = w.even_extension](double x) {
        return std::polar(1.0, 2 * eta * (e ? std::abs(x) : x));
      };
    }
    res.mu1 = first_order_shift<double>(prob0, parity, ref0.lambda, W, NAN, cfg);
  }
  return res;
}

}  // namespace spectral

#endif  // SPECTRAL_PERTURB_HPP_
