#ifndef SPECTRAL_POTENTIALS_HPP_
#define SPECTRAL_POTENTIALS_HPP_

// Operator families and their reduction to the standard form
//
//   f''(x) = (veff(x) - zmul * z) f(x)
//
// on the half line (with a Neumann/Dirichlet condition at 0) or on the
// whole line.  Everything downstream (transfer functions, matching
// function, index) works with veff and the internal spectral parameter
// z_eff = zmul * z; eigenvalues are reported back as z_eff / zmul.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>

#include "spectral/errors.hpp"

namespace spectral {

using cplx = std::complex<double>;

// Principal square root with arg in (-pi, pi].  std::sqrt honours the sign
// of a negative-zero imaginary part, which would put -1 on the wrong side of
// the cut; normalise it first.
template <class Real>
std::complex<Real> principal_sqrt(std::complex<Real> w) {
  if (w.imag() == Real(0)) w = std::complex<Real>(w.real(), Real(0));
  return std::sqrt(w);
}

template <class Real, class From>
std::complex<Real> to(std::complex<From> v) {
  return {static_cast<Real>(v.real()), static_cast<Real>(v.imag())};
}

struct Harmonic {
  cplx c;
  bool operator==(const Harmonic&) const = default;
};

struct GaussianBarrier {
  double b;
  bool operator==(const GaussianBarrier&) const = default;
};

// b = +inf is the nu = 0 limit (pure dilated harmonic oscillator).
struct DilatedGaussian {
  double b;
  double theta;
  bool operator==(const DilatedGaussian&) const = default;
};

// even_extension evaluates the exponential at |x| (the perturbation seen
// by a half-line parity computation).
struct PerturbedHarmonic {
  cplx c;
  double eps;
  double m;
  bool even_extension = false;
  bool operator==(const PerturbedHarmonic&) const = default;
};

struct WorstCaseJwkb {
  cplx c;
  double eps;
  double eta;
  bool even_extension = false;
  bool operator==(const WorstCaseJwkb&) const = default;
};

using PotentialSpec =
    std::variant<Harmonic, GaussianBarrier, DilatedGaussian, PerturbedHarmonic, WorstCaseJwkb>;

enum class Parity { EvenNeumann, OddDirichlet, WholeLine };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::EvenNeumann: return "even";
    case Parity::OddDirichlet: return "odd";
    case Parity::WholeLine: return "whole";
  }
  return "?";
}

struct ProblemSpec {
  PotentialSpec potential;
  Parity parity = Parity::EvenNeumann;
  bool operator==(const ProblemSpec&) const = default;
};

/// c = sqrt(i) = e^{i pi/4}, the coupling used throughout the harmonic experiments.
inline cplx sqrt_i() { return std::polar(1.0, std::numbers::pi / 4); }

/// Dilated Gaussian barrier parametrised by nu = 1/b^2 (nu = 0 gives b = inf).
inline DilatedGaussian dilated_gaussian_nu(double nu, double theta) {
  if (!(nu >= 0)) throw Error(ErrorCode::InvalidSpec, "nu must be >= 0");
  double b = nu == 0 ? std::numeric_limits<double>::infinity() : 1.0 / std::sqrt(nu);
  return DilatedGaussian{b, theta};
}

inline double nu_of(const DilatedGaussian& d) { return std::isinf(d.b) ? 0.0 : 1.0 / (d.b * d.b); }

inline void validate(const PotentialSpec& spec) {
  auto check_c = [](cplx c) {
    if (!(principal_sqrt(c).real() > 0))
      throw Error(ErrorCode::InvalidSpec, "harmonic coupling needs Re sqrt(c) > 0");
  };
  auto check_eps = [](double eps) {
    if (!(eps >= 0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidSpec, "eps must be >= 0");
  };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Harmonic>) {
          check_c(v.c);
        } else if constexpr (std::is_same_v<T, GaussianBarrier>) {
          if (!(v.b > 0)) throw Error(ErrorCode::InvalidSpec, "b must be positive");
        } else if constexpr (std::is_same_v<T, DilatedGaussian>) {
          if (!(v.b > 0)) throw Error(ErrorCode::InvalidSpec, "b must be positive");
          if (!(v.theta > 0 && v.theta < std::numbers::pi / 2))
            throw Error(ErrorCode::InvalidSpec, "theta must lie in (0, pi/2)");
        } else if constexpr (std::is_same_v<T, PerturbedHarmonic>) {
          check_c(v.c);
          check_eps(v.eps);
          if (!std::isfinite(v.m)) throw Error(ErrorCode::InvalidSpec, "m must be finite");
        } else {
          check_c(v.c);
          check_eps(v.eps);
          if (!std::isfinite(v.eta)) throw Error(ErrorCode::InvalidSpec, "eta must be finite");
        }
      },
      spec);
}

/// Raw (un-dilated) potential value.
inline cplx eval_potential(const PotentialSpec& spec, double x) {
  return std::visit(
      [x](const auto& v) -> cplx {
        using T = std::decay_t<decltype(v)>;
        const double x2 = x * x;
        if constexpr (std::is_same_v<T, Harmonic>) {
          return v.c * x2;
        } else if constexpr (std::is_same_v<T, GaussianBarrier>) {
          return x2 * std::exp(-x2 / (v.b * v.b));
        } else if constexpr (std::is_same_v<T, DilatedGaussian>) {
          return std::isinf(v.b) ? cplx(x2) : cplx(x2 * std::exp(-x2 / (v.b * v.b)));
        } else if constexpr (std::is_same_v<T, PerturbedHarmonic>) {
          return v.c * x2 + v.eps * std::polar(1.0, v.m * (v.even_extension ? std::abs(x) : x));
        } else {
          return v.c * x2 + v.eps * std::polar(1.0, 2 * v.eta * (v.even_extension ? std::abs(x) : x));
        }
      },
      spec);
}

struct HarmonicLikeTail {
  cplx c_eff;
};
struct DecayingTail {};
using Tail = std::variant<HarmonicLikeTail, DecayingTail>;

// The reduced problem f'' = (veff - z_eff) f.  Holds the ProblemSpec by value and
// evaluates veff at whatever working precision the caller integrates in.
class EffectiveProblem {
 public:
  EffectiveProblem(PotentialSpec spec, cplx zmul, Tail tail, bool parity_allowed)
      : spec_(spec), zmul_(zmul), tail_(tail), parity_allowed_(parity_allowed) {}

  const PotentialSpec& spec() const { return spec_; }
  cplx zmul() const { return zmul_; }
  const Tail& tail() const { return tail_; }
  bool parity_allowed() const { return parity_allowed_; }

  bool harmonic_like() const { return std::holds_alternative<HarmonicLikeTail>(tail_); }
  cplx c_eff() const { return std::get<HarmonicLikeTail>(tail_).c_eff; }

  // c0 with veff(x) ~ c0 x^2 as x -> 0.
  cplx origin_c() const {
    return std::visit(
        [](const auto& v) -> cplx {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, GaussianBarrier>) return 1.0;
          else if constexpr (std::is_same_v<T, DilatedGaussian>) return std::polar(1.0, 2 * v.theta);
          else return v.c;
        },
        spec_);
  }

  cplx to_internal(cplx z) const { return zmul_ * z; }
  cplx to_user(cplx z_eff) const { return z_eff / zmul_; }

  template <class Real = double>
  std::complex<Real> veff(Real x) const {
    using C = std::complex<Real>;
    const Real x2 = x * x;
    return std::visit(
        [&](const auto& v) -> C {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Harmonic>) {
            return to<Real>(v.c) * x2;
          } else if constexpr (std::is_same_v<T, GaussianBarrier>) {
            const Real b = static_cast<Real>(v.b);
            return C(x2 * std::exp(-x2 / (b * b)));
          } else if constexpr (std::is_same_v<T, DilatedGaussian>) {
            const Real th = static_cast<Real>(v.theta);
            const C e1 = std::polar(Real(1), th);
            const C e2 = std::polar(Real(1), 2 * th);
            if (std::isinf(v.b)) return e2 * x2;
            const Real b = static_cast<Real>(v.b);
            return e2 * x2 * std::exp(-e1 * x2 / (b * b));
          } else if constexpr (std::is_same_v<T, PerturbedHarmonic>) {
            return to<Real>(v.c) * x2 +
                   static_cast<Real>(v.eps) *
                       std::polar(Real(1), static_cast<Real>(v.m) * (v.even_extension ? std::abs(x) : x));
          } else {
            return to<Real>(v.c) * x2 +
                   static_cast<Real>(v.eps) *
                       std::polar(Real(1), 2 * static_cast<Real>(v.eta) * (v.even_extension ? std::abs(x) : x));
          }
        },
        spec_);
  }

 private:
  PotentialSpec spec_;
  cplx zmul_;
  Tail tail_;
  bool parity_allowed_;
};

inline bool is_even_potential(const PotentialSpec& spec) {
  if (const auto* p = std::get_if<PerturbedHarmonic>(&spec)) return p->even_extension || p->eps == 0 || p->m == 0;
  if (const auto* w = std::get_if<WorstCaseJwkb>(&spec)) return w->even_extension || w->eps == 0 || w->eta == 0;
  return true;
}

inline EffectiveProblem effective_problem(const PotentialSpec& spec, Parity parity) {
  validate(spec);
  const bool even = is_even_potential(spec);
  if (parity != Parity::WholeLine && !even)
    throw Error(ErrorCode::ParityMismatch, "half-line parity requested for a non-even potential");
  return std::visit(
      [&](const auto& v) -> EffectiveProblem {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Harmonic>) {
          return EffectiveProblem(spec, 1.0, HarmonicLikeTail{v.c}, even);
        } else if constexpr (std::is_same_v<T, GaussianBarrier>) {
          return EffectiveProblem(spec, 1.0, DecayingTail{}, even);
        } else if constexpr (std::is_same_v<T, DilatedGaussian>) {
          const cplx zmul = std::polar(1.0, v.theta);
          if (std::isinf(v.b))
            return EffectiveProblem(spec, zmul, HarmonicLikeTail{std::polar(1.0, 2 * v.theta)}, even);
          return EffectiveProblem(spec, zmul, DecayingTail{}, even);
        } else {
          return EffectiveProblem(spec, 1.0, HarmonicLikeTail{v.c}, even);
        }
      },
      spec);
}

/// Potential of the dilated operator in its own frame (-e^{-i theta} f'' + V_dil f = z f);
/// equals the raw potential for undilated variants.
inline cplx dilated_potential(const PotentialSpec& spec, double x) {
  if (const auto* d = std::get_if<DilatedGaussian>(&spec)) {
    const cplx e1 = std::polar(1.0, d->theta);
    if (std::isinf(d->b)) return e1 * x * x;
    return e1 * x * x * std::exp(-e1 * x * x / (d->b * d->b));
  }
  return eval_potential(spec, x);
}

}  // namespace spectral

#endif  // SPECTRAL_POTENTIALS_HPP_
