#ifndef SPECTRAL_ORACLE_HPP_
#define SPECTRAL_ORACLE_HPP_

// Independent checks that do not go through the Riccati machinery:
//
//  * instability indices of the harmonic oscillator -d^2 + c x^2 from its
//    tridiagonal Hermite-basis matrix, at arbitrary precision (MPFR);
//  * the rank-1 projection norm of a small dense matrix, by the
//    eigenvector formula and by forming P explicitly;
//  * the perimeter of the eps-pseudospectrum component of an eigenvalue.
//
// Needs Eigen and MPFR (link mpfr and gmp).

#include <mpfr.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/parallel.hpp"
#include "spectral/potentials.hpp"

namespace spectral {

enum class Subspace { Even, Odd };

struct OracleConfig {
  int n_basis = 200;  // N: basis functions phi_0 .. phi_{N-1}
  int digits = 100;   // significant decimal digits
};

struct OracleResult {
  double kappa = 1;
  std::string kappa_text;  // decimal, full working precision
  double tail_ratio = 0;   // |f(last)| / max |f|
  int terms = 0;
};

namespace mp {

// Owning MPFR number with an explicit precision (no global state).
class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(mpfr_prec_t prec, double d) { mpfr_init2(v_, prec); mpfr_set_d(v_, d, MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

struct Complex {
  Real re, im;
  explicit Complex(mpfr_prec_t p) : re(p), im(p) {}
};

inline mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * std::log2(10.0))) + 1;
}

// out = a * b
inline void mul(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2) {
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  Real re(t1.prec());
  mpfr_sub(re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_set(out.re.get(), re.get(), MPFR_RNDN);
}

// out = a / b
inline void div(Complex& out, const Complex& a, const Complex& b) {
  const mpfr_prec_t p = a.re.prec();
  Real den(p), t1(p), t2(p), re(p);
  mpfr_sqr(t1.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t2.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(out.im.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_div(out.im.get(), out.im.get(), den.get(), MPFR_RNDN);
  mpfr_div(out.re.get(), re.get(), den.get(), MPFR_RNDN);
}

inline void add(Complex& out, const Complex& a, const Complex& b) {
  mpfr_add(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

inline void sub(Complex& out, const Complex& a, const Complex& b) {
  mpfr_sub(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

inline void abs2(Real& out, const Complex& a, Real& t) {
  mpfr_sqr(out.get(), a.re.get(), MPFR_RNDN);
  mpfr_sqr(t.get(), a.im.get(), MPFR_RNDN);
  mpfr_add(out.get(), out.get(), t.get(), MPFR_RNDN);
}

inline std::string to_text(const Real& x, int digits) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", std::max(1, digits - 1), x.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

// (re, im) of a complex given in polar form r e^{i phi}, phi = num/den * pi.
inline void polar_pi(Complex& out, const Real& r, long num, long den) {
  const mpfr_prec_t p = r.prec();
  Real phi(p);
  mpfr_const_pi(phi.get(), MPFR_RNDN);
  mpfr_mul_si(phi.get(), phi.get(), num, MPFR_RNDN);
  mpfr_div_si(phi.get(), phi.get(), den, MPFR_RNDN);
  mpfr_sin_cos(out.im.get(), out.re.get(), phi.get(), MPFR_RNDN);
  mpfr_mul(out.re.get(), out.re.get(), r.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), out.im.get(), r.get(), MPFR_RNDN);
}

}  // namespace mp

namespace detail {

// c (root = 1) or sqrt(c) (root = 2) at full precision from |c| and arg c.
// Arguments that are small rational multiples of pi (c = sqrt(i) and the
// dilation angles) are rebuilt exactly instead of from the rounded double.
inline void mp_from_double_polar(mp::Complex& out, cplx c, int root) {
  const mpfr_prec_t p = out.re.prec();
  mp::Real r(p, std::abs(c));
  if (root == 2) mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
  const double ph = std::arg(c) / std::numbers::pi;
  for (long den : {1L, 2L, 3L, 4L, 5L, 6L, 8L, 10L, 12L, 16L, 20L, 24L, 30L, 32L, 60L, 64L}) {
    const double num = ph * den;
    if (std::abs(num - std::round(num)) < 1e-13) {
      mp::polar_pi(out, r, std::lround(num), den * root);
      return;
    }
  }
  mp::Real phi(p, std::arg(c) / root);
  mpfr_sin_cos(out.im.get(), out.re.get(), phi.get(), MPFR_RNDN);
  mpfr_mul(out.re.get(), out.re.get(), r.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), out.im.get(), r.get(), MPFR_RNDN);
}

}  // namespace detail

/// kappa_r = sum |f(n)|^2 / |sum f(n)^2| over n < N for the eigenvector of
/// the Hermite-basis matrix of -d^2 + c x^2 at lambda_r = sqrt(c)(2r+1),
/// obtained by the forward three-term recurrence from f = 1 at the bottom
/// of the parity chain.
inline OracleResult oscillator_index(cplx c, int r, const OracleConfig& cfg) {
  if (cfg.n_basis < 2) throw Error(ErrorCode::InvalidSpec, "n_basis must be >= 2");
  if (cfg.digits < 20) throw Error(ErrorCode::InvalidSpec, "digits must be >= 20");
  if (r < 0 || r >= cfg.n_basis) throw Error(ErrorCode::InvalidSpec, "r must lie in [0, N)");
  if (!(principal_sqrt(c).real() > 0)) throw Error(ErrorCode::InvalidSpec, "Re sqrt(c) must be positive");
  OracleResult res;
  if (c == cplx(1)) {
    // Self-adjoint: the eigenvector is a basis vector.
    res.kappa = 1;
    res.kappa_text = "1";
    res.terms = 1;
    return res;
  }
  const mpfr_prec_t p = mp::bits_for_digits(cfg.digits);
  using mp::Complex;
  using mp::Real;

  Complex cc(p), sc(p);
  detail::mp_from_double_polar(cc, c, 1);
  detail::mp_from_double_polar(sc, c, 2);
  Complex lam(p), cp1(p), cm1(p);
  mpfr_mul_si(lam.re.get(), sc.re.get(), 2 * r + 1, MPFR_RNDN);
  mpfr_mul_si(lam.im.get(), sc.im.get(), 2 * r + 1, MPFR_RNDN);
  mpfr_add_si(cp1.re.get(), cc.re.get(), 1, MPFR_RNDN);
  mpfr_set(cp1.im.get(), cc.im.get(), MPFR_RNDN);
  mpfr_sub_si(cm1.re.get(), cc.re.get(), 1, MPFR_RNDN);
  mpfr_set(cm1.im.get(), cc.im.get(), MPFR_RNDN);

  // a_m = (c+1)(m+1/2),  b_m = (c-1) sqrt((m+1)(m+2)) / 2
  auto a_of = [&](int m, Complex& out) {
    Real t(p);
    mpfr_set_si(t.get(), 2 * m + 1, MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_mul(out.re.get(), cp1.re.get(), t.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), cp1.im.get(), t.get(), MPFR_RNDN);
  };
  auto b_of = [&](int m, Complex& out) {
    Real t(p);
    mpfr_set_si(t.get(), static_cast<long>(m + 1) * (m + 2), MPFR_RNDN);
    mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_mul(out.re.get(), cm1.re.get(), t.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), cm1.im.get(), t.get(), MPFR_RNDN);
  };

  std::vector<int> ms;
  for (int m = r % 2; m < cfg.n_basis; m += 2) ms.push_back(m);
  std::vector<Complex> f;
  f.reserve(ms.size());
  f.emplace_back(p);
  mpfr_set_si(f[0].re.get(), 1, MPFR_RNDN);
  Complex am(p), bm(p), bprev(p), t(p), u(p);
  Real t1(p), t2(p);
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    const int m = ms[i];
    // b_{m-2} f_{i-1} + (a_m - lam) f_i + b_m f_{i+1} = 0
    a_of(m, am);
    mp::sub(am, am, lam);
    mp::mul(t, am, f[i], t1, t2);
    if (i > 0) {
      b_of(m - 2, bprev);
      mp::mul(u, bprev, f[i - 1], t1, t2);
      mp::add(t, t, u);
    }
    b_of(m, bm);
    f.emplace_back(p);
    mp::div(f.back(), t, bm);
    mpfr_neg(f.back().re.get(), f.back().re.get(), MPFR_RNDN);
    mpfr_neg(f.back().im.get(), f.back().im.get(), MPFR_RNDN);
  }

  Real num(p), sre(p), sim(p), a2(p), tmp(p), mx(p);
  Complex sq(p);
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    mp::abs2(a2, f[i], tmp);
    mpfr_add(num.get(), num.get(), a2.get(), MPFR_RNDN);
    if (mpfr_cmp(a2.get(), mx.get()) > 0) mpfr_set(mx.get(), a2.get(), MPFR_RNDN);
    mp::mul(sq, f[i], f[i], t1, t2);
    mpfr_add(sre.get(), sre.get(), sq.re.get(), MPFR_RNDN);
    mpfr_add(sim.get(), sim.get(), sq.im.get(), MPFR_RNDN);
    Real lg(p);
    mpfr_log10(lg.get(), a2.get(), MPFR_RNDN);
    mags[i] = 0.5 * lg.to_double();
  }
  Real den(p);
  mpfr_hypot(den.get(), sre.get(), sim.get(), MPFR_RNDN);
  Real kappa(p);
  mpfr_div(kappa.get(), num.get(), den.get(), MPFR_RNDN);

  Real lmx(p);
  mpfr_log10(lmx.get(), mx.get(), MPFR_RNDN);
  const double log_max = 0.5 * lmx.to_double();
  res.tail_ratio = std::pow(10.0, mags.back() - log_max);
  res.terms = static_cast<int>(f.size());
  res.kappa = kappa.to_double();
  // A correct eigenvector decays along the tail; rounding errors amplified
  // by the recurrence show up as a tail that turns upwards again.  That is
  // harmless until the tail weighs on the sums.
  const std::size_t nt = mags.size();
  if (nt >= 6) {
    const std::size_t peak = static_cast<std::size_t>(std::max_element(mags.begin(), mags.end()) - mags.begin());
    double tail_min = mags[peak];
    for (std::size_t i = peak; i < nt; ++i) tail_min = std::min(tail_min, mags[i]);
    const bool regrowing = peak + 3 < nt && mags.back() > tail_min + 1.0;
    const double weight = res.tail_ratio * res.tail_ratio * static_cast<double>(nt) * std::max(1.0, res.kappa);
    if ((regrowing && !(weight < 1e-12)) || !(res.tail_ratio < 1e-6))
      throw Error(ErrorCode::PrecisionInsufficient,
                  "eigenvector tail grows again; the recurrence is unstable at this precision");
  }
  res.kappa = kappa.to_double();
  res.kappa_text = mp::to_text(kappa, cfg.digits);
  return res;
}

/// Parity-restricted truncation of the Hermite-basis oscillator matrix,
/// N basis functions in total.
inline Eigen::MatrixXcd tridiagonal_osc(cplx c, int n_basis, Subspace sub) {
  std::vector<int> ms;
  for (int m = sub == Subspace::Even ? 0 : 1; m < n_basis; m += 2) ms.push_back(m);
  const int n = static_cast<int>(ms.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = ms[i];
    A(i, i) = (c + 1.0) * (m + 0.5);
    if (i + 1 < n) {
      const cplx b = (c - 1.0) * std::sqrt((m + 1) * (m + 2)) / 2.0;
      A(i, i + 1) = b;
      A(i + 1, i) = b;
    }
  }
  return A;
}

struct ProjectionNorm {
  double norm_p = 0;        // ||P|| with P h = <h, f*> f / <f, f*>
  double kappa_formula = 0; // ||f|| ||f*|| / |<f, f*>|
  cplx lambda;
};

namespace detail {

// Eigenvalues ordered by real part, then imaginary part.
inline std::vector<cplx> sorted_eigenvalues(const Eigen::MatrixXcd& A) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(),
            [](cplx l, cplx r) { return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag(); });
  return ev;
}

// Null vector of (B - mu) by inverse iteration with a tiny shift.
inline Eigen::VectorXcd inverse_iteration(const Eigen::MatrixXcd& B, cplx mu, double scale) {
  const int n = static_cast<int>(B.rows());
  const cplx shift = mu + cplx(1e-10, 1e-10) * std::max(1.0, scale);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B - shift * Eigen::MatrixXcd::Identity(n, n));
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  for (int i = 0; i < n; ++i) v(i) += cplx(0.37 * std::sin(1.0 + i), 0.11 * std::cos(2.0 * i));
  v.normalize();
  for (int it = 0; it < 8; ++it) {
    v = lu.solve(v);
    v.normalize();
  }
  return v;
}

}  // namespace detail

/// Norm of the rank-1 spectral projection of A at its eig_index-th
/// eigenvalue (eigenvalues ordered by real, then imaginary part).
inline ProjectionNorm projection_norm(const Eigen::MatrixXcd& A, int eig_index) {
  if (A.rows() != A.cols() || A.rows() == 0) throw Error(ErrorCode::InvalidSpec, "matrix must be square");
  const auto ev = detail::sorted_eigenvalues(A);
  if (eig_index < 0 || eig_index >= static_cast<int>(ev.size()))
    throw Error(ErrorCode::InvalidSpec, "eigenvalue index out of range");
  const cplx lam = ev[eig_index];
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int j = 0; j < static_cast<int>(ev.size()); ++j)
    if (j != eig_index && std::abs(ev[j] - lam) <= 1e-6 * scale)
      throw Error(ErrorCode::DegenerateEigenvalue, "target eigenvalue is not simple");

  const Eigen::VectorXcd f = detail::inverse_iteration(A, lam, scale);
  const Eigen::VectorXcd fs = detail::inverse_iteration(A.adjoint(), std::conj(lam), scale);
  const cplx ip = fs.dot(f);  // <f, f*> (conjugate-linear in the second slot)
  if (std::abs(ip) < 1e-12) throw Error(ErrorCode::OrthogonalPair, "left and right eigenvectors are orthogonal");

  ProjectionNorm out;
  out.lambda = lam;
  out.kappa_formula = f.norm() * fs.norm() / std::abs(ip);
  const Eigen::MatrixXcd P = f * fs.adjoint() / ip;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
  out.norm_p = svd.singularValues()(0);
  return out;
}

struct PerimeterCheck {
  double perimeter = 0;
  double bound = 0;  // 2 pi eps kappa
  double kappa = 0;
  double half_width = 0;
  int grid = 0;
};

/// Smallest singular value of (z - A) by inverse iteration on
/// (z - A)^* (z - A).
inline double sigma_min(const Eigen::MatrixXcd& A, cplx z) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXcd M = z * Eigen::MatrixXcd::Identity(n, n) - A;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n).normalized();
  double s = 0;
  for (int it = 0; it < 60; ++it) {
    const Eigen::VectorXcd y = lu.solve(x);
    const Eigen::VectorXcd w = lu.adjoint().solve(y);
    const double nw = w.norm();
    if (nw == 0 || !std::isfinite(nw)) return 0;
    const double s_new = 1.0 / std::sqrt(nw);
    x = w / nw;
    if (it > 2 && std::abs(s_new - s) <= 1e-12 * s_new) return s_new;
    s = s_new;
  }
  return s;
}

/// Perimeter of the connected component of {z : sigma_min(z - A) < eps}
/// that contains the eig_index-th eigenvalue, measured by marching squares
/// on a grid x grid lattice of half-width 3 eps kappa around it.
inline PerimeterCheck pseudospectrum_perimeter_check(const Eigen::MatrixXcd& A, int eig_index, double eps,
                                                     double kappa_estimate = 0, int grid = 101,
                                                     unsigned workers = 0) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidSpec, "eps must be positive");
  const auto pn = projection_norm(A, eig_index);
  const double kappa = kappa_estimate > 0 ? kappa_estimate : pn.kappa_formula;
  const cplx lam = pn.lambda;
  const double hw = 3 * eps * std::max(kappa, pn.kappa_formula);
  const int n = grid;
  const double dx = 2 * hw / (n - 1);
  std::vector<double> lv(static_cast<std::size_t>(n) * n);
  parallel_for(lv.size(), workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % n), j = static_cast<int>(idx / n);
    const cplx z = lam + cplx(-hw + i * dx, -hw + j * dx);
    const double s = sigma_min(A, z);
    lv[idx] = (s > 0 ? std::log(s) : -700.0) - std::log(eps);  // < 0 inside
  });
  auto at = [&](int i, int j) { return lv[static_cast<std::size_t>(j) * n + i]; };

  // Flood fill the inside nodes connected to the node nearest lambda.
  std::vector<char> comp(lv.size(), 0);
  const int c0 = (n - 1) / 2;
  if (!(at(c0, c0) < 0)) throw Error(ErrorCode::ComponentNotIsolated, "eigenvalue node is not inside");
  std::queue<std::pair<int, int>> q;
  q.push({c0, c0});
  comp[static_cast<std::size_t>(c0) * n + c0] = 1;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop();
    if (i == 0 || j == 0 || i == n - 1 || j == n - 1)
      throw Error(ErrorCode::ComponentNotIsolated, "component reaches the grid boundary");
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      const std::size_t k = static_cast<std::size_t>(b) * n + a;
      if (!comp[k] && at(a, b) < 0) {
        comp[k] = 1;
        q.push({a, b});
      }
    }
  }
  // Other eigenvalues inside the component mean it is not isolated.
  for (const cplx mu : detail::sorted_eigenvalues(A)) {
    if (std::abs(mu - lam) < 1e-12 * std::max(1.0, std::abs(lam))) continue;
    const cplx d = (mu - lam + cplx(hw, hw)) / dx;
    const int i = static_cast<int>(std::lround(d.real())), j = static_cast<int>(std::lround(d.imag()));
    if (i >= 0 && j >= 0 && i < n && j < n && comp[static_cast<std::size_t>(j) * n + i])
      throw Error(ErrorCode::ComponentNotIsolated, "another eigenvalue shares the component");
  }

  // Marching squares on the component indicator field: nodes outside the
  // component count as outside even if their level is negative.
  auto val = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(j) * n + i;
    return comp[k] ? at(i, j) : std::max(at(i, j), 1e-3);
  };
  double perim = 0;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const double v[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
      const double px[4] = {0, 1, 1, 0}, py[4] = {0, 0, 1, 1};
      std::vector<std::pair<double, double>> cut;
      for (int e = 0; e < 4; ++e) {
        const double v0 = v[e], v1 = v[(e + 1) % 4];
        if ((v0 < 0) != (v1 < 0)) {
          const double t = v0 / (v0 - v1);
          cut.push_back({px[e] + t * (px[(e + 1) % 4] - px[e]), py[e] + t * (py[(e + 1) % 4] - py[e])});
        }
      }
      if (cut.size() == 2) {
        perim += std::hypot(cut[0].first - cut[1].first, cut[0].second - cut[1].second);
      } else if (cut.size() == 4) {
        // Saddle: pair edges by the sign of the cell centre.
        const double centre = (v[0] + v[1] + v[2] + v[3]) / 4;
        const bool c_in = centre < 0;
        const bool v0_in = v[0] < 0;
        if (c_in == v0_in) {
          perim += std::hypot(cut[0].first - cut[1].first, cut[0].second - cut[1].second);
          perim += std::hypot(cut[2].first - cut[3].first, cut[2].second - cut[3].second);
        } else {
          perim += std::hypot(cut[1].first - cut[2].first, cut[1].second - cut[2].second);
          perim += std::hypot(cut[3].first - cut[0].first, cut[3].second - cut[0].second);
        }
      }
    }
  }
  PerimeterCheck out;
  out.perimeter = perim * dx;
  out.kappa = kappa;
  out.bound = 2 * std::numbers::pi * eps * kappa;
  out.half_width = hw;
  out.grid = n;
  return out;
}

}  // namespace spectral

#endif  // SPECTRAL_ORACLE_HPP_
