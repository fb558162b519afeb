#ifndef SPECTRAL_RESONANCE_HPP_
#define SPECTRAL_RESONANCE_HPP_

// Resonances of the Gaussian barrier x^2 exp(-x^2/b^2) as theta-independent
// eigenvalues of the dilated family, and the numerical-range crossing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/index.hpp"
#include "spectral/locator.hpp"
#include "spectral/parallel.hpp"
#include "spectral/perturb.hpp"
#include "spectral/potentials.hpp"

namespace spectral {

struct RangeCrossing {
  double b = 0;
  double crossing = 0;  // b^2 max q
  double max_arg = 0;   // maximising x, in the units of the potential (b sqrt(s))
  double s = 0;         // maximiser of q(s) = s (2 - s) e^{-s}
};

/// Maximises q(s) = s (2 - s) e^{-s} over s >= 0 by Newton on
/// q'(s) e^{s} = s^2 - 4 s + 2, bisection-safeguarded on [0, 2].
inline RangeCrossing numerical_range_crossing(double b) {
  if (!(b > 0) || !std::isfinite(b)) throw Error(ErrorCode::InvalidSpec, "b must be positive and finite");
  double lo = 0, hi = 2, s = 0.5;
  for (int it = 0; it < 100; ++it) {
    const double p = s * s - 4 * s + 2;
    if (p > 0) lo = s; else hi = s;
    double next = s - p / (2 * s - 4);
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (std::abs(next - s) < 1e-16) { s = next; break; }
    s = next;
  }
  RangeCrossing r;
  r.b = b;
  r.s = s;
  r.crossing = b * b * s * (2 - s) * std::exp(-s);
  r.max_arg = b * std::sqrt(s);
  return r;
}

struct ResonanceRow {
  int n = 0;
  cplx lambda{};                          // from the first theta holding the row
  std::map<double, cplx> lambda_by_theta;
  std::map<double, double> kappa_by_theta;
};

struct ResonanceOptions {
  bool verify = true;              // contour count of one zero around each refined value
  bool compute_kappa = true;
  double sector_slack = 1e-6;      // tolerance on arg lambda <= 0 (noise on real levels)
  double match_factor = 1e-2;      // matching tolerance in units of the local level spacing
  unsigned workers = 0;
};

/// True when -theta < arg z <= slack.
inline bool in_sector(cplx z, double theta, double slack = 1e-6) {
  const double ar = std::arg(z);
  return ar > -theta && ar <= slack;
}

namespace detail {

inline Parity parity_of(int n) { return n % 2 ? Parity::OddDirichlet : Parity::EvenNeumann; }

// Eigenvalues n = start, start + step, ... <= n_max of one dilated problem by
// continuation in n, stopping at the first value that leaves the sector.
inline std::vector<std::pair<int, cplx>> dilated_levels(double b, double theta, int start, int step, int n_max,
                                                        const SolverConfig& cfg, const ResonanceOptions& opt) {
  const auto dg = DilatedGaussian{b, theta};
  const double nu = nu_of(dg);
  std::vector<std::pair<int, cplx>> out;
  for (int n = start; n <= n_max; n += step) {
    const Parity par = parity_of(n);
    const EffectiveProblem prob = effective_problem(dg, par);
    const std::size_t k = out.size();
    cplx guess = k < 2 ? cplx(2 * n + 1 + nu * mu1_gaussian(n)) : 2.0 * out[k - 1].second - out[k - 2].second;
    const auto r = refine_eigenvalue<double>(prob, par, guess, NAN, cfg);
    if (!in_sector(r.lambda, theta, opt.sector_slack)) break;
    if (opt.verify) {
      double half = 0.5;
      if (k >= 1) half = std::max(1e-3, 0.25 * std::abs(r.lambda - out[k - 1].second));
      const Rect box{r.lambda.real() - half, r.lambda.real() + half, r.lambda.imag() - half, r.lambda.imag() + half};
      const auto poly = search_region(prob, box);
      if (!poly.empty()) {
        SolverConfig wcfg = cfg;
        wcfg.x_plus = region_x_plus<double>(prob, poly, cfg);
        ContourEvaluator ev(prob, par, r.a_used, wcfg, WindingTarget::Wronskian);
        const int count = winding_with(ev, poly, 20000).count;
        if (count != 1)
          throw Error(ErrorCode::ContinuationLost, "refined value is not an isolated eigenvalue (n = " +
                                                       std::to_string(n) + ")");
      }
    }
    out.push_back({n, r.lambda});
  }
  return out;
}

}  // namespace detail

/// Greedy nearest-neighbour matching of `cand` onto `ref`.  tol[i] is the
/// acceptance radius for ref[i]; a second candidate within that radius is
/// an ambiguity.  Returns the candidate index per reference (or none).
inline std::vector<std::optional<std::size_t>> match_rows(const std::vector<cplx>& ref, const std::vector<cplx>& cand,
                                                          const std::vector<double>& tol) {
  std::vector<std::optional<std::size_t>> out(ref.size());
  std::vector<bool> used(cand.size(), false);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::optional<std::size_t> best;
    int within = 0;
    for (std::size_t j = 0; j < cand.size(); ++j) {
      const double d = std::abs(cand[j] - ref[i]);
      if (d > tol[i]) continue;
      ++within;
      if (!best || d < std::abs(cand[*best] - ref[i])) best = j;
    }
    if (within > 1) throw Error(ErrorCode::RowMatchingAmbiguous, "two eigenvalues within the matching tolerance");
    if (best && !used[*best]) {
      used[*best] = true;
      out[i] = best;
    }
  }
  return out;
}

/// Resonances n <= n_max of the barrier with width b for each theta.
/// parity selects even n, odd n, or all n (WholeLine).  Rows are keyed by n
/// from the first theta; other thetas are matched by proximity.
inline std::vector<ResonanceRow> resonance_sweep(double b, const std::vector<double>& thetas, int n_max, Parity parity,
                                                 const SolverConfig& cfg, const ResonanceOptions& opt = {}) {
  if (thetas.empty()) throw Error(ErrorCode::InvalidSpec, "theta list is empty");
  for (double t : thetas)
    if (!(t > 0 && t < std::numbers::pi / 2)) throw Error(ErrorCode::InvalidSpec, "theta must lie in (0, pi/2)");
  if (n_max < 0) throw Error(ErrorCode::InvalidSpec, "n_max must be >= 0");
  validate(DilatedGaussian{b, thetas.front()});

  std::vector<int> starts;
  if (parity != Parity::OddDirichlet) starts.push_back(0);
  if (parity != Parity::EvenNeumann) starts.push_back(1);

  // Levels per (theta, parity class), computed concurrently.
  const std::size_t nt = thetas.size(), ns = starts.size();
  std::vector<std::vector<std::pair<int, cplx>>> levels(nt * ns);
  parallel_for(nt * ns, opt.workers, [&](std::size_t idx) {
    levels[idx] = detail::dilated_levels(b, thetas[idx / ns], starts[idx % ns], 2, n_max, cfg, opt);
  });

  std::map<int, ResonanceRow> rows;
  for (std::size_t si = 0; si < ns; ++si) {
    const auto& base = levels[si];
    std::vector<cplx> ref;
    std::vector<double> tol;
    for (std::size_t i = 0; i < base.size(); ++i) {
      ref.push_back(base[i].second);
      double spacing = 2;
      if (base.size() > 1) {
        const std::size_t j = i + 1 < base.size() ? i + 1 : i - 1;
        spacing = std::abs(base[j].second - base[i].second);
      }
      tol.push_back(opt.match_factor * spacing);
      ResonanceRow row;
      row.n = base[i].first;
      row.lambda = base[i].second;
      row.lambda_by_theta[thetas[0]] = base[i].second;
      rows[row.n] = row;
    }
    for (std::size_t ti = 1; ti < nt; ++ti) {
      const auto& other = levels[ti * ns + si];
      std::vector<cplx> cand;
      for (const auto& p : other) cand.push_back(p.second);
      const auto m = match_rows(ref, cand, tol);
      for (std::size_t i = 0; i < ref.size(); ++i)
        if (m[i]) rows[base[i].first].lambda_by_theta[thetas[ti]] = cand[*m[i]];
    }
  }

  std::vector<ResonanceRow> out;
  for (auto& [n, row] : rows) out.push_back(row);
  if (opt.compute_kappa) {
    parallel_for(out.size(), opt.workers, [&](std::size_t i) {
      auto& row = out[i];
      const Parity par = detail::parity_of(row.n);
      for (const auto& [theta, lam] : row.lambda_by_theta) {
        const EffectiveProblem prob = effective_problem(DilatedGaussian{b, theta}, par);
        row.kappa_by_theta[theta] = static_cast<double>(instability_index<double>(prob, par, lam, NAN, cfg).kappa);
      }
    });
  }
  return out;
}

/// Eigenvalue n of the dilated barrier at nu_target reached by marching nu
/// up from 0 (the oscillator value 2n+1) in `steps` equal steps, halving a
/// step whenever the refinement fails to continue.
inline cplx continue_in_nu(double theta, int n, double nu_target, const SolverConfig& cfg, int steps = 8) {
  if (!(nu_target >= 0) || steps < 1) throw Error(ErrorCode::InvalidSpec, "bad continuation request");
  const Parity par = detail::parity_of(n);
  cplx lam = 2.0 * n + 1;
  double nu = 0;
  double dnu = nu_target / steps;
  int halvings = 0;
  while (nu < nu_target) {
    const double next = std::min(nu_target, nu + dnu);
    const EffectiveProblem prob = effective_problem(dilated_gaussian_nu(next, theta), par);
    try {
      const auto r = refine_eigenvalue<double>(prob, par, lam, NAN, cfg);
      if (std::abs(r.lambda - lam) > 0.5) throw Error(ErrorCode::ContinuationLost, "jumped to another level");
      lam = r.lambda;
      nu = next;
    } catch (const Error& e) {
      if (++halvings > 20) throw Error(ErrorCode::ContinuationLost, std::string("nu continuation failed: ") + e.what());
      dnu /= 2;
    }
  }
  return lam;
}

}  // namespace spectral

#endif  // SPECTRAL_RESONANCE_HPP_
