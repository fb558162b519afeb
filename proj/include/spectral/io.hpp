#ifndef SPECTRAL_IO_HPP_
#define SPECTRAL_IO_HPP_

// JSON and CSV forms of specs and results.  Doubles are written with 17
// significant digits by a small serializer so output bytes depend only on
// the values; non-finite numbers become null.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "spectral/errors.hpp"
#include "spectral/index.hpp"
#include "spectral/locator.hpp"
#include "spectral/potentials.hpp"
#include "spectral/resonance.hpp"

namespace spectral::io {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0) return std::signbit(v) ? "-0.0" : "0.0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump_to(const json& j, std::string& out, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string pad_end = indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) { out += ","; out += nl; }
        first = false;
        out += pad + json(it.key()).dump() + sep;
        dump_to(it.value(), out, indent, depth + 1);
      }
      out += nl + pad_end + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) { out += ","; out += nl; }
        out += pad;
        dump_to(j[i], out, indent, depth + 1);
      }
      out += nl + pad_end + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic text form of j.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump_to(j, out, indent, 0);
  return out;
}

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline double number_from(const json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidSpec, what + " must be a number");
  return j.get<double>();
}

/// {"re": x, "im": y}; a bare number is read as a real value.
inline cplx complex_from(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object() || j.size() != 2 || !j.contains("re") || !j.contains("im"))
    throw Error(ErrorCode::InvalidSpec, what + " must be {\"re\": x, \"im\": y}");
  return {number_from(j["re"], what + ".re"), number_from(j["im"], what + ".im")};
}

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw Error(ErrorCode::InvalidSpec, "unknown key '" + it.key() + "' in " + where);
}

/// Strict "a+bi" grammar: a, bi, a+bi, a-bi, with i alone meaning 1i.
/// Numbers are decimal with optional exponent.
inline cplx parse_complex(const std::string& s) {
  static const std::string num = R"((?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)";
  static const std::regex re_only("^([+-]?" + num + ")$");
  static const std::regex im_only("^([+-]?)(" + num + ")?i$");
  static const std::regex both("^([+-]?" + num + ")([+-])(" + num + ")?i$");
  std::smatch m;
  auto coef = [](const std::string& sign, const std::string& mag) {
    const double v = mag.empty() ? 1.0 : std::stod(mag);
    return sign == "-" ? -v : v;
  };
  if (std::regex_match(s, m, re_only)) return {std::stod(m[1].str()), 0.0};
  if (std::regex_match(s, m, im_only)) return {0.0, coef(m[1].str(), m[2].str())};
  if (std::regex_match(s, m, both)) return {std::stod(m[1].str()), coef(m[2].str(), m[3].str())};
  throw Error(ErrorCode::InvalidSpec, "malformed complex literal '" + s + "' (expected a+bi)");
}

inline std::string format_complex(cplx z) {
  std::string im = format_double(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

inline Parity parity_from(const std::string& s) {
  if (s == "even") return Parity::EvenNeumann;
  if (s == "odd") return Parity::OddDirichlet;
  if (s == "whole") return Parity::WholeLine;
  throw Error(ErrorCode::InvalidSpec, "parity must be even, odd or whole");
}

inline json to_json(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Harmonic>) {
          return json{{"kind", "harmonic"}, {"c", to_json(v.c)}};
        } else if constexpr (std::is_same_v<T, GaussianBarrier>) {
          return json{{"kind", "gaussian_barrier"}, {"b", v.b}};
        } else if constexpr (std::is_same_v<T, DilatedGaussian>) {
          json j{{"kind", "dilated_gaussian"}};
          if (std::isinf(v.b)) j["nu"] = 0.0;
          else j["b"] = v.b;
          j["theta"] = v.theta;
          return j;
        } else if constexpr (std::is_same_v<T, PerturbedHarmonic>) {
          return json{{"kind", "perturbed_harmonic"}, {"c", to_json(v.c)}, {"eps", v.eps}, {"m", v.m},
                      {"even_extension", v.even_extension}};
        } else {
          return json{{"kind", "worst_case_jwkb"}, {"c", to_json(v.c)}, {"eps", v.eps}, {"eta", v.eta},
                      {"even_extension", v.even_extension}};
        }
      },
      spec);
}

inline json to_json(const ProblemSpec& p) {
  return json{{"potential", to_json(p.potential)}, {"parity", to_string(p.parity)}};
}

namespace detail {

// b directly, or nu = 1/b^2 (nu = 0 gives b = inf).
inline double width_from(const json& j, bool allow_infinite) {
  const bool hb = j.contains("b"), hn = j.contains("nu");
  if (hb == hn) throw Error(ErrorCode::InvalidSpec, "give exactly one of b and nu");
  if (hb) return number_from(j["b"], "b");
  const double nu = number_from(j["nu"], "nu");
  if (!(nu >= 0)) throw Error(ErrorCode::InvalidSpec, "nu must be >= 0");
  if (nu == 0) {
    if (!allow_infinite) throw Error(ErrorCode::InvalidSpec, "nu = 0 is only allowed for the dilated family");
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 / std::sqrt(nu);
}

inline bool bool_from(const json& j, const char* key) {
  if (!j.contains(key)) return false;
  if (!j[key].is_boolean()) throw Error(ErrorCode::InvalidSpec, std::string(key) + " must be a boolean");
  return j[key].get<bool>();
}

}  // namespace detail

/// Parses {"kind": ..., params}.  theta_override is the optional top-level
/// theta of a problem; it turns a gaussian_barrier into its dilated family.
inline PotentialSpec potential_from_json(const json& j, std::optional<double> theta_override = std::nullopt) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::InvalidSpec, "potential needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  PotentialSpec spec;
  if (kind == "harmonic") {
    reject_unknown(j, {"kind", "c"}, "harmonic");
    if (!j.contains("c")) throw Error(ErrorCode::InvalidSpec, "harmonic needs c");
    spec = Harmonic{complex_from(j["c"], "c")};
  } else if (kind == "gaussian_barrier" || kind == "dilated_gaussian") {
    reject_unknown(j, {"kind", "b", "nu", "theta"}, kind);
    std::optional<double> theta;
    if (j.contains("theta")) theta = number_from(j["theta"], "theta");
    if (kind == "gaussian_barrier" && theta)
      throw Error(ErrorCode::InvalidSpec, "gaussian_barrier takes no theta; use dilated_gaussian");
    if (theta_override) {
      if (theta && *theta != *theta_override) throw Error(ErrorCode::InvalidSpec, "conflicting theta values");
      theta = theta_override;
    }
    if (theta) {
      spec = DilatedGaussian{detail::width_from(j, true), *theta};
    } else {
      if (kind == "dilated_gaussian") throw Error(ErrorCode::InvalidSpec, "dilated_gaussian needs theta");
      spec = GaussianBarrier{detail::width_from(j, false)};
    }
  } else if (kind == "perturbed_harmonic") {
    reject_unknown(j, {"kind", "c", "eps", "m", "even_extension"}, kind);
    for (const char* k : {"c", "eps", "m"})
      if (!j.contains(k)) throw Error(ErrorCode::InvalidSpec, std::string(kind) + " needs " + k);
    spec = PerturbedHarmonic{complex_from(j["c"], "c"), number_from(j["eps"], "eps"), number_from(j["m"], "m"),
                             detail::bool_from(j, "even_extension")};
  } else if (kind == "worst_case_jwkb") {
    reject_unknown(j, {"kind", "c", "eps", "eta", "even_extension"}, kind);
    for (const char* k : {"c", "eps", "eta"})
      if (!j.contains(k)) throw Error(ErrorCode::InvalidSpec, std::string(kind) + " needs " + k);
    spec = WorstCaseJwkb{complex_from(j["c"], "c"), number_from(j["eps"], "eps"), number_from(j["eta"], "eta"),
                         detail::bool_from(j, "even_extension")};
  } else {
    throw Error(ErrorCode::InvalidSpec, "unknown potential kind '" + kind + "'");
  }
  if (theta_override && !std::holds_alternative<DilatedGaussian>(spec))
    throw Error(ErrorCode::InvalidSpec, "theta applies only to the Gaussian barrier");
  validate(spec);
  return spec;
}

inline ProblemSpec problem_from_json(const json& j) {
  reject_unknown(j, {"potential", "parity", "theta"}, "problem");
  if (!j.contains("potential")) throw Error(ErrorCode::InvalidSpec, "problem needs a potential");
  std::optional<double> theta;
  if (j.contains("theta")) theta = number_from(j["theta"], "theta");
  ProblemSpec p;
  p.potential = potential_from_json(j["potential"], theta);
  if (j.contains("parity")) {
    if (!j["parity"].is_string()) throw Error(ErrorCode::InvalidSpec, "parity must be a string");
    p.parity = parity_from(j["parity"].get<std::string>());
  }
  if (p.parity != Parity::WholeLine && !is_even_potential(p.potential))
    throw Error(ErrorCode::ParityMismatch, "even/odd parity needs an even potential");
  return p;
}

inline json to_json(const Rect& r) { return json::array({r.re_lo, r.re_hi, r.im_lo, r.im_hi}); }

/// [re_lo, re_hi, im_lo, im_hi]
inline Rect rect_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidSpec, "rect must be [re_lo, re_hi, im_lo, im_hi]");
  Rect r{number_from(j[0], "rect"), number_from(j[1], "rect"), number_from(j[2], "rect"), number_from(j[3], "rect")};
  if (!r.valid()) throw Error(ErrorCode::InvalidSpec, "rect must have re_lo < re_hi and im_lo < im_hi");
  return r;
}

inline json to_json(const SolverConfig& c) {
  json j;
  j["x_plus"] = c.x_plus;
  j["x_minus"] = c.x_minus;
  j["a"] = c.a;
  j["abs_tol"] = c.abs_tol;
  j["rel_tol"] = c.rel_tol;
  j["switch_threshold"] = c.switch_threshold;
  j["max_steps"] = c.max_steps;
  j["admissible_tol"] = c.admissible_tol;
  return j;
}

template <class Real>
json to_json(const EigenResult<Real>& r) {
  json j;
  j["lambda"] = to_json(cplx(static_cast<double>(r.lambda.real()), static_cast<double>(r.lambda.imag())));
  j["residual"] = r.residual;
  j["f_prime"] = to_json(cplx(static_cast<double>(r.f_prime.real()), static_cast<double>(r.f_prime.imag())));
  j["a_used"] = r.a_used;
  j["iterations"] = r.iterations;
  j["x_plus"] = r.x_plus;
  return j;
}

template <class Real>
json to_json(const IndexResult<Real>& r) {
  auto c = [](std::complex<Real> z) {
    return to_json(cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())));
  };
  json j;
  j["kappa"] = static_cast<double>(r.kappa);
  j["h_left"] = c(r.h_left);
  j["h_right"] = c(r.h_right);
  j["k_left"] = static_cast<double>(r.k_left);
  j["k_right"] = static_cast<double>(r.k_right);
  j["window"] = json::array({r.x_minus, r.x_plus});
  j["a_used"] = r.a_used;
  j["sup_g"] = r.sup_g;
  j["residual"] = r.residual;
  return j;
}

inline std::string theta_key(double theta) { return format_double(theta); }

inline json to_json(const ResonanceRow& r) {
  json j;
  j["n"] = r.n;
  j["re_lambda"] = r.lambda.real();
  j["im_lambda"] = r.lambda.imag();
  json lam = json::object(), kap = json::object();
  for (const auto& [t, z] : r.lambda_by_theta) lam[theta_key(t)] = to_json(z);
  for (const auto& [t, k] : r.kappa_by_theta) kap[theta_key(t)] = k;
  j["kappa"] = kap;
  j["lambda_by_theta"] = lam;
  return j;
}

/// CSV with header re_z,im_z,re_F,im_F,log10_abs_F, one row per node in
/// grid order; failed nodes carry nan in the F columns.
inline std::string grid_csv(const ContourGrid& g) {
  std::ostringstream os;
  os << "re_z,im_z,re_F,im_F,log10_abs_F\n";
  auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("nan"); };
  for (const auto& n : g.nodes) {
    os << num(n.z.real()) << ',' << num(n.z.imag()) << ',';
    if (n.ok) {
      os << num(n.f.real()) << ',' << num(n.f.imag()) << ',' << num(std::log10(std::abs(n.f)));
    } else {
      os << "nan,nan,nan";
    }
    os << '\n';
  }
  return os.str();
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

}  // namespace spectral::io

#endif  // SPECTRAL_IO_HPP_
