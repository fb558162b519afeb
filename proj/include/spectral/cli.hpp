#ifndef SPECTRAL_CLI_HPP_
#define SPECTRAL_CLI_HPP_

// Command-line front end.  A run merges an optional JSON config file with
// command-line flags (flags win), validates everything, computes, and only
// then writes its artifacts.  Exit codes: 0 success, 2 validation error,
// 3 numerical failure; failures print {"error": {...}} on stderr.

#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spectral/errors.hpp"
#include "spectral/index.hpp"
#include "spectral/io.hpp"
#include "spectral/locator.hpp"
#include "spectral/oracle.hpp"
#include "spectral/perturb.hpp"
#include "spectral/potentials.hpp"
#include "spectral/resonance.hpp"

namespace spectral::cli {

using io::json;

enum class OptType { Real, Int, Complex, RealList, Rect, String, Bool };

struct OptDef {
  std::string key;  // config key; the flag is --key with '_' -> '-'
  OptType type;
  std::string help;
};

struct CommandDef {
  std::string name;
  std::string help;
  bool needs_problem = false;
  std::vector<OptDef> options;
};

inline const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> defs = {
      {"eigs", "localize and refine eigenvalues inside a rectangle", true,
       {{"rect", OptType::Rect, "re_lo,re_hi,im_lo,im_hi (user frame)"},
        {"a", OptType::RealList, "matching points, first is primary (default: automatic, then 0)"},
        {"localize_tol", OptType::Real, "box diameter at which subdivision stops"},
        {"refine", OptType::Bool, "refine each isolated box (default true)"},
        {"with_index", OptType::Bool, "also compute the instability index"}}},
      {"index", "refine an eigenvalue and compute its instability index", true,
       {{"lambda", OptType::Complex, "eigenvalue estimate a+bi"},
        {"a", OptType::Real, "matching point (default: automatic)"},
        {"refine", OptType::Bool, "refine lambda before the index sweep (default true)"},
        {"long_double", OptType::Bool, "integrate in long double"}}},
      {"grid", "evaluate F(z; a) on a node grid and write CSV", true,
       {{"rect", OptType::Rect, "re_lo,re_hi,im_lo,im_hi"},
        {"nx", OptType::Int, "nodes along Re z (default 41)"},
        {"ny", OptType::Int, "nodes along Im z (default 41)"},
        {"a", OptType::Real, "matching point (default 0)"}}},
      {"resonances", "resonances of the Gaussian barrier across dilation angles", false,
       {{"b", OptType::Real, "barrier width"},
        {"nu", OptType::Real, "1/b^2, alternative to b"},
        {"thetas", OptType::RealList, "dilation angles (default pi/16,pi/4)"},
        {"n_max", OptType::Int, "largest level index (default 27)"},
        {"parity", OptType::String, "even, odd or whole (both classes, default)"},
        {"kappa", OptType::Bool, "compute instability indices (default true)"},
        {"verify", OptType::Bool, "contour-verify every level (default true)"},
        {"csv", OptType::String, "optional CSV copy of the rows"}}},
      {"perturb", "eigenvalue shifts of the perturbed oscillator as a CSV table", false,
       {{"c", OptType::Complex, "oscillator coupling (default e^{i pi/4})"},
        {"n", OptType::Int, "level index"},
        {"eps_list", OptType::RealList, "perturbation sizes (table rows)"},
        {"m_list", OptType::RealList, "frequencies m of eps e^{imx} (table columns)"},
        {"kind", OptType::String, "fourier (default) or worst (eps e^{2 i eta_n x})"},
        {"even_extension", OptType::Bool, "use |x| in the exponent (default true)"},
        {"whole_line", OptType::Bool, "solve on the whole line even for even perturbations"}}},
      {"oracle", "arbitrary-precision oscillator instability index", false,
       {{"c", OptType::Complex, "coupling (default e^{i pi/4})"},
        {"r", OptType::Int, "level index"},
        {"N", OptType::Int, "basis size (default 200)"},
        {"digits", OptType::Int, "decimal digits (default 100)"}}},
      {"range", "numerical-range crossing of the Gaussian barrier", false,
       {{"b", OptType::Real, "barrier width"}}},
  };
  return defs;
}

inline std::string flag_name(const std::string& key) {
  std::string f = key;
  for (char& ch : f)
    if (ch == '_') ch = '-';
  return "--" + f;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

inline double parse_real(const std::string& s) {
  if (s == "pi") return std::numbers::pi;
  // pi/k shorthand for angles
  if (s.rfind("pi/", 0) == 0) {
    const double k = parse_real(s.substr(3));
    if (!(k != 0)) throw Error(ErrorCode::InvalidSpec, "bad angle '" + s + "'");
    return std::numbers::pi / k;
  }
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidSpec, "malformed number '" + s + "'");
  }
  if (pos != s.size()) throw Error(ErrorCode::InvalidSpec, "malformed number '" + s + "'");
  return v;
}

inline long parse_int(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidSpec, "malformed integer '" + s + "'");
  }
  if (pos != s.size()) throw Error(ErrorCode::InvalidSpec, "malformed integer '" + s + "'");
  return v;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::InvalidSpec, "malformed boolean '" + s + "'");
}

/// Flag text to the JSON value a config file would hold for the key.
inline json flag_value(OptType t, const std::string& s) {
  switch (t) {
    case OptType::Real: return parse_real(s);
    case OptType::Int: return parse_int(s);
    case OptType::Complex: return io::to_json(io::parse_complex(s));
    case OptType::RealList: {
      json a = json::array();
      for (const auto& p : split(s, ',')) a.push_back(parse_real(p));
      return a;
    }
    case OptType::Rect: {
      const auto parts = split(s, ',');
      if (parts.size() != 4) throw Error(ErrorCode::InvalidSpec, "rect needs four comma-separated numbers");
      json a = json::array();
      for (const auto& p : parts) a.push_back(parse_real(p));
      return a;
    }
    case OptType::String: return s;
    case OptType::Bool: return parse_bool(s);
  }
  return nullptr;
}

// Typed access to a merged options object.
class Options {
 public:
  explicit Options(json j) : j_(std::move(j)) {}

  bool has(const std::string& k) const { return j_.contains(k); }
  const json& raw() const { return j_; }

  double real(const std::string& k, std::optional<double> def = std::nullopt) const {
    if (!has(k)) return required(k, def);
    return io::number_from(j_[k], k);
  }
  int integer(const std::string& k, std::optional<int> def = std::nullopt) const {
    if (!has(k)) return required(k, def);
    if (!j_[k].is_number_integer()) throw Error(ErrorCode::InvalidSpec, k + " must be an integer");
    return j_[k].get<int>();
  }
  bool boolean(const std::string& k, bool def) const {
    if (!has(k)) return def;
    if (!j_[k].is_boolean()) throw Error(ErrorCode::InvalidSpec, k + " must be a boolean");
    return j_[k].get<bool>();
  }
  cplx complex(const std::string& k, std::optional<cplx> def = std::nullopt) const {
    if (!has(k)) return required(k, def);
    return io::complex_from(j_[k], k);
  }
  std::string string(const std::string& k, std::optional<std::string> def = std::nullopt) const {
    if (!has(k)) return required(k, def);
    if (!j_[k].is_string()) throw Error(ErrorCode::InvalidSpec, k + " must be a string");
    return j_[k].get<std::string>();
  }
  std::vector<double> reals(const std::string& k, std::optional<std::vector<double>> def = std::nullopt) const {
    if (!has(k)) return required(k, def);
    if (!j_[k].is_array() || j_[k].empty()) throw Error(ErrorCode::InvalidSpec, k + " must be a nonempty list");
    std::vector<double> v;
    for (const auto& x : j_[k]) v.push_back(io::number_from(x, k));
    return v;
  }
  Rect rect(const std::string& k) const {
    if (!has(k)) throw Error(ErrorCode::InvalidSpec, "missing option " + k);
    return io::rect_from(j_[k]);
  }

 private:
  template <class T>
  static T required(const std::string& k, const std::optional<T>& def) {
    if (!def) throw Error(ErrorCode::InvalidSpec, "missing option " + k);
    return *def;
  }
  json j_;
};

struct Outcome {
  std::string primary;                                    // written to --out or stdout
  std::vector<std::pair<std::string, std::string>> extra; // (path, content)
  json diagnostics = json::object();
};

inline json settings_json(const SolverConfig& cfg, unsigned workers) {
  json s = io::to_json(cfg);
  s["workers"] = workers;
  return s;
}

inline Outcome run_eigs(const ProblemSpec& ps, const Options& o, const SolverConfig& cfg, unsigned workers) {
  const EffectiveProblem prob = effective_problem(ps.potential, ps.parity);
  const Rect rect = o.rect("rect");
  std::vector<double> a_list;
  if (o.has("a")) {
    a_list = o.reals("a");
  } else {
    a_list.push_back(default_matching_point<double>(prob, ps.parity, rect.center()));
    if (a_list.front() != 0) a_list.push_back(0.0);
  }
  const double ltol = o.has("localize_tol") ? o.real("localize_tol") : 0.0;
  const bool refine = o.boolean("refine", true);
  const bool with_index = o.boolean("with_index", false);
  const auto boxes = localize_eigenvalues(prob, ps.parity, rect, a_list, cfg, ltol);

  json settings = settings_json(cfg, workers);
  settings["rect"] = io::to_json(rect);
  settings["a"] = a_list;
  settings["localize_tol"] = ltol > 0 ? ltol : std::max(1e-2 * rect.diameter(), 1e-3);

  Outcome out;
  json arr = json::array(), diag = json::array();
  for (const auto& bx : boxes) {
    json e;
    e["box"] = io::to_json(bx.rect);
    e["count"] = bx.count;
    json d{{"box", io::to_json(bx.rect)}};
    if (refine && bx.count == 1) {
      const auto r = refine_eigenvalue<double>(prob, ps.parity, bx.rect.center(), bx.a, cfg);
      const json rj = io::to_json(r);
      for (auto it = rj.begin(); it != rj.end(); ++it) e[it.key()] = it.value();
      const auto fv = f_value<double>(prob, ps.parity, r.lambda, r.a_used, cfg);
      d["iterations"] = r.iterations;
      d["steps"] = fv.steps;
      d["switches"] = fv.switches;
      d["sup_g"] = fv.sup_g;
      if (with_index) e["index"] = io::to_json(instability_index<double>(prob, ps.parity, r.lambda, NAN, cfg));
    }
    e["problem"] = io::to_json(ps);
    e["settings"] = settings;
    arr.push_back(e);
    diag.push_back(d);
  }
  out.primary = io::dump(arr) + "\n";
  out.diagnostics["eigenvalues"] = diag;
  return out;
}

template <class Real>
Outcome run_index_t(const ProblemSpec& ps, const Options& o, const SolverConfig& cfg, unsigned workers) {
  using C = std::complex<Real>;
  const EffectiveProblem prob = effective_problem(ps.potential, ps.parity);
  const cplx lam0 = o.complex("lambda");
  const Real a = o.has("a") ? static_cast<Real>(o.real("a")) : std::numeric_limits<Real>::quiet_NaN();
  json e;
  C lam = to<Real>(lam0);
  if (o.boolean("refine", true)) {
    const auto r = refine_eigenvalue<Real>(prob, ps.parity, lam, a, cfg);
    lam = r.lambda;
    e = io::to_json(r);
  } else {
    e["lambda"] = io::to_json(lam0);
  }
  const auto ir = instability_index<Real>(prob, ps.parity, lam, a, cfg);
  e["index"] = io::to_json(ir);
  e["problem"] = io::to_json(ps);
  json settings = settings_json(cfg, workers);
  settings["precision"] = sizeof(Real) > sizeof(double) ? "long double" : "double";
  e["settings"] = settings;
  Outcome out;
  out.primary = io::dump(json::array({e})) + "\n";
  const auto fv = f_value<Real>(prob, ps.parity, lam, static_cast<Real>(ir.a_used), cfg);
  out.diagnostics["steps"] = fv.steps;
  out.diagnostics["switches"] = fv.switches;
  out.diagnostics["sup_g"] = ir.sup_g;
  return out;
}

inline Outcome run_grid(const ProblemSpec& ps, const Options& o, const SolverConfig& cfg, unsigned workers) {
  const EffectiveProblem prob = effective_problem(ps.potential, ps.parity);
  const Rect rect = o.rect("rect");
  const int nx = o.integer("nx", 41), ny = o.integer("ny", 41);
  const double a = o.real("a", 0.0);
  const auto g = grid_map(prob, ps.parity, rect, nx, ny, a, cfg, workers);
  Outcome out;
  out.primary = io::grid_csv(g);
  std::size_t failed = 0;
  for (const auto& n : g.nodes) failed += !n.ok;
  out.diagnostics["nodes"] = g.nodes.size();
  out.diagnostics["failed_nodes"] = failed;
  out.diagnostics["problem"] = io::to_json(ps);
  json settings = settings_json(cfg, workers);
  settings["rect"] = io::to_json(rect);
  settings["nx"] = nx;
  settings["ny"] = ny;
  settings["a"] = a;
  out.diagnostics["settings"] = settings;
  return out;
}

inline Outcome run_resonances(const Options& o, const SolverConfig& cfg, unsigned workers) {
  if (o.has("b") == o.has("nu")) throw Error(ErrorCode::InvalidSpec, "give exactly one of b and nu");
  double b = 0;
  if (o.has("b")) {
    b = o.real("b");
  } else {
    const double nu = o.real("nu");
    if (!(nu > 0)) throw Error(ErrorCode::InvalidSpec, "nu must be positive");
    b = 1 / std::sqrt(nu);
  }
  const auto thetas = o.reals("thetas", std::vector<double>{std::numbers::pi / 16, std::numbers::pi / 4});
  const int n_max = o.integer("n_max", 27);
  const Parity parity = io::parity_from(o.string("parity", std::string("whole")));
  ResonanceOptions ropt;
  ropt.compute_kappa = o.boolean("kappa", true);
  ropt.verify = o.boolean("verify", true);
  ropt.workers = workers;
  const auto rows = resonance_sweep(b, thetas, n_max, parity, cfg, ropt);

  json settings = settings_json(cfg, workers);
  settings["b"] = b;
  settings["thetas"] = thetas;
  settings["n_max"] = n_max;
  settings["parity"] = to_string(parity);
  settings["sector_slack"] = ropt.sector_slack;
  settings["match_factor"] = ropt.match_factor;
  json arr = json::array();
  for (const auto& r : rows) {
    json j = io::to_json(r);
    j["settings"] = settings;
    arr.push_back(j);
  }
  Outcome out;
  out.primary = io::dump(arr) + "\n";
  if (o.has("csv")) {
    std::ostringstream os;
    os << "n,re_lambda,im_lambda";
    for (double t : thetas) os << ",kappa_theta=" << io::theta_key(t);
    os << '\n';
    for (const auto& r : rows) {
      os << r.n << ',' << io::format_double(r.lambda.real()) << ',' << io::format_double(r.lambda.imag());
      for (double t : thetas) {
        const auto it = r.kappa_by_theta.find(t);
        os << ',' << (it == r.kappa_by_theta.end() ? std::string("nan") : io::format_double(it->second));
      }
      os << '\n';
    }
    out.extra.push_back({o.string("csv"), os.str()});
  }
  json per_theta = json::object();
  for (double t : thetas) {
    int count = 0;
    for (const auto& r : rows) count += r.lambda_by_theta.count(t) ? 1 : 0;
    per_theta[io::theta_key(t)] = count;
  }
  out.diagnostics["levels_per_theta"] = per_theta;
  return out;
}

inline Outcome run_perturb(const Options& o, const SolverConfig& cfg, unsigned workers) {
  const cplx c = o.complex("c", sqrt_i());
  const int n = o.integer("n");
  const auto eps = o.reals("eps_list");
  const std::string kind = o.string("kind", std::string("fourier"));
  const bool even_ext = o.boolean("even_extension", true);
  const Parity parity = o.boolean("whole_line", false) ? Parity::WholeLine : Parity::EvenNeumann;
  std::vector<double> cols;
  std::string col_name;
  if (kind == "fourier") {
    cols = o.reals("m_list");
    col_name = "m";
  } else if (kind == "worst") {
    if (o.has("m_list")) throw Error(ErrorCode::InvalidSpec, "m_list does not apply to kind=worst");
    cols = {jwkb_params(c, n).eta_n};
    col_name = "eta";
  } else {
    throw Error(ErrorCode::InvalidSpec, "kind must be fourier or worst");
  }
  validate(Harmonic{c});
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "n must be >= 0");
  for (double e : eps)
    if (!(e >= 0)) throw Error(ErrorCode::InvalidSpec, "eps must be >= 0");

  // kappa of the unperturbed level is shared by every cell.
  const Parity base_par = parity == Parity::WholeLine ? Parity::WholeLine
                                                      : (n % 2 ? Parity::OddDirichlet : Parity::EvenNeumann);
  const EffectiveProblem prob0 = effective_problem(Harmonic{c}, base_par);
  const auto ref0 = refine_eigenvalue<double>(prob0, base_par, principal_sqrt(c) * double(2 * n + 1), NAN, cfg);
  const double kappa = instability_index<double>(prob0, base_par, ref0.lambda, NAN, cfg).kappa;

  const std::size_t ne = eps.size(), nc = cols.size();
  std::vector<double> shift(ne * nc, NAN), floor(ne * nc, NAN);
  std::vector<std::string> note(ne * nc);
  parallel_for(ne * nc, workers, [&](std::size_t idx) {
    Perturbation w;
    w.kind = kind == "fourier" ? Perturbation::Kind::Fourier : Perturbation::Kind::JwkbWorst;
    w.eps = eps[idx / nc];
    w.freq = cols[idx % nc];
    w.even_extension = even_ext;
    PerturbOptions popt;
    popt.kappa_estimate = kappa;
    try {
      const auto r = perturbed_eigenvalue(Harmonic{c}, w, parity, n, cfg, popt);
      shift[idx] = r.shift_abs;
      floor[idx] = r.noise_floor;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ContinuationLost) throw;
      note[idx] = e.what();
    }
  });

  std::ostringstream os;
  os << "eps";
  for (double m : cols) os << ',' << col_name << '=' << io::format_double(m);
  os << '\n';
  for (std::size_t i = 0; i < ne; ++i) {
    os << io::format_double(eps[i]);
    for (std::size_t j = 0; j < nc; ++j) {
      const double v = shift[i * nc + j];
      os << ',' << (std::isfinite(v) ? io::format_double(v) : std::string("nan"));
    }
    os << '\n';
  }
  Outcome out;
  out.primary = os.str();
  json settings = settings_json(cfg, workers);
  settings["c"] = io::to_json(c);
  settings["n"] = n;
  settings["kind"] = kind;
  settings["even_extension"] = even_ext;
  settings["parity"] = to_string(parity);
  out.diagnostics["settings"] = settings;
  out.diagnostics["kappa_unperturbed"] = kappa;
  out.diagnostics["unperturbed"] = io::to_json(principal_sqrt(c) * double(2 * n + 1));
  json cells = json::array();
  for (std::size_t idx = 0; idx < ne * nc; ++idx) {
    json cell{{"eps", eps[idx / nc]}, {col_name, cols[idx % nc]}, {"shift", shift[idx]}, {"noise_floor", floor[idx]}};
    if (!note[idx].empty()) cell["error"] = note[idx];
    cells.push_back(cell);
  }
  out.diagnostics["cells"] = cells;
  return out;
}

inline Outcome run_oracle(const Options& o) {
  const cplx c = o.complex("c", sqrt_i());
  OracleConfig oc;
  oc.n_basis = o.integer("N", 200);
  oc.digits = o.integer("digits", 100);
  const int r = o.integer("r");
  const auto res = oscillator_index(c, r, oc);
  json j;
  j["c"] = io::to_json(c);
  j["r"] = r;
  j["N"] = oc.n_basis;
  j["digits"] = oc.digits;
  j["kappa"] = res.kappa_text;
  j["tail_ratio"] = res.tail_ratio;
  Outcome out;
  out.primary = io::dump(j) + "\n";
  out.diagnostics["terms"] = res.terms;
  return out;
}

inline Outcome run_range(const Options& o) {
  const auto rc = numerical_range_crossing(o.real("b"));
  json j{{"b", rc.b}, {"crossing", rc.crossing}, {"s", rc.s}, {"max_arg", rc.max_arg}};
  Outcome out;
  out.primary = io::dump(j) + "\n";
  return out;
}

inline int exit_code_for(ErrorCode c) {
  return c == ErrorCode::InvalidSpec || c == ErrorCode::ParityMismatch ? 2 : 3;
}

inline void report_error(std::ostream& err, const std::string& code, const std::string& message, int status) {
  json e{{"error", {{"code", code}, {"message", message}, {"exit_status", status}}}};
  err << io::dump(e, -1) << '\n';
}

/// Full run: parse argv, merge config, execute, write artifacts.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Eigenvalues, resonances and instability indices of 1-d non-self-adjoint Schrodinger operators"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  std::string config_path, out_path, diag_path, tol_s, x_plus_s, max_steps_s, workers_s;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--diagnostics", diag_path, "solver diagnostics sidecar (JSON)");
  app.add_option("--tol", tol_s, "absolute and relative integration tolerance (default 1e-10, 1e-12 for perturb)");
  app.add_option("--x-plus", x_plus_s, "fixed right window edge");
  app.add_option("--max-steps", max_steps_s, "integration step limit");
  app.add_option("--workers", workers_s, "worker threads (0: all cores)");

  struct Bound {
    std::string key;
    OptType type;
    std::string value;
    CLI::Option* opt = nullptr;
  };
  // Problem flags, shared by the commands that take a problem.
  const std::vector<std::pair<std::string, OptType>> problem_keys = {
      {"kind", OptType::String}, {"c", OptType::Complex}, {"b", OptType::Real},
      {"nu", OptType::Real},     {"theta", OptType::Real}, {"eps", OptType::Real},
      {"m", OptType::Real},      {"eta", OptType::Real},   {"even_extension", OptType::Bool},
      {"parity", OptType::String}};

  std::map<std::string, std::vector<Bound>> opt_bound, prob_bound;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cd : commands()) {
    auto* sub = app.add_subcommand(cd.name, cd.help);
    subs[cd.name] = sub;
    auto& ob = opt_bound[cd.name];
    ob.reserve(cd.options.size());
    for (const auto& od : cd.options) ob.push_back({od.key, od.type, "", nullptr});
    for (std::size_t i = 0; i < cd.options.size(); ++i)
      ob[i].opt = sub->add_option(flag_name(cd.options[i].key), ob[i].value, cd.options[i].help);
    if (cd.needs_problem) {
      auto& pb = prob_bound[cd.name];
      pb.reserve(problem_keys.size());
      for (const auto& [k, t] : problem_keys) pb.push_back({k, t, "", nullptr});
      for (auto& b : pb) b.opt = sub->add_option(flag_name(b.key), b.value, "problem field " + b.key);
    }
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what(), 2);
    return 2;
  }

  try {
    json config = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw Error(ErrorCode::InvalidSpec, "cannot read config " + config_path);
      try {
        config = json::parse(f);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("malformed JSON config: ") + e.what());
      }
      io::reject_unknown(config, {"command", "problem", "options", "solver", "output", "diagnostics", "workers"},
                         "config");
    }

    std::string command;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) command = name;
    if (config.contains("command")) {
      if (!config["command"].is_string()) throw Error(ErrorCode::InvalidSpec, "command must be a string");
      const std::string cc = config["command"].get<std::string>();
      if (!command.empty() && command != cc)
        throw Error(ErrorCode::InvalidSpec, "subcommand '" + command + "' conflicts with config command '" + cc + "'");
      command = cc;
    }
    const auto cd_it = std::find_if(commands().begin(), commands().end(),
                                    [&](const CommandDef& c) { return c.name == command; });
    if (command.empty() || cd_it == commands().end())
      throw Error(ErrorCode::InvalidSpec, command.empty() ? "no command given" : "unknown command '" + command + "'");
    const CommandDef& cd = *cd_it;

    // Options: config first, flags override.
    json opts = config.contains("options") ? config["options"] : json::object();
    std::set<std::string> allowed;
    for (const auto& od : cd.options) allowed.insert(od.key);
    io::reject_unknown(opts, allowed, "options of " + command);
    for (const auto& b : opt_bound[command])
      if (b.opt->count()) opts[b.key] = flag_value(b.type, b.value);

    // Solver settings.
    SolverConfig cfg;
    if (command == "perturb") cfg.abs_tol = cfg.rel_tol = 1e-12;
    if (config.contains("solver")) {
      const json& s = config["solver"];
      io::reject_unknown(s, {"abs_tol", "rel_tol", "x_plus", "max_steps", "switch_threshold", "admissible_tol"},
                         "solver");
      if (s.contains("abs_tol")) cfg.abs_tol = io::number_from(s["abs_tol"], "abs_tol");
      if (s.contains("rel_tol")) cfg.rel_tol = io::number_from(s["rel_tol"], "rel_tol");
      if (s.contains("x_plus")) cfg.x_plus = io::number_from(s["x_plus"], "x_plus");
      if (s.contains("max_steps")) cfg.max_steps = static_cast<long>(io::number_from(s["max_steps"], "max_steps"));
      if (s.contains("switch_threshold"))
        cfg.switch_threshold = io::number_from(s["switch_threshold"], "switch_threshold");
      if (s.contains("admissible_tol")) cfg.admissible_tol = io::number_from(s["admissible_tol"], "admissible_tol");
    }
    if (!tol_s.empty()) cfg.abs_tol = cfg.rel_tol = parse_real(tol_s);
    if (!x_plus_s.empty()) cfg.x_plus = parse_real(x_plus_s);
    if (!max_steps_s.empty()) cfg.max_steps = parse_int(max_steps_s);
    if (!(cfg.abs_tol > 0) || !(cfg.rel_tol > 0)) throw Error(ErrorCode::InvalidSpec, "tolerances must be positive");
    if (!(cfg.x_plus >= 0)) throw Error(ErrorCode::InvalidSpec, "x_plus must be >= 0");
    if (cfg.max_steps <= 0) throw Error(ErrorCode::InvalidSpec, "max_steps must be positive");
    if (!(cfg.switch_threshold > 1)) throw Error(ErrorCode::InvalidSpec, "switch_threshold must exceed 1");

    unsigned workers = 0;
    if (config.contains("workers")) {
      if (!config["workers"].is_number_unsigned()) throw Error(ErrorCode::InvalidSpec, "workers must be >= 0");
      workers = config["workers"].get<unsigned>();
    }
    if (!workers_s.empty()) {
      const long w = parse_int(workers_s);
      if (w < 0) throw Error(ErrorCode::InvalidSpec, "workers must be >= 0");
      workers = static_cast<unsigned>(w);
    }
    if (out_path.empty() && config.contains("output")) {
      if (!config["output"].is_string()) throw Error(ErrorCode::InvalidSpec, "output must be a string");
      out_path = config["output"].get<std::string>();
    }
    if (diag_path.empty() && config.contains("diagnostics")) {
      if (!config["diagnostics"].is_string()) throw Error(ErrorCode::InvalidSpec, "diagnostics must be a string");
      diag_path = config["diagnostics"].get<std::string>();
    }

    std::optional<ProblemSpec> problem;
    if (cd.needs_problem) {
      json pj = config.contains("problem") ? config["problem"] : json::object();
      if (!pj.is_object()) throw Error(ErrorCode::InvalidSpec, "problem must be an object");
      if (!pj.contains("potential")) pj["potential"] = json::object();
      for (const auto& b : prob_bound[command]) {
        if (!b.opt->count()) continue;
        if (b.key == "parity") {
          pj["parity"] = b.value;
        } else {
          json& pot = pj["potential"];
          if (b.key == "b") pot.erase("nu");
          if (b.key == "nu") pot.erase("b");
          pot[b.key] = flag_value(b.type, b.value);
        }
      }
      problem = io::problem_from_json(pj);
    } else if (config.contains("problem")) {
      throw Error(ErrorCode::InvalidSpec, "command " + command + " takes no problem");
    }

    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    const Options o(opts);
    if (command == "eigs") oc = run_eigs(*problem, o, cfg, workers);
    else if (command == "index")
      oc = o.boolean("long_double", false) ? run_index_t<long double>(*problem, o, cfg, workers)
                                           : run_index_t<double>(*problem, o, cfg, workers);
    else if (command == "grid") oc = run_grid(*problem, o, cfg, workers);
    else if (command == "resonances") oc = run_resonances(o, cfg, workers);
    else if (command == "perturb") oc = run_perturb(o, cfg, workers);
    else if (command == "oracle") oc = run_oracle(o);
    else oc = run_range(o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out_path.empty()) out << oc.primary;
    else io::write_atomic(out_path, oc.primary);
    for (const auto& [p, content] : oc.extra) io::write_atomic(p, content);
    if (!diag_path.empty()) {
      json d;
      d["command"] = command;
      d["options"] = opts;
      d["solver"] = io::to_json(cfg);
      d["elapsed_seconds"] = secs;
      d["details"] = oc.diagnostics;
      io::write_atomic(diag_path, io::dump(d) + "\n");
    }
    return 0;
  } catch (const Error& e) {
    const int st = exit_code_for(e.code());
    report_error(err, std::string(to_string(e.code())), e.what(), st);
    return st;
  } catch (const json::exception& e) {
    report_error(err, "InvalidSpec", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "RuntimeError", e.what(), 3);
    return 3;
  }
}

}  // namespace spectral::cli

#endif  // SPECTRAL_CLI_HPP_
