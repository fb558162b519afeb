#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spectral/io.hpp"

using namespace spectral;
using io::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::NotAnEigenvalue;
}

}  // namespace

TEST(Io, ProblemRoundTripsThroughText) {
  const std::vector<ProblemSpec> problems = {
      {Harmonic{sqrt_i()}, Parity::EvenNeumann},
      {Harmonic{cplx(2.5, -0.3)}, Parity::WholeLine},
      {GaussianBarrier{100}, Parity::OddDirichlet},
      {DilatedGaussian{31.622776601683793, std::numbers::pi / 16}, Parity::EvenNeumann},
      {dilated_gaussian_nu(0, std::numbers::pi / 8), Parity::WholeLine},
      {PerturbedHarmonic{sqrt_i(), 1e-7, 6.413342, true}, Parity::EvenNeumann},
      {PerturbedHarmonic{sqrt_i(), 1e-3, 5.0, false}, Parity::WholeLine},
      {WorstCaseJwkb{sqrt_i(), 2e-7, 3.2066710000000001, false}, Parity::WholeLine},
  };
  for (const auto& p : problems) {
    const std::string text = io::dump(io::to_json(p));
    const ProblemSpec back = io::problem_from_json(json::parse(text));
    EXPECT_TRUE(back == p) << text;
    EXPECT_EQ(io::dump(io::to_json(back)), text);
  }
}

TEST(Io, TopLevelThetaDilatesTheBarrier) {
  const auto p = io::problem_from_json(
      json::parse(R"({"potential": {"kind": "gaussian_barrier", "nu": 1e-4}, "theta": 0.5, "parity": "whole"})"));
  ASSERT_TRUE(std::holds_alternative<DilatedGaussian>(p.potential));
  EXPECT_NEAR(std::get<DilatedGaussian>(p.potential).b, 100, 1e-12);
  EXPECT_EQ(std::get<DilatedGaussian>(p.potential).theta, 0.5);
  EXPECT_EQ(p.parity, Parity::WholeLine);
}

TEST(Io, RejectsMalformedProblems) {
  auto parse = [](const char* s) { return [s] { io::problem_from_json(json::parse(s)); }; };
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "harmonic", "c": 1, "x": 2}})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "harmonic", "c": 1}, "extra": 0})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "nope"}})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "gaussian_barrier", "b": 10, "nu": 0.01}})")),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "gaussian_barrier", "nu": 0}})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "dilated_gaussian", "b": 10}})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "harmonic", "c": 1}, "theta": 0.3})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "harmonic", "c": -1}})")), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "harmonic", "c": 1}, "parity": "left"})")),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "perturbed_harmonic", "c": 1, "eps": 0.1, "m": 2},
                              "parity": "even"})")),
            ErrorCode::ParityMismatch);
  EXPECT_EQ(code_of(parse(R"({"potential": {"kind": "perturbed_harmonic", "c": 1, "eps": 0.1, "m": 2,
                              "even_extension": "yes"}, "parity": "whole"})")),
            ErrorCode::InvalidSpec);
}

TEST(Io, ComplexGrammar) {
  EXPECT_EQ(io::parse_complex("1.5"), cplx(1.5, 0));
  EXPECT_EQ(io::parse_complex("-2e-3"), cplx(-2e-3, 0));
  EXPECT_EQ(io::parse_complex("i"), cplx(0, 1));
  EXPECT_EQ(io::parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(io::parse_complex("2.5i"), cplx(0, 2.5));
  EXPECT_EQ(io::parse_complex("1+i"), cplx(1, 1));
  EXPECT_EQ(io::parse_complex("0.7071-0.7071i"), cplx(0.7071, -0.7071));
  EXPECT_EQ(io::parse_complex("1e2+.5e-1i"), cplx(100, 0.05));
  for (const char* bad : {"", "1+", "1 + 2i", "j", "1+2j", "i2", "1+2i+3", "--1", "abc", "1.2.3"})
    EXPECT_EQ(code_of([bad] { io::parse_complex(bad); }), ErrorCode::InvalidSpec) << bad;
  const cplx z(0.1, -1.0 / 3);
  EXPECT_EQ(io::parse_complex(io::format_complex(z)), z);
}

TEST(Io, NumberFormat) {
  EXPECT_EQ(io::format_double(1), "1.0");
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(-0.0), "-0.0");
  EXPECT_EQ(io::format_double(1e300), "1.0000000000000001e+300");
  EXPECT_EQ(io::format_double(std::nan("")), "null");
  for (double v : {std::numbers::pi, 1.0 / 3, 6.02e23, -4.9e-324})
    EXPECT_EQ(std::strtod(io::format_double(v).c_str(), nullptr), v);
}

TEST(Io, DumpIsDeterministicAndOrdered) {
  json j;
  j["zeta"] = 1;
  j["alpha"] = json::array({0.5, "s", true, nullptr});
  j["mid"] = json::object();
  const std::string a = io::dump(j), b = io::dump(json::parse(a));
  EXPECT_EQ(a, b);
  EXPECT_LT(a.find("zeta"), a.find("alpha"));
  EXPECT_EQ(json::parse(a), j);
}

TEST(Io, GridCsv) {
  ContourGrid g;
  g.nodes = {{cplx(1, 0.5), cplx(10, 0), true}, {cplx(2, 0.5), cplx(0), false}};
  const std::string csv = io::grid_csv(g);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "re_z,im_z,re_F,im_F,log10_abs_F");
  std::getline(is, line);
  EXPECT_EQ(line, "1.0,0.5,10.0,0.0,1.0");
  std::getline(is, line);
  EXPECT_EQ(line, "2.0,0.5,nan,nan,nan");
}

TEST(Io, RectAndSettings) {
  const Rect r{0.5, 3.0, -1.0, 2.0};
  const Rect back = io::rect_from(io::to_json(r));
  EXPECT_EQ(back.re_lo, r.re_lo);
  EXPECT_EQ(back.im_hi, r.im_hi);
  EXPECT_EQ(code_of([] { io::rect_from(json::array({1, 0, 0, 1})); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { io::rect_from(json::array({0, 1, 0})); }), ErrorCode::InvalidSpec);
  const json s = io::to_json(SolverConfig{});
  EXPECT_TRUE(s.contains("abs_tol"));
}

TEST(Io, AtomicWriteReplacesWholeFile) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("spectral_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path f = dir / "out.json";
  io::write_atomic(f, "first version, longer\n");
  io::write_atomic(f, "second\n");
  std::ifstream in(f);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1);
  EXPECT_THROW(io::write_atomic(dir / "missing" / "x.json", "x"), std::runtime_error);
  fs::remove_all(dir);
}
