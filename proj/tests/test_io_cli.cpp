#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"

#include "cusp/cli.hpp"
#include "cusp/continuation.hpp"
#include "cusp/errors.hpp"
#include "cusp/io.hpp"

using namespace cusp;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cusp_test_" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST_CASE("shortest round-trip formatting") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(u(rng), static_cast<int>(i % 40) - 20);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(NAN) == "nan");
  CHECK(io::format_double(-INFINITY) == "-inf");
}

TEST_CASE("wave CSV round trip") {
  SteadyProblem pb;
  pb.nonlinearity = {NonlinearityKind::abs, 2.0, 0.1};
  pb.M = 32;
  pb.N = 128;
  const LocalPrediction pr = local_predictor(1, 0.1, pb);
  const BranchPoint w = newton_solve(pb, BranchPoint{pr.phi, pr.c}, Constraint::fix_amplitude(0.1));
  const std::string csv = io::wave_csv(pb, w);
  CHECK(csv.rfind("x,phi,mu_minus_phi\n", 0) == 0);
  const io::WaveTable t = io::parse_wave_csv(csv);
  CHECK(t.x.size() == 128);
  const BranchPoint back = io::wave_from_table(pb, t);
  CHECK(back.c == doctest::Approx(w.c).epsilon(1e-14));
  for (std::size_t k = 1; k <= pb.M; ++k) CHECK(std::abs(back.phi[k] - w.phi[k]) < 1e-15);
  const io::WaveTable again = io::parse_wave_csv(io::wave_csv(pb, back));
  for (std::size_t j = 0; j < t.x.size(); ++j) {
    CHECK(again.x[j] == t.x[j]);
    CHECK(std::abs(again.phi[j] - t.phi[j]) < 1e-15);
    CHECK(std::abs(again.mu_minus_phi[j] - t.mu_minus_phi[j]) < 1e-14);
  }

  CHECK_THROWS_AS(io::parse_wave_csv("x,y\n1,2\n"), IoError);
  CHECK_THROWS_AS(io::parse_wave_csv("x,phi,mu_minus_phi\n1,2\n"), IoError);
  CHECK_THROWS_AS(io::parse_wave_csv("x,phi,mu_minus_phi\n1,abc,3\n"), IoError);
  SteadyProblem other = pb;
  other.M = 64;
  other.N = 256;
  CHECK_THROWS_AS(io::wave_from_table(other, t), IoError);
}

TEST_CASE("kernel table") {
  const std::vector<double> x = io::kernel_table_nodes(513);
  CHECK(x.size() == 513);
  for (double v : x) {
    CHECK(v != 0.0);
    CHECK(std::abs(v) < std::numbers::pi);
  }
  KernelSpec ks;
  const std::string csv = io::kernel_csv(ks, 9);
  CHECK(csv.rfind("x,K_alpha,singular,regular\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("config documents") {
  const nlohmann::json doc = {{"command", "homotopy"},
                              {"nonlinearity", {{"kind", "sgn"}, {"p", 3.0}, {"eps_schedule", {0.1, 0.01}}}},
                              {"discretization", {{"M", 64}, {"N", 256}}},
                              {"continuation", {{"delta", 0.02}}},
                              {"output_dir", "x"}};
  const cli::RunConfig c = cli::config_from_json(doc);
  CHECK(c.command == "homotopy");
  CHECK(c.kind == "sgn");
  CHECK(c.eps_schedule.size() == 2);
  CHECK(c.M == 64);
  CHECK(c.delta == 0.02);
  CHECK(c.output_dir == "x");
  CHECK_NOTHROW(cli::validate(c));

  try {
    cli::config_from_json({{"nonlinearity", {{"q", 1}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "nonlinearity.q");
  }
  CHECK_THROWS_AS(cli::config_from_json({{"discretization", {{"M", "many"}}}}), ConfigError);
}

TEST_CASE("config validation names the field") {
  auto field_of = [](cli::RunConfig c) {
    try {
      cli::validate(c);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  cli::RunConfig c;
  c.p = 0.5;
  CHECK(field_of(c) == "p");
  c = {};
  c.N = 1000;
  CHECK(field_of(c) == "N");
  c = {};
  c.N = 1024;
  CHECK(field_of(c) == "N");
  c = {};
  c.delta = 2.0;
  CHECK(field_of(c) == "delta");
  c = {};
  c.kind = "sgn";
  c.k = 2;
  CHECK(field_of(c) == "k");
  c = {};
  c.eps = 0.0;
  c.p = 2.5;
  CHECK(field_of(c) == "eps");
  c = {};
  c.command = "audit";
  CHECK(field_of(c) == "input");
  c = {};
  c.command = "fly";
  CHECK(field_of(c) == "command");
  c = {};
  c.command = "kernel";
  c.alpha = 1.5;
  CHECK(field_of(c) == "alpha");
  c = {};
  CHECK(field_of(c).empty());
}

TEST_CASE("run: config failure maps to exit code 2 with a record") {
  cli::RunConfig c;
  c.p = 0.5;
  try {
    cli::run(c);
    FAIL("expected RunError");
  } catch (const cli::RunError& e) {
    CHECK(e.exit_code() == 2);
    CHECK(e.record()["field"] == "p");
    CHECK(e.record()["stage"] == "validate");
    CHECK(cli::exit_code_for(e) == 2);
  }
  CHECK(cli::exit_code_for(IoError("x")) == 4);
  CHECK(cli::exit_code_for(ConvergenceError("x", 1.0, 3)) == 3);
  CHECK(cli::error_record(ConvergenceError("x", 1.0, 3))["iterations"] == 3);
}

TEST_CASE("run: kernel, branch, audit round trip and determinism") {
  const fs::path dir = scratch("run");
  cli::RunConfig k;
  k.command = "kernel";
  k.kernel_nodes = 33;
  k.output_dir = dir / "kernel";
  CHECK(cli::run(k).exit_code == 0);
  CHECK(fs::exists(dir / "kernel" / "kernel.csv"));

  cli::RunConfig b;
  b.M = 64;
  b.N = 256;
  b.eps = 0.1;
  b.output_dir = dir / "b1";
  const cli::RunResult r1 = cli::run(b);
  CHECK(r1.exit_code == 0);
  CHECK(r1.summary["branch"]["terminated_reason"] == "crest_reached");
  b.output_dir = dir / "b2";
  cli::run(b);
  CHECK(io::read_file(dir / "b1" / "wave.csv") == io::read_file(dir / "b2" / "wave.csv"));
  CHECK(io::read_file(dir / "b1" / "branch.json") == io::read_file(dir / "b2" / "branch.json"));

  cli::RunConfig a = b;
  a.command = "audit";
  a.input = dir / "b1" / "wave.csv";
  a.output_dir = dir / "audit";
  const cli::RunResult ra = cli::run(a);
  CHECK(ra.exit_code == 0);
  const nlohmann::json& before = r1.summary["final_audit"];
  const nlohmann::json& after = ra.summary["report"];
  for (const char* key : {"speed_bound_ok", "monotone_ok", "monotone_resolved_ok", "range_ok"})
    CHECK(before[key] == after[key]);

  cli::RunConfig bad = a;
  bad.input = dir / "missing.csv";
  try {
    cli::run(bad);
    FAIL("expected RunError");
  } catch (const cli::RunError& e) {
    CHECK(e.exit_code() == 4);
  }
  fs::remove_all(dir);
}
