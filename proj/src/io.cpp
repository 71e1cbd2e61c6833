#include "cusp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <system_error>

#include "cusp/errors.hpp"

namespace cusp::io {
namespace {

constexpr double kPi = std::numbers::pi;

double parse_double(const std::string& field, std::size_t line) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw IoError("wave CSV line " + std::to_string(line) + ": cannot parse '" + field + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string wave_csv(const SteadyProblem& problem, const BranchPoint& point) {
  const Grid grid = problem.grid();
  const std::vector<double> v = synthesize(point.phi, grid);
  const double mu = point.c > 0.0 ? mu_of_speed(problem.nonlinearity, point.c)
                                  : std::numeric_limits<double>::quiet_NaN();
  std::string out = "x,phi,mu_minus_phi\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += format_double(grid.node(j));
    out += ',';
    out += format_double(v[j]);
    out += ',';
    out += format_double(mu - v[j]);
    out += '\n';
  }
  return out;
}

WaveTable parse_wave_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,phi,mu_minus_phi")
    throw IoError("wave CSV: expected header 'x,phi,mu_minus_phi'");
  WaveTable t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 3) throw IoError("wave CSV line " + std::to_string(lineno) + ": expected 3 fields");
    t.x.push_back(parse_double(f[0], lineno));
    t.phi.push_back(parse_double(f[1], lineno));
    t.mu_minus_phi.push_back(parse_double(f[2], lineno));
  }
  if (t.x.empty()) throw IoError("wave CSV: no data rows");
  return t;
}

BranchPoint wave_from_table(const SteadyProblem& problem, const WaveTable& table) {
  problem.validate();
  const Grid grid = problem.grid();
  if (table.x.size() != grid.size())
    throw IoError("wave CSV has " + std::to_string(table.x.size()) + " rows, grid has " +
                  std::to_string(grid.size()) + " nodes");
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (std::abs(table.x[j] - grid.node(j)) > 1e-12)
      throw IoError("wave CSV abscissae do not match the grid at row " + std::to_string(j + 1));
  CosineSeries phi = analyze(table.phi, grid, problem.M);
  if (problem.odd_subspace()) phi.make_antisymmetric();
  double c = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double mu = table.mu_minus_phi[j] + table.phi[j];
    if (std::isfinite(mu) && mu > 0.0) {
      c = n_eval(problem.nonlinearity, mu, 1);
      break;
    }
  }
  if (!std::isfinite(c)) throw IoError("wave CSV carries no finite crest value");
  return evaluate_point(problem, phi, c);
}

std::vector<double> kernel_table_nodes(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = -kPi + 2.0 * kPi * (static_cast<double>(j) + 0.25) / static_cast<double>(n);
  return x;
}

std::string kernel_csv(const KernelSpec& spec, std::size_t n) {
  spec.validate();
  std::string out = "x,K_alpha,singular,regular\n";
  for (double x : kernel_table_nodes(n)) {
    double value, singular, regular;
    if (spec.alpha == 1.0) {
      value = kernel_eval(spec, x).value;
      singular = -std::log(std::abs(x)) / kPi;
      regular = value - singular;
    } else {
      const KernelDecomposition d = kernel_decompose(spec, x);
      singular = d.singular;
      regular = d.regular;
      value = d.singular + d.regular;
    }
    out += format_double(x) + ',' + format_double(value) + ',' + format_double(singular) + ',' +
           format_double(regular) + '\n';
  }
  return out;
}

nlohmann::json to_json(const BranchPoint& point, const SteadyProblem& problem) {
  const RegularityReport audit = wave_audit(point, problem);
  return {
      {"s", number(point.s)},
      {"c", number(point.c)},
      {"max_value", number(point.max_value)},
      {"mu_eps", number(point.mu_eps)},
      {"residual_norm", number(point.residual_norm)},
      {"monotone_ok", audit.monotone_ok},
      {"monotone_resolved_ok", audit.monotone_resolved_ok},
      {"antisymmetry_defect", number(audit.antisymmetry_defect)},
      {"iterations", point.iterations},
      {"condition", number(point.condition)},
  };
}

nlohmann::json to_json(const RegularityReport& r) {
  return {
      {"alpha_hat", number(r.alpha_hat)},
      {"fit_window", {number(r.fit_window.lo), number(r.fit_window.hi)}},
      {"ratio_bounds", {number(r.ratio_min), number(r.ratio_max)}},
      {"speed", number(r.speed)},
      {"speed_bound", number(r.speed_bound)},
      {"speed_bound_ok", r.speed_bound_ok},
      {"monotone_ok", r.monotone_ok},
      {"min_first_difference", number(r.min_first_difference)},
      {"resolution_floor", number(r.resolution_floor)},
      {"monotone_resolved_ok", r.monotone_resolved_ok},
      {"range_ok", r.range_ok},
      {"antisymmetry_defect", number(r.antisymmetry_defect)},
      {"max_gap", number(r.max_gap)},
      {"mu_eps", number(r.mu_eps)},
      {"notes", r.notes},
  };
}

nlohmann::json to_json(const LowerBoundReport& r) {
  return {
      {"min_ratio", number(r.min_ratio)},
      {"max_ratio", number(r.max_ratio)},
      {"floor", number(r.floor)},
      {"passed", r.passed},
      {"window", {number(r.window.lo), number(r.window.hi)}},
      {"nodes", r.nodes},
  };
}

nlohmann::json to_json(const ExponentFit& f) {
  return {
      {"exponent", number(f.exponent)},
      {"log_prefactor", number(f.log_prefactor)},
      {"window", {number(f.window.lo), number(f.window.hi)}},
      {"nodes", f.nodes},
  };
}

nlohmann::json to_json(const AsymptoticsReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const AsymptoticsSample& s : r.samples)
    samples.push_back({{"s", number(s.s)},
                       {"c", number(s.c)},
                       {"c_mirror", number(s.c_mirror)},
                       {"harmonic_coefficient", number(s.harmonic_coefficient)},
                       {"residual_norm", number(s.residual_norm)},
                       {"iterations", s.iterations}});
  return {
      {"samples", samples},
      {"fitted_phi_coefficient", number(r.fitted_phi_coefficient)},
      {"formula_phi_coefficient", number(r.formula_phi_coefficient)},
      {"phi_relative_deviation", number(r.phi_relative_deviation)},
      {"fitted_speed_coefficient", number(r.fitted_speed_coefficient)},
      {"quadrature_speed_coefficient", number(r.quadrature_speed_coefficient)},
      {"stated_speed_coefficient", number(r.stated_speed_coefficient)},
      {"derived_speed_coefficient", number(r.derived_speed_coefficient)},
      {"deviation_vs_quadrature", number(r.deviation_vs_quadrature)},
      {"deviation_vs_stated", number(r.deviation_vs_stated)},
      {"deviation_vs_derived", number(r.deviation_vs_derived)},
      {"matching_candidate", r.matching_candidate},
      {"speed_evenness_defect", number(r.speed_evenness_defect)},
  };
}

nlohmann::json branch_summary(const Branch& branch, const SteadyProblem& problem) {
  nlohmann::json points = nlohmann::json::array();
  for (const BranchPoint& p : branch.points) points.push_back(to_json(p, problem));
  return {
      {"terminated_reason", to_string(branch.terminated_reason)},
      {"diagnostics", branch.diagnostics},
      {"rejected_steps", branch.rejected_steps},
      {"points", points},
  };
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

}  // namespace cusp::io
