#include "cusp/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"

#include "cusp/analysis.hpp"
#include "cusp/continuation.hpp"
#include "cusp/errors.hpp"
#include "cusp/io.hpp"
#include "cusp/kernel.hpp"

namespace cusp::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"kernel", "branch", "homotopy", "verify-asymptotics",
                                      "regularity", "audit"};

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& field) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, "field '" + field + "' has the wrong type: " + e.what());
  }
}

// Copy every known key of `obj` through `setters`; unknown keys are errors.
void apply_object(const json& obj, const std::string& prefix,
                  const std::map<std::string, std::function<void(const json&, const std::string&)>>& setters) {
  if (!obj.is_object()) throw ConfigError(prefix, "'" + prefix + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(field, "unknown config key '" + field + "'");
    it->second(obj, field);
  }
}

template <class T>
std::function<void(const json&, const std::string&)> into(T& target, const std::string& key) {
  return [&target, key](const json& obj, const std::string& field) { target = get_field<T>(obj, key, field); };
}

SteadyProblem make_problem(const RunConfig& c) {
  SteadyProblem p;
  p.symbol = {parse_symbol_family(c.symbol_family), c.alpha};
  p.nonlinearity = {parse_nonlinearity_kind(c.kind), c.p, c.eps};
  p.M = c.M;
  p.N = c.N;
  p.k = c.k;
  return p;
}

ContinuationConfig make_continuation(const RunConfig& c) {
  ContinuationConfig cc;
  cc.s0 = c.s0;
  cc.ds = c.ds;
  cc.ds_min = c.ds_min;
  cc.ds_max = c.ds_max;
  cc.crest_margin = c.delta;
  cc.newton_tol = c.newton_tol;
  cc.newton_max_iterations = c.newton_max_iterations;
  cc.max_steps = c.max_steps;
  cc.eps_schedule = c.eps_schedule;
  return cc;
}

std::vector<double> schedule_or_default(const RunConfig& c) {
  return c.eps_schedule.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3} : c.eps_schedule;
}

json config_echo(const RunConfig& c) {
  return {{"command", c.command},
          {"symbol", {{"family", c.symbol_family}, {"alpha", c.alpha}}},
          {"nonlinearity", {{"kind", c.kind}, {"p", c.p}, {"eps", c.eps}, {"eps_schedule", c.eps_schedule}}},
          {"discretization", {{"M", c.M}, {"N", c.N}, {"k", c.k}}},
          {"continuation",
           {{"s0", c.s0},
            {"ds", c.ds},
            {"ds_min", c.ds_min},
            {"ds_max", c.ds_max},
            {"delta", c.delta},
            {"newton_tol", c.newton_tol},
            {"newton_max_iterations", c.newton_max_iterations},
            {"max_steps", c.max_steps}}},
          {"seed", c.seed}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Output {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
  void write(const std::string& name, const std::string& text) {
    const std::filesystem::path path = dir / name;
    io::write_file(path, text);
    files.push_back(path);
  }
};

json homotopy_json(const HomotopyResult& r, const SteadyProblem& base) {
  json stages = json::array();
  for (const HomotopyStage& s : r.stages) {
    SteadyProblem pb = base;
    pb.nonlinearity.eps = s.eps;
    json st = {{"eps", s.eps}, {"ok", s.ok}, {"failure", s.failure},
               {"terminated_reason", to_string(s.branch.terminated_reason)},
               {"points", s.branch.points.size()}, {"rejected_steps", s.branch.rejected_steps}};
    if (!s.branch.points.empty()) {
      const double phi0 = s.final_point.phi.evaluate(0.0);
      st["final_point"] = io::to_json(s.final_point, pb);
      st["phi_at_0"] = io::number(phi0);
      st["mu_limit"] = io::number(s.mu_limit);
      st["relative_crest_gap"] = io::number(std::abs(phi0 - s.mu_limit) / s.mu_limit);
    }
    stages.push_back(st);
  }
  return {{"complete", r.complete}, {"stages", stages}};
}

// Final near-crest wave: the branch at eps, or the homotopy when a schedule is set.
struct NearCrest {
  SteadyProblem problem;
  BranchPoint wave;
  bool reached = false;
  json record;
};

NearCrest near_crest_wave(const RunConfig& c) {
  NearCrest out;
  out.problem = make_problem(c);
  const ContinuationConfig cc = make_continuation(c);
  if (c.eps_schedule.empty()) {
    const Branch br = branch_follow(out.problem, cc);
    if (br.points.empty()) throw ConvergenceError("branch produced no points: " + br.diagnostics, NAN, 0);
    out.wave = br.points.back();
    out.reached = br.terminated_reason == TerminationReason::crest_reached;
    out.record = io::branch_summary(br, out.problem);
  } else {
    const HomotopyResult hr = eps_homotopy(out.problem, cc);
    if (hr.stages.empty() || hr.stages.back().branch.points.empty())
      throw ConvergenceError("homotopy produced no wave", NAN, 0);
    out.problem.nonlinearity.eps = hr.stages.back().eps;
    out.wave = hr.stages.back().final_point;
    out.reached = hr.complete;
    out.record = homotopy_json(hr, out.problem);
  }
  return out;
}

RunResult run_command(const RunConfig& c, std::string& stage) {
  Output out{c.output_dir, {}};
  RunResult res;
  const json echo = config_echo(c);

  if (c.command == "kernel") {
    stage = "kernel table";
    KernelSpec ks;
    ks.alpha = c.alpha;
    out.write("kernel.csv", io::kernel_csv(ks, c.kernel_nodes));
    stage = "kernel summary";
    res.summary = {{"config", echo},
                   {"alpha", c.alpha},
                   {"l1_norm", io::number(kernel_l1_norm(ks).value)},
                   {"zero", io::number(kernel_zero(ks))},
                   {"nodes", c.kernel_nodes}};
    if (c.alpha < 1.0) res.summary["gamma_alpha"] = io::number(gamma_coefficient(c.alpha));
    out.write("kernel_summary.json", dump(res.summary));
  } else if (c.command == "branch") {
    stage = "branch_follow";
    const SteadyProblem pb = make_problem(c);
    const Branch br = branch_follow(pb, make_continuation(c));
    stage = "branch output";
    res.summary = {{"config", echo}, {"branch", io::branch_summary(br, pb)}};
    if (!br.points.empty()) {
      res.summary["final_audit"] = io::to_json(wave_audit(br.points.back(), pb, c.delta));
      out.write("wave.csv", io::wave_csv(pb, br.points.back()));
    }
    out.write("branch.json", dump(res.summary));
    if (br.terminated_reason != TerminationReason::crest_reached) {
      res.exit_code = 3;
      res.failure = "branch terminated with " + to_string(br.terminated_reason) + ": " + br.diagnostics;
    }
  } else if (c.command == "homotopy") {
    stage = "eps_homotopy";
    RunConfig cs = c;
    cs.eps_schedule = schedule_or_default(c);
    SteadyProblem pb = make_problem(cs);
    const HomotopyResult hr = eps_homotopy(pb, make_continuation(cs));
    stage = "homotopy output";
    res.summary = {{"config", config_echo(cs)}, {"homotopy", homotopy_json(hr, pb)}};
    for (std::size_t i = 0; i < hr.stages.size(); ++i) {
      if (hr.stages[i].branch.points.empty()) continue;
      pb.nonlinearity.eps = hr.stages[i].eps;
      out.write("wave_stage" + std::to_string(i) + ".csv", io::wave_csv(pb, hr.stages[i].final_point));
    }
    out.write("homotopy.json", dump(res.summary));
    if (!hr.complete) {
      res.exit_code = 3;
      res.failure = "homotopy incomplete: " + (hr.stages.empty() ? std::string("no stages") : hr.stages.back().failure);
    }
  } else if (c.command == "verify-asymptotics") {
    stage = "verify_asymptotics";
    const SteadyProblem pb = make_problem(c);
    const AsymptoticsReport rep = verify_asymptotics(pb, c.k, c.s_list);
    res.summary = {{"config", echo}, {"asymptotics", io::to_json(rep)}};
    out.write("asymptotics.json", dump(res.summary));
  } else if (c.command == "regularity") {
    stage = c.eps_schedule.empty() ? "branch_follow" : "eps_homotopy";
    const NearCrest nc = near_crest_wave(c);
    stage = "regularity fits";
    json fits = json::object();
    try {
      fits["crest"] = io::to_json(cusp_exponent_fit(nc.wave, nc.problem, std::nullopt, c.delta));
    } catch (const Error& e) {
      fits["crest"] = {{"error", e.what()}};
    }
    try {
      if (nc.problem.odd_subspace()) {
        const std::vector<double> v = synthesize(nc.wave.phi, nc.problem.grid());
        const double mu = mu_of_speed(nc.problem.nonlinearity, nc.wave.c);
        fits["trough"] = io::to_json(gap_exponent_fit(nc.problem.grid(), v, Anchor::trough, -mu,
                                                      auto_fit_window(nc.problem)));
      } else {
        fits["trough"] = io::to_json(local_exponent_fit(nc.wave, nc.problem, Anchor::trough));
      }
    } catch (const Error& e) {
      fits["trough"] = {{"error", e.what()}};
    }
    res.summary = {{"config", echo},
                   {"crest_reached", nc.reached},
                   {"fits", fits},
                   {"lower_bound", io::to_json(lower_bound_check(nc.wave, nc.problem, std::nullopt, c.ratio_floor))},
                   {"report", io::to_json(wave_audit(nc.wave, nc.problem, c.delta))},
                   {"run", nc.record}};
    out.write("wave.csv", io::wave_csv(nc.problem, nc.wave));
    out.write("regularity.json", dump(res.summary));
    if (!nc.reached) {
      res.exit_code = 3;
      res.failure = "the wave did not reach the crest margin";
    }
  } else {  // audit
    stage = "read wave";
    const SteadyProblem pb = make_problem(c);
    const BranchPoint wave = io::wave_from_table(pb, io::parse_wave_csv(io::read_file(c.input)));
    stage = "wave_audit";
    res.summary = {{"config", echo},
                   {"input", c.input.string()},
                   {"point", io::to_json(wave, pb)},
                   {"report", io::to_json(wave_audit(wave, pb, c.delta))}};
    out.write("audit.json", dump(res.summary));
  }
  res.files = std::move(out.files);
  return res;
}

}  // namespace

RunConfig config_from_json(const json& doc, RunConfig base) {
  RunConfig& c = base;
  std::string input, output_dir;
  bool have_input = false, have_output = false;
  apply_object(doc, "",
               {{"command", into(c.command, "command")},
                {"seed", into(c.seed, "seed")},
                {"input", [&](const json& o, const std::string& f) { input = get_field<std::string>(o, "input", f); have_input = true; }},
                {"output_dir", [&](const json& o, const std::string& f) { output_dir = get_field<std::string>(o, "output_dir", f); have_output = true; }},
                {"symbol", [&](const json& o, const std::string& f) {
                   apply_object(o.at("symbol"), f, {{"family", into(c.symbol_family, "family")}, {"alpha", into(c.alpha, "alpha")}});
                 }},
                {"nonlinearity", [&](const json& o, const std::string& f) {
                   apply_object(o.at("nonlinearity"), f,
                                {{"kind", into(c.kind, "kind")},
                                 {"p", into(c.p, "p")},
                                 {"eps", into(c.eps, "eps")},
                                 {"eps_schedule", into(c.eps_schedule, "eps_schedule")}});
                 }},
                {"discretization", [&](const json& o, const std::string& f) {
                   apply_object(o.at("discretization"), f, {{"M", into(c.M, "M")}, {"N", into(c.N, "N")}, {"k", into(c.k, "k")}});
                 }},
                {"continuation", [&](const json& o, const std::string& f) {
                   apply_object(o.at("continuation"), f,
                                {{"s0", into(c.s0, "s0")},
                                 {"ds", into(c.ds, "ds")},
                                 {"ds_min", into(c.ds_min, "ds_min")},
                                 {"ds_max", into(c.ds_max, "ds_max")},
                                 {"delta", into(c.delta, "delta")},
                                 {"newton_tol", into(c.newton_tol, "newton_tol")},
                                 {"newton_max_iterations", into(c.newton_max_iterations, "newton_max_iterations")},
                                 {"max_steps", into(c.max_steps, "max_steps")}});
                 }},
                {"asymptotics", [&](const json& o, const std::string& f) {
                   apply_object(o.at("asymptotics"), f, {{"s_list", into(c.s_list, "s_list")}});
                 }},
                {"kernel", [&](const json& o, const std::string& f) {
                   apply_object(o.at("kernel"), f, {{"nodes", into(c.kernel_nodes, "nodes")}});
                 }},
                {"regularity", [&](const json& o, const std::string& f) {
                   apply_object(o.at("regularity"), f, {{"ratio_floor", into(c.ratio_floor, "ratio_floor")}});
                 }}});
  if (have_input) c.input = input;
  if (have_output) c.output_dir = output_dir;
  return c;
}

void validate(const RunConfig& c) {
  if (!kCommands.count(c.command))
    throw ConfigError("command", "command must be one of kernel, branch, homotopy, verify-asymptotics, regularity, audit");
  if (!std::isfinite(c.alpha)) throw ConfigError("alpha", "alpha must be finite");
  try {
    parse_symbol_family(c.symbol_family);
  } catch (const Error& e) {
    throw ConfigError("symbol_family", e.what());
  }
  try {
    SymbolSpec{parse_symbol_family(c.symbol_family), c.alpha}.validate();
  } catch (const Error& e) {
    throw ConfigError("alpha", e.what());
  }
  if (c.command == "kernel") {
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha", "kernel tables need 0 < alpha <= 1");
    if (c.kernel_nodes < 1) throw ConfigError("kernel.nodes", "need at least one node");
    if (c.output_dir.empty()) throw ConfigError("output_dir", "output_dir must not be empty");
    return;
  }
  NonlinearityKind kind;
  try {
    kind = parse_nonlinearity_kind(c.kind);
  } catch (const Error& e) {
    throw ConfigError("kind", e.what());
  }
  if (!(c.p > 1.0) || !std::isfinite(c.p)) throw ConfigError("p", "p must satisfy p > 1");
  if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) throw ConfigError("eps", "eps must satisfy eps >= 0");
  if (c.eps == 0.0 && c.eps_schedule.empty() && c.command != "audit") {
    const bool integer = std::floor(c.p) == c.p;
    const bool parity = integer && (static_cast<long long>(c.p) % 2 == (kind == NonlinearityKind::abs ? 0 : 1));
    if (!parity)
      throw ConfigError("eps", "eps = 0 needs an integer p that is even (abs) or odd (sgn); use eps > 0 or an eps_schedule");
  }
  if (c.k < 1) throw ConfigError("k", "k must be >= 1");
  if (kind == NonlinearityKind::sgn && c.k % 2 == 0) throw ConfigError("k", "sgn branches need odd k");
  if (c.M < 1) throw ConfigError("M", "M must be >= 1");
  if (c.k > c.M) throw ConfigError("k", "k must not exceed M");
  if (c.N < 4 || (c.N & (c.N - 1)) != 0) throw ConfigError("N", "N must be a power of two >= 4");
  if (c.N < 4 * c.M) throw ConfigError("N", "N must satisfy N >= 4M");
  try {
    ContinuationConfig cc = make_continuation(c);
    if (c.command == "homotopy") cc.eps_schedule = schedule_or_default(c);
    cc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.field() == "crest_margin" ? "delta" : e.field(), e.what());
  }
  if (c.command == "verify-asymptotics") {
    if (c.s_list.size() < 2) throw ConfigError("s_list", "need at least two amplitudes");
    for (double s : c.s_list)
      if (!(s != 0.0) || !std::isfinite(s)) throw ConfigError("s_list", "amplitudes must be finite and nonzero");
  }
  if (!(c.ratio_floor >= 0.0)) throw ConfigError("ratio_floor", "ratio_floor must be >= 0");
  if (c.command == "audit" && c.input.empty()) throw ConfigError("input", "audit needs an input wave CSV");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "output_dir must not be empty");
}

int exit_code_for(const std::exception& e) {
  if (const auto* r = dynamic_cast<const RunError*>(&e)) return r->exit_code();
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const CLI::Error*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 3;
}

json error_record(const std::exception& e) {
  if (const auto* r = dynamic_cast<const RunError*>(&e)) return r->record();
  const int code = exit_code_for(e);
  json rec = {{"error", code == 2 ? "config" : code == 4 ? "io" : "numerical"},
              {"message", e.what()},
              {"exit_code", code}};
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) rec["field"] = c->field();
  if (const auto* c = dynamic_cast<const ConvergenceError*>(&e)) {
    rec["last_residual"] = io::number(c->last_residual());
    rec["iterations"] = c->iterations();
  }
  if (const auto* c = dynamic_cast<const NearSingularError*>(&e)) rec["condition"] = io::number(c->condition());
  if (const auto* c = dynamic_cast<const AccuracyError*>(&e)) rec["estimate"] = io::number(c->estimate());
  return rec;
}

RunResult run(const RunConfig& config) {
  std::string stage = "validate";
  try {
    validate(config);
    return run_command(config, stage);
  } catch (const std::exception& e) {
    json rec = error_record(e);
    rec["stage"] = stage;
    rec["command"] = config.command;
    throw RunError(stage, exit_code_for(e), rec);
  }
}

int main_entry(int argc, char** argv) {
  RunConfig flags;
  CLI::App app{"Traveling waves with fractional negative-order dispersion: kernel tables, branches, "
               "eps-homotopies and regularity diagnostics."};
  std::string config_path;
  std::string input, output_dir = flags.output_dir.string();
  app.add_option("command", flags.command, "kernel | branch | homotopy | verify-asymptotics | regularity | audit");
  app.add_option("--config", config_path, "JSON run configuration");
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto flag = [&](const std::string& name, auto member, const std::string& help) {
    CLI::Option* opt = app.add_option(name, flags.*member, help);
    overrides.push_back({opt, [&flags, member](RunConfig& dst) { dst.*member = flags.*member; }});
  };
  flag("--alpha", &RunConfig::alpha, "dispersion order");
  flag("--symbol-family", &RunConfig::symbol_family, "neg_order | whitham_power | bessel");
  flag("--kind", &RunConfig::kind, "abs | sgn");
  flag("--p", &RunConfig::p, "nonlinearity power (> 1)");
  flag("--eps", &RunConfig::eps, "regularization (>= 0)");
  flag("--eps-schedule", &RunConfig::eps_schedule, "strictly decreasing eps values");
  flag("--k", &RunConfig::k, "base wavenumber");
  flag("--M", &RunConfig::M, "cosine modes");
  flag("--N", &RunConfig::N, "grid points (power of two, >= 4M)");
  flag("--s0", &RunConfig::s0, "starting amplitude");
  flag("--ds", &RunConfig::ds, "initial arclength step");
  flag("--ds-min", &RunConfig::ds_min, "smallest step");
  flag("--ds-max", &RunConfig::ds_max, "largest step");
  flag("--delta", &RunConfig::delta, "crest margin relative to mu_eps");
  flag("--newton-tol", &RunConfig::newton_tol, "Newton residual tolerance");
  flag("--newton-max-iterations", &RunConfig::newton_max_iterations, "Newton iteration cap");
  flag("--max-steps", &RunConfig::max_steps, "continuation step cap");
  flag("--s-list", &RunConfig::s_list, "amplitudes for verify-asymptotics");
  flag("--kernel-nodes", &RunConfig::kernel_nodes, "rows of the kernel table");
  flag("--ratio-floor", &RunConfig::ratio_floor, "floor for the Hölder lower-bound ratio");
  flag("--seed", &RunConfig::seed, "seed recorded with the outputs");
  CLI::Option* input_opt = app.add_option("--input", input, "wave CSV for audit");
  CLI::Option* out_opt = app.add_option("--output-dir", output_dir, "output directory");

  RunConfig config;
  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      json doc;
      try {
        doc = json::parse(io::read_file(config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
      }
      config = config_from_json(doc);
    }
    if (app.get_option("command")->count() > 0 || config_path.empty()) config.command = flags.command;
    for (auto& [opt, copy] : overrides)
      if (opt->count() > 0) copy(config);
    if (input_opt->count() > 0) config.input = input;
    if (out_opt->count() > 0 || config_path.empty()) config.output_dir = output_dir;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "config"}, {"message", e.what()}, {"exit_code", 2}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << error_record(e).dump() << "\n";
    return exit_code_for(e);
  }

  try {
    const RunResult r = run(config);
    for (const auto& f : r.files) std::cout << f.string() << "\n";
    if (r.exit_code != 0)
      std::cerr << json{{"error", "numerical"}, {"command", config.command}, {"message", r.failure},
                        {"exit_code", r.exit_code}}.dump()
                << "\n";
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << error_record(e).dump() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace cusp::cli
