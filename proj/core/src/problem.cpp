#include "kcoshj/problem.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "kcoshj/csv.hpp"
#include "kcoshj/errors.hpp"

namespace kcoshj {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& label, const std::string& message) {
  throw ValidationError(label + ": " + message);
}

void check_known_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                      const std::string& label, const std::string& where) {
  for (const auto& entry : node) {
    const std::string key = entry.first.as<std::string>();
    if (!allowed.count(key)) {
      fail(label, "unknown key '" + key + "' in " + where);
    }
  }
}

double as_double(const YAML::Node& node, const std::string& label, const std::string& what) {
  if (!node.IsScalar()) fail(label, what + " must be a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(label, what + " must be a number");
  }
}

int as_int(const YAML::Node& node, const std::string& label, const std::string& what) {
  if (!node.IsScalar()) fail(label, what + " must be an integer");
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    fail(label, what + " must be an integer");
  }
}

std::vector<double> as_double_list(const YAML::Node& node, const std::string& label,
                                   const std::string& what) {
  if (!node.IsSequence()) fail(label, what + " must be a list of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& item : node) out.push_back(as_double(item, label, what + " entry"));
  return out;
}

std::vector<std::string> as_string_list(const YAML::Node& node, const std::string& label,
                                        const std::string& what) {
  if (!node.IsSequence()) fail(label, what + " must be a list of expression strings");
  std::vector<std::string> out;
  out.reserve(node.size());
  for (const auto& item : node) {
    if (!item.IsScalar()) fail(label, what + " entries must be strings");
    out.push_back(item.as<std::string>());
  }
  return out;
}

ProblemFile parse_problem(const YAML::Node& root, const std::string& label) {
  if (!root.IsMap()) fail(label, "problem file must be a YAML mapping");
  check_known_keys(root,
                   {"name", "dims", "params", "hamiltonian", "section", "potentials", "grid",
                    "initial_q", "q_samples", "tolerances", "integrator", "output"},
                   label, "the problem file");

  ProblemFile p;
  if (root["name"]) p.name = root["name"].as<std::string>();

  if (!root["dims"] || !root["dims"].IsMap()) fail(label, "missing dims: {k, n}");
  check_known_keys(root["dims"], {"k", "n"}, label, "dims");
  const int k = as_int(root["dims"]["k"], label, "dims.k");
  const int n = as_int(root["dims"]["n"], label, "dims.n");
  if (k < 1 || n < 1) fail(label, "dims.k and dims.n must be >= 1");
  p.dims = Dimensions(k, n);

  if (root["params"]) {
    if (!root["params"].IsMap()) fail(label, "params must be a mapping of name to value");
    for (const auto& entry : root["params"]) {
      const std::string name = entry.first.as<std::string>();
      if (coordinate_index(p.dims, name) >= 0) {
        fail(label, "parameter '" + name + "' shadows a coordinate name");
      }
      p.params.set(name, as_double(entry.second, label, "params." + name));
    }
  }

  if (!root["hamiltonian"] || !root["hamiltonian"].IsScalar()) {
    fail(label, "missing hamiltonian expression");
  }
  p.hamiltonian = root["hamiltonian"].as<std::string>();

  const bool has_section = static_cast<bool>(root["section"]);
  const bool has_potentials = static_cast<bool>(root["potentials"]);
  if (has_section == has_potentials) {
    fail(label, "exactly one of 'section' (k*n expressions) or 'potentials' (k expressions) "
                "must be given");
  }
  if (has_section) {
    auto texts = as_string_list(root["section"], label, "section");
    if (static_cast<int>(texts.size()) != k * n) {
      fail(label, "section needs k*n = " + std::to_string(k * n) + " expressions, got " +
                      std::to_string(texts.size()));
    }
    p.section = std::move(texts);
  } else {
    auto texts = as_string_list(root["potentials"], label, "potentials");
    if (static_cast<int>(texts.size()) != k) {
      fail(label, "potentials needs k = " + std::to_string(k) + " expressions, got " +
                      std::to_string(texts.size()));
    }
    p.potentials = std::move(texts);
  }

  if (!root["grid"] || !root["grid"].IsMap()) {
    fail(label, "missing grid: {origin, spacing, steps}");
  }
  check_known_keys(root["grid"], {"origin", "spacing", "steps"}, label, "grid");
  p.grid.origin = as_double_list(root["grid"]["origin"], label, "grid.origin");
  p.grid.spacing = as_double_list(root["grid"]["spacing"], label, "grid.spacing");
  if (!root["grid"]["steps"] || !root["grid"]["steps"].IsSequence()) {
    fail(label, "grid.steps must be a list of integers");
  }
  for (const auto& item : root["grid"]["steps"]) {
    p.grid.steps.push_back(as_int(item, label, "grid.steps entry"));
  }
  try {
    p.grid.validate(k, 2);
  } catch (const ValidationError& e) {
    fail(label, e.what());
  }

  if (!root["initial_q"]) fail(label, "missing initial_q");
  p.initial_q = as_double_list(root["initial_q"], label, "initial_q");
  if (static_cast<int>(p.initial_q.size()) != n) {
    fail(label, "initial_q needs n = " + std::to_string(n) + " entries");
  }
  for (double v : p.initial_q) {
    if (!std::isfinite(v)) fail(label, "initial_q entries must be finite");
  }

  if (root["q_samples"]) {
    if (!root["q_samples"].IsSequence()) fail(label, "q_samples must be a list of q vectors");
    std::vector<std::vector<double>> samples;
    for (const auto& item : root["q_samples"]) {
      auto q = as_double_list(item, label, "q_samples entry");
      if (static_cast<int>(q.size()) != n) {
        fail(label, "each q_samples entry needs n = " + std::to_string(n) + " values");
      }
      samples.push_back(std::move(q));
    }
    if (samples.size() < 2) fail(label, "q_samples needs at least two entries");
    p.q_samples = std::move(samples);
  }

  if (root["tolerances"]) {
    const YAML::Node& tol = root["tolerances"];
    if (!tol.IsMap()) fail(label, "tolerances must be a mapping");
    check_known_keys(tol,
                     {"hj", "closedness", "compatibility", "path_independence", "hdw_per_h2",
                      "q_independence"},
                     label, "tolerances");
    if (tol["hj"]) p.tolerances.hj = as_double(tol["hj"], label, "tolerances.hj");
    if (tol["closedness"]) {
      p.tolerances.closedness = as_double(tol["closedness"], label, "tolerances.closedness");
    }
    if (tol["compatibility"]) {
      p.tolerances.compatibility =
          as_double(tol["compatibility"], label, "tolerances.compatibility");
    }
    if (tol["path_independence"]) {
      p.tolerances.path_independence =
          as_double(tol["path_independence"], label, "tolerances.path_independence");
    }
    if (tol["hdw_per_h2"]) {
      p.tolerances.hdw_per_h2 = as_double(tol["hdw_per_h2"], label, "tolerances.hdw_per_h2");
    }
    if (tol["q_independence"]) {
      p.tolerances.q_independence =
          as_double(tol["q_independence"], label, "tolerances.q_independence");
    }
  }

  if (root["integrator"]) {
    const YAML::Node& integ = root["integrator"];
    if (!integ.IsMap()) fail(label, "integrator must be a mapping");
    check_known_keys(integ, {"substeps", "blowup_bound"}, label, "integrator");
    if (integ["substeps"]) {
      p.integrator.substeps = as_int(integ["substeps"], label, "integrator.substeps");
      if (p.integrator.substeps < 1) fail(label, "integrator.substeps must be >= 1");
    }
    if (integ["blowup_bound"]) {
      p.integrator.blowup_bound =
          as_double(integ["blowup_bound"], label, "integrator.blowup_bound");
      if (!(p.integrator.blowup_bound > 0.0)) fail(label, "integrator.blowup_bound must be > 0");
    }
  }

  if (root["output"]) {
    const YAML::Node& out = root["output"];
    if (!out.IsMap()) fail(label, "output must be a mapping");
    check_known_keys(out, {"solution", "lifted", "residuals", "report"}, label, "output");
    for (const auto& entry : out) {
      p.outputs[entry.first.as<std::string>()] = entry.second.as<std::string>();
    }
  }

  if (p.name.empty()) p.name = label;
  return p;
}

std::string resolve_hamiltonian_text(const ProblemFile& problem) {
  constexpr std::string_view kBuiltinPrefix = "builtin:";
  if (problem.hamiltonian.rfind(kBuiltinPrefix, 0) == 0) {
    const std::string name = problem.hamiltonian.substr(kBuiltinPrefix.size());
    const BuiltinProblem* builtin = find_builtin(name);
    if (builtin == nullptr) {
      throw ValidationError("unknown builtin Hamiltonian '" + name + "'");
    }
    return builtin->hamiltonian;
  }
  return problem.hamiltonian;
}

Expr parse_component(const std::string& text, const ProblemFile& problem,
                     const std::vector<std::string>& param_names, int max_arity,
                     const std::string& what) {
  Expr e = Expr::parse(text, problem.dims, param_names);
  if (e.max_coord_index() >= max_arity) {
    throw ValidationError(what + " may only reference " +
                          (max_arity == problem.dims.base_dim()
                               ? std::string("base coordinates (x, q)")
                               : std::string("phase-space coordinates")) +
                          ": '" + text + "'");
  }
  return e;
}

}  // namespace

ProblemFile load_problem_text(const std::string& yaml_text, const std::string& label) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(label + ": YAML error: " + e.what());
  }
  ProblemFile p = parse_problem(root, label);
  compile_problem(p);  // surface expression errors at load time
  return p;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_problem_text(buffer.str(), path.filename().string());
}

CompiledProblem compile_problem(const ProblemFile& problem) {
  const Dimensions& dims = problem.dims;
  const std::vector<std::string> param_names = problem.params.names();

  const std::string h_text = resolve_hamiltonian_text(problem);
  Expr h_expr = parse_component(h_text, problem, param_names, dims.phase_dim(), "hamiltonian");
  HamiltonianSystem system(dims, make_expr_field(std::move(h_expr), dims.phase_dim(),
                                                 problem.params));

  std::optional<PotentialFamily> potentials;
  std::vector<FieldPtr> section_fields;

  if (problem.potentials) {
    std::vector<FieldPtr> w_fields;
    w_fields.reserve(problem.potentials->size());
    for (std::size_t a = 0; a < problem.potentials->size(); ++a) {
      Expr e = parse_component((*problem.potentials)[a], problem, param_names, dims.base_dim(),
                               "potentials[" + std::to_string(a + 1) + "]");
      w_fields.push_back(make_expr_field(std::move(e), dims.base_dim(), problem.params));
    }
    potentials.emplace(dims, std::move(w_fields));
    HJSection from_w = section_from_potentials(*potentials);
    section_fields = from_w.components();
  } else {
    section_fields.reserve(problem.section->size());
    for (std::size_t m = 0; m < problem.section->size(); ++m) {
      Expr e = parse_component((*problem.section)[m], problem, param_names, dims.base_dim(),
                               "section[" + std::to_string(m + 1) + "]");
      section_fields.push_back(make_expr_field(std::move(e), dims.base_dim(), problem.params));
    }
  }

  return CompiledProblem{std::move(system), HJSection(dims, std::move(section_fields)),
                         std::move(potentials)};
}

std::vector<std::vector<double>> effective_q_samples(const ProblemFile& problem) {
  if (problem.q_samples) return *problem.q_samples;
  // Default: bracket initial_q along the diagonal.
  std::vector<std::vector<double>> samples;
  for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    std::vector<double> q = problem.initial_q;
    for (double& v : q) v += t;
    samples.push_back(std::move(q));
  }
  return samples;
}

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunReport run_check(const ProblemFile& problem) {
  const auto start = std::chrono::steady_clock::now();
  const CompiledProblem compiled = compile_problem(problem);
  const Dimensions& dims = problem.dims;
  const std::vector<std::vector<double>> q_samples = effective_q_samples(problem);

  double hj_max = 0.0;
  double closed_max = 0.0;
  double q_indep_max = 0.0;

  const std::int64_t nodes = problem.grid.node_count();
  std::vector<int> idx(static_cast<std::size_t>(dims.k()));
  for (std::int64_t node = 0; node < nodes; ++node) {
    problem.grid.unflatten(node, idx);
    const std::vector<double> x = problem.grid.node_position(idx);
    for (const auto& q : q_samples) {
      const BasePoint pt(dims, x, q);
      for (double r : hj_residual(compiled.section, compiled.system, pt)) {
        hj_max = std::max(hj_max, std::fabs(r));
      }
      for (double r : closedness_residual(compiled.section, pt)) {
        closed_max = std::max(closed_max, std::fabs(r));
      }
    }
    if (compiled.potentials) {
      q_indep_max = std::max(
          q_indep_max, q_independence_spread(*compiled.potentials, compiled.system, x, q_samples));
    }
  }

  RunReport report;
  report.problem_name = problem.name;
  report.mode = "check";
  report.dims = dims;
  report.grid = problem.grid;
  report.substeps = problem.integrator.substeps;
  report.checks.push_back({"hj", hj_max, problem.tolerances.hj, hj_max <= problem.tolerances.hj});
  report.checks.push_back({"closedness", closed_max, problem.tolerances.closedness,
                           closed_max <= problem.tolerances.closedness});
  if (compiled.potentials) {
    report.checks.push_back({"q_independence", q_indep_max, problem.tolerances.q_independence,
                             q_indep_max <= problem.tolerances.q_independence});
  }
  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  report.wall_seconds = elapsed_seconds(start);
  return report;
}

RunReport run_check(const ProblemFile& problem, const std::filesystem::path& out_dir) {
  RunReport report = run_check(problem);
  std::filesystem::create_directories(out_dir);
  const auto it = problem.outputs.find("report");
  const std::filesystem::path path =
      out_dir / (it != problem.outputs.end() ? it->second : std::string("report.json"));
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write report file: " + path.string());
  report.outputs["report"] = path.string();
  os << report_to_json(report) << '\n';
  return report;
}

RunReport run_solve(const ProblemFile& problem, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const CompiledProblem compiled = compile_problem(problem);

  PipelineReport pipeline =
      verify_pipeline(compiled.system, compiled.section, problem.initial_q, problem.grid,
                      problem.tolerances, problem.integrator);

  RunReport report;
  report.problem_name = problem.name;
  report.mode = "solve";
  report.dims = problem.dims;
  report.grid = problem.grid;
  report.substeps = problem.integrator.substeps;
  report.checks.push_back(
      {"hj", pipeline.hj.max_abs, pipeline.hj.tolerance, pipeline.hj.pass});
  report.checks.push_back({"closedness", pipeline.closedness.max_abs,
                           pipeline.closedness.tolerance, pipeline.closedness.pass});
  report.checks.push_back({"compatibility", pipeline.compatibility.max_abs,
                           pipeline.compatibility.tolerance, pipeline.compatibility.pass});
  report.checks.push_back(
      {"path_independence", pipeline.path.max_abs, pipeline.path.tolerance, pipeline.path.pass});
  report.checks.push_back(
      {"hdw", pipeline.hdw.max_abs, pipeline.hdw.tolerance, pipeline.hdw.pass});
  report.pass = pipeline.pass;

  const auto output_name = [&](const std::string& role, const std::string& fallback) {
    const auto it = problem.outputs.find(role);
    return it != problem.outputs.end() ? it->second : fallback;
  };

  std::filesystem::create_directories(out_dir);
  const auto write_file = [&](const std::string& role, const std::string& fallback,
                              auto&& writer) {
    const std::filesystem::path path = out_dir / output_name(role, fallback);
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write output file: " + path.string());
    writer(os);
    report.outputs[role] = path.string();
  };

  write_file("solution", "solution.csv",
             [&](std::ostream& os) { write_grid_solution_csv(os, pipeline.solution); });
  write_file("lifted", "lifted.csv",
             [&](std::ostream& os) { write_phase_map_csv(os, pipeline.lifted); });
  write_file("residuals", "residuals.csv",
             [&](std::ostream& os) { write_hdw_residual_csv(os, pipeline.residuals); });

  report.wall_seconds = elapsed_seconds(start);
  const std::filesystem::path report_path = out_dir / output_name("report", "report.json");
  std::ofstream os(report_path);
  if (!os) throw ValidationError("cannot write report file: " + report_path.string());
  report.outputs["report"] = report_path.string();
  os << report_to_json(report) << '\n';
  return report;
}

std::string report_to_json(const RunReport& report) {
  ordered_json j;
  j["schema"] = report.schema;
  j["problem"] = report.problem_name;
  j["mode"] = report.mode;
  j["dims"] = {{"k", report.dims.k()}, {"n", report.dims.n()}};
  j["grid"] = {{"origin", report.grid.origin},
               {"spacing", report.grid.spacing},
               {"steps", report.grid.steps}};
  j["integrator"] = {{"method", "rk4"}, {"substeps", report.substeps}};
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"max_abs", c.max_abs},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["pass"] = report.pass;
  ordered_json outputs = ordered_json::object();
  for (const auto& [role, path] : report.outputs) outputs[role] = path;
  j["outputs"] = outputs;
  j["timing"] = {{"wall_seconds", report.wall_seconds}};
  return j.dump(2);
}

void write_example(const std::string& name, const std::filesystem::path& path) {
  const BuiltinProblem* builtin = find_builtin(name);
  if (builtin == nullptr) {
    std::string known;
    for (const auto& b : builtin_problems()) {
      if (!known.empty()) known += ", ";
      known += b.name;
    }
    throw ValidationError("unknown example '" + name + "'; available: " + known);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write example file: " + path.string());
  os << builtin->file_text;
}

}  // namespace kcoshj
