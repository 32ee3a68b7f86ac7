#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kcoshj/integrate.hpp"

namespace kcoshj {

/// Parsed problem description (the YAML file contents, before expressions
/// are compiled). Exactly one of `section` / `potentials` is present.
struct ProblemFile {
  std::string name;
  Dimensions dims;
  ParamSet params;
  std::string hamiltonian;                            // expression or "builtin:<name>"
  std::optional<std::vector<std::string>> section;    // k*n texts, alpha outer
  std::optional<std::vector<std::string>> potentials; // k texts
  GridSpec grid;
  std::vector<double> initial_q;                      // n entries
  std::optional<std::vector<std::vector<double>>> q_samples;  // for `check`
  Tolerances tolerances;
  IntegrateOptions integrator;
  std::map<std::string, std::string> outputs;         // role -> file name
};

/// Parses and validates a problem file. Expressions are parsed here so that
/// bad input fails with a location; throws ValidationError / ParseError.
ProblemFile load_problem(const std::filesystem::path& path);
ProblemFile load_problem_text(const std::string& yaml_text, const std::string& label);

/// Model objects compiled from a ProblemFile.
struct CompiledProblem {
  HamiltonianSystem system;
  HJSection section;
  std::optional<PotentialFamily> potentials;  // present when the file gave W
};

CompiledProblem compile_problem(const ProblemFile& problem);

/// q-sample vectors used by `check`: the file's q_samples, or a default
/// bracket around initial_q.
std::vector<std::vector<double>> effective_q_samples(const ProblemFile& problem);

/// One verified quantity in a run report.
struct CheckResult {
  std::string name;
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  int schema = 1;
  std::string problem_name;
  std::string mode;  // "check" or "solve"
  Dimensions dims;
  GridSpec grid;
  int substeps = 1;
  std::vector<CheckResult> checks;
  bool pass = false;
  double wall_seconds = 0.0;
  std::map<std::string, std::string> outputs;  // role -> path written
};

/// Serialized report. Deterministic except for the "timing" object, which
/// holds the wall clock and is ignored by the determinism tests.
std::string report_to_json(const RunReport& report);

/// Residual checks without integration: Hamilton-Jacobi and closedness
/// residuals sampled on grid-node x times the q-samples, plus the
/// q-independence spread of the classical equation when potentials are
/// given.
RunReport run_check(const ProblemFile& problem);

/// As above, and writes the JSON report into `out_dir`.
RunReport run_check(const ProblemFile& problem, const std::filesystem::path& out_dir);

/// Full pipeline: integrate, lift, verify, and write the solution CSV,
/// lifted CSV, residual CSV and JSON report into `out_dir`.
RunReport run_solve(const ProblemFile& problem, const std::filesystem::path& out_dir);

/// Built-in example problems from the worked scalar-field setup and the
/// k = 1 regression cases.
struct BuiltinProblem {
  std::string name;
  std::string summary;
  std::string file_text;        // ready-to-run problem file
  std::string hamiltonian;      // expression text, for "builtin:<name>" references
  bool expected_check_pass;     // documented expectation of `check`
};

const std::vector<BuiltinProblem>& builtin_problems();
const BuiltinProblem* find_builtin(const std::string& name);

/// Writes the named builtin problem file; throws ValidationError for an
/// unknown name (the message lists the registry).
void write_example(const std::string& name, const std::filesystem::path& path);

}  // namespace kcoshj
