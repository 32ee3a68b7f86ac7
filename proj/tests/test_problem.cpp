#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kcoshj/csv.hpp"
#include "kcoshj/errors.hpp"
#include "kcoshj/problem.hpp"

using namespace kcoshj;

namespace {

const char* kTrivialProblem = R"yaml(
name: trivial
dims: {k: 2, n: 1}
hamiltonian: "0"
section: ["0", "0"]
grid:
  origin: [0.0, 0.0]
  spacing: [0.25, 0.25]
  steps: [2, 2]
initial_q: [1.0]
)yaml";

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("kcoshj-test-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("problem files load and validate") {
  const ProblemFile p = load_problem_text(kTrivialProblem, "inline");
  CHECK(p.name == "trivial");
  CHECK(p.dims == Dimensions(2, 1));
  CHECK(p.grid.node_count() == 9);
  CHECK(p.integrator.substeps == 1);

  // Default q samples bracket initial_q.
  const auto samples = effective_q_samples(p);
  REQUIRE(samples.size() == 5);
  CHECK(samples.front()[0] == 0.0);
  CHECK(samples.back()[0] == 2.0);
}

TEST_CASE("problem file validation errors") {
  const auto expect_error = [](const std::string& yaml, const std::string& needle) {
    std::string message;
    try {
      load_problem_text(yaml, "bad");
    } catch (const ValidationError& e) {
      message = e.what();
    } catch (const ParseError& e) {
      message = e.what();
    }
    CAPTURE(needle);
    CAPTURE(message);
    CHECK(!message.empty());
    CHECK(message.find(needle) != std::string::npos);
  };

  expect_error("dims: {k: 0, n: 1}\nhamiltonian: '0'\n", "dims");
  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "0"
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
)",
               "exactly one of");

  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "0"
section: ["0"]
potentials: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
)",
               "exactly one of");

  expect_error(R"(
dims: {k: 2, n: 1}
hamiltonian: "0"
section: ["0"]
grid: {origin: [0, 0], spacing: [0.1, 0.1], steps: [2, 2]}
initial_q: [0]
)",
               "section needs k*n");

  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "0"
section: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [1]}
initial_q: [0]
)",
               "at least 2 steps");

  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "q7"
section: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
)",
               "unknown identifier 'q7'");

  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "0"
section: ["p1_1"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
)",
               "base coordinates");

  expect_error(R"(
dims: {k: 1, n: 1}
params: {q1: 3.0}
hamiltonian: "0"
section: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
)",
               "shadows a coordinate");

  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "0"
section: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
typo_key: 1
)",
               "unknown key 'typo_key'");

  expect_error(R"(
dims: {k: 1, n: 1}
hamiltonian: "0"
section: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
q_samples: [[0.0]]
)",
               "at least two");
}

TEST_CASE("builtin Hamiltonians are referencable by name") {
  const std::string yaml = R"(
dims: {k: 4, n: 1}
hamiltonian: "builtin:scalar-field"
section: ["0", "0", "0", "0"]
grid:
  origin: [0, 0, 0, 0]
  spacing: [0.1, 0.1, 0.1, 0.1]
  steps: [2, 2, 2, 2]
initial_q: [1.0]
)";
  const ProblemFile p = load_problem_text(yaml, "by-name");
  const CompiledProblem compiled = compile_problem(p);
  std::vector<double> env(static_cast<std::size_t>(p.dims.phase_dim()), 0.0);
  env[static_cast<std::size_t>(p.dims.p_index(1, 0))] = 2.0;
  CHECK(compiled.system.hamiltonian().value(env) == 2.0);  // p2_1^2 / 2

  CHECK_THROWS_AS(load_problem_text(R"(
dims: {k: 1, n: 1}
hamiltonian: "builtin:nope"
section: ["0"]
grid: {origin: [0], spacing: [0.1], steps: [2]}
initial_q: [0]
)",
                                    "x"),
                  ValidationError);
}

TEST_CASE("builtin registry entries load and carry their documented verdicts") {
  REQUIRE(builtin_problems().size() == 6);
  CHECK(find_builtin("scalar-field") != nullptr);
  CHECK(find_builtin("missing") == nullptr);

  for (const auto& builtin : builtin_problems()) {
    CAPTURE(builtin.name);
    const ProblemFile p = load_problem_text(builtin.file_text, builtin.name);
    CHECK(p.name == builtin.name);
    const RunReport report = run_check(p);
    CHECK(report.pass == builtin.expected_check_pass);
    CHECK(report.mode == "check");
    // All builtins define potentials, so the derived sections are closed to
    // rounding regardless of the verdict.
    for (const auto& c : report.checks) {
      if (c.name == "closedness") CHECK(c.max_abs <= 1e-15);
    }
  }
}

TEST_CASE("check accepts the sqrt(2) constants variant of the scalar field") {
  // The (sqrt(2), 1, 1, 0) family is admissible; its solution pole touches
  // the shipped solve grid, but `check` does not integrate.
  const BuiltinProblem* builtin = find_builtin("scalar-field");
  REQUIRE(builtin != nullptr);
  ProblemFile p = load_problem_text(builtin->file_text, builtin->name);
  p.params.set("C1", std::sqrt(2.0));
  p.params.set("C2", 1.0);
  p.params.set("C3", 1.0);
  p.params.set("C4", 0.0);
  const RunReport report = run_check(p);
  CHECK(report.pass);
}

TEST_CASE("run_check flags the inadmissible family with the documented residual") {
  const BuiltinProblem* bad = find_builtin("scalar-field-bad");
  REQUIRE(bad != nullptr);
  ProblemFile p = load_problem_text(bad->file_text, bad->name);
  const RunReport report = run_check(p);
  CHECK_FALSE(report.pass);
  REQUIRE(!report.checks.empty());
  CHECK(report.checks[0].name == "hj");
  // Default q samples reach q = 3, where |residual| = 27/2.
  CHECK(report.checks[0].max_abs == doctest::Approx(13.5).epsilon(1e-12));
}

TEST_CASE("write_example emits loadable files and rejects unknown names") {
  const auto dir = temp_dir("examples");
  write_example("free-k1", dir / "free.yaml");
  const ProblemFile p = load_problem(dir / "free.yaml");
  CHECK(p.name == "free-k1");

  try {
    write_example("unknown-name", dir / "x.yaml");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("scalar-field") != std::string::npos);  // lists registry
  }
}

TEST_CASE("solve writes the four outputs and an accurate solution") {
  const auto dir = temp_dir("solve");
  write_example("free-k1", dir / "free.yaml");
  const ProblemFile p = load_problem(dir / "free.yaml");
  const RunReport report = run_solve(p, dir);
  CHECK(report.pass);
  CHECK(report.mode == "solve");
  for (const char* role : {"solution", "lifted", "residuals", "report"}) {
    REQUIRE(report.outputs.count(role) == 1);
    CHECK(std::filesystem::exists(report.outputs.at(role)));
  }

  // psi(t) = q0 + c t with q0 = 1, c = 0.75; CSV t-values are exact.
  const std::string solution = slurp(report.outputs.at("solution"));
  std::istringstream lines(solution);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "x1,q1");
  std::string row;
  int rows = 0;
  while (std::getline(lines, row)) {
    const auto comma = row.find(',');
    const double t = std::stod(row.substr(0, comma));
    const double q = std::stod(row.substr(comma + 1));
    CHECK(q == doctest::Approx(1.0 + 0.75 * t).epsilon(1e-14));
    ++rows;
  }
  CHECK(rows == 11);
}

TEST_CASE("CSV layout is pinned: 17 significant digits, axis 1 slowest") {
  GridSolution psi;
  psi.dims = Dimensions(2, 1);
  psi.spec = GridSpec{{0.0, 0.0}, {0.1, 0.2}, {2, 2}};
  psi.values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 0.1};
  std::ostringstream os;
  write_grid_solution_csv(os, psi);
  CHECK(os.str() ==
        "x1,x2,q1\n"
        "0,0,1\n"
        "0,0.20000000000000001,2\n"
        "0,0.40000000000000002,3\n"
        "0.10000000000000001,0,4\n"
        "0.10000000000000001,0.20000000000000001,5\n"
        "0.10000000000000001,0.40000000000000002,6\n"
        "0.20000000000000001,0,7\n"
        "0.20000000000000001,0.20000000000000001,8\n"
        "0.20000000000000001,0.40000000000000002,0.10000000000000001\n");
}

TEST_CASE("reports serialize deterministically apart from timing") {
  const auto dir_a = temp_dir("det-a");
  const auto dir_b = temp_dir("det-b");
  write_example("scalar-field", dir_a / "p.yaml");
  write_example("scalar-field", dir_b / "p.yaml");
  CHECK(slurp(dir_a / "p.yaml") == slurp(dir_b / "p.yaml"));

  ProblemFile pa = load_problem(dir_a / "p.yaml");
  ProblemFile pb = load_problem(dir_b / "p.yaml");
  // Shrink the grid to keep this test quick; both runs stay identical.
  pa.grid.steps = {4, 4, 4, 4};
  pb.grid.steps = {4, 4, 4, 4};
  const RunReport ra = run_solve(pa, dir_a);
  const RunReport rb = run_solve(pb, dir_b);
  CHECK(ra.pass);

  for (const char* role : {"solution", "lifted", "residuals"}) {
    CHECK(slurp(ra.outputs.at(role)) == slurp(rb.outputs.at(role)));
  }

  auto ja = nlohmann::json::parse(slurp(ra.outputs.at("report")));
  auto jb = nlohmann::json::parse(slurp(rb.outputs.at("report")));
  CHECK(ja["schema"] == 1);
  ja.erase("timing");
  jb.erase("timing");
  ja.erase("outputs");  // paths differ by directory
  jb.erase("outputs");
  CHECK(ja == jb);
}

TEST_CASE("check reports q-independence only for potential-defined problems") {
  // The inline H = 0, gamma = 0 problem passes with zero residuals.
  const ProblemFile with_section = load_problem_text(kTrivialProblem, "inline");
  const RunReport r1 = run_check(with_section);
  CHECK(r1.pass);
  for (const auto& c : r1.checks) {
    CHECK(c.max_abs == 0.0);
    CHECK(c.name != "q_independence");
  }

  const BuiltinProblem* free = find_builtin("free-k1");
  const RunReport r2 = run_check(load_problem_text(free->file_text, free->name));
  bool found = false;
  for (const auto& c : r2.checks) found = found || c.name == "q_independence";
  CHECK(found);
}
