#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kcoshj/errors.hpp"
#include "kcoshj/problem.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInputError = 2;

struct GlobalOptions {
  std::optional<double> tol_hj;
  std::optional<double> tol_closedness;
  std::optional<double> tol_compatibility;
  std::optional<double> tol_path;
  std::optional<double> tol_hdw_per_h2;
  std::optional<double> tol_q_independence;
  std::optional<double> grid_h;
  std::optional<int> substeps;
  std::string out_dir;
  bool quiet = false;
};

void apply_overrides(kcoshj::ProblemFile& problem, const GlobalOptions& opts) {
  if (opts.tol_hj) problem.tolerances.hj = *opts.tol_hj;
  if (opts.tol_closedness) problem.tolerances.closedness = *opts.tol_closedness;
  if (opts.tol_compatibility) problem.tolerances.compatibility = *opts.tol_compatibility;
  if (opts.tol_path) problem.tolerances.path_independence = *opts.tol_path;
  if (opts.tol_hdw_per_h2) problem.tolerances.hdw_per_h2 = *opts.tol_hdw_per_h2;
  if (opts.tol_q_independence) problem.tolerances.q_independence = *opts.tol_q_independence;
  if (opts.substeps) problem.integrator.substeps = *opts.substeps;
  if (opts.grid_h) {
    // Refine/coarsen while keeping the grid extent: per axis, the step count
    // is rescaled so steps*spacing is (approximately) preserved.
    const double h = *opts.grid_h;
    if (!(h > 0.0)) throw kcoshj::ValidationError("--grid h must be positive");
    for (std::size_t a = 0; a < problem.grid.spacing.size(); ++a) {
      const double extent = problem.grid.spacing[a] * problem.grid.steps[a];
      int steps = static_cast<int>(std::llround(extent / h));
      if (steps < 2) steps = 2;
      problem.grid.steps[a] = steps;
      problem.grid.spacing[a] = h;
    }
  }
}

std::filesystem::path resolve_out_dir(const GlobalOptions& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv("KCOSHJ_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

void print_report(const kcoshj::RunReport& report, bool quiet) {
  if (quiet) return;
  std::cout << report.mode << " " << report.problem_name << " (k=" << report.dims.k()
            << ", n=" << report.dims.n() << ")\n";
  for (const auto& check : report.checks) {
    std::printf("  %-18s max %.3e  tol %.3e  %s\n", check.name.c_str(), check.max_abs,
                check.tolerance, check.pass ? "pass" : "FAIL");
  }
  for (const auto& [role, path] : report.outputs) {
    std::cout << "  wrote " << role << ": " << path << "\n";
  }
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-cosymplectic Hamilton-Jacobi toolkit: validates Hamilton-Jacobi "
               "sections, integrates the reduced equations, and verifies lifted "
               "solutions against the Hamilton-De Donder-Weyl field equations"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--tol-hj", opts.tol_hj, "Hamilton-Jacobi residual tolerance");
  app.add_option("--tol-closedness", opts.tol_closedness, "closedness residual tolerance");
  app.add_option("--tol-compatibility", opts.tol_compatibility,
                 "compatibility residual tolerance");
  app.add_option("--tol-path", opts.tol_path,
                 "path-independence tolerance (scaled by 1 + |psi|)");
  app.add_option("--tol-hdw", opts.tol_hdw_per_h2,
                 "field-equation residual tolerance per h^2 of solution scale");
  app.add_option("--tol-qindep", opts.tol_q_independence, "q-independence spread tolerance");
  std::string grid_override;
  app.add_option("--grid", grid_override,
                 "override the grid spacing, h=<value>; the grid extent is kept");
  app.add_option("--substeps", opts.substeps, "RK4 substeps per grid cell");
  app.add_option("--out-dir", opts.out_dir,
                 "output directory (default: $KCOSHJ_OUT_DIR or the working directory)");
  app.add_flag("--quiet", opts.quiet, "suppress the per-check summary");

  std::string problem_path;
  CLI::App* check = app.add_subcommand("check", "run the residual checks (no integration)");
  check->fallthrough();
  check->add_option("file", problem_path, "problem file")->required();

  CLI::App* solve =
      app.add_subcommand("solve", "integrate, lift, verify, and write solution files");
  solve->fallthrough();
  solve->add_option("file", problem_path, "problem file")->required();

  std::string example_name;
  std::string example_out;
  CLI::App* example = app.add_subcommand("example", "write a ready-to-run problem file");
  example->fallthrough();
  example->add_option("name", example_name, "builtin example name (see `example list`)")
      ->required();
  example->add_option("--out", example_out, "output path (default: <name>.yaml)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInputError;
  }

  try {
    if (!grid_override.empty()) {
      if (grid_override.rfind("h=", 0) != 0) {
        throw kcoshj::ValidationError("--grid expects h=<spacing>");
      }
      std::size_t used = 0;
      const double h = std::stod(grid_override.substr(2), &used);
      if (used != grid_override.size() - 2) {
        throw kcoshj::ValidationError("--grid expects h=<spacing>");
      }
      opts.grid_h = h;
    }
    if (example->parsed()) {
      if (example_name == "list") {
        for (const auto& builtin : kcoshj::builtin_problems()) {
          std::printf("%-24s %s\n", builtin.name.c_str(), builtin.summary.c_str());
        }
        return kExitPass;
      }
      const std::filesystem::path out =
          example_out.empty() ? std::filesystem::path(example_name + ".yaml")
                              : std::filesystem::path(example_out);
      kcoshj::write_example(example_name, out);
      if (!opts.quiet) std::cout << "wrote " << out.string() << "\n";
      return kExitPass;
    }

    kcoshj::ProblemFile problem = kcoshj::load_problem(problem_path);
    apply_overrides(problem, opts);

    kcoshj::RunReport report;
    if (check->parsed()) {
      report = kcoshj::run_check(problem, resolve_out_dir(opts));
    } else {
      report = kcoshj::run_solve(problem, resolve_out_dir(opts));
    }
    print_report(report, opts.quiet);
    return report.pass ? kExitPass : kExitFail;
  } catch (const kcoshj::IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return kExitFail;
  } catch (const kcoshj::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const kcoshj::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
