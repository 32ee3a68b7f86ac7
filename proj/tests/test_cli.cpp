// End-to-end checks of the installed command-line surface: subcommands,
// exit codes (0 pass, 1 fail, 2 input error), overrides, and output files.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef KCOSHJ_CLI_PATH
#error "KCOSHJ_CLI_PATH must point at the kcoshj binary"
#endif

namespace {

namespace fs = std::filesystem;

fs::path cli() { return fs::path(KCOSHJ_CLI_PATH); }

fs::path sandbox(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("kcoshj-cli-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string command = cli().string() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("exit codes follow the 0/1/2 contract") {
  const auto dir = sandbox("exit-codes");

  REQUIRE(run("example free-k1 --out " + (dir / "free.yaml").string()) == 0);
  CHECK(run("check " + (dir / "free.yaml").string() + " --quiet") == 0);

  REQUIRE(run("example scalar-field-bad --out " + (dir / "bad.yaml").string()) == 0);
  CHECK(run("check " + (dir / "bad.yaml").string() + " --quiet") == 1);

  CHECK(run("check " + (dir / "missing.yaml").string()) == 2);
  CHECK(run("example no-such-example --out " + (dir / "x.yaml").string()) == 2);
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("check") == 2);

  std::ofstream(dir / "broken.yaml") << "dims: {k: 1\n";
  CHECK(run("check " + (dir / "broken.yaml").string()) == 2);

  std::ofstream(dir / "badexpr.yaml") << "dims: {k: 1, n: 1}\n"
                                         "hamiltonian: \"q9 +\"\n"
                                         "section: [\"0\"]\n"
                                         "grid: {origin: [0], spacing: [0.1], steps: [2]}\n"
                                         "initial_q: [0]\n";
  CHECK(run("check " + (dir / "badexpr.yaml").string()) == 2);
}

TEST_CASE("solve writes its outputs into --out-dir") {
  const auto dir = sandbox("solve");
  REQUIRE(run("example free-k1 --out " + (dir / "free.yaml").string()) == 0);
  CHECK(run("solve " + (dir / "free.yaml").string() + " --out-dir " + (dir / "out").string() +
            " --quiet") == 0);
  for (const char* name : {"solution.csv", "lifted.csv", "residuals.csv", "report.json"}) {
    CHECK(fs::exists(dir / "out" / name));
  }
}

TEST_CASE("check writes its JSON report") {
  const auto dir = sandbox("check-report");
  REQUIRE(run("example free-k1 --out " + (dir / "free.yaml").string()) == 0);
  CHECK(run("check " + (dir / "free.yaml").string() + " --out-dir " + (dir / "out").string() +
            " --quiet") == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "solution.csv"));  // no integration
}

TEST_CASE("KCOSHJ_OUT_DIR provides the default output directory") {
  const auto dir = sandbox("envvar");
  REQUIRE(run("example free-k1 --out " + (dir / "free.yaml").string()) == 0);
  const std::string command = "KCOSHJ_OUT_DIR=" + (dir / "env-out").string() + " " +
                              cli().string() + " solve " + (dir / "free.yaml").string() +
                              " --quiet >/dev/null 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);
  CHECK(fs::exists(dir / "env-out" / "solution.csv"));
}

TEST_CASE("global overrides: --grid h=... and --tol-*") {
  const auto dir = sandbox("overrides");
  REQUIRE(run("example free-k1 --out " + (dir / "free.yaml").string()) == 0);

  // Coarsen the grid but keep the extent: 11 rows become 6 (steps 10 -> 5).
  CHECK(run("solve " + (dir / "free.yaml").string() + " --grid h=0.2 --out-dir " +
            (dir / "coarse").string() + " --quiet") == 0);
  std::ifstream csv(dir / "coarse" / "solution.csv");
  int lines = 0;
  std::string line;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 1 + 6);

  CHECK(run("solve " + (dir / "free.yaml").string() + " --grid 0.2 --out-dir " +
            (dir / "bad").string()) == 2);

  // An absurdly tight closedness tolerance cannot fail the exact-zero
  // residual, but a negative one can: the override is really applied.
  CHECK(run("check " + (dir / "free.yaml").string() + " --tol-closedness -1 --quiet") == 1);
  CHECK(run("check " + (dir / "free.yaml").string() + " --tol-qindep -1 --quiet") == 1);

  CHECK(run("solve " + (dir / "free.yaml").string() + " --substeps 3 --out-dir " +
            (dir / "sub").string() + " --quiet") == 0);
  CHECK(run("solve " + (dir / "free.yaml").string() + " --substeps 0 --out-dir " +
            (dir / "sub0").string()) == 2);
}

TEST_CASE("emitted examples rerun identically (byte-identical CSVs)") {
  const auto dir = sandbox("determinism");
  REQUIRE(run("example oscillator-k1 --out " + (dir / "a.yaml").string()) == 0);
  REQUIRE(run("example oscillator-k1 --out " + (dir / "b.yaml").string()) == 0);
  REQUIRE(run("solve " + (dir / "a.yaml").string() + " --out-dir " + (dir / "a").string() +
              " --quiet") == 0);
  REQUIRE(run("solve " + (dir / "b.yaml").string() + " --out-dir " + (dir / "b").string() +
              " --quiet") == 0);

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const char* name : {"solution.csv", "lifted.csv", "residuals.csv"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
}
