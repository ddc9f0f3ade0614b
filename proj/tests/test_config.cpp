#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pucci/config.hpp"
#include "pucci/run.hpp"

using namespace pucci;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

const char* kMinimalEigen = R"(
[operator]
a = 1
A = 1
alpha = 0

[domain]
type = ball
dim = 1
radius = 1

[grid]
h = 0.03125
stencil_width = 1

[command]
name = eigen
bracket_tol = 0.2
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config resolves with defaults echoed") {
  const RunConfig cfg = parse_config(kMinimalEigen);
  CHECK(cfg.command == Command::Eigen);
  CHECK(cfg.h == doctest::Approx(0.03125));
  CHECK(cfg.op.alpha == 0.0);
  CHECK(cfg.op.eps_reg == 0.0);
  // every default is visible downstream
  auto has = [&](const std::string& key) {
    for (const auto& [k, v] : cfg.resolved)
      if (k == key) return true;
    return false;
  };
  CHECK(has("operator.eps_reg"));
  CHECK(has("command.tol"));
  CHECK(has("output.dir"));
  CHECK(has("grid.stencil_width"));
}

TEST_CASE("eps_reg default activates for negative alpha") {
  std::string text = kMinimalEigen;
  text.replace(text.find("alpha = 0"), 9, "alpha = -0.5");
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.op.eps_reg == doctest::Approx(std::max(0.03125, 1e-6)));
}

TEST_CASE("alpha at the homogeneity boundary is rejected") {
  std::string text = kMinimalEigen;
  text.replace(text.find("alpha = 0"), 9, "alpha = -1");
  CHECK_THROWS_AS((void)parse_config(text), ConfigError);
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
}

TEST_CASE("a > A is rejected") {
  std::string text = kMinimalEigen;
  text.replace(text.find("a = 1"), 5, "a = 3");
  CHECK_THROWS_AS((void)parse_config(text), ConfigError);
}

TEST_CASE("unknown keys are named with their position") {
  std::string text = kMinimalEigen;
  text.replace(text.find("alpha = 0"), 9, "alpa = 00");
  try {
    (void)parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("alpa") != std::string::npos);
    CHECK(what.find("line") != std::string::npos);
    CHECK(e.line > 0);
  }
}

TEST_CASE("star domain block") {
  const char* text = R"(
[operator]
a = 1
A = 2
alpha = 0
[domain]
type = star
rho0 = 1
rho_cos = 0 0 0.2
[grid]
h = 0.05
[command]
name = barrier
gamma = 0.5
delta = 0.1
beta = -1
)";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.domain.is_star());
  CHECK(cfg.domain.star().cos_coef.size() == 3);
  CHECK(cfg.command == Command::Barrier);
}

TEST_CASE("run: records are byte-identical across repeats") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pucci_determinism";
  fs::remove_all(dir);
  RunConfig cfg = parse_config(kMinimalEigen);
  cfg.command = Command::VerifyOperator;
  cfg.n_samples = 2000;
  cfg.prefix = "vo";
  RunOptions opts;
  opts.seed = 42;
  opts.out_dir = (dir / "a").string();
  CHECK(run(cfg, opts) == 0);
  opts.out_dir = (dir / "b").string();
  CHECK(run(cfg, opts) == 0);
  CHECK(slurp((dir / "a" / "vo.json").string()) == slurp((dir / "b" / "vo.json").string()));
  // metadata (with the timestamp) lives in its own file
  CHECK(fs::exists(dir / "a" / "vo_meta.json"));
}

TEST_CASE("run: solve writes record and fields, exit codes work") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pucci_run_solve";
  fs::remove_all(dir);
  RunConfig cfg = parse_config(kMinimalEigen);
  cfg.command = Command::Solve;
  cfg.prefix = "solve";
  cfg.tol = 1e-9;
  RunOptions opts;
  opts.out_dir = dir.string();
  CHECK(run(cfg, opts) == 0);
  CHECK(fs::exists(dir / "solve.json"));
  CHECK(fs::exists(dir / "solve_solution.csv"));
  CHECK(fs::exists(dir / "solve_solution.bin"));
  CHECK(fs::exists(dir / "solve_solution.dat"));
  const std::string rec = slurp((dir / "solve.json").string());
  CHECK(rec.find("\"status\":\"converged\"") != std::string::npos);
  CHECK(rec.find("\"config\":") != std::string::npos);
}

TEST_CASE("run: radial on a non-ball domain is rejected with exit 2") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pucci_run_reject";
  fs::remove_all(dir);
  const char* text = R"(
[operator]
a = 1
A = 1
alpha = 0
[domain]
type = box
dim = 1
lo = -1
hi = 1
[grid]
h = 0.1
[command]
name = radial
)";
  RunConfig cfg = parse_config(text);
  RunOptions opts;
  opts.out_dir = dir.string();
  CHECK(run(cfg, opts) == 2);
  CHECK(fs::exists(dir / "radial_diagnostic.json"));
}

TEST_CASE("run: radial record reproduces the 1D eigenvalue") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pucci_run_radial";
  fs::remove_all(dir);
  RunConfig cfg = parse_config(kMinimalEigen);
  cfg.command = Command::Radial;
  cfg.prefix = "radial";
  cfg.tol = 1e-8;
  RunOptions opts;
  opts.out_dir = dir.string();
  CHECK(run(cfg, opts) == 0);
  const std::string rec = slurp((dir / "radial.json").string());
  const auto pos = rec.find("\"lambda_hat\":");
  REQUIRE(pos != std::string::npos);
  const double lam = std::stod(rec.substr(pos + 13));
  CHECK(lam == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-5));
  CHECK(fs::exists(dir / "radial_profile.dat"));
}

}  // TEST_SUITE
