#include "splab/family.hpp"
#include "splab/sweep.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace splab;

TEST_CASE("cantor generator: keep 2 of 4 at L=12 gives 64 points") {
  FamilySpec spec;
  spec.kind = FamilyKind::cantor;
  spec.L = 12;
  spec.arity_log = 2;
  spec.keep = {0, 3};
  GridSet a = generate_family(spec);
  CHECK(a.size() == 64);  // 2^(L/2) exactly: sigma = 1/2 in cardinality
  CHECK(a.indices().front() >= (1ll << 12));
  CHECK(a.indices().back() < (2ll << 12));
}

TEST_CASE("ap generator: L=8 step 4 fills [1,2) with 64 points") {
  FamilySpec spec;
  spec.kind = FamilyKind::ap;
  spec.L = 8;
  spec.step = 4;
  GridSet a = generate_family(spec);
  CHECK(a.size() == 64);
  CHECK(a.indices().front() == 256);
  CHECK(a.indices().back() == 508);
}

TEST_CASE("gp generator stays on the grid inside [1,2)") {
  FamilySpec spec;
  spec.kind = FamilyKind::gp;
  spec.L = 10;
  spec.ratio = Rat(21, 20);
  GridSet a = generate_family(spec);
  CHECK(a.size() >= 10);
  CHECK(a.indices().front() == 1024);
  CHECK(a.indices().back() < 2048);
}

TEST_CASE("random_nc generator self-checks its concentration") {
  FamilySpec spec;
  spec.kind = FamilyKind::random_nc;
  spec.L = 12;
  spec.sigma_target = Rat(1, 2);
  spec.nc_threshold = Rat(4);
  spec.seed = 7;
  GridSet a = generate_family(spec);
  CHECK(a.size() == 64);  // round(2^6)
  auto prof = non_concentration_constant(a, Rat(1, 2));
  CHECK(prof.c_observed <= Pow2Scaled::from_rational(Rat(4)));
  // determinism
  GridSet b = generate_family(spec);
  CHECK(a == b);
}

TEST_CASE("custom-file generator re-verifies postconditions on load") {
  FamilySpec gen;
  gen.kind = FamilyKind::cantor;
  gen.L = 8;
  gen.arity_log = 2;
  gen.keep = {0, 3};
  GridSet a = generate_family(gen);
  std::string path = "custom_family_test.grid";
  {
    std::ofstream out(path);
    a.write(out);
  }
  FamilySpec load;
  load.kind = FamilyKind::custom_file;
  load.path = path;
  GridSet b = generate_family(load);
  CHECK(a == b);
  std::remove(path.c_str());

  // a set whose ambient is not [1,2] is rejected
  {
    std::ofstream out(path);
    GridSet(Scale(8), 0, 256, {0, 10}).write(out);
  }
  CHECK_THROWS_WITH(generate_family(load),
                    Catch::Matchers::ContainsSubstring("ambient"));
  std::remove(path.c_str());
}

TEST_CASE("config parser reads sections, lists and comments") {
  std::istringstream text(R"(
# comment
[sweep]
csv = out.csv
branch_log = 2
gamma = 7/34
threads = 3

[family]
name = c1
kind = cantor
sigma = 1/2
L = 8,10
keep = 0,3

[family]
kind = ap
L = 8
step = 4
)");
  auto cfg = parse_sweep_config(text);
  CHECK(cfg.csv_path == "out.csv");
  CHECK(cfg.branch_log == 2);
  REQUIRE(cfg.gamma.has_value());
  CHECK(*cfg.gamma == Rat(7, 34));
  CHECK(cfg.threads == 3);
  REQUIRE(cfg.families.size() == 2);
  CHECK(cfg.families[0].first.name == "c1");
  CHECK(cfg.families[0].second == std::vector<int>{8, 10});
  CHECK(cfg.families[1].first.name == "ap");
  CHECK(cfg.families[1].second == std::vector<int>{8});

  std::istringstream bad("[nope]\n");
  CHECK_THROWS_AS(parse_sweep_config(bad), Error);
  std::istringstream bad2("[sweep]\nwhat = 1\n");
  CHECK_THROWS_AS(parse_sweep_config(bad2), Error);
}

TEST_CASE("oversized sets hit a hard budget error, not a slowdown") {
  FamilySpec spec;
  spec.kind = FamilyKind::ap;
  spec.L = 12;
  spec.step = 1;  // 4096 points
  GridSet a = generate_family(spec);
  CHECK_THROWS_WITH(analyze_set("big", a, Rat(1, 2), std::nullopt, 2),
                    Catch::Matchers::ContainsSubstring("budget"));
}

TEST_CASE("empty family list produces an empty successful report") {
  SweepConfig cfg;
  auto res = run_sweep(cfg);
  CHECK(res.rows.empty());
  CHECK(res.exit_code == 0);
  CHECK(res.csv() == expansion_csv_header() + "\n");
}

TEST_CASE("sweep rows are deterministic and recomputable") {
  std::istringstream text(R"(
[sweep]
branch_log = 2
threads = 2
[family]
name = cantor-half
kind = cantor
sigma = 1/2
L = 8,10
keep = 0,3
[family]
name = rnd
kind = random_nc
sigma = 1/2
L = 10
seed = 3
nc_threshold = 4
)");
  auto cfg = parse_sweep_config(text);
  auto r1 = run_sweep(cfg);
  auto r2 = run_sweep(cfg);
  CHECK(r1.csv() == r2.csv());  // byte-identical across runs
  CHECK(r1.exit_code == 0);
  for (const auto& rr : r1.rows) {
    REQUIRE(rr.report.error.empty());
    // K recomputes from the cover columns
    CHECK(rr.report.doubling ==
          Rat(rr.report.cover_sum + rr.report.cover_prod, rr.report.n));
    CHECK(rr.report.c_theory == Rat(1, 136));
  }
}

TEST_CASE("row failures are captured and the sweep continues") {
  std::istringstream text(R"(
[sweep]
branch_log = 2
[family]
name = degenerate
kind = gp
ratio = 3/2
L = 4
sigma = 1/2
[family]
name = good
kind = cantor
sigma = 1/2
L = 8
keep = 0,3
)");
  // gp with ratio 3/2 at L=4 yields {1, 3/2} style tiny sets whose quotient
  // construction fails; the cantor row must still succeed
  auto res = run_sweep(parse_sweep_config(text));
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].report.verdict == "error");
  CHECK_FALSE(res.rows[0].report.error.empty());
  CHECK(res.rows[1].report.verdict != "error");
  CHECK(res.exit_code == 1);
}

TEST_CASE("cantor sweep matches its golden csv") {
  std::istringstream text(R"(
[sweep]
branch_log = 2
threads = 4
[family]
name = cantor-half
kind = cantor
sigma = 1/2
L = 8,10,12,14
keep = 0,3
seed = 1
)");
  auto res = run_sweep(parse_sweep_config(text));
  std::ifstream golden(std::string(SPLAB_TEST_DIR) + "/golden/cantor_sweep.csv");
  REQUIRE(golden.good());
  std::stringstream want;
  want << golden.rdbuf();
  CHECK(res.csv() == want.str());
}

TEST_CASE("json bundle carries config echo, rows and version") {
  std::istringstream text(R"(
[sweep]
branch_log = 2
[family]
kind = cantor
sigma = 1/2
L = 8
keep = 0,3
)");
  auto res = run_sweep(parse_sweep_config(text));
  CHECK(res.bundle["version"] == kVersion);
  CHECK(res.bundle["config"]["branch_log"] == 2);
  REQUIRE(res.bundle["rows"].size() == 1);
  CHECK(res.bundle["rows"][0]["row"]["verdict"] == "dense");
  CHECK(res.bundle.contains("findings"));
}
