#include <cmath>
#include <sstream>

#include "doctest.h"
#include "singell/sweep.hpp"
#include "support.hpp"

using namespace singell;
using namespace testing;

TEST_CASE("uniform plan") {
  const SweepPlan plan = SweepPlan::uniform(10.0);
  REQUIRE(plan.lambda_grid.size() == 40);
  CHECK(plan.lambda_grid.front() == 0.0);
  CHECK(plan.lambda_grid.back() == doctest::Approx(9.99));
  CHECK(plan.dlambda_fd == doctest::Approx(1e-2));
  CHECK_NOTHROW(plan.validate(10.0));
  CHECK_THROWS_AS(plan.validate(9.99), std::invalid_argument);
  SweepPlan bad = plan;
  std::swap(bad.lambda_grid[3], bad.lambda_grid[4]);
  CHECK_THROWS_AS(bad.validate(10.0), std::invalid_argument);
  CHECK(SweepPlan::uniform(10.0, 1).lambda_grid == std::vector<double>{9.99});
  CHECK_THROWS_AS(SweepPlan::uniform(10.0, -1), std::invalid_argument);
}

TEST_CASE("empty plan gives no records") {
  auto p = sublinear(32);
  CHECK(run_sweep(p.family, SweepPlan::uniform(p.lambda_star, 0)).empty());
}

TEST_CASE("default sweep: all converged, norm increasing, energy decreasing") {
  auto p = sublinear();
  const auto recs = run_sweep(p.family, SweepPlan::uniform(p.lambda_star));
  REQUIRE(recs.size() == 40);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].status == SolveStatus::Converged);
    CHECK(std::abs(recs[i].nehari) <= 1e-8 * recs[i].h1 * recs[i].h1);
    CHECK(recs[i].intF > 0.0);
    if (i > 0) {
      CHECK(recs[i].h1 > recs[i - 1].h1);
      CHECK(recs[i].energy < recs[i - 1].energy);
    }
  }
}

TEST_CASE("warm, cold and parallel sweeps agree") {
  for (auto p : {sublinear(128), strong(128)}) {
    SweepPlan plan = SweepPlan::uniform(p.lambda_star, 8, 0.95);
    plan.keep_solutions = true;
    const auto warm = run_sweep(p.family, plan);
    plan.parallel = true;
    const auto par = run_sweep(p.family, plan);
    REQUIRE(warm.size() == par.size());
    for (std::size_t i = 0; i < warm.size(); ++i) {
      REQUIRE(warm[i].solution);
      REQUIRE(par[i].solution);
      CHECK(par[i].lambda == warm[i].lambda);
      CHECK(sup_diff(*warm[i].solution, *par[i].solution) <= 1e-7);
      const auto cold = solve_at(p.family.with_lambda(warm[i].lambda));
      CHECK(sup_diff(*warm[i].solution, *cold.u) <= 1e-7);
    }
  }
}

TEST_CASE("dI/dlambda equals -int F") {
  for (auto p : {sublinear(), strong()}) {
    const auto rep = didlambda_check(p.family, {}, 0.5 * p.lambda_star, 1e-3 * p.lambda_star, p.lambda_star);
    CHECK(rep.rhs < 0.0);
    CHECK(rep.rel_err <= 1e-3);
  }
  auto p = sublinear(32);
  CHECK_THROWS_AS(didlambda_check(p.family, {}, 0.0, 1e-3, p.lambda_star), std::invalid_argument);
  CHECK_THROWS_AS(didlambda_check(p.family, {}, p.lambda_star, 1e-3, p.lambda_star), std::invalid_argument);
}

TEST_CASE("CSV: header only for no records, bit-exact round trip") {
  std::ostringstream empty;
  write_csv({}, empty);
  CHECK(empty.str() == std::string(kCsvHeader) + "\n");

  auto p = strong(64);
  const auto recs = run_sweep(p.family, SweepPlan::uniform(p.lambda_star, 6));
  std::ostringstream os;
  write_csv(recs, os);
  std::istringstream is(os.str());
  const auto back = parse_csv(is);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].lambda == recs[i].lambda);
    CHECK(back[i].h1 == recs[i].h1);
    CHECK(back[i].energy == recs[i].energy);
    CHECK(back[i].intF == recs[i].intF);
    CHECK(back[i].nehari == recs[i].nehari);
    CHECK(back[i].iterations == recs[i].iterations);
    CHECK(back[i].status == recs[i].status);
  }
  std::ostringstream again;
  write_csv(back, again);
  CHECK(again.str() == os.str());
}

TEST_CASE("CSV parsing rejects malformed input") {
  std::istringstream no_header("1,2,3\n");
  CHECK_THROWS_AS(parse_csv(no_header), std::runtime_error);
  std::istringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  CHECK_THROWS_AS(parse_csv(short_row), std::runtime_error);
  std::istringstream bad_status(std::string(kCsvHeader) + "\n1,2,3,4,5,6,done\n");
  CHECK_THROWS_AS(parse_csv(bad_status), std::runtime_error);
  CHECK_THROWS_AS(emit_csv({}, "/nonexistent-dir/out.csv"), std::runtime_error);
}

TEST_CASE("sweeps are deterministic") {
  auto p = sublinear(64);
  std::ostringstream a, b;
  write_csv(run_sweep(p.family, SweepPlan::uniform(p.lambda_star, 10)), a);
  write_csv(run_sweep(p.family, SweepPlan::uniform(p.lambda_star, 10)), b);
  CHECK(a.str() == b.str());
}
