#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "singell/config.hpp"

using namespace singell;

TEST_CASE("defaults describe the standard instance") {
  const RunConfig cfg;
  CHECK(cfg.domain == "interval:0:1");
  CHECK(cfg.n == 256);
  CHECK(cfg.gamma == 0.5);
  CHECK(cfg.points == 40);
  CHECK(cfg.frac_max == 0.999);
  CHECK_FALSE(cfg.allow_super);
}

TEST_CASE("settings parse and validate") {
  RunConfig cfg;
  apply_setting(cfg, "gamma", " 1.5 ");
  apply_setting(cfg, "weight", "distpow:0.8");
  apply_setting(cfg, "f", "affine:2:0.5");
  apply_setting(cfg, "eps-schedule", "1e-2,1e-4,1e-8");
  apply_setting(cfg, "allow-super", "true");
  CHECK(cfg.gamma == 1.5);
  CHECK(cfg.weight == "distpow:0.8");
  CHECK(cfg.policy.eps_schedule == std::vector<double>{1e-2, 1e-4, 1e-8});
  CHECK(cfg.allow_super);
  CHECK_THROWS_AS(apply_setting(cfg, "gama", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "n", "2"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "n", "12x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "gamma", "-1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "weight", "distpow"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "f", "cubic"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "f", "affine:2:1.5"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "domain", "disk:1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "eps-schedule", "1e-4,1e-2"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "damping", "1.5"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "parallel", "maybe"), ConfigError);
  CHECK(cfg.gamma == 1.5);
}

TEST_CASE("config text reports the offending line") {
  RunConfig cfg;
  apply_config_text(cfg, "# comment\n\nn: 64   # trailing\ngamma: 0.25\n", "run.cfg");
  CHECK(cfg.n == 64);
  CHECK(cfg.gamma == 0.25);
  try {
    apply_config_text(cfg, "n: 64\nlamda: 3\n", "run.cfg");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.cfg:2") == 0);
    CHECK(std::string(e.what()).find("lamda") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_config_text(cfg, "n 64\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("print_config round trips") {
  RunConfig cfg;
  apply_setting(cfg, "domain", "rectangle:1:2");
  apply_setting(cfg, "n", "33");
  apply_setting(cfg, "gamma", "0.1");
  apply_setting(cfg, "lambda-frac", "0.3");
  apply_setting(cfg, "eps-schedule", "0.1,0.001,1e-9");
  apply_setting(cfg, "parallel", "yes");
  apply_setting(cfg, "output", "out.csv");
  const std::string text = print_config(cfg);
  RunConfig back;
  apply_config_text(back, text);
  CHECK(print_config(back) == text);
  CHECK(back.gamma == cfg.gamma);
  CHECK(back.lambda_frac == cfg.lambda_frac);
  CHECK(back.policy.eps_schedule == cfg.policy.eps_schedule);
  CHECK(back.parallel);
  CHECK(back.output == "out.csv");
}

TEST_CASE("instance, lambda and sweep range") {
  RunConfig cfg;
  cfg.n = 64;
  const Instance inst = build_instance(cfg);
  CHECK(inst.lambda_star == doctest::Approx(inst.eig.delta1));
  CHECK_THROWS_AS(resolve_lambda(cfg, inst.lambda_star), ConfigError);
  cfg.lambda_frac = 0.5;
  CHECK(resolve_lambda(cfg, inst.lambda_star) == doctest::Approx(0.5 * inst.lambda_star));
  cfg.lambda = 1.0;
  CHECK_THROWS_AS(resolve_lambda(cfg, inst.lambda_star), ConfigError);
  cfg.lambda_frac.reset();
  CHECK(resolve_lambda(cfg, inst.lambda_star) == 1.0);
  cfg.lambda = 2.0 * inst.lambda_star;
  CHECK_THROWS_AS(resolve_lambda(cfg, inst.lambda_star), ConfigError);
  cfg.allow_super = true;
  CHECK(resolve_lambda(cfg, inst.lambda_star) == 2.0 * inst.lambda_star);

  cfg.frac_max = 1.05;
  CHECK_THROWS_AS(make_sweep_plan(cfg, inst.lambda_star), ConfigError);
  cfg.frac_max = 0.9;
  cfg.frac_min = -0.1;
  CHECK_THROWS_AS(make_sweep_plan(cfg, inst.lambda_star), ConfigError);
  cfg.frac_min = 0.1;
  cfg.points = 5;
  const SweepPlan plan = make_sweep_plan(cfg, inst.lambda_star);
  CHECK(plan.lambda_grid.size() == 5);
  CHECK(plan.lambda_grid.front() == doctest::Approx(0.1 * inst.lambda_star));

  RunConfig strong;
  strong.n = 32;
  strong.gamma = 1.5;
  CHECK_THROWS_AS(build_instance(strong), ConfigError);
  strong.weight = "distpow:0.8";
  const Instance s = build_instance(strong);
  CHECK(s.family.gamma().gamma == 1.5);
  RunConfig affine;
  affine.n = 32;
  affine.f = "affine:2:0.5";
  CHECK(build_instance(affine).lambda_star == doctest::Approx(build_instance(strong).eig.delta1 / 2.0));
}

TEST_CASE("nodal files round trip and feed file weights") {
  const std::string path = "test_config_weight.txt";
  auto grid = build_grid(Domain::rectangle(1, 1), 5);
  const auto w = GridFunction::sample(grid, [](double x, double y) { return 1.0 + x + 2.0 * y; });
  write_nodal_file(w, path);
  const GridFunction back = read_nodal_file(path, grid);
  CHECK(back.values() == w.values());
  std::ostringstream os;
  write_nodal(w, os);
  CHECK(os.str().substr(0, os.str().find('\n')).find(' ') != std::string::npos);

  RunConfig cfg;
  cfg.domain = "rectangle:1:1";
  cfg.n = 5;
  cfg.weight = "file:" + path;
  const Instance inst = build_instance(cfg);
  CHECK(inst.family.a() == w.values());
  CHECK_THROWS_AS(read_nodal_file(path, build_grid(Domain::rectangle(1, 1), 6)), std::runtime_error);
  cfg.weight = "file:/nonexistent/weights.txt";
  CHECK_THROWS_AS(build_instance(cfg), ConfigError);
  std::remove(path.c_str());
}
