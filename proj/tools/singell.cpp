// Command-line front end: eigen, solve, sweep and verify subcommands.
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "singell/config.hpp"
#include "singell/verify.hpp"

namespace {

using namespace singell;

enum ExitCode { kOk = 0, kSolverFailed = 1, kConfigError = 2, kVerifyFailed = 3 };

const char* const kBoolKeys[] = {"allow-super", "parallel"};

bool is_bool_key(const std::string& key) {
  for (const char* k : kBoolKeys)
    if (key == k) return true;
  return false;
}

struct CommandLine {
  std::string config_path;
  bool print_config = false;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
};

void register_keys(CLI::App* sub, CommandLine& cl) {
  sub->add_option("--config", cl.config_path, "key: value configuration file (flags win on conflict)");
  sub->add_flag("--print-config", cl.print_config, "print the effective configuration and exit");
  for (const auto& key : config_keys()) {
    if (is_bool_key(key))
      sub->add_flag("--" + key, cl.flags[key]);
    else
      sub->add_option("--" + key, cl.values[key]);
  }
}

RunConfig resolve_config(CLI::App* sub, const CommandLine& cl) {
  RunConfig cfg;
  if (!cl.config_path.empty()) apply_config_file(cfg, cl.config_path);
  for (const auto& key : config_keys()) {
    if (sub->count("--" + key) == 0) continue;
    apply_setting(cfg, key, is_bool_key(key) ? "true" : cl.values.at(key));
  }
  return cfg;
}

void line(const char* key, double v) { std::printf("%-14s %.17g\n", key, v); }

int run_eigen(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  line("delta1", inst.eig.delta1);
  line("lambda_star", inst.lambda_star);
  line("theta", inst.family.theta());
  std::printf("%-14s %d\n", "iterations", inst.eig.iterations);
  if (!cfg.dump.empty()) write_nodal_file(inst.eig.phi1, cfg.dump);
  return kOk;
}

int run_solve(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const double lambda = resolve_lambda(cfg, inst.lambda_star);
  const EnergyContext ctx = inst.family.with_lambda(lambda);
  const SolveOutcome out = solve_at(ctx, cfg.policy);
  const Diagnostics& d = out.diagnostics;
  std::printf("%-14s %s\n", "status", to_string(out.status));
  line("lambda", lambda);
  line("lambda_star", inst.lambda_star);
  if (out.u) {
    line("energy", d.energy);
    line("h1", d.h1);
    line("nehari", d.nehari);
    line("min_u_over_d", d.min_u_over_d);
    line("scaled_resid", d.scaled_residual);
    line("final_eps", d.final_eps);
  }
  std::printf("%-14s %d\n", "iterations", d.iterations);
  if (!out.message.empty()) std::printf("%-14s %s\n", "message", out.message.c_str());
  if (!cfg.dump.empty() && out.u) write_nodal_file(*out.u, cfg.dump);
  return out.status == SolveStatus::Failed ? kSolverFailed : kOk;
}

int run_sweep_cmd(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const SweepPlan plan = make_sweep_plan(cfg, inst.lambda_star);
  const auto records = run_sweep(inst.family, plan);
  if (cfg.output.empty())
    write_csv(records, std::cout);
  else
    emit_csv(records, cfg.output);
  for (const auto& r : records)
    if (r.status == SolveStatus::Failed) return kSolverFailed;
  return kOk;
}

int run_verify_cmd(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const std::uint64_t seed = verify_seed();
  std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
  bool ok = true;
  for (const auto& r : run_verify(inst.family, inst.eig, inst.lambda_star, cfg.policy, seed)) {
    std::printf("[%s] %-22s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive solutions of -Lu = a(x) u^-gamma + lambda f(u) by energy minimization"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"eigen", "principal eigenpair and lambda*", run_eigen},
      {"solve", "solve at one lambda and print diagnostics", run_solve},
      {"sweep", "continuation over a lambda grid, CSV output", run_sweep_cmd},
      {"verify", "oracle, closed-form, derivative and monotonicity self-checks", run_verify_cmd},
  };
  std::vector<CommandLine> lines(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].name, commands[i].help));
    register_keys(subs.back(), lines[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const RunConfig cfg = resolve_config(subs[i], lines[i]);
      if (lines[i].print_config) {
        std::fputs(print_config(cfg).c_str(), stdout);
        return kOk;
      }
      return commands[i].run(cfg);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return kConfigError;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kSolverFailed;
    }
  }
  return kConfigError;
}
