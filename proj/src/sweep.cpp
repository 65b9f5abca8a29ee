#include "singell/sweep.hpp"

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace singell {

namespace {

SweepRecord make_record(const EnergyContext& ctx, double lambda, const SolveOutcome& out, bool keep) {
  SweepRecord rec;
  rec.lambda = lambda;
  rec.status = out.status;
  rec.iterations = out.diagnostics.iterations;
  rec.h1 = out.diagnostics.h1;
  rec.energy = out.diagnostics.energy;
  rec.nehari = out.diagnostics.nehari;
  if (out.u) {
    rec.intF = integral_big_f(ctx, *out.u);
    if (keep && out.converged()) rec.solution = out.u;
  }
  return rec;
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw std::runtime_error("malformed number in CSV: '" + s + "'");
  return v;
}

}  // namespace

SweepPlan SweepPlan::uniform(double lambda_star, int points, double frac_max, double frac_min) {
  if (points < 0) throw std::invalid_argument("sweep needs a non-negative point count");
  SweepPlan plan;
  plan.dlambda_fd = 1e-3 * lambda_star;
  plan.lambda_grid.reserve(std::size_t(points));
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? frac_max : frac_min + (frac_max - frac_min) * double(i) / double(points - 1);
    plan.lambda_grid.push_back(frac * lambda_star);
  }
  return plan;
}

void SweepPlan::validate(double lambda_star) const {
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 0.0)) throw std::invalid_argument("sweep lambdas must be >= 0");
    if (!(lambda_grid[i] < lambda_star)) throw std::invalid_argument("sweep lambdas must stay below lambda*");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw std::invalid_argument("sweep lambdas must be strictly increasing");
  }
  policy.validate();
}

std::vector<SweepRecord> run_sweep(const EnergyContext& family, const SweepPlan& plan) {
  const auto& grid = plan.lambda_grid;
  std::vector<SweepRecord> records(grid.size());
  if (grid.empty()) return records;

  if (plan.parallel) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) {
        const EnergyContext ctx = family.with_lambda(grid[i]);
        records[i] = make_record(ctx, grid[i], solve_at(ctx, plan.policy), plan.keep_solutions);
      }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned count = std::min<unsigned>(hw, unsigned(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
  }

  std::optional<GridFunction> warm;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const EnergyContext ctx = family.with_lambda(grid[i]);
    SolveOutcome out = solve_at(ctx, plan.policy, warm);
    if (!out.converged() && warm) out = solve_at(ctx, plan.policy);
    if (out.converged()) warm = out.u;
    records[i] = make_record(ctx, grid[i], out, plan.keep_solutions);
  }
  return records;
}

DIdLambdaReport didlambda_check(const EnergyContext& family, const SolverPolicy& policy, double lambda,
                                double dlambda, double lambda_star) {
  if (!(dlambda > 0.0)) throw std::invalid_argument("dlambda must be positive");
  if (!(lambda - dlambda > 0.0) || !(lambda + dlambda < lambda_star))
    throw std::invalid_argument("lambda +- dlambda must lie in (0, lambda*)");
  const EnergyContext mid = family.with_lambda(lambda);
  const SolveOutcome center = solve_at(mid, policy);
  if (!center.converged()) throw std::runtime_error("solve at lambda failed: " + center.message);
  auto neighbor = [&](double l) {
    const EnergyContext ctx = family.with_lambda(l);
    const SolveOutcome out = solve_at(ctx, policy, center.u);
    if (!out.converged()) throw std::runtime_error("neighbor solve failed: " + out.message);
    return energy_value(ctx, *out.u);
  };
  DIdLambdaReport rep;
  const double up = neighbor(lambda + dlambda);
  const double down = neighbor(lambda - dlambda);
  rep.lhs = (up - down) / (2.0 * dlambda);
  rep.rhs = -integral_big_f(mid, *center.u);
  rep.rel_err = std::abs(rep.lhs - rep.rhs) / std::abs(rep.rhs);
  return rep;
}

SolveStatus parse_status(const std::string& s) {
  if (s == "converged") return SolveStatus::Converged;
  if (s == "no_solution") return SolveStatus::NoSolutionDetected;
  if (s == "failed") return SolveStatus::Failed;
  throw std::runtime_error("unknown status '" + s + "'");
}

void write_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << real_text(r.lambda) << ',' << real_text(r.h1) << ',' << real_text(r.energy) << ',' << real_text(r.intF)
       << ',' << real_text(r.nehari) << ',' << r.iterations << ',' << to_string(r.status) << '\n';
  }
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error(path + ": " + std::strerror(errno));
  write_csv(records, os);
  os.flush();
  if (!os) throw std::runtime_error(path + ": " + std::strerror(errno));
}

std::vector<SweepRecord> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("missing or unexpected CSV header");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 7) throw std::runtime_error("CSV row has " + std::to_string(cols.size()) + " columns");
    SweepRecord r;
    r.lambda = parse_real(cols[0]);
    r.h1 = parse_real(cols[1]);
    r.energy = parse_real(cols[2]);
    r.intF = parse_real(cols[3]);
    r.nehari = parse_real(cols[4]);
    r.iterations = std::stoi(cols[5]);
    r.status = parse_status(cols[6]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace singell
