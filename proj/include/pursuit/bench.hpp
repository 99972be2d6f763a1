#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "pursuit/planner.hpp"

namespace pursuit {

struct Scenario {
  std::string name;
  std::filesystem::path environment;
  PlannerConfig config;
};

struct Suite {
  std::vector<Scenario> scenarios;
  std::size_t trials = 10;
  /// Applied to every scenario when positive.
  double time_limit = 0.0;
  std::uint64_t base_seed = 0;
};

/// `{"trials": 10, "time_limit": 300, "base_seed": 0, "scenarios": [{"name": ...,
/// "environment": "h_like.json", "config": {...}}]}`; environment paths are
/// relative to `base`.
Suite suite_from_json(const Json& j, const std::filesystem::path& base);

struct Summary {
  double mean = 0.0;
  double sigma = 0.0;
};
/// Sample mean and standard deviation; sigma is 0 for a single value.
Summary summarize(const std::vector<double>& xs);

struct TrialResult {
  bool success = false;
  double seconds = 0.0;
  std::size_t robots = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
};

struct BenchRow {
  std::string scenario;
  std::size_t trials = 0;
  std::size_t successes = 0;
  Summary time, robots, vertices, edges;

  double success_rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

/// Statistics over the successful trials; failures only lower the success rate.
BenchRow tabulate(const std::string& scenario, const std::vector<TrialResult>& trials);

/// Trial t runs with seed base_seed + t. `progress` sees every finished trial.
std::vector<BenchRow> run_suite(
    const Suite& suite,
    const std::function<void(const Scenario&, std::size_t, const TrialResult&)>& progress = {});

/// Columns: scenario, success_rate, time_mu, time_sigma, robots_mu, robots_sigma,
/// vertices_mu, vertices_sigma, edges_mu, edges_sigma. Stats of scenarios
/// without a success are written as n/a.
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_table(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace pursuit
