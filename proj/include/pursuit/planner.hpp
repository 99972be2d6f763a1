#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "pursuit/sampling.hpp"
#include "pursuit/sgpeg.hpp"

namespace pursuit {

enum class SamplerKind { web, uniform };
enum class Criterion { fixed_effort, stalled_progress };

struct PlannerConfig {
  /// Variable mode starts at one pursuer and grows; fixed mode uses `pursuers`.
  bool variable = false;
  std::size_t pursuers = 1;
  SamplerKind sampler = SamplerKind::web;
  Criterion criterion = Criterion::fixed_effort;
  Sgpeg::Expand expand = Sgpeg::Expand::clone;
  double alpha = 0.001;
  std::size_t stall_samples = 30;
  double time_limit = 600.0;
  std::uint64_t seed = 0;
  double connect_radius = 0.0;
  double beta = 2.0;
  /// Motion discretization step; non-positive selects diam(E) / 500.
  double delta = 0.0;
  /// Extracted solutions are replayed on grids at these resolutions and
  /// discarded if any replay ends contaminated. Empty disables the check.
  std::vector<int> certify_resolutions{128, 256};
  /// Receives one JSON object per sample when set.
  std::ostream* log = nullptr;
  /// Keep a dump of the final graph in the report.
  bool keep_graph = false;

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
  Json to_json() const;
  static PlannerConfig from_json(const Json& j);
};

struct SolveReport {
  Solution solution;
  bool trivial = false;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t samples = 0;
  /// Extracted solutions thrown away by the grid replay.
  std::size_t rejected = 0;
  double seconds = 0.0;
  /// Sgpeg::to_json of the final graph when requested, otherwise null.
  Json graph;
};

/// Sampling loop. Fixed mode throws Timeout when the time limit passes without
/// a solution; variable mode falls back to the trivial solution.
SolveReport solve(const Environment& env, const PlannerConfig& cfg);

/// Stationary pursuers whose visibility polygons leave no shadow; the team
/// size is an upper bound on the pursuers needed.
Solution trivial_solution(const Environment& env, Rng& rng);

/// Smallest root of lambda^N e^-lambda / N! = alpha on [0, N]. Throws NoRoot
/// when alpha is at or above the maximum N^N e^-N / N!.
double poisson_lambda(double alpha, std::size_t N);
/// Stage i < N gets T * lambda^(i-1) e^-lambda / (i-1)!; stage N gets alpha * T.
std::vector<double> poisson_budget(double alpha, std::size_t N, double time_limit);

/// Fires once the best contaminated area has gone `samples` observations
/// without falling to 95% of the reference, which resets at every such drop.
class StallWindow {
 public:
  StallWindow(double reference, std::size_t samples) : ref_(reference), samples_(samples) {}
  void observe(double best);
  bool met() const { return since_ >= samples_; }
  double reference() const { return ref_; }

 private:
  double ref_;
  std::size_t samples_;
  std::size_t since_ = 0;
};

/// Fixed-effort test: the stage has used up its budget.
inline bool stage_expired(double elapsed, double budget) { return elapsed >= budget; }

}  // namespace pursuit
