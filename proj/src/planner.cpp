#include "pursuit/planner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "pursuit/errors.hpp"
#include "pursuit/refine.hpp"
#include "pursuit/verify.hpp"

namespace pursuit {

void PlannerConfig::validate() const {
  if (!variable && pursuers == 0) throw InvalidConfig("fixed mode needs at least one pursuer");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("alpha must lie in (0, 1)");
  if (stall_samples < 1) throw InvalidConfig("M must be at least 1");
  if (!(time_limit > 0.0)) throw InvalidConfig("the time limit must be positive");
  if (!(beta >= 1.0)) throw InvalidConfig("beta must be at least 1");
  for (int r : certify_resolutions) {
    if (r < 64) throw InvalidConfig("certification resolution must be at least 64");
  }
}

namespace {

const char* name(SamplerKind k) { return k == SamplerKind::web ? "ws" : "uniform"; }
const char* name(Criterion c) { return c == Criterion::fixed_effort ? "fe" : "sp"; }
const char* name(Sgpeg::Expand e) { return e == Sgpeg::Expand::clone ? "clone" : "clear"; }

}  // namespace

Json PlannerConfig::to_json() const {
  return {{"variable", variable},
          {"pursuers", pursuers},
          {"sampler", name(sampler)},
          {"criterion", name(criterion)},
          {"expand", name(expand)},
          {"alpha", alpha},
          {"M", stall_samples},
          {"time_limit", time_limit},
          {"seed", seed},
          {"connect_radius", connect_radius},
          {"beta", beta},
          {"delta", delta},
          {"certify_resolutions", certify_resolutions}};
}

PlannerConfig PlannerConfig::from_json(const Json& j) {
  PlannerConfig c;
  if (!j.is_object()) throw FormatError("planner config must be a JSON object");
  try {
    c.variable = j.value("variable", c.variable);
    c.pursuers = j.value("pursuers", c.pursuers);
    const std::string s = j.value("sampler", std::string(name(c.sampler)));
    if (s != "ws" && s != "uniform") throw FormatError("sampler must be ws or uniform");
    c.sampler = s == "ws" ? SamplerKind::web : SamplerKind::uniform;
    const std::string cr = j.value("criterion", std::string(name(c.criterion)));
    if (cr != "fe" && cr != "sp") throw FormatError("criterion must be fe or sp");
    c.criterion = cr == "fe" ? Criterion::fixed_effort : Criterion::stalled_progress;
    const std::string ex = j.value("expand", std::string(name(c.expand)));
    if (ex != "clone" && ex != "clear") throw FormatError("expand must be clone or clear");
    c.expand = ex == "clone" ? Sgpeg::Expand::clone : Sgpeg::Expand::clear;
    c.alpha = j.value("alpha", c.alpha);
    c.stall_samples = j.value("M", c.stall_samples);
    c.time_limit = j.value("time_limit", c.time_limit);
    c.seed = j.value("seed", c.seed);
    c.connect_radius = j.value("connect_radius", c.connect_radius);
    c.beta = j.value("beta", c.beta);
    c.delta = j.value("delta", c.delta);
    c.certify_resolutions = j.value("certify_resolutions", c.certify_resolutions);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("planner config: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Budgets and criteria

double poisson_lambda(double alpha, std::size_t N) {
  if (N == 0) throw std::invalid_argument("N must be positive");
  if (!(alpha > 0.0)) throw NoRoot("alpha must be positive");
  const double n = static_cast<double>(N);
  const double log_norm = std::lgamma(n + 1.0);
  // log of lambda^N e^-lambda / N!, increasing on [0, N].
  auto g = [&](double lambda) { return n * std::log(lambda) - lambda - log_norm; };
  const double target = std::log(alpha);
  if (g(n) <= target) throw NoRoot("alpha is at or above the Poisson maximum for this N");
  double lo = 0.0;
  double hi = n;
  while (hi - lo > 1e-15 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid > 0.0 && g(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> poisson_budget(double alpha, std::size_t N, double time_limit) {
  const double lambda = poisson_lambda(alpha, N);
  std::vector<double> stages;
  double pmf = std::exp(-lambda);  // i = 1
  for (std::size_t i = 1; i < N; ++i) {
    stages.push_back(time_limit * pmf);
    pmf *= lambda / static_cast<double>(i);
  }
  stages.push_back(alpha * time_limit);
  return stages;
}

void StallWindow::observe(double best) {
  if (best <= 0.95 * ref_) {
    ref_ = best;
    since_ = 0;
  } else {
    ++since_;
  }
}

// ---------------------------------------------------------------------------
// Trivial solution

Solution trivial_solution(const Environment& env, Rng& rng) {
  std::vector<Point> guards;
  Region uncovered = env.region();
  while (!uncovered.empty()) {
    guards.push_back(random_point(uncovered, rng));
    uncovered = hidden_region(env, guards);
  }
  Solution s;
  s.num_pursuers = guards.size();
  s.waypoints.push_back(JointConfig{guards});
  return s;
}

// ---------------------------------------------------------------------------
// Solve

namespace {

using Clock = std::chrono::steady_clock;

class Run {
 public:
  Run(const Environment& env, const PlannerConfig& cfg)
      : env_(env), cfg_(cfg), start_(Clock::now()), rng_(cfg.seed) {
    if (cfg.sampler == SamplerKind::web) {
      sampler_ = std::make_unique<WebSampler>(env, rng_);
    } else {
      sampler_ = std::make_unique<UniformSampler>(env, rng_);
    }
    opts_.connect_radius = cfg.connect_radius;
    opts_.beta = cfg.beta;
    opts_.motion.step = cfg.delta;
  }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  SolveReport fixed() {
    Sgpeg g(env_, cfg_.pursuers, opts_);
    root(g);
    for (;;) {
      if (auto s = solution(g)) return finish(std::move(*s), g, false);
      if (elapsed() >= cfg_.time_limit) throw Timeout("no solution within the time limit");
      sample(g);
    }
  }

  SolveReport variable() {
    // The trivial solution bounds the team size and is the last resort.
    Solution fallback = trivial_solution(env_, rng_);
    const std::size_t N = fallback.num_pursuers;
    if (N <= 1) return finish(std::move(fallback), std::nullopt, true);

    std::vector<double> budget;
    if (cfg_.criterion == Criterion::fixed_effort) budget = poisson_budget(cfg_.alpha, N, cfg_.time_limit);

    Sgpeg g(env_, 1, opts_);
    root(g);
    double stage_start = elapsed();
    StallWindow window(env_.area(), cfg_.stall_samples);
    window.observe(g.best_contamination());
    for (;;) {
      try {
        if (auto s = solution(g)) return finish(std::move(*s), g, false);
      } catch (const Timeout&) {
        return finish(std::move(fallback), g, true);
      }
      const double now = elapsed();
      if (now >= cfg_.time_limit) return finish(std::move(fallback), g, true);
      const bool expand = cfg_.criterion == Criterion::fixed_effort
                              ? stage_expired(now - stage_start, budget[g.pursuers() - 1])
                              : window.met();
      if (expand) {
        if (g.pursuers() + 1 >= N) return finish(std::move(fallback), g, true);
        g.add_pursuer(cfg_.expand);
        if (cfg_.expand == Sgpeg::Expand::clear) root(g);
        stage_start = elapsed();
        window = StallWindow(g.best_contamination(), cfg_.stall_samples);
        continue;
      }
      sample(g);
      window.observe(g.best_contamination());
    }
  }

 private:
  void root(Sgpeg& g) {
    const JointConfig p = sampler_->next_sample(g.pursuers());
    g.add_sample(p);
    g.set_root(p);
    ++samples_;
    log(g);
  }

  void sample(Sgpeg& g) {
    g.add_sample(sampler_->next_sample(g.pursuers()));
    ++samples_;
    log(g);
  }

  void log(const Sgpeg& g) const {
    if (cfg_.log) {
      const Json line{{"sample", samples_},
                      {"t", elapsed()},
                      {"pursuers", g.pursuers()},
                      {"best_contamination", g.best_contamination()},
                      {"vertices", g.vertex_count()},
                      {"edges", g.edge_count()}};
      *cfg_.log << line.dump() << '\n';
    }
  }

  /// The graph's solution if it survives the grid replay; a rejected one
  /// removes the edge its replay first goes wrong on.
  std::optional<Solution> solution(Sgpeg& g) {
    for (;;) {
      std::optional<Solution> s = g.extract_solution();
      if (!s || certified(*s)) return s;
      ++rejected_;
      g.remove_edge_pair(g.solution_edges().back());
    }
  }

  /// Throws Timeout if the replay runs past the time limit.
  bool certified(const Solution& s) const {
    const auto deadline = start_ + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(cfg_.time_limit));
    for (int r : cfg_.certify_resolutions) {
      if (!grid_verify(env_, s, r, deadline).cleared) return false;
    }
    return true;
  }

  SolveReport finish(Solution s, std::optional<std::reference_wrapper<const Sgpeg>> g, bool trivial) {
    SolveReport r;
    r.solution = std::move(s);
    r.trivial = trivial;
    if (g) {
      r.vertices = g->get().vertex_count();
      r.edges = g->get().edge_count();
      if (cfg_.keep_graph) r.graph = g->get().to_json();
    }
    r.samples = samples_;
    r.rejected = rejected_;
    r.seconds = elapsed();
    return r;
  }

  const Environment& env_;
  const PlannerConfig& cfg_;
  Clock::time_point start_;
  Rng rng_;
  std::unique_ptr<Sampler> sampler_;
  SgpegOptions opts_;
  std::size_t samples_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace

SolveReport solve(const Environment& env, const PlannerConfig& cfg) {
  cfg.validate();
  Run run(env, cfg);
  return cfg.variable ? run.variable() : run.fixed();
}

}  // namespace pursuit
