// Command-line front end: solve, refine, verify, render, web, bench.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "pursuit/bench.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/io.hpp"
#include "pursuit/planner.hpp"
#include "pursuit/refine.hpp"
#include "pursuit/render.hpp"
#include "pursuit/sampling.hpp"
#include "pursuit/verify.hpp"

namespace fs = std::filesystem;
using namespace pursuit;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailed = 1;  // timeout, contaminated verdict, not a solution
constexpr int kError = 2;   // bad input

struct PlannerFlags {
  std::string config;
  std::size_t pursuers = 0;
  bool variable = false;
  std::string sampler, criterion, expand;
  std::optional<double> alpha, time_limit, connect_radius, beta, delta;
  std::optional<std::size_t> stall;
  std::optional<std::uint64_t> seed;
  std::vector<int> certify;
  bool no_certify = false;

  void add(CLI::App* app) {
    app->add_option("--config", config, "JSON planner config; flags override it")->check(CLI::ExistingFile);
    app->add_option("--pursuers", pursuers, "team size in fixed mode");
    app->add_flag("--variable", variable, "start with one pursuer and grow the team");
    app->add_option("--sampler", sampler, "ws or uniform")->check(CLI::IsMember({"ws", "uniform"}));
    app->add_option("--criterion", criterion, "expansion criterion, fe or sp")
        ->check(CLI::IsMember({"fe", "sp"}));
    app->add_option("--expand", expand, "clone or clear")->check(CLI::IsMember({"clone", "clear"}));
    app->add_option("--alpha", alpha, "final-stage time fraction for fe");
    app->add_option("--M", stall, "samples without 5% progress before sp adds a pursuer");
    app->add_option("--time-limit", time_limit, "seconds");
    app->add_option("--seed", seed);
    app->add_option("--connect-radius", connect_radius, "0 selects 0.35 diam(E) sqrt(n)");
    app->add_option("--beta", beta, "redundant-edge factor");
    app->add_option("--delta", delta, "motion step for shadow tracking; 0 selects diam(E)/500");
    app->add_option("--certify", certify, "grid resolutions replayed on every extracted solution");
    app->add_flag("--no-certify", no_certify, "skip the grid replay of extracted solutions");
  }

  PlannerConfig build() const {
    PlannerConfig c = config.empty() ? PlannerConfig{} : PlannerConfig::from_json(read_json(config));
    if (pursuers) c.pursuers = pursuers;
    if (variable) c.variable = true;
    if (!sampler.empty()) c.sampler = sampler == "ws" ? SamplerKind::web : SamplerKind::uniform;
    if (!criterion.empty()) {
      c.criterion = criterion == "fe" ? Criterion::fixed_effort : Criterion::stalled_progress;
    }
    if (!expand.empty()) c.expand = expand == "clone" ? Sgpeg::Expand::clone : Sgpeg::Expand::clear;
    if (alpha) c.alpha = *alpha;
    if (stall) c.stall_samples = *stall;
    if (time_limit) c.time_limit = *time_limit;
    if (seed) c.seed = *seed;
    if (connect_radius) c.connect_radius = *connect_radius;
    if (beta) c.beta = *beta;
    if (delta) c.delta = *delta;
    if (!certify.empty()) c.certify_resolutions = certify;
    if (no_certify) c.certify_resolutions.clear();
    return c;
  }
};

int cmd_solve(const std::string& env_path, const PlannerFlags& flags, const std::string& out,
              const std::string& log_path, const std::string& graph_path) {
  const Environment env = load_environment(env_path);
  PlannerConfig cfg = flags.build();
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw FormatError("cannot write " + log_path);
    cfg.log = &log;
  }
  cfg.keep_graph = !graph_path.empty();
  try {
    const SolveReport r = solve(env, cfg);
    if (out.empty()) {
      std::cout << solution_to_json(r.solution).dump(1) << '\n';
    } else {
      save_solution(r.solution, out);
    }
    if (!graph_path.empty() && !r.graph.is_null()) write_json(r.graph, graph_path);
    std::cerr << "pursuers " << r.solution.num_pursuers << (r.trivial ? " (trivial)" : "")
              << ", waypoints " << r.solution.waypoints.size() << ", length "
              << length(r.solution) << ", vertices " << r.vertices << ", edges " << r.edges
              << ", samples " << r.samples << ", " << r.seconds << " s\n";
    return kOk;
  } catch (const Timeout& e) {
    std::cerr << "no solution: " << e.what() << '\n';
    return kFailed;
  }
}

int cmd_refine(const std::string& env_path, const std::string& in, const std::string& out,
               const std::vector<int>& certify) {
  const Environment env = load_environment(env_path);
  RefineOptions opts;
  opts.certify_resolutions = certify;
  try {
    const RefineReport r = refine(env, load_solution(in), opts);
    if (out.empty()) {
      std::cout << solution_to_json(r.solution).dump(1) << '\n';
    } else {
      save_solution(r.solution, out);
    }
    std::cerr << "length " << r.length_before << " -> " << r.length_after << ", " << r.accepted
              << " shortcuts of " << r.candidates << " candidates\n";
    return kOk;
  } catch (const NotASolution& e) {
    std::cerr << "not a solution: " << e.what() << '\n';
    return kFailed;
  }
}

int cmd_verify(const std::string& env_path, const std::string& in, int resolution) {
  const Environment env = load_environment(env_path);
  const GridVerdict v = grid_verify(env, load_solution(in), resolution);
  std::cout << (v.cleared ? "cleared" : "contaminated") << " residual_area " << v.contaminated_area
            << " cells " << v.contaminated_cells << " steps " << v.steps << '\n';
  return v.cleared ? kOk : kFailed;
}

int cmd_render(const std::string& env_path, const std::string& solution, const std::string& web,
               const std::string& graph, double width, const std::string& out) {
  const Environment env = load_environment(env_path);
  RenderInput in;
  in.width = width;
  if (!solution.empty()) in.solution = load_solution(solution);
  if (!web.empty()) in.web = web_from_json(read_json(web));
  if (!graph.empty()) in.graph = read_json(graph);
  const std::string svg = render_svg(env, in);
  if (out.empty()) {
    std::cout << svg;
  } else {
    std::ofstream f(out);
    if (!(f << svg)) throw FormatError("cannot write " + out);
  }
  return kOk;
}

int cmd_web(const std::string& env_path, std::uint64_t seed, const std::string& out) {
  const Environment env = load_environment(env_path);
  Rng rng(seed);
  const Web web = build_web(env, rng);
  Json j = web_to_json(web);
  std::cerr << web.initial.size() << " initial points, " << web.intersection.size()
            << " intersection points, connected " << (web_connected(env, web) ? "yes" : "no")
            << '\n';
  if (out.empty()) {
    std::cout << j.dump(1) << '\n';
  } else {
    write_json(j, out);
  }
  return kOk;
}

int cmd_bench(const std::string& suite_path, std::optional<std::size_t> trials,
              std::optional<double> time_limit, const std::string& csv, bool quiet) {
  Suite suite = suite_from_json(read_json(suite_path), fs::path(suite_path).parent_path());
  if (trials) suite.trials = *trials;
  if (time_limit) suite.time_limit = *time_limit;
  const auto rows = run_suite(suite, [&](const Scenario& sc, std::size_t t, const TrialResult& r) {
    if (quiet) return;
    std::cerr << sc.name << " trial " << t << ": ";
    if (r.success) {
      std::cerr << r.seconds << " s, " << r.robots << " robots, " << r.vertices << " vertices\n";
    } else {
      std::cerr << "failed\n";
    }
  });
  write_table(std::cout, rows);
  if (!csv.empty()) {
    std::ofstream f(csv);
    write_csv(f, rows);
    if (!f) throw FormatError("cannot write " + csv);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-pursuer visibility pursuit-evasion planner"};
  app.require_subcommand(1);
  int code = kOk;

  std::string env_path, in, out, log_path, graph_path, web_path, csv;
  int resolution = 256;
  double width = 800.0;
  std::uint64_t seed = 0;
  std::vector<int> certify{128, 256};
  std::optional<std::size_t> trials;
  std::optional<double> bench_limit;
  bool quiet = false;

  PlannerFlags flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "plan a joint strategy");
  solve_cmd->add_option("env", env_path, "environment JSON")->required()->check(CLI::ExistingFile);
  flags.add(solve_cmd);
  solve_cmd->add_option("-o,--output", out, "solution JSON (stdout if absent)");
  solve_cmd->add_option("--log", log_path, "JSONL run log, one line per sample");
  solve_cmd->add_option("--graph", graph_path, "dump of the final graph");
  solve_cmd->callback([&] { code = cmd_solve(env_path, flags, out, log_path, graph_path); });

  CLI::App* refine_cmd = app.add_subcommand("refine", "shorten a solution");
  refine_cmd->add_option("env", env_path)->required()->check(CLI::ExistingFile);
  refine_cmd->add_option("solution", in)->required()->check(CLI::ExistingFile);
  refine_cmd->add_option("-o,--output", out);
  refine_cmd->add_option("--certify", certify, "grid resolutions the result must clear");
  refine_cmd->callback([&] { code = cmd_refine(env_path, in, out, certify); });

  CLI::App* verify_cmd = app.add_subcommand("verify", "replay a solution on a grid; exit 0 iff cleared");
  verify_cmd->add_option("env", env_path)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("solution", in)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--resolution", resolution, "cells along the longer side")
      ->check(CLI::Range(64, 8192));
  verify_cmd->callback([&] { code = cmd_verify(env_path, in, resolution); });

  CLI::App* render_cmd = app.add_subcommand("render", "SVG of an environment with a solution, web or graph");
  render_cmd->add_option("env", env_path)->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--solution", in)->check(CLI::ExistingFile);
  render_cmd->add_option("--web", web_path)->check(CLI::ExistingFile);
  render_cmd->add_option("--graph", graph_path)->check(CLI::ExistingFile);
  render_cmd->add_option("--width", width)->check(CLI::PositiveNumber);
  render_cmd->add_option("-o,--output", out);
  render_cmd->callback([&] { code = cmd_render(env_path, in, web_path, graph_path, width, out); });

  CLI::App* web_cmd = app.add_subcommand("web", "build one sampling web");
  web_cmd->add_option("env", env_path)->required()->check(CLI::ExistingFile);
  web_cmd->add_option("--seed", seed);
  web_cmd->add_option("-o,--output", out);
  web_cmd->callback([&] { code = cmd_web(env_path, seed, out); });

  CLI::App* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
  bench_cmd->add_option("suite", in, "suite JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--trials", trials);
  bench_cmd->add_option("--time-limit", bench_limit, "seconds per trial");
  bench_cmd->add_option("--csv", csv);
  bench_cmd->add_flag("-q,--quiet", quiet);
  bench_cmd->callback([&] { code = cmd_bench(in, trials, bench_limit, csv, quiet); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return code;
}
