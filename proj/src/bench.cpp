#include "pursuit/bench.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "pursuit/errors.hpp"

namespace pursuit {

Suite suite_from_json(const Json& j, const std::filesystem::path& base) {
  Suite s;
  try {
    s.trials = j.value("trials", s.trials);
    s.time_limit = j.value("time_limit", s.time_limit);
    s.base_seed = j.value("base_seed", s.base_seed);
    for (const Json& sc : j.at("scenarios")) {
      Scenario x;
      x.name = sc.at("name").get<std::string>();
      x.environment = base / sc.at("environment").get<std::string>();
      if (sc.contains("config")) x.config = PlannerConfig::from_json(sc["config"]);
      s.scenarios.push_back(std::move(x));
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bench suite: ") + e.what());
  }
  return s;
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sigma = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

BenchRow tabulate(const std::string& scenario, const std::vector<TrialResult>& trials) {
  BenchRow row;
  row.scenario = scenario;
  row.trials = trials.size();
  std::vector<double> t, r, v, e;
  for (const TrialResult& x : trials) {
    if (!x.success) continue;
    ++row.successes;
    t.push_back(x.seconds);
    r.push_back(static_cast<double>(x.robots));
    v.push_back(static_cast<double>(x.vertices));
    e.push_back(static_cast<double>(x.edges));
  }
  row.time = summarize(t);
  row.robots = summarize(r);
  row.vertices = summarize(v);
  row.edges = summarize(e);
  return row;
}

std::vector<BenchRow> run_suite(
    const Suite& suite,
    const std::function<void(const Scenario&, std::size_t, const TrialResult&)>& progress) {
  std::vector<BenchRow> rows;
  for (const Scenario& sc : suite.scenarios) {
    const Environment env = load_environment(sc.environment);
    std::vector<TrialResult> results;
    for (std::size_t t = 0; t < suite.trials; ++t) {
      PlannerConfig cfg = sc.config;
      cfg.seed = suite.base_seed + t;
      if (suite.time_limit > 0.0) cfg.time_limit = suite.time_limit;
      TrialResult r;
      try {
        const SolveReport rep = solve(env, cfg);
        r.success = true;
        r.seconds = rep.seconds;
        r.robots = rep.solution.num_pursuers;
        r.vertices = rep.vertices;
        r.edges = rep.edges;
      } catch (const Timeout&) {
        r.success = false;
      }
      if (progress) progress(sc, t, r);
      results.push_back(r);
    }
    rows.push_back(tabulate(sc.name, results));
  }
  return rows;
}

namespace {

void stat(std::ostream& out, const BenchRow& row, const Summary& s) {
  if (row.successes == 0) {
    out << ",n/a,n/a";
  } else {
    out << ',' << s.mean << ',' << s.sigma;
  }
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "scenario,success_rate,time_mu,time_sigma,robots_mu,robots_sigma,vertices_mu,"
         "vertices_sigma,edges_mu,edges_sigma\n";
  for (const BenchRow& r : rows) {
    out << r.scenario << ',' << r.success_rate();
    stat(out, r, r.time);
    stat(out, r, r.robots);
    stat(out, r, r.vertices);
    stat(out, r, r.edges);
    out << '\n';
  }
}

void write_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << std::left << std::setw(28) << "scenario" << std::right << std::setw(8) << "success"
      << std::setw(18) << "time (s)" << std::setw(16) << "robots" << std::setw(20) << "vertices"
      << std::setw(20) << "edges" << '\n';
  auto cell = [&](const BenchRow& r, const Summary& s, int w) {
    std::ostringstream c;
    if (r.successes == 0) {
      c << "n/a";
    } else {
      c << std::fixed << std::setprecision(3) << s.mean << " +- " << s.sigma;
    }
    out << std::setw(w) << c.str();
  };
  for (const BenchRow& r : rows) {
    out << std::left << std::setw(28) << r.scenario << std::right << std::setw(7)
        << std::lround(100.0 * r.success_rate()) << '%';
    cell(r, r.time, 18);
    cell(r, r.robots, 16);
    cell(r, r.vertices, 20);
    cell(r, r.edges, 20);
    out << '\n';
  }
}

}  // namespace pursuit
