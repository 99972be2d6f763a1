#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "pursuit/io.hpp"
#include "pursuit/shadows.hpp"

namespace pursuit {

/// Initial points P whose visibility polygons cover E, plus one intersection
/// point per pair of initial points whose visibility polygons overlap.
struct Web {
  std::vector<Point> initial;
  std::vector<Point> intersection;
  /// Indices into `initial` that generated each intersection point.
  std::vector<std::array<std::size_t, 2>> pairs;
  /// Area of E left uncovered by the initial points.
  double residual = 0.0;

  std::size_t size() const { return initial.size() + intersection.size(); }
  /// P followed by Q.
  std::vector<Point> points() const;
};

/// Draws initial points uniformly from the still-uncovered part of E until the
/// residual is at most 1e-4 area(E), then one intersection point per
/// overlapping pair (i < j). Throws CoverageStall past the safety cap.
Web build_web(const Environment& env, Rng& rng);

/// Whether the mutual-visibility graph over P and Q is connected.
bool web_connected(const Environment& env, const Web& web);

Json web_to_json(const Web& web);

class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual JointConfig next_sample(std::size_t n) = 0;
};

/// One web per pursuer, drawn from without replacement; when any web runs out
/// all of them are rebuilt.
class WebSampler : public Sampler {
 public:
  WebSampler(const Environment& env, Rng& rng) : env_(&env), rng_(&rng) {}

  /// A larger n than before builds webs for the new pursuers only.
  JointConfig next_sample(std::size_t n) override;

  /// Number of web sets built so far (the first build counts).
  std::size_t generations() const { return generations_; }
  /// Webs of the current generation, one per pursuer.
  const std::vector<Web>& webs() const { return webs_; }
  /// Points of each web handed out in the current generation, in order.
  const std::vector<std::vector<Point>>& drawn() const { return drawn_; }

 private:
  void add_web();
  void rebuild(std::size_t n);

  const Environment* env_;
  Rng* rng_;
  std::vector<Web> webs_;
  std::vector<std::vector<Point>> order_;
  std::vector<std::vector<Point>> drawn_;
  std::size_t generations_ = 0;
};

/// Independent uniform points of E per pursuer.
class UniformSampler : public Sampler {
 public:
  UniformSampler(const Environment& env, Rng& rng) : env_(&env), rng_(&rng), region_(env.region()) {}
  JointConfig next_sample(std::size_t n) override;

 private:
  const Environment* env_;
  Rng* rng_;
  RegionSampler region_;
};

}  // namespace pursuit
