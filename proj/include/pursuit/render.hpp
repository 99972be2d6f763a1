#pragma once

#include <optional>
#include <string>

#include "pursuit/io.hpp"
#include "pursuit/sampling.hpp"
#include "pursuit/solution.hpp"

namespace pursuit {

struct RenderInput {
  std::optional<Solution> solution;
  std::optional<Web> web;
  /// A graph dump as written by Sgpeg::to_json.
  std::optional<Json> graph;
  /// Width of the drawing in pixels.
  double width = 800.0;
};

/// SVG of the environment with whatever is present in `in`. Pursuer paths get
/// one colour each, a filled circle at the start and a hollow one at the end;
/// web initial points are red, intersection points blue, and green lines join
/// each intersection point to its two initial points.
std::string render_svg(const Environment& env, const RenderInput& in);

Web web_from_json(const Json& j);

}  // namespace pursuit
