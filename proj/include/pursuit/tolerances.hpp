#pragma once

namespace pursuit {

/// Geometric tolerances shared by every module.
struct Tolerances {
  /// Incidence tolerance for point/segment predicates (meters).
  static constexpr double geom = 1e-9;
  /// Area tolerance (square meters); components at or below it are slivers.
  static constexpr double area = 1e-6;
  /// Relative residual area at which a web's initial points count as covering.
  static constexpr double cover_fraction = 1e-4;
};

}  // namespace pursuit
