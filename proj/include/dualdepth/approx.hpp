#pragma once

// Floating-point views used by the search heuristics and the samplers. Nothing
// here is trusted: results are re-certified with the exact predicates.

#include "dualdepth/geometry.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dualdepth {

/// n hyperplanes in R^dim stored coordinate-major (normal[k][i]).
struct ApproxFamily {
  std::size_t dim = 0;
  std::vector<std::vector<double>> normal;
  std::vector<double> offset;

  explicit ApproxFamily(std::size_t d = 0) : dim(d), normal(d) {}
  static ApproxFamily from(const Instance& F);

  std::size_t size() const noexcept { return offset.size(); }
  void push_back(std::span<const double> n, double b);
  std::vector<double> normal_of(std::size_t i) const;
};

/// Points in R^dim stored coordinate-major.
struct PointCloud {
  std::size_t dim = 0;
  std::vector<std::vector<double>> coord;

  explicit PointCloud(std::size_t d = 0) : dim(d), coord(d) {}
  std::size_t size() const noexcept { return coord.empty() ? 0 : coord.front().size(); }
  void push_back(std::span<const double> p);
};

struct TukeyCenter {
  std::vector<double> point;
  /// Depth level k of the returned region (over the probed directions).
  std::size_t level = 0;
  /// Exact point of the level-k region, when certification was requested
  /// and the cloud is small enough for the exact probe set.
  std::optional<Point> certified;
};

/// Deepest point of a point cloud: the largest k for which the polytope
///   { c : u . c <= k-th largest of u . p, for every probed unit u }
/// is nonempty, then the center of that polytope with the largest uniform
/// slack. With few points the probe set is every normal of a hyperplane
/// through d of the points, which makes the region exact; otherwise it is a
/// fixed covering of the sphere.
/// level_hint (optional) starts the level search near a previous answer.
/// With `certify`, small clouds are re-solved in exact arithmetic: the level
/// is lowered until the exact region is nonempty and `certified` holds an
/// exact point of it (so its exact Tukey depth is at least `level`).
TukeyCenter tukey_center(const PointCloud& P, std::size_t level_hint = 0, bool certify = false);

/// Deterministic unit directions covering S^{dim-1}; closed under negation.
std::vector<std::vector<double>> sphere_covering(std::size_t dim, std::size_t approx_count);

}  // namespace dualdepth
