#pragma once

// Simplices formed by d+1 hyperplanes, exact LP certificates for a common
// interior point, and dual Tverberg partitions (planar construction and
// exhaustive certified search).

#include "dualdepth/geometry.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dualdepth {

/// Facet of a formed simplex: inside means inward * (normal . y - offset) >= 0.
struct Facet {
  std::size_t index = 0;  // hyperplane index in the instance
  Hyperplane plane;
  int inward = 0;  // +1 or -1

  Rational inward_slack(std::span<const Rational> y) const { return inward * evaluate(plane, y); }
};

struct SimplexSpec {
  std::vector<std::size_t> indices;  // ascending
  /// vertices[i] is the common point of every chosen hyperplane except indices[i].
  std::vector<Point> vertices;
  /// facets[i] lies on hyperplane indices[i], oriented toward vertices[i].
  std::vector<Facet> facets;
};

SimplexSpec form_simplex(const Instance& F, std::span<const std::size_t> idx);

struct InteriorPoint {
  Point witness;
  /// Largest eps with inward_slack >= eps on every facet (unnormalized).
  Rational margin;
  bool strict = false;  // margin > 0
};

/// Maximizes eps subject to inward_slack(x) >= eps over all facets, exactly.
/// nullopt (infeasible) when the optimum is negative. Answers are verified by
/// substitution before they are returned.
std::optional<InteriorPoint> common_interior_point(std::span<const SimplexSpec> simplices);

struct PartitionResult {
  std::vector<std::vector<std::size_t>> groups;
  Point witness;
  Rational margin;
  bool strict = false;
};

/// Circular-order construction for 3n lines in the plane: triples
/// (k, k+n, k+2n) of the lines ordered by the direction from the deepest point
/// toward each line. margin is the least inward slack of the witness.
PartitionResult dual_tverberg_plane(const Instance& F);

/// Calls fn(groups) for every unordered partition of [0, size) into groups of
/// group_size, in lexicographic order of sorted groups. fn returns false to stop.
void for_each_partition(std::size_t size, std::size_t group_size,
                        const std::function<bool(const std::vector<std::vector<std::size_t>>&)>& fn);

/// First partition (in enumeration order) into `groups` families of d+1
/// whose simplices share a strict interior point. nullopt = NotFound.
std::optional<PartitionResult> dual_tverberg_search(const Instance& F, std::size_t groups);

/// Number of partitions with a strict common interior point.
std::size_t count_strict_partitions(const Instance& F, std::size_t groups);

struct ColorfulReport {
  std::optional<PartitionResult> result;
  bool preconditions_met = true;
  std::vector<std::string> precondition_notes;
};

/// r disjoint colorful (one hyperplane per color) families with a strict
/// common interior point. Preconditions (equal color classes of size t,
/// t >= 2r - 1, r a prime power) are reported, not enforced.
ColorfulReport colorful_dual_tverberg_search(const Instance& F, std::size_t r);

bool is_prime_power(std::size_t n);

}  // namespace dualdepth
