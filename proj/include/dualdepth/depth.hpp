#pragma once

// Ray-crossing depth of a point with respect to a family of hyperplanes.
//
// A ray from x in direction u meets h = {n . y = b} when x lies on h, or when
// (b - n . x)(n . u) > 0; a ray parallel to a hyperplane that does not contain
// x never meets it. The dual depth of x is the minimum count over all rays.

#include "dualdepth/approx.hpp"
#include "dualdepth/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dualdepth {

/// max_depth_point and friends require general position.
class DegenerateInstance : public std::runtime_error {
public:
  explicit DegenerateInstance(GeneralPosition why);
  const GeneralPosition& why() const noexcept { return why_; }

private:
  GeneralPosition why_;
};

/// floor((n + d) / (d + 1)).
inline std::size_t depth_bound(std::size_t n, std::size_t d) { return (n + d) / (d + 1); }

/// Side of x for every hyperplane, in {-1, 0, +1}.
using CellSignature = std::vector<std::int8_t>;

CellSignature cell_signature(const Instance& F, std::span<const Rational> x);

std::size_t ray_crossings(const Instance& F, std::span<const Rational> x,
                          std::span<const Rational> u);

struct HemisphereResult {
  std::size_t count = 0;
  Direction witness;
};

/// min over u != 0 of #{i : w_i . u > 0}, with a direction attaining it.
/// An empty W gives count 0 and the first unit vector of R^dim.
HemisphereResult hemisphere_depth(const std::vector<RVec>& W, std::size_t dim = 0);

struct DepthResult {
  std::size_t depth = 0;
  Direction witness;
  std::size_t contained = 0;  // hyperplanes through x
};

DepthResult dual_depth(const Instance& F, std::span<const Rational> x);

struct DepthCertificate {
  Point point;
  std::size_t depth = 0;
  Direction witness_direction;
  std::size_t bound = 0;
  bool meets_bound = false;
};

/// Exact global maximizer of dual_depth. Ties go to the lexicographically
/// smallest candidate point.
DepthCertificate max_depth_point(const Instance& F);

/// Candidate ray directions for a fixed set of (unsigned) vectors.
///
/// The count #{i : s_i v_i . u > 0} is minimized on a one-dimensional face of
/// the central arrangement {v_i . u = 0}, so it is enough to try +/- the null
/// direction of every rank-(d-1) subset. When the vectors do not span R^d a
/// single direction orthogonal to all of them gives count 0. One table serves
/// every sign pattern, which lets max_depth_point score all arrangement
/// vertices against a shared precomputation.
class HemisphereTable {
public:
  HemisphereTable(std::size_t dim, const std::vector<RVec>& vectors);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return n_; }
  const std::vector<RVec>& directions() const noexcept { return dirs_; }

  /// signs[i] in {-1, 0, +1} multiplies vector i; 0 drops it.
  HemisphereResult query(std::span<const std::int8_t> signs) const;

private:
  std::size_t dim_, n_, stride_;
  std::vector<RVec> dirs_;
  std::vector<std::int8_t> table_;  // dirs_.size() x stride_, sign(v_i . dir)
};

struct FixedPointResult {
  std::vector<double> point;
  std::size_t iterations = 0;
  bool converged = false;
};

struct FixedPointOptions {
  std::size_t max_iters = 100;
  double step_tol = 1e-9;
};

/// Heuristic: x <- a Tukey center of the projections of x onto every
/// hyperplane, clamped to twice the bounding box of the arrangement vertices.
/// No convergence guarantee; certify the result with dual_depth.
FixedPointResult center_fixed_point(const Instance& F, std::span<const double> x0,
                                    const FixedPointOptions& opts = {});

/// Same iteration on a floating family; box = {lo, hi} clamps the iterates.
FixedPointResult center_fixed_point(const ApproxFamily& F, std::span<const double> x0,
                                    const FixedPointOptions& opts,
                                    std::optional<std::pair<std::vector<double>, std::vector<double>>> box);

/// Minimum number of points of P in a closed halfspace with x on its
/// boundary. Exact.
std::size_t tukey_depth(const std::vector<Point>& P, std::span<const Rational> x);

/// max over u of #{v : v . u > 0}; the open-halfspace maximum used by
/// tukey_depth. Exact, recursive over faces of the central arrangement.
std::size_t max_open_halfspace(std::vector<RVec> vectors);

}  // namespace dualdepth
