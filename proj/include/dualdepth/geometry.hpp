#pragma once

// Exact hyperplane primitives: side tests, projections, d x d solves and the
// brute-force general-position predicate.

#include "dualdepth/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualdepth {

using Point = RVec;
using Direction = RVec;

/// Bad caller input: dimension mismatch, zero direction, malformed sizes.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A subfamily that should meet in one point does not (singular system).
class DegenerateSubfamily : public std::runtime_error {
public:
  explicit DegenerateSubfamily(std::vector<std::size_t> indices);
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
  std::vector<std::size_t> indices_;
};

/// {y : normal . y = offset}. Scalars are stored exactly as given.
struct Hyperplane {
  RVec normal;
  Rational offset;

  std::size_t dim() const noexcept { return normal.size(); }
  bool operator==(const Hyperplane&) const = default;
};

struct Instance {
  std::size_t dim = 0;
  std::vector<Hyperplane> hyperplanes;
  /// One color in [0, dim] per hyperplane, when present.
  std::optional<std::vector<int>> colors;
  std::map<std::string, std::string> metadata;

  std::size_t size() const noexcept { return hyperplanes.size(); }
  bool operator==(const Instance&) const = default;

  /// Throws InputError on dimension mismatch, zero normal, bad colors.
  void validate() const;
  /// Number of hyperplanes per color, index = color. Empty without colors.
  std::vector<std::size_t> color_class_sizes() const;
};

/// Sign of normal . x - offset.
int side_of(const Hyperplane& h, std::span<const Rational> x);

/// Signed slack normal . x - offset.
Rational evaluate(const Hyperplane& h, std::span<const Rational> x);

/// Orthogonal projection of x onto h; lies on h exactly.
Point project_onto(const Hyperplane& h, std::span<const Rational> x);

/// Unique common point of exactly d hyperplanes in R^d. The indices are
/// only used to label a DegenerateSubfamily error.
Point intersect_subfamily(std::span<const Hyperplane> hs,
                          std::span<const std::size_t> labels = {});

/// Convenience overload selecting hyperplanes of an instance by index.
Point intersect_subfamily(const Instance& F, std::span<const std::size_t> idx);

struct GeneralPosition {
  enum class Kind { kOk, kDependentNormals, kCommonPoint };
  Kind kind = Kind::kOk;
  /// Offending index set (0-based, ascending). Empty when ok.
  std::vector<std::size_t> violation;

  bool ok() const noexcept { return kind == Kind::kOk; }
};

/// Exhaustive check: every min(n, d)-subset has independent normals and no
/// (d+1)-subset shares a point. The first violation in lexicographic subset
/// order is reported.
GeneralPosition check_general_position(const Instance& F);

/// Rescales every hyperplane so its first nonzero normal coordinate is 1 and
/// records the policy in metadata["canonicalization"].
Instance canonicalize(const Instance& F);

/// True when the two hyperplanes describe the same point set.
bool same_hyperplane(const Hyperplane& a, const Hyperplane& b);

namespace linalg {

using Matrix = std::vector<RVec>;  // row-major

/// Solves A x = b for square A. nullopt when singular.
std::optional<RVec> solve(Matrix A, RVec b);

Rational determinant(Matrix A);

std::size_t rank(Matrix A);

/// For a k x d matrix, a nonzero vector orthogonal to every row, or nullopt
/// when the rows already span R^d. Deterministic: free variables are set to
/// (1 for the first free column, 0 for the rest).
std::optional<RVec> null_vector(Matrix A);

/// For (d-1) x d rows, the generalized cross product (cofactor expansion).
/// Zero exactly when the rows are dependent.
RVec cross(const Matrix& rows);

/// A basis (rows) of the row space of A, in pivot order.
Matrix row_basis(Matrix A);

}  // namespace linalg

}  // namespace dualdepth
