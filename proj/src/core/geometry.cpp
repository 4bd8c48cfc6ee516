#include "dualdepth/geometry.hpp"

#include "dualdepth/combinatorics.hpp"

#include <algorithm>
#include <sstream>

namespace dualdepth {
namespace {

std::string describe_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  os << "degenerate subfamily {";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << "}";
  return os.str();
}

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(expected) +
                     " vs " + std::to_string(got) + ")");
}

bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace

DegenerateSubfamily::DegenerateSubfamily(std::vector<std::size_t> indices)
    : std::runtime_error(describe_indices(indices)), indices_(std::move(indices)) {}

void Instance::validate() const {
  if (dim == 0) throw InputError("instance dimension must be positive");
  for (std::size_t i = 0; i < hyperplanes.size(); ++i) {
    const auto& h = hyperplanes[i];
    if (h.dim() != dim)
      throw InputError("hyperplane " + std::to_string(i) + " has dimension " +
                       std::to_string(h.dim()) + ", expected " + std::to_string(dim));
    if (is_zero(h.normal)) throw InputError("hyperplane " + std::to_string(i) + " has a zero normal");
  }
  if (colors) {
    if (colors->size() != hyperplanes.size())
      throw InputError("colors: expected " + std::to_string(hyperplanes.size()) + " entries, got " +
                       std::to_string(colors->size()));
    for (int c : *colors)
      if (c < 0 || static_cast<std::size_t>(c) > dim)
        throw InputError("color " + std::to_string(c) + " outside [0, " + std::to_string(dim) + "]");
  }
}

std::vector<std::size_t> Instance::color_class_sizes() const {
  if (!colors) return {};
  std::vector<std::size_t> sizes(dim + 1, 0);
  for (int c : *colors) ++sizes.at(static_cast<std::size_t>(c));
  return sizes;
}

Rational evaluate(const Hyperplane& h, std::span<const Rational> x) {
  require_dim(h.dim(), x.size(), "side_of");
  Rational s = -h.offset;
  for (std::size_t i = 0; i < x.size(); ++i) s += h.normal[i] * x[i];
  return s;
}

int side_of(const Hyperplane& h, std::span<const Rational> x) { return sgn(evaluate(h, x)); }

Point project_onto(const Hyperplane& h, std::span<const Rational> x) {
  const Rational slack = evaluate(h, x);
  const Rational norm2 = dot(h.normal, h.normal);
  if (sgn(norm2) == 0) throw InputError("project_onto: zero normal");
  const Rational t = slack / norm2;
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= t * h.normal[i];
  return out;
}

Point intersect_subfamily(std::span<const Hyperplane> hs, std::span<const std::size_t> labels) {
  if (hs.empty()) throw InputError("intersect_subfamily: empty subfamily");
  const std::size_t d = hs.front().dim();
  if (hs.size() != d)
    throw InputError("intersect_subfamily: need exactly " + std::to_string(d) + " hyperplanes, got " +
                     std::to_string(hs.size()));
  linalg::Matrix A;
  RVec b;
  for (const auto& h : hs) {
    require_dim(d, h.dim(), "intersect_subfamily");
    A.push_back(h.normal);
    b.push_back(h.offset);
  }
  auto x = linalg::solve(std::move(A), std::move(b));
  if (!x) {
    std::vector<std::size_t> idx(labels.begin(), labels.end());
    if (idx.empty())
      for (std::size_t i = 0; i < hs.size(); ++i) idx.push_back(i);
    throw DegenerateSubfamily(std::move(idx));
  }
  return *x;
}

Point intersect_subfamily(const Instance& F, std::span<const std::size_t> idx) {
  std::vector<Hyperplane> hs;
  hs.reserve(idx.size());
  for (std::size_t i : idx) hs.push_back(F.hyperplanes.at(i));
  return intersect_subfamily(hs, idx);
}

GeneralPosition check_general_position(const Instance& F) {
  GeneralPosition result;
  const std::size_t n = F.size(), d = F.dim;
  const std::size_t k = std::min(n, d);

  for_each_subset(n, k, [&](const std::vector<std::size_t>& idx) {
    linalg::Matrix A;
    for (std::size_t i : idx) A.push_back(F.hyperplanes[i].normal);
    if (linalg::rank(std::move(A)) < k) {
      result.kind = GeneralPosition::Kind::kDependentNormals;
      result.violation = idx;
      return false;
    }
    return true;
  });
  if (!result.ok() || n <= d) return result;

  // With every d-subset regular, d+1 hyperplanes share a point exactly when
  // the augmented (d+1) x (d+1) matrix [normal | -offset] is singular.
  for_each_subset(n, d + 1, [&](const std::vector<std::size_t>& idx) {
    linalg::Matrix A;
    for (std::size_t i : idx) {
      RVec row = F.hyperplanes[i].normal;
      row.push_back(-F.hyperplanes[i].offset);
      A.push_back(std::move(row));
    }
    if (sgn(linalg::determinant(std::move(A))) == 0) {
      result.kind = GeneralPosition::Kind::kCommonPoint;
      result.violation = idx;
      return false;
    }
    return true;
  });
  return result;
}

Instance canonicalize(const Instance& F) {
  Instance out = F;
  for (auto& h : out.hyperplanes) {
    auto lead = std::find_if(h.normal.begin(), h.normal.end(),
                             [](const Rational& q) { return sgn(q) != 0; });
    if (lead == h.normal.end()) throw InputError("canonicalize: zero normal");
    const Rational scale = 1 / *lead;
    for (auto& c : h.normal) c *= scale;
    h.offset *= scale;
  }
  out.metadata["canonicalization"] = "leading-one";
  return out;
}

bool same_hyperplane(const Hyperplane& a, const Hyperplane& b) {
  if (a.dim() != b.dim()) return false;
  // Proportional (normal, offset) with a common nonzero factor.
  std::size_t lead = 0;
  while (lead < a.dim() && sgn(a.normal[lead]) == 0) ++lead;
  if (lead == a.dim() || sgn(b.normal[lead]) == 0) return false;
  const Rational t = b.normal[lead] / a.normal[lead];
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.normal[i] * t != b.normal[i]) return false;
  return a.offset * t == b.offset;
}

namespace linalg {
namespace {

// In-place row echelon form; returns pivot columns. sign_flips counts swaps.
std::vector<std::size_t> eliminate(Matrix& A, std::size_t cols, int* sign_flips = nullptr) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < A.size(); ++col) {
    std::size_t p = row;
    while (p < A.size() && sgn(A[p][col]) == 0) ++p;
    if (p == A.size()) continue;
    if (p != row) {
      std::swap(A[p], A[row]);
      if (sign_flips) ++*sign_flips;
    }
    for (std::size_t r = row + 1; r < A.size(); ++r) {
      if (sgn(A[r][col]) == 0) continue;
      const Rational f = A[r][col] / A[row][col];
      for (std::size_t c = col; c < A[r].size(); ++c) A[r][c] -= f * A[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::optional<RVec> solve(Matrix A, RVec b) {
  const std::size_t n = A.size();
  for (std::size_t i = 0; i < n; ++i) A[i].push_back(b[i]);
  auto piv = eliminate(A, n);
  if (piv.size() < n) return std::nullopt;
  RVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = A[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

Rational determinant(Matrix A) {
  const std::size_t n = A.size();
  int flips = 0;
  auto piv = eliminate(A, n, &flips);
  if (piv.size() < n) return 0;
  Rational det = (flips % 2) ? -1 : 1;
  for (std::size_t i = 0; i < n; ++i) det *= A[i][i];
  return det;
}

std::size_t rank(Matrix A) {
  if (A.empty()) return 0;
  const std::size_t cols = A.front().size();
  return eliminate(A, cols).size();
}

std::optional<RVec> null_vector(Matrix A) {
  const std::size_t d = A.empty() ? 0 : A.front().size();
  if (A.empty()) return std::nullopt;
  auto piv = eliminate(A, d);
  if (piv.size() == d) return std::nullopt;
  std::vector<bool> is_pivot(d, false);
  for (auto c : piv) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  RVec x(d, Rational(0));
  x[free_col] = 1;
  for (std::size_t r = piv.size(); r-- > 0;) {
    const std::size_t c = piv[r];
    Rational s = 0;
    for (std::size_t j = c + 1; j < d; ++j) s -= A[r][j] * x[j];
    x[c] = s / A[r][c];
  }
  return x;
}

RVec cross(const Matrix& rows) {
  const std::size_t d = rows.size() + 1;
  RVec g(d);
  if (d == 1) {
    g[0] = 1;
    return g;
  }
  if (d == 2) {
    g[0] = rows[0][1];
    g[1] = -rows[0][0];
    return g;
  }
  if (d == 3) {
    const auto &a = rows[0], &b = rows[1];
    g[0] = a[1] * b[2] - a[2] * b[1];
    g[1] = a[2] * b[0] - a[0] * b[2];
    g[2] = a[0] * b[1] - a[1] * b[0];
    return g;
  }
  for (std::size_t k = 0; k < d; ++k) {
    Matrix minor;
    minor.reserve(d - 1);
    for (const auto& r : rows) {
      RVec m;
      m.reserve(d - 1);
      for (std::size_t c = 0; c < d; ++c)
        if (c != k) m.push_back(r[c]);
      minor.push_back(std::move(m));
    }
    g[k] = determinant(std::move(minor));
    if (k % 2) g[k] = -g[k];
  }
  return g;
}

Matrix row_basis(Matrix A) {
  if (A.empty()) return {};
  const std::size_t cols = A.front().size();
  auto piv = eliminate(A, cols);
  A.resize(piv.size());
  return A;
}

}  // namespace linalg
}  // namespace dualdepth
