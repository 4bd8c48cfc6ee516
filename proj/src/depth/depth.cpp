#include "dualdepth/depth.hpp"

#include "dualdepth/combinatorics.hpp"
#include "dualdepth/simd/kernels.hpp"

#include <algorithm>
#include <sstream>

namespace dualdepth {
namespace {

std::string describe(const GeneralPosition& gp) {
  std::ostringstream os;
  os << "instance is not in general position: ";
  os << (gp.kind == GeneralPosition::Kind::kCommonPoint ? "common point of {" : "dependent normals {");
  for (std::size_t i = 0; i < gp.violation.size(); ++i) os << (i ? "," : "") << gp.violation[i];
  os << "}";
  return os.str();
}

void require_point(const Instance& F, std::span<const Rational> x, const char* what) {
  if (x.size() != F.dim)
    throw InputError(std::string(what) + ": point has dimension " + std::to_string(x.size()) +
                     ", instance has " + std::to_string(F.dim));
}

std::vector<RVec> normals_of(const Instance& F) {
  std::vector<RVec> out;
  out.reserve(F.size());
  for (const auto& h : F.hyperplanes) out.push_back(h.normal);
  return out;
}

// sign(offset_i - normal_i . x): the side the ray has to head toward.
std::vector<std::int8_t> approach_signs(const Instance& F, std::span<const Rational> x,
                                        std::size_t* contained) {
  std::vector<std::int8_t> s(F.size());
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    s[i] = static_cast<std::int8_t>(-side_of(F.hyperplanes[i], x));
    zeros += s[i] == 0;
  }
  if (contained) *contained = zeros;
  return s;
}

RVec unit_vector(std::size_t dim) {
  RVec e(std::max<std::size_t>(dim, 1), Rational(0));
  e[0] = 1;
  return e;
}

// Least-norm point of the intersection of n < d independent hyperplanes.
Point least_norm_point(const Instance& F) {
  const std::size_t n = F.size(), d = F.dim;
  if (n == 0) return Point(d, Rational(0));
  linalg::Matrix gram(n, RVec(n));
  RVec b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = F.hyperplanes[i].offset;
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(F.hyperplanes[i].normal, F.hyperplanes[j].normal);
  }
  auto y = linalg::solve(std::move(gram), std::move(b));
  if (!y) throw DegenerateInstance(GeneralPosition{GeneralPosition::Kind::kDependentNormals, {}});
  Point x(d, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) x[k] += (*y)[i] * F.hyperplanes[i].normal[k];
  return x;
}

}  // namespace

DegenerateInstance::DegenerateInstance(GeneralPosition why)
    : std::runtime_error(describe(why)), why_(std::move(why)) {}

CellSignature cell_signature(const Instance& F, std::span<const Rational> x) {
  require_point(F, x, "cell_signature");
  CellSignature s(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) s[i] = static_cast<std::int8_t>(side_of(F.hyperplanes[i], x));
  return s;
}

std::size_t ray_crossings(const Instance& F, std::span<const Rational> x, std::span<const Rational> u) {
  require_point(F, x, "ray_crossings");
  require_point(F, u, "ray_crossings");
  if (std::all_of(u.begin(), u.end(), [](const Rational& q) { return sgn(q) == 0; }))
    throw InputError("ray_crossings: zero direction");
  std::size_t count = 0;
  for (const auto& h : F.hyperplanes) {
    const Rational slack = h.offset - dot(h.normal, x);
    if (sgn(slack) == 0 || sgn(slack) * sgn(dot(h.normal, u)) > 0) ++count;
  }
  return count;
}

HemisphereTable::HemisphereTable(std::size_t dim, const std::vector<RVec>& vectors)
    : dim_(dim), n_(vectors.size()), stride_(simd::padded_width(std::max<std::size_t>(vectors.size(), 1))) {
  if (dim_ == 0) throw InputError("HemisphereTable: dimension must be positive");
  for (const auto& v : vectors) {
    if (v.size() != dim_) throw InputError("HemisphereTable: vector dimension mismatch");
    if (std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; }))
      throw InputError("HemisphereTable: zero vector");
  }

  if (vectors.empty()) {
    dirs_.push_back(unit_vector(dim_));
  } else if (linalg::rank(vectors) < dim_) {
    dirs_.push_back(*linalg::null_vector(vectors));
  } else {
    for_each_subset(n_, dim_ - 1, [&](const std::vector<std::size_t>& idx) {
      linalg::Matrix rows;
      rows.reserve(idx.size());
      for (std::size_t i : idx) rows.push_back(vectors[i]);
      RVec g = linalg::cross(rows);
      if (std::any_of(g.begin(), g.end(), [](const Rational& q) { return sgn(q) != 0; }))
        dirs_.push_back(std::move(g));
    });
  }

  table_.assign(dirs_.size() * stride_, 0);
  for (std::size_t r = 0; r < dirs_.size(); ++r)
    for (std::size_t i = 0; i < n_; ++i)
      table_[r * stride_ + i] = static_cast<std::int8_t>(sgn(dot(vectors[i], dirs_[r])));
}

HemisphereResult HemisphereTable::query(std::span<const std::int8_t> signs) const {
  if (signs.size() != n_) throw InputError("HemisphereTable::query: sign vector size mismatch");
  std::vector<std::int8_t> s(stride_, 0);
  std::copy(signs.begin(), signs.end(), s.begin());
  const std::size_t rows = dirs_.size();
  std::vector<std::int32_t> pos(rows), neg(rows);
  simd::active_kernels().sign_product_counts(table_.data(), rows, stride_, s.data(), pos.data(), neg.data());

  std::size_t best_row = 0;
  bool best_negated = false;
  std::int32_t best = pos[0];
  for (std::size_t r = 0; r < rows; ++r) {
    if (pos[r] < best) best = pos[r], best_row = r, best_negated = false;
    if (neg[r] < best) best = neg[r], best_row = r, best_negated = true;
  }
  HemisphereResult out;
  out.count = static_cast<std::size_t>(best);
  out.witness = dirs_[best_row];
  if (best_negated)
    for (auto& q : out.witness) q = -q;
  return out;
}

HemisphereResult hemisphere_depth(const std::vector<RVec>& W, std::size_t dim) {
  if (W.empty()) return {0, unit_vector(dim)};
  HemisphereTable table(W.front().size(), W);
  return table.query(std::vector<std::int8_t>(W.size(), 1));
}

DepthResult dual_depth(const Instance& F, std::span<const Rational> x) {
  require_point(F, x, "dual_depth");
  DepthResult out;
  auto s = approach_signs(F, x, &out.contained);
  HemisphereTable table(F.dim, normals_of(F));
  auto h = table.query(s);
  out.depth = out.contained + h.count;
  out.witness = std::move(h.witness);
  return out;
}

DepthCertificate max_depth_point(const Instance& F) {
  F.validate();
  if (auto gp = check_general_position(F); !gp.ok()) throw DegenerateInstance(std::move(gp));
  const std::size_t n = F.size(), d = F.dim;

  // Dual depth cannot drop when x moves from a face onto a vertex of its
  // closure: containment only grows and every other side is unchanged. Under
  // general position every face closure holds a vertex, so the vertices
  // (d-subset intersections) contain a global maximizer.
  std::vector<Point> candidates;
  if (n >= d) {
    candidates.reserve(binomial(n, d));
    for_each_subset(n, d, [&](const std::vector<std::size_t>& idx) {
      candidates.push_back(intersect_subfamily(F, idx));
    });
  } else {
    candidates.push_back(least_norm_point(F));
  }

  HemisphereTable table(d, normals_of(F));
  DepthCertificate best;
  bool have = false;
  for (auto& x : candidates) {
    std::size_t contained = 0;
    auto s = approach_signs(F, x, &contained);
    auto h = table.query(s);
    const std::size_t depth = contained + h.count;
    if (!have || depth > best.depth || (depth == best.depth && lex_less(x, best.point))) {
      best.point = std::move(x);
      best.depth = depth;
      best.witness_direction = std::move(h.witness);
      have = true;
    }
  }
  best.bound = depth_bound(n, d);
  best.meets_bound = best.depth >= best.bound;
  return best;
}

std::size_t max_open_halfspace(std::vector<RVec> vectors) {
  std::erase_if(vectors, [](const RVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
  });
  if (vectors.empty()) return 0;
  const std::size_t m = vectors.front().size();
  if (m == 1) {
    std::size_t pos = 0;
    for (const auto& v : vectors) pos += sgn(v[0]) > 0;
    return std::max(pos, vectors.size() - pos);
  }

  auto basis = linalg::row_basis(vectors);
  if (basis.size() < m) {
    // Only the component of u inside span(V) matters: rewrite every v in the
    // coordinates (v . b_j) of a spanning basis and recurse one level down.
    std::vector<RVec> reduced;
    reduced.reserve(vectors.size());
    for (const auto& v : vectors) {
      RVec r(basis.size());
      for (std::size_t j = 0; j < basis.size(); ++j) r[j] = dot(v, basis[j]);
      reduced.push_back(std::move(r));
    }
    return max_open_halfspace(std::move(reduced));
  }

  // Full rank: every open cell has a ray g of the arrangement in its closure.
  // Near g the count is #{v . g > 0} plus the best open count of the vectors
  // orthogonal to g, realized by an infinitesimal tilt.
  std::size_t best = 0;
  for_each_subset(vectors.size(), m - 1, [&](const std::vector<std::size_t>& idx) {
    linalg::Matrix rows;
    for (std::size_t i : idx) rows.push_back(vectors[i]);
    RVec g = linalg::cross(rows);
    if (std::all_of(g.begin(), g.end(), [](const Rational& q) { return sgn(q) == 0; })) return;
    std::size_t pos = 0, neg = 0;
    std::vector<RVec> zero_set;
    for (const auto& v : vectors) {
      const int s = sgn(dot(v, g));
      pos += s > 0;
      neg += s < 0;
      if (s == 0) zero_set.push_back(v);
    }
    const std::size_t tilt = max_open_halfspace(zero_set);
    best = std::max(best, std::max(pos, neg) + tilt);
  });
  return best;
}

std::size_t tukey_depth(const std::vector<Point>& P, std::span<const Rational> x) {
  if (P.empty()) return 0;
  std::size_t at_x = 0;
  std::vector<RVec> rel;
  for (const auto& p : P) {
    if (p.size() != x.size()) throw InputError("tukey_depth: dimension mismatch");
    RVec v(p.size());
    bool zero = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
      v[k] = p[k] - x[k];
      zero = zero && sgn(v[k]) == 0;
    }
    if (zero)
      ++at_x;
    else
      rel.push_back(std::move(v));
  }
  // Closed count through x = total - (points strictly on the other side).
  const std::size_t n = rel.size();
  return at_x + n - max_open_halfspace(std::move(rel));
}

}  // namespace dualdepth
