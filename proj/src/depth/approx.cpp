#include "dualdepth/approx.hpp"

#include "dualdepth/combinatorics.hpp"
#include "dualdepth/lp.hpp"
#include "dualdepth/random.hpp"
#include "dualdepth/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace dualdepth {
namespace {

constexpr std::uint64_t kExactProbeLimit = 2000;
constexpr std::uint64_t kCertifyLimit = 500;

std::vector<double> normalized(std::vector<double> v) {
  double n2 = 0;
  for (double x : v) n2 += x * x;
  const double n = std::sqrt(n2);
  for (double& x : v) x /= n;
  return v;
}

// Determinant of a small dense matrix (partial pivoting).
double det(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    if (a[p][c] == 0) return 0;
    if (p != c) std::swap(a[p], a[c]), d = -d;
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

// Generalized cross product of d-1 rows in R^d.
std::vector<double> cross(const std::vector<std::vector<double>>& rows, std::size_t d) {
  std::vector<double> g(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<std::vector<double>> minor;
    for (const auto& r : rows) {
      std::vector<double> m;
      for (std::size_t c = 0; c < d; ++c)
        if (c != k) m.push_back(r[c]);
      minor.push_back(std::move(m));
    }
    g[k] = (k % 2 ? -1.0 : 1.0) * det(std::move(minor));
  }
  return g;
}

// Probe directions through d-subsets of the cloud, plus the coordinate axes.
std::vector<std::vector<double>> spanned_directions(const PointCloud& P) {
  const std::size_t d = P.dim, m = P.size();
  double scale = 1;
  for (const auto& c : P.coord)
    for (double x : c) scale = std::max(scale, std::fabs(x));
  std::vector<std::vector<double>> dirs;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> e(d, 0.0);
    e[k] = 1;
    dirs.push_back(e);
    e[k] = -1;
    dirs.push_back(e);
  }
  for_each_subset(m, d, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 1; j < idx.size(); ++j) {
      std::vector<double> r(d);
      for (std::size_t k = 0; k < d; ++k) r[k] = P.coord[k][idx[j]] - P.coord[k][idx[0]];
      rows.push_back(std::move(r));
    }
    auto g = cross(rows, d);
    double n2 = 0;
    for (double x : g) n2 += x * x;
    if (std::sqrt(n2) <= 1e-12 * std::pow(scale, static_cast<double>(d - 1))) return;
    g = normalized(std::move(g));
    dirs.push_back(g);
    for (double& x : g) x = -x;
    dirs.push_back(std::move(g));
  });
  return dirs;
}

class LevelProbe {
public:
  LevelProbe(const PointCloud& P, std::vector<std::vector<double>> dirs)
      : P_(P), dirs_(std::move(dirs)), proj_(dirs_.size()) {
    std::vector<const double*> coords;
    for (const auto& c : P.coord) coords.push_back(c.data());
    const auto& kern = simd::active_kernels();
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      proj_[j].resize(P.size());
      kern.project(coords.data(), P.size(), P.dim, dirs_[j].data(), proj_[j].data());
    }
    for (const auto& c : P.coord)
      for (double x : c) scale_ = std::max(scale_, std::fabs(x));
  }

  // LP for level k: max t s.t. u.c + t <= (k-th largest of u.p) for every u.
  lp::Solution<double> solve(std::size_t k) {
    const std::size_t d = P_.dim;
    lp::Problem<double> prob;
    prob.vars = d + 1;
    prob.c.assign(d + 1, 0.0);
    prob.c[d] = 1.0;
    std::vector<double> buf;
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      buf = proj_[j];
      std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k - 1), buf.end(),
                       std::greater<>());
      std::vector<double> row(dirs_[j]);
      row.push_back(1.0);
      prob.G.push_back(std::move(row));
      prob.h.push_back(buf[k - 1]);
    }
    return lp::maximize(prob);
  }

  bool feasible(const lp::Solution<double>& s) const {
    return s.status == lp::Status::kOptimal && s.z.back() >= -1e-9 * scale_;
  }

private:
  const PointCloud& P_;
  std::vector<std::vector<double>> dirs_;
  std::vector<std::vector<double>> proj_;
  double scale_ = 1.0;
};

// Exact spanned directions (unnormalized) plus the coordinate axes.
std::vector<RVec> exact_directions(const std::vector<Point>& P, std::size_t d) {
  std::vector<RVec> dirs;
  for (std::size_t k = 0; k < d; ++k) {
    RVec e(d, Rational(0));
    e[k] = 1;
    dirs.push_back(e);
    e[k] = -1;
    dirs.push_back(e);
  }
  if (d == 1) return dirs;
  for_each_subset(P.size(), d, [&](const std::vector<std::size_t>& idx) {
    linalg::Matrix rows;
    for (std::size_t j = 1; j < idx.size(); ++j) {
      RVec r(d);
      for (std::size_t k = 0; k < d; ++k) r[k] = P[idx[j]][k] - P[idx[0]][k];
      rows.push_back(std::move(r));
    }
    auto g = linalg::cross(rows);
    if (std::all_of(g.begin(), g.end(), [](const Rational& x) { return sgn(x) == 0; })) return;
    dirs.push_back(g);
    for (auto& x : g) x = -x;
    dirs.push_back(std::move(g));
  });
  return dirs;
}

// Exact level-k LP: max t s.t. g.c + |g|_1 t <= (k-th largest of g.p).
// Returns a point of the region when the optimum is t >= 0.
std::optional<Point> exact_level_point(const std::vector<Point>& P, const std::vector<RVec>& dirs, std::size_t k) {
  const std::size_t d = P.front().size();
  lp::Problem<Rational> prob;
  prob.vars = d + 1;
  prob.c.assign(d + 1, Rational(0));
  prob.c[d] = 1;
  std::vector<Rational> vals(P.size());
  for (const auto& g : dirs) {
    for (std::size_t i = 0; i < P.size(); ++i) vals[i] = dot(g, P[i]);
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(k - 1), vals.end(), std::greater<>());
    RVec row(g);
    Rational l1 = 0;
    for (const auto& x : g) l1 += abs(x);
    row.push_back(l1);
    prob.G.push_back(std::move(row));
    prob.h.push_back(vals[k - 1]);
  }
  const auto s = lp::maximize(prob);
  if (s.status != lp::Status::kOptimal || sgn(s.z.back()) < 0) return std::nullopt;
  return Point(s.z.begin(), s.z.begin() + static_cast<std::ptrdiff_t>(d));
}

}  // namespace

ApproxFamily ApproxFamily::from(const Instance& F) {
  ApproxFamily out(F.dim);
  for (const auto& h : F.hyperplanes) out.push_back(to_doubles(h.normal), to_double(h.offset));
  return out;
}

void ApproxFamily::push_back(std::span<const double> n, double b) {
  if (n.size() != dim) throw InputError("ApproxFamily: dimension mismatch");
  for (std::size_t k = 0; k < dim; ++k) normal[k].push_back(n[k]);
  offset.push_back(b);
}

std::vector<double> ApproxFamily::normal_of(std::size_t i) const {
  std::vector<double> out(dim);
  for (std::size_t k = 0; k < dim; ++k) out[k] = normal[k][i];
  return out;
}

void PointCloud::push_back(std::span<const double> p) {
  if (p.size() != dim) throw InputError("PointCloud: dimension mismatch");
  for (std::size_t k = 0; k < dim; ++k) coord[k].push_back(p[k]);
}

std::vector<std::vector<double>> sphere_covering(std::size_t dim, std::size_t approx_count) {
  std::vector<std::vector<double>> dirs;
  const std::size_t half = std::max<std::size_t>(approx_count / 2, 1);
  if (dim == 1) return {{1.0}, {-1.0}};
  if (dim == 2) {
    for (std::size_t j = 0; j < 2 * half; ++j) {
      const double a = std::numbers::pi * static_cast<double>(j) / static_cast<double>(half);
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  if (dim == 3) {
    // Fibonacci lattice on the upper hemisphere, then mirrored.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t j = 0; j < half; ++j) {
      const double z = (static_cast<double>(j) + 0.5) / static_cast<double>(half);
      const double r = std::sqrt(1.0 - z * z);
      const double a = golden * static_cast<double>(j);
      dirs.push_back({r * std::cos(a), r * std::sin(a), z});
    }
  } else {
    Rng rng(0x5eed5eedULL, dim);
    for (std::size_t j = 0; j < half; ++j) {
      std::vector<double> v(dim);
      for (double& x : v) x = rng.normal();
      dirs.push_back(normalized(std::move(v)));
    }
  }
  const std::size_t n = dirs.size();
  for (std::size_t j = 0; j < n; ++j) {
    auto v = dirs[j];
    for (double& x : v) x = -x;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

TukeyCenter tukey_center(const PointCloud& P, std::size_t level_hint, bool certify) {
  const std::size_t m = P.size(), d = P.dim;
  TukeyCenter out;
  out.point.assign(d, 0.0);
  if (m == 0) return out;

  std::vector<std::vector<double>> dirs;
  if (d == 1)
    dirs = {{1.0}, {-1.0}};
  else if (binomial(m, d) <= kExactProbeLimit)
    dirs = spanned_directions(P);
  else
    dirs = sphere_covering(d, d == 2 ? 360 : (d == 3 ? 720 : 1000));

  LevelProbe probe(P, std::move(dirs));
  // Level 1 (the hull) is always feasible. Bracket the deepest level, galloping
  // out from the hint when there is one, then bisect.
  std::size_t lo = 1, hi = m;
  std::optional<lp::Solution<double>> best;
  if (level_hint > 1 && level_hint <= m) {
    std::size_t step = 1;
    auto s = probe.solve(level_hint);
    if (probe.feasible(s)) {
      lo = level_hint;
      best = std::move(s);
      while (lo < hi) {
        const std::size_t next = std::min(hi, lo + step);
        auto t = probe.solve(next);
        if (!probe.feasible(t)) {
          hi = next - 1;
          break;
        }
        lo = next;
        best = std::move(t);
        step *= 2;
      }
    } else {
      hi = level_hint - 1;
      while (hi > lo) {
        const std::size_t next = hi > lo + step ? hi - step : lo;
        if (next == lo) break;
        auto t = probe.solve(next);
        if (probe.feasible(t)) {
          lo = next;
          best = std::move(t);
          break;
        }
        hi = next - 1;
        step *= 2;
      }
    }
  }
  if (!best) best = probe.solve(lo);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    auto s = probe.solve(mid);
    if (probe.feasible(s)) {
      lo = mid;
      best = std::move(s);
    } else {
      hi = mid - 1;
    }
  }
  out.level = lo;
  if (best->status == lp::Status::kOptimal)
    out.point.assign(best->z.begin(), best->z.begin() + static_cast<std::ptrdiff_t>(d));

  if (certify && binomial(m, d) <= kCertifyLimit) {
    std::vector<Point> exact;
    for (std::size_t i = 0; i < m; ++i) {
      Point p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = from_double(P.coord[k][i]);
      exact.push_back(std::move(p));
    }
    // Tukey depth is affine invariant: work in exact coordinates of the
    // affine hull, where the spanned directions describe the region.
    linalg::Matrix diffs;
    for (const auto& p : exact) {
      RVec v(d);
      for (std::size_t k = 0; k < d; ++k) v[k] = p[k] - exact.front()[k];
      diffs.push_back(std::move(v));
    }
    const auto B = linalg::row_basis(diffs);
    const std::size_t r = B.size();
    std::optional<Point> local;
    std::size_t level = m;
    if (r == 0) {
      local = Point{};
    } else {
      linalg::Matrix gram(r, RVec(r));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) gram[i][j] = dot(B[i], B[j]);
      std::vector<Point> coords;
      for (const auto& v : diffs) {
        RVec rhs(r);
        for (std::size_t i = 0; i < r; ++i) rhs[i] = dot(B[i], v);
        coords.push_back(*linalg::solve(gram, rhs));
      }
      const auto dirs = exact_directions(coords, r);
      // Level 1 (the hull) is never empty, so this ends with a point.
      for (level = std::min(out.level, m); level >= 1; --level)
        if ((local = exact_level_point(coords, dirs, level))) break;
    }
    Point c = exact.front();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < d; ++k) c[k] += (*local)[i] * B[i][k];
    out.level = level;
    out.point = to_doubles(c);
    out.certified = std::move(c);
  }
  return out;
}

}  // namespace dualdepth
