#include "dualdepth/combinatorics.hpp"
#include "dualdepth/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dualdepth {
namespace {

// Vertices used for the clamp box. Large families use the leading
// hyperplanes only, keeping the enumeration bounded.
constexpr std::uint64_t kBoxVertexLimit = 50000;

using Box = std::pair<std::vector<double>, std::vector<double>>;

std::optional<Box> vertex_box(const Instance& F) {
  const std::size_t d = F.dim;
  std::size_t m = F.size();
  while (m > d && binomial(m, d) > kBoxVertexLimit) --m;
  if (m < d) return std::nullopt;
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  bool any = false;
  for_each_subset(m, d, [&](const std::vector<std::size_t>& idx) {
    try {
      auto v = intersect_subfamily(F, idx);
      for (std::size_t k = 0; k < d; ++k) {
        const double x = to_double(v[k]);
        lo[k] = std::min(lo[k], x);
        hi[k] = std::max(hi[k], x);
      }
      any = true;
    } catch (const DegenerateSubfamily&) {
    }
  });
  if (!any) return std::nullopt;
  for (std::size_t k = 0; k < d; ++k) {
    const double mid = 0.5 * (lo[k] + hi[k]), half = 0.5 * (hi[k] - lo[k]);
    lo[k] = mid - 2 * half;
    hi[k] = mid + 2 * half;
  }
  return Box{std::move(lo), std::move(hi)};
}

void clamp(std::vector<double>& x, const std::optional<Box>& box) {
  if (!box) return;
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], box->first[k], box->second[k]);
}

}  // namespace

FixedPointResult center_fixed_point(const ApproxFamily& F, std::span<const double> x0,
                                    const FixedPointOptions& opts, std::optional<Box> box) {
  if (x0.size() != F.dim) throw InputError("center_fixed_point: start point dimension mismatch");
  if (opts.max_iters == 0) throw InputError("center_fixed_point: max_iters must be at least 1");
  const std::size_t n = F.size(), d = F.dim;

  std::vector<double> norm2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) norm2[i] += F.normal[k][i] * F.normal[k][i];

  FixedPointResult out;
  out.point.assign(x0.begin(), x0.end());
  clamp(out.point, box);
  if (n == 0) {
    out.converged = true;
    return out;
  }
  PointCloud proj(d);
  for (std::size_t k = 0; k < d; ++k) proj.coord[k].resize(n);
  std::size_t level = 0;
  for (out.iterations = 1; out.iterations <= opts.max_iters; ++out.iterations) {
    const auto& x = out.point;
    for (std::size_t i = 0; i < n; ++i) {
      double slack = -F.offset[i];
      for (std::size_t k = 0; k < d; ++k) slack += F.normal[k][i] * x[k];
      const double t = slack / norm2[i];
      for (std::size_t k = 0; k < d; ++k) proj.coord[k][i] = x[k] - t * F.normal[k][i];
    }
    auto tc = tukey_center(proj, level);
    level = tc.level;
    auto next = std::move(tc.point);
    clamp(next, box);
    double move2 = 0;
    for (std::size_t k = 0; k < d; ++k) move2 += (next[k] - x[k]) * (next[k] - x[k]);
    out.point = std::move(next);
    if (std::sqrt(move2) < opts.step_tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, opts.max_iters);
  return out;
}

FixedPointResult center_fixed_point(const Instance& F, std::span<const double> x0,
                                    const FixedPointOptions& opts) {
  F.validate();
  return center_fixed_point(ApproxFamily::from(F), x0, opts, vertex_box(F));
}

}  // namespace dualdepth
