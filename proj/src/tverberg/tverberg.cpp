#include "dualdepth/tverberg.hpp"

#include "dualdepth/combinatorics.hpp"
#include "dualdepth/depth.hpp"
#include "dualdepth/lp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dualdepth {
namespace {

void require_general_position(const Instance& F) {
  F.validate();
  if (auto gp = check_general_position(F); !gp.ok()) throw DegenerateInstance(std::move(gp));
}

// Upper half-plane first, then counter-clockwise; exact.
int half_of(const RVec& v) { return (sgn(v[1]) > 0 || (sgn(v[1]) == 0 && sgn(v[0]) > 0)) ? 0 : 1; }

bool angle_less(const RVec& a, const RVec& b) {
  const int ha = half_of(a), hb = half_of(b);
  if (ha != hb) return ha < hb;
  return sgn(a[0] * b[1] - a[1] * b[0]) > 0;
}

class SimplexCache {
public:
  explicit SimplexCache(const Instance& F) : F_(F) {}
  const SimplexSpec& get(const std::vector<std::size_t>& idx) {
    auto it = cache_.find(idx);
    if (it == cache_.end()) it = cache_.emplace(idx, form_simplex(F_, idx)).first;
    return it->second;
  }

private:
  const Instance& F_;
  std::map<std::vector<std::size_t>, SimplexSpec> cache_;
};

std::optional<PartitionResult> certify(SimplexCache& cache, const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<SimplexSpec> simplices;
  simplices.reserve(groups.size());
  for (const auto& g : groups) simplices.push_back(cache.get(g));
  auto ip = common_interior_point(simplices);
  if (!ip || !ip->strict) return std::nullopt;
  return PartitionResult{groups, std::move(ip->witness), std::move(ip->margin), true};
}

void check_partition_size(const Instance& F, std::size_t groups) {
  if (groups == 0 || F.size() != (F.dim + 1) * groups)
    throw InputError("need exactly (d+1)*groups = " + std::to_string((F.dim + 1) * groups) +
                     " hyperplanes, got " + std::to_string(F.size()));
}

}  // namespace

SimplexSpec form_simplex(const Instance& F, std::span<const std::size_t> idx) {
  const std::size_t d = F.dim;
  if (idx.size() != d + 1)
    throw InputError("form_simplex: need " + std::to_string(d + 1) + " indices, got " + std::to_string(idx.size()));
  SimplexSpec s;
  s.indices.assign(idx.begin(), idx.end());
  std::sort(s.indices.begin(), s.indices.end());
  if (std::adjacent_find(s.indices.begin(), s.indices.end()) != s.indices.end())
    throw InputError("form_simplex: repeated index");
  for (std::size_t i : s.indices)
    if (i >= F.size()) throw InputError("form_simplex: index " + std::to_string(i) + " out of range");

  for (std::size_t i = 0; i <= d; ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j <= d; ++j)
      if (j != i) rest.push_back(s.indices[j]);
    try {
      s.vertices.push_back(intersect_subfamily(F, rest));
    } catch (const DegenerateSubfamily&) {
      throw DegenerateSubfamily(s.indices);
    }
  }
  for (std::size_t i = 0; i <= d; ++i) {
    const auto& h = F.hyperplanes[s.indices[i]];
    const int side = side_of(h, s.vertices[i]);
    if (side == 0) throw DegenerateSubfamily(s.indices);  // all d+1 share a point
    s.facets.push_back(Facet{s.indices[i], h, side});
  }
  return s;
}

std::optional<InteriorPoint> common_interior_point(std::span<const SimplexSpec> simplices) {
  if (simplices.empty()) throw InputError("common_interior_point: no simplices");
  const std::size_t d = simplices.front().vertices.front().size();
  lp::Problem<Rational> prob;
  prob.vars = d + 1;
  prob.c.assign(d + 1, Rational(0));
  prob.c[d] = 1;
  for (const auto& s : simplices) {
    for (const auto& f : s.facets) {
      if (f.plane.dim() != d) throw InputError("common_interior_point: dimension mismatch");
      RVec row(d + 1);
      for (std::size_t k = 0; k < d; ++k) row[k] = -f.inward * f.plane.normal[k];
      row[d] = 1;
      prob.G.push_back(std::move(row));
      prob.h.push_back(-f.inward * f.plane.offset);
    }
  }
  auto sol = lp::maximize(prob);
  if (sol.status == lp::Status::kUnbounded)
    throw std::logic_error("common_interior_point: unbounded margin for bounded simplices");
  if (sol.status != lp::Status::kOptimal || sgn(sol.value) < 0) return std::nullopt;

  InteriorPoint out;
  out.witness.assign(sol.z.begin(), sol.z.begin() + static_cast<std::ptrdiff_t>(d));
  bool first = true;
  for (const auto& s : simplices)
    for (const auto& f : s.facets) {
      Rational slack = f.inward_slack(out.witness);
      if (first || slack < out.margin) out.margin = slack;
      first = false;
    }
  if (out.margin != sol.value) throw std::logic_error("common_interior_point: certificate mismatch");
  out.strict = sgn(out.margin) > 0;
  return out;
}

PartitionResult dual_tverberg_plane(const Instance& F) {
  if (F.dim != 2) throw InputError("dual_tverberg_plane: instance must be planar");
  if (F.size() == 0 || F.size() % 3 != 0)
    throw InputError("dual_tverberg_plane: number of lines must be a positive multiple of 3");
  require_general_position(F);
  const std::size_t n = F.size() / 3;

  // Directions from the witness toward each line. A line through the witness
  // may take either normal; pick signs (first in a fixed order) that keep at
  // least n directions in every open half-plane, which is what the circular
  // triples need. Vertices are tried deepest-first when the deepest fails.
  std::vector<RVec> toward;
  const auto pick = [&](const Point& x) {
    std::vector<std::size_t> on;
    toward.assign(F.size(), RVec{});
    for (std::size_t i = 0; i < F.size(); ++i) {
      const auto& h = F.hyperplanes[i];
      const int s = side_of(h, x);
      toward[i] = h.normal;
      if (s > 0)
        for (auto& q : toward[i]) q = -q;
      if (s == 0) on.push_back(i);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << on.size()); ++mask) {
      for (std::size_t b = 0; b < on.size(); ++b) {
        const bool flip = (mask >> b) & 1;
        const auto& nrm = F.hyperplanes[on[b]].normal;
        for (std::size_t k = 0; k < 2; ++k) toward[on[b]][k] = flip ? -nrm[k] : nrm[k];
      }
      if (hemisphere_depth(toward, 2).count >= n) return true;
    }
    return false;
  };
  Point x = max_depth_point(F).point;
  if (!pick(x)) {
    std::vector<std::pair<std::size_t, Point>> vertices;
    for_each_subset(F.size(), 2, [&](const std::vector<std::size_t>& idx) {
      auto v = intersect_subfamily(F, idx);
      vertices.emplace_back(dual_depth(F, v).depth, std::move(v));
    });
    std::stable_sort(vertices.begin(), vertices.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : lex_less(a.second, b.second);
    });
    bool found = false;
    for (const auto& [dep, v] : vertices)
      if (dep >= n && pick(v)) {
        x = v;
        found = true;
        break;
      }
    if (!found) pick(x);  // reported honestly through the margin
  }
  std::vector<std::size_t> order(F.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return angle_less(toward[a], toward[b]); });

  PartitionResult out;
  out.witness = x;
  bool first = true;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> g{order[k], order[k + n], order[k + 2 * n]};
    std::sort(g.begin(), g.end());
    for (const auto& f : form_simplex(F, g).facets) {
      Rational slack = f.inward_slack(x);
      if (first || slack < out.margin) out.margin = slack;
      first = false;
    }
    out.groups.push_back(std::move(g));
  }
  out.strict = sgn(out.margin) > 0;
  return out;
}

void for_each_partition(std::size_t size, std::size_t group_size,
                        const std::function<bool(const std::vector<std::vector<std::size_t>>&)>& fn) {
  if (group_size == 0 || size % group_size != 0) return;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> used(size, false);
  bool stop = false;
  std::function<void()> recurse = [&]() {
    if (stop) return;
    std::size_t leader = 0;
    while (leader < size && used[leader]) ++leader;
    if (leader == size) {
      if (!fn(groups)) stop = true;
      return;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = leader + 1; i < size; ++i)
      if (!used[i]) rest.push_back(i);
    used[leader] = true;
    for_each_subset(rest.size(), group_size - 1, [&](const std::vector<std::size_t>& pick) {
      std::vector<std::size_t> g{leader};
      for (std::size_t p : pick) g.push_back(rest[p]);
      for (std::size_t i = 1; i < g.size(); ++i) used[g[i]] = true;
      groups.push_back(g);
      recurse();
      groups.pop_back();
      for (std::size_t i = 1; i < g.size(); ++i) used[g[i]] = false;
      return !stop;
    });
    used[leader] = false;
  };
  recurse();
}

std::optional<PartitionResult> dual_tverberg_search(const Instance& F, std::size_t groups) {
  check_partition_size(F, groups);
  require_general_position(F);
  SimplexCache cache(F);
  std::optional<PartitionResult> found;
  for_each_partition(F.size(), F.dim + 1, [&](const std::vector<std::vector<std::size_t>>& part) {
    found = certify(cache, part);
    return !found;
  });
  return found;
}

std::size_t count_strict_partitions(const Instance& F, std::size_t groups) {
  check_partition_size(F, groups);
  require_general_position(F);
  SimplexCache cache(F);
  std::size_t count = 0;
  for_each_partition(F.size(), F.dim + 1, [&](const std::vector<std::vector<std::size_t>>& part) {
    count += certify(cache, part).has_value();
    return true;
  });
  return count;
}

bool is_prime_power(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1;
  }
  return true;
}

ColorfulReport colorful_dual_tverberg_search(const Instance& F, std::size_t r) {
  if (!F.colors) throw InputError("colorful search needs a colored instance");
  F.validate();
  if (r == 0) throw InputError("colorful search: r must be positive");
  require_general_position(F);
  const std::size_t d = F.dim;
  const auto sizes = F.color_class_sizes();

  ColorfulReport report;
  auto note = [&](std::string s) {
    report.preconditions_met = false;
    report.precondition_notes.push_back(std::move(s));
  };
  const std::size_t t = sizes.front();
  if (std::any_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s != t; }))
    note("color classes have unequal sizes");
  if (t < 2 * r - 1)
    note("t = " + std::to_string(t) + " < 2r - 1 = " + std::to_string(2 * r - 1));
  if (!is_prime_power(r) && r != 1) note("r = " + std::to_string(r) + " is not a prime power");

  std::vector<std::vector<std::size_t>> by_color(d + 1);
  for (std::size_t i = 0; i < F.size(); ++i) by_color[static_cast<std::size_t>((*F.colors)[i])].push_back(i);

  SimplexCache cache(F);
  std::vector<std::vector<std::size_t>> chosen;
  std::vector<bool> used(F.size(), false);
  bool done = false;

  // Groups are ordered by their color-0 member; the rest pick one unused
  // hyperplane per color in ascending index order.
  std::function<void(std::size_t)> pick_group;
  std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&)> fill;
  fill = [&](std::size_t next_leader_pos, std::size_t color, std::vector<std::size_t>& group) {
    if (done) return;
    if (color > d) {
      auto g = group;
      std::sort(g.begin(), g.end());
      chosen.push_back(std::move(g));
      if (chosen.size() == r) {
        if (auto res = certify(cache, chosen)) {
          report.result = std::move(res);
          done = true;
        }
      } else {
        pick_group(next_leader_pos);
      }
      chosen.pop_back();
      return;
    }
    for (std::size_t i : by_color[color]) {
      if (used[i]) continue;
      used[i] = true;
      group.push_back(i);
      fill(next_leader_pos, color + 1, group);
      group.pop_back();
      used[i] = false;
      if (done) return;
    }
  };
  pick_group = [&](std::size_t from) {
    for (std::size_t p = from; p < by_color[0].size() && !done; ++p) {
      const std::size_t leader = by_color[0][p];
      used[leader] = true;
      std::vector<std::size_t> group{leader};
      fill(p + 1, 1, group);
      used[leader] = false;
    }
  };
  pick_group(0);
  return report;
}

}  // namespace dualdepth
