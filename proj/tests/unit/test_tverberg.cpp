#include "helpers.hpp"

#include "dualdepth/depth.hpp"
#include "dualdepth/io.hpp"
#include "dualdepth/tverberg.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace dualdepth;
using namespace testing;

namespace {

Rational orient(const RVec& a, const RVec& b, const RVec& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool strictly_inside(const std::vector<RVec>& tri, const RVec& p) {
  const int s0 = sgn(orient(tri[0], tri[1], p)), s1 = sgn(orient(tri[1], tri[2], p)),
            s2 = sgn(orient(tri[2], tri[0], p));
  return s0 != 0 && s0 == s1 && s1 == s2;
}

bool proper_cross(const RVec& a, const RVec& b, const RVec& c, const RVec& d) {
  return sgn(orient(a, b, c)) * sgn(orient(a, b, d)) < 0 && sgn(orient(c, d, a)) * sgn(orient(c, d, b)) < 0;
}

// Independent planar test: do the open triangles of two disjoint line
// triples intersect? Under general position no vertex of one lies on a line
// of the other, so it suffices to test vertex containment and edge crossings.
std::vector<RVec> triangle_vertices(const Instance& F, const std::vector<std::size_t>& g) {
  std::vector<RVec> out;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t idx[2] = {g[(i + 1) % 3], g[(i + 2) % 3]};
    out.push_back(intersect_subfamily(F, idx));
  }
  return out;
}

bool open_triangles_meet(const std::vector<RVec>& a, const std::vector<RVec>& b) {
  for (const auto& p : a)
    if (strictly_inside(b, p)) return true;
  for (const auto& p : b)
    if (strictly_inside(a, p)) return true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (proper_cross(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3])) return true;
  return false;
}

// Independent enumerator for 6 lines into two triples: the triple holding
// line 0 determines the partition.
std::size_t independent_pair_count(const Instance& F) {
  std::size_t count = 0;
  for (std::size_t i = 1; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) {
      std::vector<std::size_t> g1{0, i, j}, g2;
      for (std::size_t k = 1; k < 6; ++k)
        if (k != i && k != j) g2.push_back(k);
      count += open_triangles_meet(triangle_vertices(F, g1), triangle_vertices(F, g2));
    }
  return count;
}

// Witness containment by direct side tests: the witness is on the side of
// each line facing the opposite vertex (or on the line).
Rational least_inward_slack(const Instance& F, const PartitionResult& p) {
  Rational least;
  bool first = true;
  for (const auto& g : p.groups)
    for (const auto& f : form_simplex(F, g).facets) {
      const Rational s = f.inward * evaluate(f.plane, p.witness);
      if (first || s < least) least = s;
      first = false;
    }
  return least;
}

void check_partition_shape(const PartitionResult& p, std::size_t n, std::size_t group_size) {
  std::vector<std::size_t> all;
  for (const auto& g : p.groups) {
    CHECK(g.size() == group_size);
    CHECK(std::is_sorted(g.begin(), g.end()));
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(n);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(all == expect);
}

}  // namespace

TEST_SUITE("tverberg") {
  TEST_CASE("form_simplex examples") {
    const std::size_t idx[] = {0, 1, 2};
    const auto s = form_simplex(triangle(), idx);
    CHECK(s.vertices == std::vector<RVec>{vi({1, 0}), vi({0, 1}), vi({0, 0})});
    // Vertex i is the one missing hyperplane i; listed in sorted-index order,
    // so here: (x2=0)&(x1+x2=1) -> (1,0); (x1=0)&(x1+x2=1) -> (0,1); axes -> (0,0).

    const auto bad = family(2, {h({1, 0}, 0), h({1, 0}, 1), h({0, 1}, 0)});
    CHECK_THROWS_AS(form_simplex(bad, idx), DegenerateSubfamily);

    const auto F3 = family(3, {h({1, 0, 0}, 0), h({0, 1, 0}, 0), h({0, 0, 1}, 0), h({1, 1, 1}, 1)});
    const std::size_t idx3[] = {0, 1, 2, 3};
    const auto s3 = form_simplex(F3, idx3);
    std::set<RVec> verts(s3.vertices.begin(), s3.vertices.end());
    CHECK(verts == std::set<RVec>{vi({0, 0, 0}), vi({1, 0, 0}), vi({0, 1, 0}), vi({0, 0, 1})});
    // Orientation oracle: each facet has its own vertex strictly inward and
    // the other d vertices on it.
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const int s = sgn(s3.facets[i].inward_slack(s3.vertices[j]));
        CHECK(s == (i == j ? 1 : 0));
      }
  }

  TEST_CASE("form_simplex input checks") {
    const std::size_t two[] = {0, 1};
    CHECK_THROWS_AS(form_simplex(triangle(), two), InputError);
    const std::size_t rep[] = {0, 1, 1};
    CHECK_THROWS_AS(form_simplex(triangle(), rep), InputError);
    const std::size_t out[] = {0, 1, 7};
    CHECK_THROWS_AS(form_simplex(triangle(), out), InputError);
    const auto concurrent = family(2, {h({1, 0}, 0), h({0, 1}, 0), h({1, 1}, 0)});
    const std::size_t idx[] = {0, 1, 2};
    CHECK_THROWS_AS(form_simplex(concurrent, idx), DegenerateSubfamily);
  }

  TEST_CASE("common_interior_point examples") {
    const std::size_t idx[] = {0, 1, 2};
    const auto s = form_simplex(triangle(), idx);
    const auto one = common_interior_point(std::vector<SimplexSpec>{s});
    REQUIRE(one.has_value());
    CHECK(one->strict);
    CHECK(sgn(one->margin) > 0);
    for (const auto& f : s.facets) CHECK(f.inward_slack(one->witness) >= one->margin);

    const auto twice = common_interior_point(std::vector<SimplexSpec>{s, s});
    REQUIRE(twice.has_value());
    CHECK(twice->margin == one->margin);

    auto far = triangle();
    far.hyperplanes[0].offset = 100;  // x1 = 100
    far.hyperplanes[1].offset = 100;  // x2 = 100
    far.hyperplanes[2].offset = 201;  // x1 + x2 = 201
    const auto t = form_simplex(far, idx);
    CHECK_FALSE(common_interior_point(std::vector<SimplexSpec>{s, t}).has_value());
    CHECK_THROWS_AS(common_interior_point(std::vector<SimplexSpec>{}), InputError);
  }

  TEST_CASE("touching simplices give margin zero") {
    // Triangles {x1>=0, x2>=0, x1+x2<=1} and {x1<=0, x2>=0, x2-x1<=1}
    // share only the segment x1 = 0.
    const auto F = family(2, {h({1, 0}, 0), h({0, 1}, 0), h({1, 1}, 1), h({1, 0}, 0), h({0, 1}, 0), h({-1, 1}, 1)});
    const std::size_t a[] = {0, 1, 2}, b[] = {3, 4, 5};
    const auto r = common_interior_point(std::vector<SimplexSpec>{form_simplex(F, a), form_simplex(F, b)});
    REQUIRE(r.has_value());
    CHECK(r->margin == 0);
    CHECK_FALSE(r->strict);
  }

  TEST_CASE("partition enumeration counts") {
    auto count = [](std::size_t size, std::size_t g) {
      std::size_t c = 0;
      std::set<std::vector<std::vector<std::size_t>>> seen;
      for_each_partition(size, g, [&](const std::vector<std::vector<std::size_t>>& p) {
        ++c;
        seen.insert(p);
        return true;
      });
      CHECK(seen.size() == c);
      return c;
    };
    CHECK(count(3, 3) == 1);
    CHECK(count(6, 3) == 10);
    CHECK(count(9, 3) == 280);
    CHECK(count(8, 4) == 35);
    CHECK(count(12, 3) == 15400);
  }

  TEST_CASE("planar construction: triangle") {
    const auto r = dual_tverberg_plane(triangle());
    REQUIRE(r.groups.size() == 1);
    CHECK(r.groups[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(dual_depth(triangle(), r.witness).contained == 2);
    CHECK(r.margin == 0);
    CHECK_FALSE(r.strict);
  }

  TEST_CASE("planar construction: six random lines") {
    const auto F = gen_instance(GeneratorModel::kRandomRational, 6, 2, 7);
    const auto r = dual_tverberg_plane(F);
    check_partition_shape(r, 6, 3);
    CHECK(least_inward_slack(F, r) == r.margin);
    CHECK(sgn(r.margin) >= 0);
    // Certify each triangle separately with the LP as well.
    for (const auto& g : r.groups) CHECK(common_interior_point(std::vector<SimplexSpec>{form_simplex(F, g)}).has_value());
  }

  TEST_CASE("planar construction: tangent lines alternate") {
    const auto F = gen_instance(GeneratorModel::kUniformSphereTangent, 6, 2, 3);
    const auto r = dual_tverberg_plane(F);
    std::set<std::vector<std::size_t>> groups(r.groups.begin(), r.groups.end());
    CHECK(groups == std::set<std::vector<std::size_t>>{{0, 2, 4}, {1, 3, 5}});
    CHECK(sgn(r.margin) >= 0);
    CHECK(least_inward_slack(F, r) == r.margin);
    // The witness is inside the circumscribed region (all lines are tangent to the unit circle).
    for (const auto& hp : F.hyperplanes) CHECK(side_of(hp, r.witness) <= 0);
  }

  TEST_CASE("planar construction holds on random instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const std::size_t n = 1 + seed % 4;
      const auto model = seed % 3 == 0 ? GeneratorModel::kUniformSphereTangent : GeneratorModel::kRandomRational;
      const auto F = gen_instance(model, 3 * n, 2, 300 + seed);
      const auto r = dual_tverberg_plane(F);
      CAPTURE(seed);
      check_partition_shape(r, 3 * n, 3);
      CHECK(sgn(r.margin) >= 0);
      CHECK(least_inward_slack(F, r) == r.margin);
      if (dual_depth(F, r.witness).contained == 0) CHECK(r.strict);
    }
  }

  TEST_CASE("planar construction input checks") {
    CHECK_THROWS_AS(dual_tverberg_plane(family(2, {h({1, 0}, 0), h({0, 1}, 0)})), InputError);
    CHECK_THROWS_AS(dual_tverberg_plane(gen_instance(GeneratorModel::kRandomRational, 3, 3, 1)), InputError);
    const auto concurrent = family(2, {h({1, 0}, 0), h({0, 1}, 0), h({1, 1}, 0)});
    CHECK_THROWS_AS(dual_tverberg_plane(concurrent), DegenerateInstance);
  }

  TEST_CASE("exhaustive search finds a strict partition of six lines") {
    const auto file = parse_instance(read_text(test_path("fixtures/six.json")));
    const auto r = dual_tverberg_search(file.instance, 2);
    REQUIRE(r.has_value());
    CHECK(r->strict);
    check_partition_shape(*r, 6, 3);
    CHECK(least_inward_slack(file.instance, *r) == r->margin);
  }

  TEST_CASE("strict partition counts agree with an independent enumerator") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto F = gen_instance(GeneratorModel::kRandomRational, 6, 2, 4000 + seed);
      CAPTURE(seed);
      const auto count = count_strict_partitions(F, 2);
      CHECK(count == independent_pair_count(F));
      CHECK(count >= 1);
    }
  }

  TEST_CASE("exhaustive search in three dimensions") {
    const auto F = gen_instance(GeneratorModel::kRandomRational, 8, 3, 11);
    const auto r = dual_tverberg_search(F, 2);
    REQUIRE(r.has_value());
    check_partition_shape(*r, 8, 4);
    CHECK(r->strict);
    CHECK(least_inward_slack(F, *r) == r->margin);
  }

  TEST_CASE("search input checks") {
    CHECK_THROWS_AS(dual_tverberg_search(triangle(), 2), InputError);
    CHECK_THROWS_AS(dual_tverberg_search(triangle(), 0), InputError);
    const auto r = dual_tverberg_search(triangle(), 1);
    REQUIRE(r.has_value());
    CHECK(r->groups.size() == 1);
  }

  TEST_CASE("colorful search") {
    GenerateOptions o;
    o.colored = true;
    const auto F = gen_instance(GeneratorModel::kRandomRational, 9, 2, 5, o);
    const auto rep = colorful_dual_tverberg_search(F, 2);
    CHECK(rep.preconditions_met);
    REQUIRE(rep.result.has_value());
    CHECK(rep.result->strict);
    REQUIRE(rep.result->groups.size() == 2);
    std::set<std::size_t> used;
    for (const auto& g : rep.result->groups) {
      std::set<int> colors;
      for (std::size_t i : g) {
        colors.insert((*F.colors)[i]);
        CHECK(used.insert(i).second);
      }
      CHECK(colors == std::set<int>{0, 1, 2});
    }
    CHECK(least_inward_slack(F, *rep.result) == rep.result->margin);

    const auto small = gen_instance(GeneratorModel::kRandomRational, 6, 2, 5, o);
    const auto noted = colorful_dual_tverberg_search(small, 2);
    CHECK_FALSE(noted.preconditions_met);
    CHECK_FALSE(noted.precondition_notes.empty());
    CHECK_THROWS_AS(colorful_dual_tverberg_search(triangle(), 1), InputError);
  }

  TEST_CASE("prime powers") {
    for (std::size_t n : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 27u}) CHECK(is_prime_power(n));
    for (std::size_t n : {0u, 1u, 6u, 10u, 12u, 15u}) CHECK_FALSE(is_prime_power(n));
  }
}
