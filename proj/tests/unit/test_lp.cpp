#include "helpers.hpp"

#include "dualdepth/combinatorics.hpp"
#include "dualdepth/lp.hpp"
#include "dualdepth/random.hpp"

#include <doctest.h>

using namespace dualdepth;
using namespace testing;

namespace {

// Best objective over all feasible vertices (k tight constraints), or
// nullopt when no vertex is feasible. Valid for bounded feasible regions.
std::optional<Rational> vertex_oracle(const lp::Problem<Rational>& p) {
  std::optional<Rational> best;
  for_each_subset(p.G.size(), p.vars, [&](const std::vector<std::size_t>& idx) {
    linalg::Matrix A;
    RVec b;
    for (std::size_t i : idx) {
      A.push_back(p.G[i]);
      b.push_back(p.h[i]);
    }
    const auto z = linalg::solve(A, b);
    if (!z) return;
    for (std::size_t j = 0; j < p.G.size(); ++j)
      if (dot(p.G[j], *z) > p.h[j]) return;
    const Rational val = dot(p.c, *z);
    if (!best || val > *best) best = val;
  });
  return best;
}

lp::Problem<Rational> random_bounded(Rng& rng, std::size_t k, std::size_t extra) {
  lp::Problem<Rational> p;
  p.vars = k;
  for (std::size_t i = 0; i < k; ++i) {
    RVec e(k, Rational(0));
    e[i] = 1;
    p.G.push_back(e);
    p.h.emplace_back(rng.uniform_int(1, 10));
    e[i] = -1;
    p.G.push_back(e);
    p.h.emplace_back(rng.uniform_int(1, 10));
  }
  for (std::size_t j = 0; j < extra; ++j) {
    RVec row;
    for (std::size_t i = 0; i < k; ++i) row.emplace_back(rng.uniform_int(-5, 5));
    p.G.push_back(row);
    p.h.emplace_back(rng.uniform_int(-12, 8));
  }
  for (std::size_t i = 0; i < k; ++i) p.c.emplace_back(rng.uniform_int(-4, 4));
  return p;
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("simple optimum") {
    // max x + y s.t. x <= 2, y <= 3, x + y <= 4.
    lp::Problem<Rational> p;
    p.vars = 2;
    p.G = {vi({1, 0}), vi({0, 1}), vi({1, 1})};
    p.h = vi({2, 3, 4});
    p.c = vi({1, 1});
    const auto s = lp::maximize(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.value == 4);
    CHECK(dot(p.c, s.z) == 4);
  }

  TEST_CASE("infeasible and unbounded programs") {
    lp::Problem<Rational> p;
    p.vars = 1;
    p.G = {vi({1}), vi({-1})};
    p.h = vi({-1, -1});  // x <= -1 and x >= 1
    p.c = vi({1});
    CHECK(lp::maximize(p).status == lp::Status::kInfeasible);

    lp::Problem<Rational> u;
    u.vars = 2;
    u.G = {vi({1, 0})};
    u.h = vi({0});
    u.c = vi({0, 1});
    CHECK(lp::maximize(u).status == lp::Status::kUnbounded);
  }

  TEST_CASE("lineality directions orthogonal to the objective") {
    // max x s.t. x <= 1; y is free and irrelevant.
    lp::Problem<Rational> p;
    p.vars = 2;
    p.G = {vi({1, 0})};
    p.h = vi({1});
    p.c = vi({1, 0});
    const auto s = lp::maximize(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.value == 1);
  }

  TEST_CASE("exact answers match vertex enumeration and pass substitution") {
    Rng rng(77);
    int infeasible = 0, optimal = 0;
    for (int t = 0; t < 300; ++t) {
      const std::size_t k = 2 + t % 2;
      const auto p = random_bounded(rng, k, 2 + t % 5);
      const auto s = lp::maximize(p);
      const auto oracle = vertex_oracle(p);
      CAPTURE(t);
      if (!oracle) {
        CHECK(s.status == lp::Status::kInfeasible);
        ++infeasible;
        continue;
      }
      REQUIRE(s.status == lp::Status::kOptimal);
      ++optimal;
      CHECK(s.value == *oracle);
      for (std::size_t j = 0; j < p.G.size(); ++j) CHECK(dot(p.G[j], s.z) <= p.h[j]);
      for (std::size_t j : s.active) CHECK(dot(p.G[j], s.z) == p.h[j]);
    }
    CHECK(infeasible > 10);
    CHECK(optimal > 10);
  }

  TEST_CASE("floating solver tracks the exact one") {
    Rng rng(78);
    for (int t = 0; t < 100; ++t) {
      const auto p = random_bounded(rng, 2, 4);
      lp::Problem<double> f;
      f.vars = p.vars;
      for (const auto& row : p.G) f.G.push_back(to_doubles(row));
      f.h = to_doubles(p.h);
      f.c = to_doubles(p.c);
      const auto exact = lp::maximize(p);
      const auto approx = lp::maximize(f);
      CHECK((exact.status == lp::Status::kOptimal) == (approx.status == lp::Status::kOptimal));
      if (exact.status == lp::Status::kOptimal && approx.status == lp::Status::kOptimal)
        CHECK(approx.value == doctest::Approx(to_double(exact.value)).epsilon(1e-9));
    }
  }
}
