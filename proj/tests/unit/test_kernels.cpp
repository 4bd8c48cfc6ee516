#include "dualdepth/random.hpp"
#include "dualdepth/simd/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dualdepth;

namespace {

std::vector<const simd::Kernels*> variants() {
  std::vector<const simd::Kernels*> out{&simd::scalar_kernels()};
  if (const auto* k = simd::avx2_kernels()) out.push_back(k);
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("sign product counts match a direct count") {
    Rng rng(1);
    for (std::size_t n : {1u, 31u, 32u, 33u, 100u, 257u}) {
      const std::size_t stride = simd::padded_width(n), rows = 7;
      std::vector<std::int8_t> table(rows * stride, 0), s(stride, 0);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < n; ++j) table[r * stride + j] = static_cast<std::int8_t>(rng.uniform_int(-1, 1));
      for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<std::int8_t>(rng.uniform_int(-1, 1));
      for (const auto* k : variants()) {
        CAPTURE(k->name);
        std::vector<std::int32_t> pos(rows), neg(rows);
        k->sign_product_counts(table.data(), rows, stride, s.data(), pos.data(), neg.data());
        for (std::size_t r = 0; r < rows; ++r) {
          std::int32_t p = 0, m = 0;
          for (std::size_t j = 0; j < n; ++j) {
            const int prod = table[r * stride + j] * s[j];
            p += prod > 0;
            m += prod < 0;
          }
          CHECK(pos[r] == p);
          CHECK(neg[r] == m);
        }
      }
    }
  }

  TEST_CASE("ray hit counts agree across variants and with the definition") {
    Rng rng(2);
    for (std::size_t dim : {1u, 2u, 3u, 5u}) {
      for (std::size_t n : {1u, 3u, 4u, 5u, 64u, 1001u}) {
        std::vector<std::vector<double>> normal(dim, std::vector<double>(n));
        std::vector<double> slack(n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t k = 0; k < dim; ++k) normal[k][i] = rng.normal();
          // Some exact contacts and some exactly parallel rows.
          slack[i] = i % 7 == 0 ? 0.0 : rng.normal();
        }
        std::vector<double> u(dim);
        for (double& x : u) x = rng.normal();
        if (n > 2)
          for (std::size_t k = 0; k < dim; ++k) normal[k][2] = 0.0;
        std::vector<const double*> cols;
        for (const auto& c : normal) cols.push_back(c.data());
        simd::FlatSoA soa{cols.data(), slack.data(), n, dim};

        std::size_t expect = 0;
        for (std::size_t i = 0; i < n; ++i) {
          double along = 0;
          for (std::size_t k = 0; k < dim; ++k) along += normal[k][i] * u[k];
          expect += std::fabs(slack[i]) <= 1e-12 || (std::fabs(along) > 1e-12 && slack[i] * along > 0);
        }
        for (const auto* k : variants()) {
          CAPTURE(k->name);
          CHECK(k->ray_hit_count(soa, u.data(), 1e-12, 1e-12) == expect);
        }
      }
    }
  }

  TEST_CASE("projections are bit-identical across variants") {
    Rng rng(3);
    for (std::size_t dim : {1u, 2u, 3u, 4u}) {
      const std::size_t n = 37;
      std::vector<std::vector<double>> coords(dim, std::vector<double>(n));
      for (auto& c : coords)
        for (double& x : c) x = rng.normal() * 1e3;
      std::vector<double> u(dim);
      for (double& x : u) x = rng.normal();
      std::vector<const double*> cols;
      for (const auto& c : coords) cols.push_back(c.data());
      std::vector<double> ref(n);
      simd::scalar_kernels().project(cols.data(), n, dim, u.data(), ref.data());
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t k = 0; k < dim; ++k) s += coords[k][i] * u[k];
        CHECK(ref[i] == s);
      }
      for (const auto* k : variants()) {
        std::vector<double> out(n);
        k->project(cols.data(), n, dim, u.data(), out.data());
        CHECK(out == ref);
      }
    }
  }

  TEST_CASE("an active variant is always selected") {
    const auto& k = simd::active_kernels();
    CHECK(k.name != nullptr);
    CHECK(k.ray_hit_count != nullptr);
  }
}
