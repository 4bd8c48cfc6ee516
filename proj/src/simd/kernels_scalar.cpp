#include "dualdepth/simd/kernels.hpp"

#include <cmath>

namespace dualdepth::simd {
namespace {

void sign_product_counts(const std::int8_t* table, std::size_t rows, std::size_t stride,
                         const std::int8_t* s, std::int32_t* pos, std::int32_t* neg) {
  for (std::size_t r = 0; r < rows; ++r) {
    const std::int8_t* row = table + r * stride;
    std::int32_t p = 0, m = 0;
    for (std::size_t j = 0; j < stride; ++j) {
      const int prod = row[j] * s[j];
      p += prod > 0;
      m += prod < 0;
    }
    pos[r] = p;
    neg[r] = m;
  }
}

std::size_t ray_hit_count(const FlatSoA& flats, const double* u, double contact_tol,
                          double parallel_tol) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < flats.count; ++i) {
    const double slack = flats.slack[i];
    double dot = 0.0;
    for (std::size_t k = 0; k < flats.dim; ++k) dot += flats.normal[k][i] * u[k];
    const bool contained = std::fabs(slack) <= contact_tol;
    const bool crosses = std::fabs(dot) > parallel_tol && slack * dot > 0.0;
    hits += (contained || crosses) ? 1 : 0;
  }
  return hits;
}

void project(const double* const* coords, std::size_t count, std::size_t dim, const double* u,
             double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += coords[k][i] * u[k];
    out[i] = acc;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", &sign_product_counts, &ray_hit_count, &project};
  return k;
}

}  // namespace dualdepth::simd
