// Compiled with -mavx2 (and without FMA contraction) only when
// DUALDEPTH_ENABLE_AVX2 is on. Called only after a CPUID check.

#include "dualdepth/simd/kernels.hpp"

#include <immintrin.h>

#include <bit>
#include <cmath>

namespace dualdepth::simd {
namespace {

void sign_product_counts(const std::int8_t* table, std::size_t rows, std::size_t stride,
                         const std::int8_t* s, std::int32_t* pos, std::int32_t* neg) {
  const __m256i zero = _mm256_setzero_si256();
  for (std::size_t r = 0; r < rows; ++r) {
    const std::int8_t* row = table + r * stride;
    std::int32_t p = 0, m = 0;
    for (std::size_t j = 0; j < stride; j += kSignLane) {
      const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + j));
      const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(s + j));
      // Entries are in {-1,0,1}, so sign(a, b) is the exact product.
      const __m256i prod = _mm256_sign_epi8(a, b);
      const auto gt = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpgt_epi8(prod, zero)));
      const auto lt = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpgt_epi8(zero, prod)));
      p += std::popcount(gt);
      m += std::popcount(lt);
    }
    pos[r] = p;
    neg[r] = m;
  }
}

std::size_t ray_hit_count(const FlatSoA& flats, const double* u, double contact_tol,
                          double parallel_tol) {
  const std::size_t n = flats.count, dim = flats.dim;
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d vcontact = _mm256_set1_pd(contact_tol);
  const __m256d vparallel = _mm256_set1_pd(parallel_tol);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dot = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k)
      dot = _mm256_add_pd(dot, _mm256_mul_pd(_mm256_loadu_pd(flats.normal[k] + i), _mm256_set1_pd(u[k])));
    const __m256d slack = _mm256_loadu_pd(flats.slack + i);
    const __m256d contained = _mm256_cmp_pd(_mm256_and_pd(slack, abs_mask), vcontact, _CMP_LE_OQ);
    const __m256d nonpar = _mm256_cmp_pd(_mm256_and_pd(dot, abs_mask), vparallel, _CMP_GT_OQ);
    const __m256d same = _mm256_cmp_pd(_mm256_mul_pd(slack, dot), zero, _CMP_GT_OQ);
    const __m256d hit = _mm256_or_pd(contained, _mm256_and_pd(nonpar, same));
    hits += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(hit))));
  }
  for (; i < n; ++i) {
    const double slack = flats.slack[i];
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dot += flats.normal[k][i] * u[k];
    const bool contained = std::fabs(slack) <= contact_tol;
    const bool crosses = std::fabs(dot) > parallel_tol && slack * dot > 0.0;
    hits += (contained || crosses) ? 1 : 0;
  }
  return hits;
}

void project(const double* const* coords, std::size_t count, std::size_t dim, const double* u,
             double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(coords[k] + i), _mm256_set1_pd(u[k])));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += coords[k][i] * u[k];
    out[i] = acc;
  }
}

}  // namespace

const Kernels& avx2_kernels_impl() {
  static const Kernels k{"avx2", &sign_product_counts, &ray_hit_count, &project};
  return k;
}

}  // namespace dualdepth::simd
