#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and an AVX2
// variant; the variant is picked once at runtime from CPUID, and the
// DUALDEPTH_SIMD environment variable ("scalar" or "avx2") can pin it.
// Variants must agree bit-for-bit; tests/unit/test_kernels.cpp checks this.

#include <cstddef>
#include <cstdint>

namespace dualdepth::simd {

/// Sign tables are stored in rows padded to a multiple of this many bytes.
inline constexpr std::size_t kSignLane = 32;

inline constexpr std::size_t padded_width(std::size_t n) {
  return (n + kSignLane - 1) / kSignLane * kSignLane;
}

/// Structure-of-arrays view of n hyperplanes in R^dim (double precision).
struct FlatSoA {
  const double* const* normal = nullptr;  // normal[k][i]: coordinate k of hyperplane i
  const double* slack = nullptr;          // offset_i - normal_i . x
  std::size_t count = 0;
  std::size_t dim = 0;
};

struct Kernels {
  const char* name;

  /// For each row r of a rows x stride int8 table with entries in {-1,0,1}:
  /// pos[r] = #{j : table[r][j] * s[j] > 0}, neg[r] = #{j : ... < 0}.
  /// stride must be a multiple of kSignLane; padding entries must be zero.
  void (*sign_product_counts)(const std::int8_t* table, std::size_t rows, std::size_t stride,
                              const std::int8_t* s, std::int32_t* pos, std::int32_t* neg);

  /// #{i : |slack_i| <= contact_tol, or slack_i * (normal_i . u) > 0 with
  ///  |normal_i . u| > parallel_tol}: hyperplanes met by the ray x + t u.
  std::size_t (*ray_hit_count)(const FlatSoA& flats, const double* u, double contact_tol,
                               double parallel_tol);

  /// out[i] = sum_k coords[k][i] * u[k], summed in increasing k.
  void (*project)(const double* const* coords, std::size_t count, std::size_t dim, const double* u,
                  double* out);
};

const Kernels& scalar_kernels();

/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2.
const Kernels* avx2_kernels();

/// The variant selected for this process.
const Kernels& active_kernels();

}  // namespace dualdepth::simd
