#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <vector>

namespace dualdepth {

/// Calls fn(const std::vector<std::size_t>&) for every k-subset of [0, n) in
/// lexicographic order. fn may return false to stop early (void fns never stop).
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if constexpr (std::is_same_v<decltype(fn(idx)), bool>) {
      if (!fn(idx)) return;
    } else {
      fn(idx);
    }
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace dualdepth
