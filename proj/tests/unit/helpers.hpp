#pragma once

#include "dualdepth/geometry.hpp"
#include "dualdepth/rational.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace testing {

using dualdepth::Hyperplane;
using dualdepth::Instance;
using dualdepth::Rational;
using dualdepth::RVec;

inline Rational q(const char* s) { return dualdepth::parse_rational(s); }

inline RVec v(std::initializer_list<const char*> xs) {
  RVec out;
  for (const char* x : xs) out.push_back(q(x));
  return out;
}

inline RVec vi(std::initializer_list<long> xs) {
  RVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline Hyperplane h(std::initializer_list<long> normal, long offset) { return Hyperplane{vi(normal), Rational(offset)}; }

inline Instance family(std::size_t dim, std::initializer_list<Hyperplane> hs) {
  Instance F;
  F.dim = dim;
  F.hyperplanes.assign(hs.begin(), hs.end());
  return F;
}

/// {x1 = 0, x2 = 0, x1 + x2 = 1}.
inline Instance triangle() { return family(2, {h({1, 0}, 0), h({0, 1}, 0), h({1, 1}, 1)}); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string test_path(const std::string& rel) { return std::string(DUALDEPTH_TEST_DIR) + "/" + rel; }

}  // namespace testing
