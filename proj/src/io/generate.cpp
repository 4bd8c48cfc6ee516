#include "dualdepth/io.hpp"
#include "dualdepth/random.hpp"

#include <cmath>
#include <numbers>

namespace dualdepth {
namespace {

constexpr std::size_t kMaxRegenerations = 1000;
constexpr std::int64_t kNormalRange = 20;       // random-rational normal entries
constexpr std::int64_t kOffsetRange = 60;       // random-rational offset numerators
constexpr std::int64_t kOffsetDenominator = 3;  // ... and denominators in [1, 3]
constexpr std::int64_t kTangentScale = 1 << 12; // stereographic denominator
constexpr std::int64_t kGridSpacing = 16;
constexpr std::int64_t kGridJitter = 3;

Rational integer(std::int64_t v) { return Rational(static_cast<long>(v)); }

Hyperplane random_rational(Rng& rng, std::size_t d) {
  Hyperplane h;
  for (;;) {
    h.normal.clear();
    bool nonzero = false;
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = rng.uniform_int(-kNormalRange, kNormalRange);
      nonzero = nonzero || v != 0;
      h.normal.push_back(integer(v));
    }
    if (nonzero) break;
  }
  h.offset = Rational(static_cast<long>(rng.uniform_int(-kOffsetRange, kOffsetRange)),
                      static_cast<unsigned long>(rng.uniform_int(1, kOffsetDenominator)));
  h.offset.canonicalize();
  return h;
}

// Tangent hyperplane to the unit sphere at the rational point obtained by
// inverse stereographic projection of a / D:
//   normal = s (2 a D, |a|^2 - D^2), offset = |a|^2 + D^2.
// The flip s = -1 (projecting from the other pole) keeps |a| <= D.
Hyperplane tangent_at(std::span<const double> u) {
  const std::size_t d = u.size();
  const bool flip = u[d - 1] > 0;
  const double s = flip ? -1.0 : 1.0;
  const double denom = 1.0 - s * u[d - 1];
  const Rational D = integer(kTangentScale);
  RVec a(d - 1);
  Rational a2 = 0;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    a[k] = integer(std::llround(s * u[k] / denom * static_cast<double>(kTangentScale)));
    a2 += a[k] * a[k];
  }
  Hyperplane h;
  for (std::size_t k = 0; k + 1 < d; ++k) h.normal.push_back(s * 2 * a[k] * D);
  h.normal.push_back(s * (a2 - D * D));
  h.offset = a2 + D * D;
  return h;
}

std::vector<Hyperplane> sphere_tangent(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<Hyperplane> out;
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(Hyperplane{{integer(i % 2 ? -1 : 1)}, integer(1 + static_cast<std::int64_t>(i / 2))});
    return out;
  }
  if (d == 2) {
    // Equally spaced tangent points, randomly rotated and slightly jittered.
    const double rot = rng.uniform(0, 2 * std::numbers::pi);
    const double jitter = std::numbers::pi / (4.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rot + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) +
                       rng.uniform(-jitter, jitter);
      const double u[2] = {std::cos(a), std::sin(a)};
      out.push_back(tangent_at(u));
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> u(d);
    double n2 = 0;
    do {
      n2 = 0;
      for (double& x : u) {
        x = rng.normal();
        n2 += x * x;
      }
    } while (n2 == 0);
    for (double& x : u) x /= std::sqrt(n2);
    out.push_back(tangent_at(u));
  }
  return out;
}

// Axis-parallel grid hyperplanes with small integer perturbations.
std::vector<Hyperplane> perturbed_grid(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<Hyperplane> out;
  const std::int64_t per_axis = static_cast<std::int64_t>((n + d - 1) / d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t axis = i % d;
    const std::int64_t slot = static_cast<std::int64_t>(i / d) - per_axis / 2;
    Hyperplane h;
    for (std::size_t k = 0; k < d; ++k)
      h.normal.push_back(integer((k == axis ? kGridSpacing : 0) + rng.uniform_int(-kGridJitter, kGridJitter)));
    h.offset = integer(slot * kGridSpacing * kGridSpacing + rng.uniform_int(-kGridJitter, kGridJitter));
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

GeneratorModel parse_model(std::string_view name) {
  if (name == "uniform-sphere-tangent") return GeneratorModel::kUniformSphereTangent;
  if (name == "random-rational") return GeneratorModel::kRandomRational;
  if (name == "perturbed-grid") return GeneratorModel::kPerturbedGrid;
  throw InputError("unknown generator model '" + std::string(name) + "'");
}

const char* to_string(GeneratorModel model) {
  switch (model) {
    case GeneratorModel::kUniformSphereTangent: return "uniform-sphere-tangent";
    case GeneratorModel::kRandomRational: return "random-rational";
    case GeneratorModel::kPerturbedGrid: return "perturbed-grid";
  }
  return "?";
}

Instance gen_instance(GeneratorModel model, std::size_t n, std::size_t d, std::uint64_t seed,
                      const GenerateOptions& opts) {
  if (n == 0 || d == 0) throw InputError("gen_instance: n and d must be positive");
  for (std::size_t attempt = 0; attempt < kMaxRegenerations; ++attempt) {
    Rng rng(seed, attempt);
    Instance F;
    F.dim = d;
    switch (model) {
      case GeneratorModel::kRandomRational:
        for (std::size_t i = 0; i < n; ++i) F.hyperplanes.push_back(random_rational(rng, d));
        break;
      case GeneratorModel::kUniformSphereTangent: F.hyperplanes = sphere_tangent(rng, n, d); break;
      case GeneratorModel::kPerturbedGrid: F.hyperplanes = perturbed_grid(rng, n, d); break;
    }
    bool nonzero = true;
    for (const auto& h : F.hyperplanes)
      nonzero = nonzero && std::any_of(h.normal.begin(), h.normal.end(), [](const Rational& q) { return sgn(q) != 0; });
    if (!nonzero || !check_general_position(F).ok()) continue;
    if (opts.colored) {
      std::vector<int> colors(n);
      for (std::size_t i = 0; i < n; ++i) colors[i] = static_cast<int>(i % (d + 1));
      F.colors = std::move(colors);
    }
    F.metadata["generator"] = to_string(model);
    F.metadata["seed"] = std::to_string(seed);
    F.metadata["regenerations"] = std::to_string(attempt);
    return F;
  }
  throw std::runtime_error("gen_instance: no general-position instance after " +
                           std::to_string(kMaxRegenerations) + " attempts");
}

}  // namespace dualdepth
