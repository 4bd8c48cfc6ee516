#pragma once

// Measures on affine flats, given generatively, and Monte Carlo checks of the
// central-point inequalities for them.
//
// A k-flat in R^d is stored as (V, p): an orthonormal basis V of the
// (d-k)-dimensional subspace orthogonal to the flat, and the foot point
// p in span(V) where that subspace meets the flat. Hyperplanes (codim 1) have
// V = {unit normal} and p = offset * normal.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dualdepth {

struct Flat {
  std::vector<std::vector<double>> normals;  // codim x dim, orthonormal rows
  std::vector<double> foot;

  std::size_t codim() const noexcept { return normals.size(); }
  std::size_t dim() const noexcept { return foot.size(); }
  /// Offset of a codim-1 flat: normal . foot.
  double offset() const;
};

/// Orthonormalizes `normals` and places the foot at the projection of
/// `point` (any point of the flat) onto their span.
Flat make_flat(std::vector<std::vector<double>> normals, std::span<const double> point);

/// An affine flat given by a point and spanning directions (used for L).
struct AffineFlat {
  std::vector<double> point;
  std::vector<std::vector<double>> directions;
};

enum class MeasureKind { kUniformAngleOffset, kGaussianOffset, kSmoothedPointMasses };

const char* to_string(MeasureKind kind);
MeasureKind parse_measure_kind(std::string_view name);

struct FlatAtom {
  Flat flat;
  double weight = 1.0;
};

struct FlatMeasureSpec {
  std::size_t dim = 2;
  std::size_t codim = 1;
  MeasureKind kind = MeasureKind::kUniformAngleOffset;
  /// Flats pass within `radius` of `center` (uniform: uniform in the ball;
  /// gaussian: truncated at the ball).
  std::vector<double> center;
  double radius = 1.0;
  double mean_offset = 0.0;  // gaussian: mean of the first foot coordinate
  double sigma = 1.0;        // gaussian: per-coordinate spread
  std::vector<FlatAtom> atoms;  // smoothed point masses
  double smoothing = 0.0;       // smoothing radius for atoms
  std::uint64_t seed = 0;

  /// Throws InputError on inconsistent parameters.
  void validate() const;
};

/// N independent flats. `stream` selects an independent replay of the same
/// measure (0 = search, 1 = verification). Bit-exact under (spec, N, stream).
std::vector<Flat> sample_flats(const FlatMeasureSpec& spec, std::size_t N, std::uint64_t stream = 0);

/// Containment and parallel tolerances for floating flats.
inline constexpr double kContactTol = 1e-12;
inline constexpr double kParallelTol = 1e-12;

/// True iff the hyperplane meets {origin + t u : t >= 0}. Containment always
/// counts; a parallel ray off the hyperplane never does.
bool flat_intersects_ray(const Flat& flat, std::span<const double> origin, std::span<const double> u);

struct VerificationReport {
  double estimate = 0;        // minimum empirical measure over the probes
  std::size_t min_count = 0;  // raw count behind `estimate`
  std::vector<double> argmin; // probe attaining it
  double bound = 0;
  std::size_t trials = 0;       // probes evaluated
  std::size_t sample_size = 0;  // N
  double std_error = 0;         // binomial SE at the bound
  double multiplier = 3;
  double tolerance = 0;
  bool pass = false;
  /// Per measure (verify_dual_ctr only).
  std::vector<double> per_measure_estimate;
};

struct VerifyOptions {
  std::size_t samples = 10000;
  std::size_t probes = 720;
  double tol_multiplier = 3.0;
  std::optional<double> tolerance;  // absolute floor; the report uses max(this, multiplier * SE)
};

VerificationReport verify_dual_cpt_measure(const FlatMeasureSpec& spec, std::span<const double> x,
                                           const VerifyOptions& opts = {});

struct SampledCenter {
  std::vector<double> point;
  std::size_t resamples = 0;
  bool refined = false;  // the local search improved on the best start
};

/// Best exact dual center among disjoint 12-hyperplane subsamples of an N-flat
/// search sample, then a stochastic hill climb on the probe-estimated ray
/// depth over the same sample. Uses only the search stream.
SampledCenter search_center_sampled(const FlatMeasureSpec& spec, std::size_t N);

/// Checks a candidate (d-k-1)-flat L against d-k measures on k-flats: every
/// half-flat M bounded by L must meet each measure in at least 1/(k+2).
VerificationReport verify_dual_ctr(std::span<const FlatMeasureSpec> specs, const AffineFlat& L,
                                   const VerifyOptions& opts = {});

/// Threads for the parallel probes: DUALDEPTH_THREADS, else the hardware count.
std::size_t default_thread_count();

}  // namespace dualdepth
