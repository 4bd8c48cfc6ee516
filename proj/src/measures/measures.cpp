#include "dualdepth/measures.hpp"

#include "dualdepth/depth.hpp"
#include "dualdepth/random.hpp"
#include "dualdepth/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace dualdepth {
namespace {

constexpr std::size_t kSampleChunk = 1024;
constexpr std::size_t kMaxRejections = 100000;
constexpr std::size_t kSubsampleSize = 12;
constexpr std::size_t kResampleAttempts = 8;
constexpr std::size_t kRefineRounds = 8;
constexpr std::size_t kSearchStarts = 8;       // exact subsample centers tried as starts
constexpr std::size_t kClimbPatience = 12;     // non-improving steps before the step shrinks
constexpr std::size_t kClimbMaxEvals = 250;    // per climb
constexpr std::size_t kClimbSample = 2500;     // flats the climbs evaluate on
constexpr std::size_t kPolishEvals = 100;

// Streams of the derived seeds.
constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;
constexpr std::uint64_t kResampleStream = 0x7265ULL;
constexpr std::uint64_t kClimbStream = 0x636c696d62ULL;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// Modified Gram-Schmidt; false when the rows are (numerically) dependent.
bool orthonormalize(std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double before = norm(rows[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double p = dot(rows[i], rows[j]);
      for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] -= p * rows[j][k];
    }
    const double n = norm(rows[i]);
    if (!(n > 1e-12 * std::max(before, 1.0))) return false;
    for (double& x : rows[i]) x /= n;
  }
  return true;
}

// V^T (V q): the point of span(V) closest to q.
std::vector<double> project_to_span(const std::vector<std::vector<double>>& V, std::span<const double> q) {
  std::vector<double> out(q.size(), 0.0);
  for (const auto& v : V) {
    const double c = dot(v, q);
    for (std::size_t k = 0; k < q.size(); ++k) out[k] += c * v[k];
  }
  return out;
}

// Uniform in the unit ball of R^m.
std::vector<double> unit_ball(Rng& rng, std::size_t m) {
  std::vector<double> v(m);
  double n2 = 0;
  do {
    n2 = 0;
    for (double& x : v) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 == 0);
  const double r = std::pow(rng.uniform01(), 1.0 / static_cast<double>(m)) / std::sqrt(n2);
  for (double& x : v) x *= r;
  return v;
}

std::vector<std::vector<double>> random_subspace(Rng& rng, std::size_t c, std::size_t d) {
  for (;;) {
    std::vector<std::vector<double>> V(c, std::vector<double>(d));
    for (auto& row : V)
      for (double& x : row) x = rng.normal();
    if (orthonormalize(V)) return V;
  }
}

// Distance from `center` to the flat: |V center - V foot|.
double distance_to(const Flat& f, std::span<const double> center) {
  double s = 0;
  for (const auto& v : f.normals) {
    const double t = dot(v, center) - dot(v, f.foot);
    s += t * t;
  }
  return std::sqrt(s);
}

Flat flat_at(std::vector<std::vector<double>> V, std::span<const double> center, std::span<const double> z) {
  // Foot: V^T (V center + z).
  std::vector<double> foot(center.size(), 0.0);
  for (std::size_t j = 0; j < V.size(); ++j) {
    const double c = dot(V[j], center) + z[j];
    for (std::size_t k = 0; k < foot.size(); ++k) foot[k] += c * V[j][k];
  }
  return Flat{std::move(V), std::move(foot)};
}

Flat sample_one(const FlatMeasureSpec& spec, const std::vector<double>& cum_weight, Rng& rng) {
  const std::size_t d = spec.dim, c = spec.codim;
  switch (spec.kind) {
    case MeasureKind::kUniformAngleOffset: {
      auto V = random_subspace(rng, c, d);
      auto z = unit_ball(rng, c);
      for (double& x : z) x *= spec.radius;
      return flat_at(std::move(V), spec.center, z);
    }
    case MeasureKind::kGaussianOffset: {
      auto V = random_subspace(rng, c, d);
      std::vector<double> z(c);
      for (std::size_t tries = 0;; ++tries) {
        if (tries == kMaxRejections) throw InputError("gaussian-offset: truncation radius rejects every draw");
        for (std::size_t j = 0; j < c; ++j) z[j] = (j == 0 ? spec.mean_offset : 0.0) + spec.sigma * rng.normal();
        if (norm(z) <= spec.radius) break;
      }
      return flat_at(std::move(V), spec.center, z);
    }
    case MeasureKind::kSmoothedPointMasses: {
      const double r = rng.uniform01() * cum_weight.back();
      const std::size_t a = static_cast<std::size_t>(
          std::upper_bound(cum_weight.begin(), cum_weight.end(), r) - cum_weight.begin());
      const Flat& atom = spec.atoms[std::min(a, spec.atoms.size() - 1)].flat;
      if (spec.smoothing == 0) return atom;
      for (std::size_t tries = 0; tries < kMaxRejections; ++tries) {
        auto V = atom.normals;
        for (auto& v : V) {
          auto e = unit_ball(rng, d);
          for (std::size_t k = 0; k < d; ++k) v[k] += spec.smoothing * e[k];
        }
        auto e = unit_ball(rng, d);
        std::vector<double> q(atom.foot);
        for (std::size_t k = 0; k < d; ++k) q[k] += spec.smoothing * e[k];
        if (!orthonormalize(V)) continue;
        Flat f{V, project_to_span(V, q)};
        if (distance_to(f, spec.center) <= spec.radius) return f;
      }
      throw InputError("smoothed point masses: support radius rejects every draw");
    }
  }
  throw InputError("unknown measure kind");
}

template <class Fn>
void parallel_chunks(std::size_t chunks, Fn&& fn) {
  const std::size_t threads = std::min(default_thread_count(), chunks);
  if (threads <= 1) {
    for (std::size_t j = 0; j < chunks; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t j = t; j < chunks; j += threads) fn(j);
    });
  for (auto& th : pool) th.join();
}

// Flats reduced to hyperplanes of the (k+1)-dimensional probe space: the flat
// meets the half-flat L + R_{>=0} Q w iff it is met by the ray from 0 along w.
struct ReducedFamily {
  std::size_t dim = 0;
  std::vector<std::vector<double>> normal;  // normal[k][i]
  std::vector<double> slack;

  std::size_t size() const { return slack.size(); }
  std::size_t hits(std::span<const double> w) const {
    std::vector<const double*> cols;
    for (const auto& c : normal) cols.push_back(c.data());
    simd::FlatSoA soa{cols.data(), slack.data(), slack.size(), dim};
    return simd::active_kernels().ray_hit_count(soa, w.data(), kContactTol, kParallelTol);
  }
};

double small_det(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    if (a[p][c] == 0) return 0;
    if (p != c) std::swap(a[p], a[c]), det = -det;
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// Geometry of the half-flats bounded by L: orthonormal directions B of L and
// an orthonormal basis Q of their complement (identity when L is a point).
struct HalfFlatFrame {
  std::vector<double> a;
  std::vector<std::vector<double>> B, Q;
};

HalfFlatFrame make_frame(const AffineFlat& L, std::size_t d) {
  HalfFlatFrame fr;
  fr.a = L.point;
  fr.B = L.directions;
  if (!orthonormalize(fr.B)) throw InputError("transversal directions are linearly dependent");
  if (fr.B.empty()) {
    for (std::size_t k = 0; k < d; ++k) {
      fr.Q.emplace_back(d, 0.0);
      fr.Q.back()[k] = 1.0;
    }
    return fr;
  }
  auto basis = fr.B;
  for (std::size_t k = 0; k < d && fr.Q.size() + fr.B.size() < d; ++k) {
    std::vector<double> e(d, 0.0);
    e[k] = 1.0;
    auto trial = basis;
    trial.push_back(e);
    if (orthonormalize(trial)) {
      basis = trial;
      fr.Q.push_back(trial.back());
    }
  }
  return fr;
}

// Reduction: with A0 = V B and the cofactors g of the last column of
// [A0 | col], the flat meets L + t w at t = (g . V(p - a)) / (g . V w).
ReducedFamily reduce(const std::vector<Flat>& flats, const HalfFlatFrame& fr) {
  const std::size_t m = fr.Q.size();
  ReducedFamily out;
  out.dim = m;
  out.normal.assign(m, std::vector<double>(flats.size()));
  out.slack.resize(flats.size());
  for (std::size_t i = 0; i < flats.size(); ++i) {
    const auto& V = flats[i].normals;
    const std::size_t c = V.size();
    std::vector<double> g(c, 1.0);
    if (c > 1) {
      std::vector<std::vector<double>> A0(c, std::vector<double>(c - 1));
      for (std::size_t r = 0; r < c; ++r)
        for (std::size_t j = 0; j + 1 < c; ++j) A0[r][j] = dot(V[r], fr.B[j]);
      for (std::size_t r = 0; r < c; ++r) {
        std::vector<std::vector<double>> minor;
        for (std::size_t q = 0; q < c; ++q)
          if (q != r) minor.push_back(A0[q]);
        g[r] = ((r + c - 1) % 2 ? -1.0 : 1.0) * small_det(std::move(minor));
      }
      const double gn = norm(g);
      if (!(gn > 1e-12)) {  // L's directions are not transverse to this flat
        for (std::size_t k = 0; k < m; ++k) out.normal[k][i] = 0.0;
        out.slack[i] = 1.0;
        continue;
      }
      for (double& x : g) x /= gn;
    }
    double s = 0;
    for (std::size_t r = 0; r < c; ++r) s += g[r] * (dot(V[r], flats[i].foot) - dot(V[r], fr.a));
    out.slack[i] = s;
    for (std::size_t k = 0; k < m; ++k) {
      double e = 0;
      for (std::size_t r = 0; r < c; ++r) e += g[r] * dot(V[r], fr.Q[k]);
      out.normal[k][i] = e;
    }
  }
  return out;
}

struct ProbeMin {
  std::size_t count = std::numeric_limits<std::size_t>::max();
  std::vector<double> w;  // in probe space
  std::size_t trials = 0;
};

// Minimum hit count over a deterministic covering of the probe sphere plus
// seeded random refinement around the running minimum.
ProbeMin probe_minimum(const ReducedFamily& fam, std::size_t probes, std::uint64_t seed, bool refine) {
  const std::size_t m = fam.dim;
  auto dirs = sphere_covering(m, std::max<std::size_t>(probes, 2));
  ProbeMin best;
  auto evaluate = [&](const std::vector<std::vector<double>>& batch) {
    std::vector<std::size_t> counts(batch.size());
    parallel_chunks(batch.size(), [&](std::size_t j) { counts[j] = fam.hits(batch[j]); });
    for (std::size_t j = 0; j < batch.size(); ++j)
      if (counts[j] < best.count) best.count = counts[j], best.w = batch[j];
    best.trials += batch.size();
  };
  evaluate(dirs);
  if (!refine || m < 2) return best;
  const std::size_t per_round = std::max<std::size_t>(probes / (4 * kRefineRounds), 1);
  double spread = 0.25;
  for (std::size_t r = 0; r < kRefineRounds; ++r, spread *= 0.5) {
    Rng rng(seed, r);
    std::vector<std::vector<double>> batch;
    for (std::size_t j = 0; j < per_round; ++j) {
      std::vector<double> w(best.w);
      for (double& x : w) x += spread * rng.normal();
      const double n = norm(w);
      if (!(n > 0)) continue;
      for (double& x : w) x /= n;
      batch.push_back(std::move(w));
    }
    evaluate(batch);
  }
  return best;
}

VerificationReport verify_against(std::span<const FlatMeasureSpec> specs, const AffineFlat& L,
                                  const VerifyOptions& opts) {
  if (specs.empty()) throw InputError("verification needs at least one measure");
  if (opts.samples == 0 || opts.probes == 0) throw InputError("samples and probes must be positive");
  if (!(opts.tol_multiplier >= 0)) throw InputError("tolerance multiplier must be nonnegative");
  const std::size_t d = specs.front().dim, c = specs.front().codim;
  for (const auto& s : specs) {
    s.validate();
    if (s.dim != d || s.codim != c) throw InputError("measures must share dimension and codimension");
  }
  if (specs.size() != c)
    throw InputError("need one measure per codimension: " + std::to_string(c) + " measures, got " +
                     std::to_string(specs.size()));
  if (L.point.size() != d) throw InputError("transversal point has the wrong dimension");
  if (L.directions.size() + 1 != c)
    throw InputError("transversal must have dimension " + std::to_string(c - 1) + ", got " +
                     std::to_string(L.directions.size()));
  for (const auto& v : L.directions)
    if (v.size() != d) throw InputError("transversal direction has the wrong dimension");

  const auto frame = make_frame(L, d);
  const std::size_t k = d - c;
  VerificationReport rep;
  rep.bound = 1.0 / static_cast<double>(k + 2);
  rep.sample_size = opts.samples;
  rep.multiplier = opts.tol_multiplier;
  rep.std_error = std::sqrt(rep.bound * (1 - rep.bound) / static_cast<double>(opts.samples));
  rep.tolerance = std::max(opts.tolerance.value_or(0.0), opts.tol_multiplier * rep.std_error);
  rep.estimate = std::numeric_limits<double>::infinity();
  for (const auto& spec : specs) {
    const auto fam = reduce(sample_flats(spec, opts.samples, 1), frame);
    const auto pm = probe_minimum(fam, opts.probes, derive_seed(spec.seed, kProbeStream), true);
    const double est = static_cast<double>(pm.count) / static_cast<double>(opts.samples);
    rep.per_measure_estimate.push_back(est);
    rep.trials += pm.trials;
    if (est < rep.estimate) {
      rep.estimate = est;
      rep.min_count = pm.count;
      // Report the probe as a direction in R^d.
      rep.argmin.assign(d, 0.0);
      for (std::size_t j = 0; j < frame.Q.size(); ++j)
        for (std::size_t q = 0; q < d; ++q) rep.argmin[q] += pm.w[j] * frame.Q[j][q];
    }
  }
  rep.pass = rep.estimate >= rep.bound - rep.tolerance;
  return rep;
}

bool same_flat(const Flat& a, const Flat& b) { return a.normals == b.normals && a.foot == b.foot; }

// Minimum ray hit count from x on the given family: a covering of the probe
// sphere plus the same seeded refinement the verifier uses.
std::size_t sampled_depth(const std::vector<Flat>& flats, std::span<const double> x, std::uint64_t seed,
                          std::size_t scale = 1) {
  HalfFlatFrame fr;
  fr.a.assign(x.begin(), x.end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    fr.Q.emplace_back(x.size(), 0.0);
    fr.Q.back()[k] = 1.0;
  }
  const std::size_t probes = scale * (x.size() <= 2 ? 360 : 720);
  return probe_minimum(reduce(flats, fr), probes, seed, true).count;
}

// Up to kSearchStarts disjoint blocks of kSubsampleSize distinct hyperplanes
// in general position, as exact instances.
std::vector<Instance> exact_subsamples(const std::vector<Flat>& flats, std::size_t d) {
  std::vector<Instance> out;
  std::size_t next = 0;
  while (out.size() < kSearchStarts && next < flats.size()) {
    Instance F;
    F.dim = d;
    std::vector<const Flat*> picked;
    for (; next < flats.size() && picked.size() < kSubsampleSize; ++next) {
      const auto& f = flats[next];
      if (std::any_of(picked.begin(), picked.end(), [&](const Flat* q) { return same_flat(*q, f); })) continue;
      picked.push_back(&f);
      F.hyperplanes.push_back(Hyperplane{from_doubles(f.normals.front()), from_double(f.offset())});
    }
    // A short block (the measure has few distinct hyperplanes) is only a fallback.
    if (picked.size() < kSubsampleSize && !(out.empty() && !picked.empty())) break;
    if (check_general_position(F).ok()) out.push_back(std::move(F));
    if (picked.size() < kSubsampleSize) break;
    else if (out.empty() && next >= kSearchStarts * kSubsampleSize * 4) break;  // degenerate measure
  }
  return out;
}

}  // namespace

double Flat::offset() const {
  if (normals.size() != 1) throw InputError("offset() needs a hyperplane");
  return dot(normals.front(), foot);
}

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kUniformAngleOffset: return "uniform-angle-offset";
    case MeasureKind::kGaussianOffset: return "gaussian-offset";
    case MeasureKind::kSmoothedPointMasses: return "smoothed-point-masses";
  }
  return "?";
}

MeasureKind parse_measure_kind(std::string_view name) {
  if (name == "uniform-angle-offset") return MeasureKind::kUniformAngleOffset;
  if (name == "gaussian-offset") return MeasureKind::kGaussianOffset;
  if (name == "smoothed-point-masses") return MeasureKind::kSmoothedPointMasses;
  throw InputError("unknown measure kind '" + std::string(name) + "'");
}

void FlatMeasureSpec::validate() const {
  if (dim == 0) throw InputError("measure: dim must be positive");
  if (codim == 0 || codim > dim) throw InputError("measure: codim must be in [1, dim]");
  if (!center.empty() && center.size() != dim) throw InputError("measure: center has the wrong dimension");
  if (!(radius > 0) || !std::isfinite(radius)) throw InputError("measure: radius must be positive");
  switch (kind) {
    case MeasureKind::kUniformAngleOffset: break;
    case MeasureKind::kGaussianOffset:
      if (!(sigma > 0) || !std::isfinite(sigma)) throw InputError("measure: sigma must be positive");
      if (!(std::fabs(mean_offset) < radius)) throw InputError("measure: |mean_offset| must be below radius");
      break;
    case MeasureKind::kSmoothedPointMasses: {
      if (atoms.empty()) throw InputError("measure: smoothed point masses need atoms");
      if (!(smoothing >= 0) || !std::isfinite(smoothing)) throw InputError("measure: smoothing must be >= 0");
      const std::vector<double> ctr = center.empty() ? std::vector<double>(dim, 0.0) : center;
      for (const auto& a : atoms) {
        if (!(a.weight > 0) || !std::isfinite(a.weight)) throw InputError("measure: atom weights must be positive");
        if (a.flat.codim() != codim || a.flat.dim() != dim) throw InputError("measure: atom shape mismatch");
        for (std::size_t i = 0; i < a.flat.codim(); ++i) {
          if (a.flat.normals[i].size() != dim) throw InputError("measure: atom shape mismatch");
          for (std::size_t j = 0; j <= i; ++j)
            if (std::fabs(dot(a.flat.normals[i], a.flat.normals[j]) - (i == j ? 1.0 : 0.0)) > 1e-9)
              throw InputError("measure: atom normals must be orthonormal");
        }
        if (distance_to(a.flat, ctr) > radius) throw InputError("measure: atom outside the support radius");
      }
      break;
    }
  }
}

Flat make_flat(std::vector<std::vector<double>> normals, std::span<const double> point) {
  if (normals.empty()) throw InputError("flat needs at least one normal");
  for (const auto& v : normals)
    if (v.size() != point.size()) throw InputError("flat: dimension mismatch");
  if (!orthonormalize(normals)) throw InputError("flat: normals are linearly dependent");
  auto foot = project_to_span(normals, point);
  return Flat{std::move(normals), std::move(foot)};
}

std::vector<Flat> sample_flats(const FlatMeasureSpec& spec_in, std::size_t N, std::uint64_t stream) {
  if (N == 0) throw InputError("sample_flats: N must be at least 1");
  spec_in.validate();
  FlatMeasureSpec spec = spec_in;
  if (spec.center.empty()) spec.center.assign(spec.dim, 0.0);
  std::vector<double> cum;
  for (const auto& a : spec.atoms) cum.push_back((cum.empty() ? 0.0 : cum.back()) + a.weight);

  std::vector<Flat> out(N);
  const std::size_t chunks = (N + kSampleChunk - 1) / kSampleChunk;
  const std::uint64_t base = derive_seed(spec.seed, stream);
  parallel_chunks(chunks, [&](std::size_t j) {
    Rng rng(base, j);
    const std::size_t end = std::min(N, (j + 1) * kSampleChunk);
    for (std::size_t i = j * kSampleChunk; i < end; ++i) out[i] = sample_one(spec, cum, rng);
  });
  return out;
}

bool flat_intersects_ray(const Flat& flat, std::span<const double> origin, std::span<const double> u) {
  if (flat.codim() != 1) throw InputError("flat_intersects_ray: needs a hyperplane");
  if (origin.size() != flat.dim() || u.size() != flat.dim())
    throw InputError("flat_intersects_ray: dimension mismatch");
  const auto& n = flat.normals.front();
  const double slack = flat.offset() - dot(n, origin);
  const double along = dot(n, u);
  if (std::fabs(slack) <= kContactTol) return true;
  return std::fabs(along) > kParallelTol && slack * along > 0;
}

VerificationReport verify_dual_cpt_measure(const FlatMeasureSpec& spec, std::span<const double> x,
                                           const VerifyOptions& opts) {
  if (spec.codim != 1) throw InputError("verify_dual_cpt_measure: measure must be on hyperplanes");
  return verify_against(std::span(&spec, 1), AffineFlat{{x.begin(), x.end()}, {}}, opts);
}

VerificationReport verify_dual_ctr(std::span<const FlatMeasureSpec> specs, const AffineFlat& L,
                                   const VerifyOptions& opts) {
  return verify_against(specs, L, opts);
}

SampledCenter search_center_sampled(const FlatMeasureSpec& spec_in, std::size_t N) {
  if (spec_in.codim != 1) throw InputError("search_center_sampled: measure must be on hyperplanes");
  spec_in.validate();
  if (N == 0) throw InputError("search_center_sampled: N must be at least 1");
  FlatMeasureSpec spec = spec_in;
  if (spec.center.empty()) spec.center.assign(spec.dim, 0.0);
  const std::size_t d = spec.dim;

  SampledCenter out;
  std::vector<Flat> flats;
  std::vector<Instance> subs;
  for (std::size_t attempt = 0; attempt < kResampleAttempts && subs.empty(); ++attempt) {
    FlatMeasureSpec s = spec;
    if (attempt > 0) {
      s.seed = derive_seed(spec.seed, kResampleStream + attempt);
      ++out.resamples;
    }
    flats = sample_flats(s, N, 0);
    subs = exact_subsamples(flats, d);
  }

  // Starts: the support center and the exact dual centers of the subsamples,
  // ranked by sampled depth.
  const std::uint64_t probe_seed = derive_seed(spec.seed, kClimbStream);
  std::vector<std::pair<std::size_t, std::vector<double>>> starts;
  starts.emplace_back(sampled_depth(flats, spec.center, probe_seed), spec.center);
  for (const auto& F : subs) {
    auto y = to_doubles(max_depth_point(F).point);
    starts.emplace_back(sampled_depth(flats, y, probe_seed), std::move(y));
  }
  std::stable_sort(starts.begin(), starts.end(), [](const auto& p, const auto& q) { return p.first > q.first; });

  // Stochastic hill climbs on the sampled depth, one from every start, over a
  // prefix of the sample; equal moves are accepted so a walk can cross
  // plateaus of the piecewise-constant objective. Every evaluation draws
  // fresh refinement probes, so no walk can settle where one fixed probe set
  // is blind. The climbs are judged on the full sample, and the winner gets a
  // short small-step polish there.
  std::uint64_t evals = 0;
  auto climb = [&](const std::vector<Flat>& fam, std::vector<double> y0, std::size_t val, double step,
                   std::size_t max_evals, std::uint64_t stream) {
    Rng rng(probe_seed, stream);
    std::size_t idle = 0;
    for (std::size_t eval = 0; eval < max_evals && step > 1e-4 * spec.radius; ++eval) {
      std::vector<double> y(y0);
      for (double& c : y) c += step * rng.normal();
      const auto v = sampled_depth(fam, y, derive_seed(probe_seed, ++evals));
      if (v >= val) {
        idle = v > val ? 0 : idle + 1;
        val = v;
        y0 = std::move(y);
      } else {
        ++idle;
      }
      if (idle >= kClimbPatience) step *= 0.5, idle = 0;
    }
    return std::make_pair(val, std::move(y0));
  };
  const std::vector<Flat> prefix(flats.begin(), flats.begin() + std::min(flats.size(), kClimbSample));
  const std::uint64_t judge_seed = derive_seed(probe_seed, 0);
  std::vector<double> x = starts.front().second;
  std::size_t best = sampled_depth(flats, x, judge_seed, 4);
  const std::size_t start = best;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    auto y = climb(prefix, starts[i].second, sampled_depth(prefix, starts[i].second, probe_seed), 0.25 * spec.radius,
                   kClimbMaxEvals, 1 + i).second;
    const auto v = sampled_depth(flats, y, judge_seed, 4);
    if (v > best) best = v, x = std::move(y);
  }
  auto polished = climb(flats, x, sampled_depth(flats, x, probe_seed), 0.02 * spec.radius, kPolishEvals, 0);
  if (const auto v = sampled_depth(flats, polished.second, judge_seed, 4); v > best) best = v, x = std::move(polished.second);
  out.point = std::move(x);
  out.refined = best > start;
  return out;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("DUALDEPTH_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace dualdepth
