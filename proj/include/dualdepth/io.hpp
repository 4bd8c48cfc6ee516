#pragma once

// Instance files (versioned JSON), deterministic generators, SVG rendering.

#include "dualdepth/geometry.hpp"
#include "dualdepth/measures.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dualdepth {

inline constexpr int kFormatVersion = 1;

enum class ParseErrorCode {
  kMalformedJson,
  kSchema,  // missing/ill-typed field, unknown field in strict mode
  kBadNumber,
  kZeroNormal,
  kDimensionMismatch,
  kBadColor,
  kDuplicateHyperplane,
  kNotGeneralPosition,
  kBadMeasure,
};

const char* to_string(ParseErrorCode code);

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ParseErrorCode code() const noexcept { return code_; }

private:
  ParseErrorCode code_;
};

/// A parsed instance file. Optional stanzas ride along with the instance.
struct InstanceFile {
  Instance instance;
  bool general_position_declared = false;
  std::vector<FlatMeasureSpec> measures;  // "measure" (one) or "measures" (list)
  std::optional<AffineFlat> transversal;   // candidate L for verify-transversal
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();  // lenient mode only
};

enum class ParseMode { kStrict, kLenient };

InstanceFile parse_instance(std::string_view bytes, ParseMode mode = ParseMode::kStrict);
std::string write_instance(const InstanceFile& file);
std::string write_instance(const Instance& instance);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string instance_digest(const Instance& instance);

nlohmann::ordered_json to_json(const Instance& instance);
nlohmann::ordered_json rational_array(std::span<const Rational> v);

enum class GeneratorModel { kUniformSphereTangent, kRandomRational, kPerturbedGrid };

GeneratorModel parse_model(std::string_view name);
const char* to_string(GeneratorModel model);

struct GenerateOptions {
  bool colored = false;  // colors i mod (d+1)
};

/// Deterministic in (model, n, d, seed). Candidates failing the general
/// position check are regenerated from the next sub-seed; the number of
/// retries is recorded in metadata["regenerations"].
Instance gen_instance(GeneratorModel model, std::size_t n, std::size_t d, std::uint64_t seed,
                      const GenerateOptions& opts = {});

struct SvgRay {
  std::vector<double> origin, direction;
};

struct SvgOverlays {
  std::vector<std::vector<double>> points;
  std::vector<SvgRay> rays;
  std::vector<std::vector<std::size_t>> triangles;  // hyperplane index triples
  std::optional<std::vector<double>> witness;
  /// {xmin, ymin, xmax, ymax}; derived from the vertices when absent.
  std::optional<std::array<double, 4>> viewport;
};

class UnsupportedDimension : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::string render_svg(const Instance& F, const SvgOverlays& overlays = {});

}  // namespace dualdepth
