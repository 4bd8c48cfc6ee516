#include "dualdepth/io.hpp"

#include <cstdio>
#include <set>

namespace dualdepth {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(ParseErrorCode code, const std::string& what) { throw ParseError(code, what); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where,
                ParseMode mode, json* extra) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (known) continue;
    if (mode == ParseMode::kStrict) fail(ParseErrorCode::kSchema, "unknown field '" + key + "' in " + where);
    if (extra) (*extra)[key] = value;
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ParseErrorCode::kSchema, std::string("missing field '") + key + "' in " + where);
  return *it;
}

// Exact scalar: "p/q" or decimal string, or a JSON integer. JSON floats are
// rejected because their decimal text was already rounded by the writer.
Rational exact_scalar(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const RationalSyntaxError& e) {
      fail(ParseErrorCode::kBadNumber, where + ": " + e.what());
    }
  }
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rational(std::to_string(v.get<std::uint64_t>()));
    return Rational(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_number_float())
    fail(ParseErrorCode::kBadNumber, where + ": write non-integers as strings (\"p/q\" or decimal)");
  fail(ParseErrorCode::kSchema, where + ": expected a number");
}

// Floating scalar for measure parameters: JSON number or exact string.
double real_scalar(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(exact_scalar(v, where));
  fail(ParseErrorCode::kSchema, where + ": expected a number");
}

std::vector<double> real_vector(const json& v, const std::string& where, std::optional<std::size_t> dim) {
  if (!v.is_array()) fail(ParseErrorCode::kSchema, where + ": expected an array");
  if (dim && v.size() != *dim)
    fail(ParseErrorCode::kDimensionMismatch,
         where + ": expected " + std::to_string(*dim) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real_scalar(v[i], where));
  return out;
}

std::size_t size_field(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    fail(ParseErrorCode::kSchema, where + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

json real_array(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

FlatAtom parse_atom(const json& j, std::size_t dim, std::size_t codim, ParseMode mode, const std::string& where) {
  if (!j.is_object()) fail(ParseErrorCode::kSchema, where + ": expected an object");
  check_keys(j, {"normal", "offset", "normals", "point", "weight"}, where, mode, nullptr);
  FlatAtom atom;
  if (auto w = j.find("weight"); w != j.end()) atom.weight = real_scalar(*w, where + ".weight");
  try {
    if (j.contains("normal")) {
      if (codim != 1) fail(ParseErrorCode::kBadMeasure, where + ": 'normal'/'offset' atoms need codim 1");
      auto n = real_vector(j["normal"], where + ".normal", dim);
      const double b = real_scalar(require(j, "offset", where), where + ".offset");
      double n2 = 0;
      for (double x : n) n2 += x * x;
      if (n2 == 0) fail(ParseErrorCode::kZeroNormal, where + ": zero normal");
      std::vector<double> p(n);
      for (double& x : p) x *= b / n2;
      atom.flat = make_flat({n}, p);
    } else {
      const auto& rows = require(j, "normals", where);
      if (!rows.is_array() || rows.size() != codim)
        fail(ParseErrorCode::kDimensionMismatch, where + ": expected " + std::to_string(codim) + " normals");
      std::vector<std::vector<double>> V;
      for (const auto& r : rows) V.push_back(real_vector(r, where + ".normals", dim));
      atom.flat = make_flat(std::move(V), real_vector(require(j, "point", where), where + ".point", dim));
    }
  } catch (const InputError& e) {
    fail(ParseErrorCode::kBadMeasure, where + ": " + e.what());
  }
  return atom;
}

FlatMeasureSpec parse_measure(const json& j, std::size_t dim, ParseMode mode, const std::string& where) {
  if (!j.is_object()) fail(ParseErrorCode::kSchema, where + ": expected an object");
  check_keys(j, {"kind", "codim", "center", "radius", "mean_offset", "sigma", "atoms", "smoothing", "seed"}, where,
             mode, nullptr);
  FlatMeasureSpec s;
  s.dim = dim;
  const auto& kind = require(j, "kind", where);
  if (!kind.is_string()) fail(ParseErrorCode::kSchema, where + ".kind: expected a string");
  try {
    s.kind = parse_measure_kind(kind.get<std::string>());
  } catch (const InputError& e) {
    fail(ParseErrorCode::kBadMeasure, where + ": " + e.what());
  }
  if (auto it = j.find("codim"); it != j.end()) s.codim = size_field(*it, where + ".codim");
  if (auto it = j.find("center"); it != j.end()) s.center = real_vector(*it, where + ".center", dim);
  if (auto it = j.find("radius"); it != j.end()) s.radius = real_scalar(*it, where + ".radius");
  if (auto it = j.find("mean_offset"); it != j.end()) s.mean_offset = real_scalar(*it, where + ".mean_offset");
  if (auto it = j.find("sigma"); it != j.end()) s.sigma = real_scalar(*it, where + ".sigma");
  if (auto it = j.find("smoothing"); it != j.end()) s.smoothing = real_scalar(*it, where + ".smoothing");
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) fail(ParseErrorCode::kSchema, where + ".seed: expected a nonnegative integer");
    s.seed = it->get<std::uint64_t>();
  }
  if (s.codim == 0 || s.codim > dim) fail(ParseErrorCode::kBadMeasure, where + ": codim must be in [1, dim]");
  if (auto it = j.find("atoms"); it != j.end()) {
    if (!it->is_array()) fail(ParseErrorCode::kSchema, where + ".atoms: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      s.atoms.push_back(parse_atom((*it)[i], dim, s.codim, mode, where + ".atoms[" + std::to_string(i) + "]"));
  }
  try {
    s.validate();
  } catch (const InputError& e) {
    fail(ParseErrorCode::kBadMeasure, where + ": " + e.what());
  }
  return s;
}

json measure_json(const FlatMeasureSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["codim"] = s.codim;
  if (!s.center.empty()) j["center"] = real_array(s.center);
  j["radius"] = s.radius;
  if (s.kind == MeasureKind::kGaussianOffset) {
    j["mean_offset"] = s.mean_offset;
    j["sigma"] = s.sigma;
  }
  if (s.kind == MeasureKind::kSmoothedPointMasses) {
    j["smoothing"] = s.smoothing;
    json atoms = json::array();
    for (const auto& a : s.atoms) {
      json aj;
      json rows = json::array();
      for (const auto& v : a.flat.normals) rows.push_back(real_array(v));
      aj["normals"] = rows;
      aj["point"] = real_array(a.flat.foot);
      aj["weight"] = a.weight;
      atoms.push_back(aj);
    }
    j["atoms"] = atoms;
  }
  j["seed"] = s.seed;
  return j;
}

}  // namespace

const char* to_string(ParseErrorCode code) {
  switch (code) {
    case ParseErrorCode::kMalformedJson: return "MalformedJson";
    case ParseErrorCode::kSchema: return "Schema";
    case ParseErrorCode::kBadNumber: return "BadNumber";
    case ParseErrorCode::kZeroNormal: return "ZeroNormal";
    case ParseErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ParseErrorCode::kBadColor: return "BadColor";
    case ParseErrorCode::kDuplicateHyperplane: return "DuplicateHyperplane";
    case ParseErrorCode::kNotGeneralPosition: return "NotGeneralPosition";
    case ParseErrorCode::kBadMeasure: return "BadMeasure";
  }
  return "?";
}

json rational_array(std::span<const Rational> v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

json to_json(const Instance& F) {
  json j;
  j["format_version"] = kFormatVersion;
  j["dim"] = F.dim;
  json hs = json::array();
  for (const auto& h : F.hyperplanes) {
    json hj;
    hj["normal"] = rational_array(h.normal);
    hj["offset"] = to_string(h.offset);
    hs.push_back(hj);
  }
  j["hyperplanes"] = hs;
  if (F.colors) j["colors"] = *F.colors;
  json meta = json::object();
  for (const auto& [k, v] : F.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

InstanceFile parse_instance(std::string_view bytes, ParseMode mode) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    fail(ParseErrorCode::kMalformedJson, e.what());
  }
  if (!root.is_object()) fail(ParseErrorCode::kSchema, "top level must be an object");

  InstanceFile file;
  check_keys(root,
             {"format_version", "dim", "hyperplanes", "colors", "general_position", "metadata", "measure",
              "measures", "transversal"},
             "instance", mode, &file.extra);

  const auto& version = require(root, "format_version", "instance");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kFormatVersion)
    fail(ParseErrorCode::kSchema, "unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");

  Instance& F = file.instance;
  F.dim = size_field(require(root, "dim", "instance"), "dim");
  if (F.dim == 0) fail(ParseErrorCode::kSchema, "dim must be positive");

  const auto& hs = require(root, "hyperplanes", "instance");
  if (!hs.is_array()) fail(ParseErrorCode::kSchema, "hyperplanes: expected an array");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string where = "hyperplanes[" + std::to_string(i) + "]";
    const auto& h = hs[i];
    if (!h.is_object()) fail(ParseErrorCode::kSchema, where + ": expected an object");
    check_keys(h, {"normal", "offset"}, where, mode, nullptr);
    const auto& n = require(h, "normal", where);
    if (!n.is_array()) fail(ParseErrorCode::kSchema, where + ".normal: expected an array");
    if (n.size() != F.dim)
      fail(ParseErrorCode::kDimensionMismatch, where + ".normal: expected " + std::to_string(F.dim) +
                                                   " entries, got " + std::to_string(n.size()));
    Hyperplane hp;
    for (std::size_t k = 0; k < n.size(); ++k) hp.normal.push_back(exact_scalar(n[k], where + ".normal"));
    hp.offset = exact_scalar(require(h, "offset", where), where + ".offset");
    if (std::all_of(hp.normal.begin(), hp.normal.end(), [](const Rational& q) { return sgn(q) == 0; }))
      fail(ParseErrorCode::kZeroNormal, where + ": zero normal");
    F.hyperplanes.push_back(std::move(hp));
  }

  if (auto it = root.find("colors"); it != root.end()) {
    if (!it->is_array()) fail(ParseErrorCode::kSchema, "colors: expected an array");
    if (it->size() != F.size())
      fail(ParseErrorCode::kBadColor, "colors: expected one per hyperplane (" + std::to_string(F.size()) + ")");
    std::vector<int> colors;
    for (const auto& c : *it) {
      if (!c.is_number_integer()) fail(ParseErrorCode::kBadColor, "colors: expected integers");
      const auto v = c.get<std::int64_t>();
      if (v < 0 || v > static_cast<std::int64_t>(F.dim))
        fail(ParseErrorCode::kBadColor, "colors: " + std::to_string(v) + " outside [0, " + std::to_string(F.dim) + "]");
      colors.push_back(static_cast<int>(v));
    }
    F.colors = std::move(colors);
  }

  if (auto it = root.find("metadata"); it != root.end()) {
    if (!it->is_object()) fail(ParseErrorCode::kSchema, "metadata: expected an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) fail(ParseErrorCode::kSchema, "metadata." + k + ": expected a string");
      F.metadata[k] = v.get<std::string>();
    }
  }

  if (auto it = root.find("general_position"); it != root.end()) {
    if (!it->is_boolean()) fail(ParseErrorCode::kSchema, "general_position: expected a boolean");
    file.general_position_declared = it->get<bool>();
  }
  if (file.general_position_declared) {
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = i + 1; j < F.size(); ++j)
        if (same_hyperplane(F.hyperplanes[i], F.hyperplanes[j]))
          fail(ParseErrorCode::kDuplicateHyperplane,
               "hyperplanes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    const auto gp = check_general_position(F);
    if (!gp.ok()) {
      std::string idx;
      for (std::size_t i : gp.violation) idx += (idx.empty() ? "" : ",") + std::to_string(i);
      fail(ParseErrorCode::kNotGeneralPosition,
           std::string(gp.kind == GeneralPosition::Kind::kDependentNormals ? "dependent normals"
                                                                            : "common point") +
               " at {" + idx + "}");
    }
  }

  if (root.contains("measure") && root.contains("measures"))
    fail(ParseErrorCode::kSchema, "use either 'measure' or 'measures', not both");
  if (auto it = root.find("measure"); it != root.end())
    file.measures.push_back(parse_measure(*it, F.dim, mode, "measure"));
  if (auto it = root.find("measures"); it != root.end()) {
    if (!it->is_array()) fail(ParseErrorCode::kSchema, "measures: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      file.measures.push_back(parse_measure((*it)[i], F.dim, mode, "measures[" + std::to_string(i) + "]"));
  }

  if (auto it = root.find("transversal"); it != root.end()) {
    if (!it->is_object()) fail(ParseErrorCode::kSchema, "transversal: expected an object");
    check_keys(*it, {"point", "directions"}, "transversal", mode, nullptr);
    AffineFlat L;
    L.point = real_vector(require(*it, "point", "transversal"), "transversal.point", F.dim);
    if (auto d = it->find("directions"); d != it->end()) {
      if (!d->is_array()) fail(ParseErrorCode::kSchema, "transversal.directions: expected an array");
      for (const auto& v : *d) L.directions.push_back(real_vector(v, "transversal.directions", F.dim));
    }
    file.transversal = std::move(L);
  }
  return file;
}

std::string write_instance(const InstanceFile& file) {
  json j = to_json(file.instance);
  if (file.general_position_declared) j["general_position"] = true;
  if (file.measures.size() == 1) j["measure"] = measure_json(file.measures.front());
  if (file.measures.size() > 1) {
    json ms = json::array();
    for (const auto& m : file.measures) ms.push_back(measure_json(m));
    j["measures"] = ms;
  }
  if (file.transversal) {
    json t;
    t["point"] = real_array(file.transversal->point);
    json dirs = json::array();
    for (const auto& v : file.transversal->directions) dirs.push_back(real_array(v));
    t["directions"] = dirs;
    j["transversal"] = t;
  }
  for (const auto& [k, v] : file.extra.items())
    if (!j.contains(k)) j[k] = v;
  return j.dump(2) + "\n";
}

std::string write_instance(const Instance& instance) {
  InstanceFile file;
  file.instance = instance;
  return write_instance(file);
}

std::string instance_digest(const Instance& instance) {
  const std::string bytes = to_json(instance).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dualdepth
