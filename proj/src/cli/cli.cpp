#include "dualdepth/cli.hpp"

#include "dualdepth/depth.hpp"
#include "dualdepth/io.hpp"
#include "dualdepth/measures.hpp"
#include "dualdepth/tverberg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace dualdepth {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

RVec parse_exact_list(const std::string& s, std::size_t dim, const char* what) {
  RVec out;
  for (const auto& part : split(s, ',')) {
    try {
      out.push_back(parse_rational(part));
    } catch (const RationalSyntaxError& e) {
      throw InputError(std::string(what) + ": " + e.what());
    }
  }
  if (out.size() != dim)
    throw InputError(std::string(what) + ": expected " + std::to_string(dim) + " coordinates, got " +
                     std::to_string(out.size()));
  return out;
}

std::vector<double> parse_real_list(const std::string& s, std::size_t dim, const char* what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || end != part.c_str() + part.size()) {
      try {
        out.push_back(to_double(parse_rational(part)));
        continue;
      } catch (const RationalSyntaxError&) {
        throw InputError(std::string(what) + ": bad number '" + part + "'");
      }
    }
    out.push_back(v);
  }
  if (dim && out.size() != dim)
    throw InputError(std::string(what) + ": expected " + std::to_string(dim) + " coordinates, got " +
                     std::to_string(out.size()));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << bytes;
}

json real_array(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json index_array(std::span<const std::size_t> v) {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

json certificate_json(const DepthCertificate& c) {
  json j;
  j["point"] = rational_array(c.point);
  j["depth"] = c.depth;
  j["witness_direction"] = rational_array(c.witness_direction);
  j["bound"] = c.bound;
  j["meets_bound"] = c.meets_bound;
  return j;
}

json partition_json(const PartitionResult& p) {
  json j;
  j["found"] = true;
  json groups = json::array();
  for (const auto& g : p.groups) groups.push_back(index_array(g));
  j["groups"] = groups;
  j["witness"] = rational_array(p.witness);
  j["margin"] = to_string(p.margin);
  j["strict"] = p.strict;
  return j;
}

json report_json(const VerificationReport& r) {
  json j;
  j["estimate"] = r.estimate;
  j["min_count"] = r.min_count;
  j["argmin"] = real_array(r.argmin);
  j["bound"] = r.bound;
  j["trials"] = r.trials;
  j["sample_size"] = r.sample_size;
  j["std_error"] = r.std_error;
  j["multiplier"] = r.multiplier;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  if (!r.per_measure_estimate.empty()) j["per_measure_estimate"] = real_array(r.per_measure_estimate);
  return j;
}

struct Outcome {
  int code = kExitOk;
  json result;
  std::optional<std::string> digest;
  std::optional<std::string> raw;  // printed verbatim instead of a report
};

struct Ctx {
  std::string instance_path;
  bool lenient = false;

  InstanceFile load() const {
    return parse_instance(read_file(instance_path), lenient ? ParseMode::kLenient : ParseMode::kStrict);
  }
};

}  // namespace

int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual depth, central points and dual Tverberg partitions of hyperplane families", "dualdepth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Ctx ctx;
  std::function<Outcome()> action;
  auto with_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", ctx.instance_path, "Instance JSON file")->required();
    sub->add_flag("--lenient", ctx.lenient, "Keep unknown fields instead of rejecting them");
  };

  // gen
  std::string model = "random-rational", out_path;
  std::size_t gen_n = 0, gen_d = 0;
  std::uint64_t seed = 0;
  bool colored = false;
  auto* gen = app.add_subcommand("gen", "Generate a general-position instance");
  gen->add_option("--model", model, "uniform-sphere-tangent | random-rational | perturbed-grid");
  gen->add_option("--n", gen_n, "Number of hyperplanes")->required();
  gen->add_option("--d", gen_d, "Dimension")->required();
  gen->add_option("--seed", seed, "Seed");
  gen->add_flag("--colors", colored, "Color hyperplane i with i mod (d+1)");
  gen->add_option("--out", out_path, "Write the instance here and print a report");
  gen->callback([&] {
    action = [&]() -> Outcome {
      GenerateOptions o;
      o.colored = colored;
      InstanceFile file;
      file.instance = gen_instance(parse_model(model), gen_n, gen_d, seed, o);
      file.general_position_declared = true;
      const std::string bytes = write_instance(file);
      Outcome r;
      r.digest = instance_digest(file.instance);
      if (out_path.empty()) {
        r.raw = bytes;
        return r;
      }
      write_file(out_path, bytes);
      r.result["path"] = out_path;
      r.result["n"] = gen_n;
      r.result["dim"] = gen_d;
      r.result["regenerations"] = file.instance.metadata["regenerations"];
      return r;
    };
  });

  // depth
  std::string point_text;
  auto* depth = app.add_subcommand("depth", "Dual depth of a point");
  with_instance(depth);
  depth->add_option("--point", point_text, "Comma-separated exact coordinates, e.g. 1/4,1/4")->required();
  depth->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      const auto& F = file.instance;
      const auto x = parse_exact_list(point_text, F.dim, "--point");
      const auto res = dual_depth(F, x);
      Outcome r;
      r.digest = instance_digest(F);
      r.result["point"] = rational_array(x);
      r.result["depth"] = res.depth;
      r.result["witness_direction"] = rational_array(res.witness);
      r.result["contained"] = res.contained;
      return r;
    };
  });

  // center
  std::string method = "exact", start_text;
  FixedPointOptions fp;
  auto* center = app.add_subcommand("center", "Deepest point with a depth certificate");
  with_instance(center);
  center->add_option("--method", method, "exact | fixed-point");
  center->add_option("--start", start_text, "Fixed-point start (default: origin)");
  center->add_option("--max-iters", fp.max_iters, "Fixed-point iteration cap");
  center->add_option("--step-tol", fp.step_tol, "Fixed-point convergence threshold");
  center->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      const auto& F = file.instance;
      Outcome r;
      r.digest = instance_digest(F);
      DepthCertificate cert;
      if (method == "exact") {
        cert = max_depth_point(F);
      } else if (method == "fixed-point") {
        std::vector<double> x0 = start_text.empty() ? std::vector<double>(F.dim, 0.0)
                                                    : parse_real_list(start_text, F.dim, "--start");
        const auto fpr = center_fixed_point(F, x0, fp);
        cert.point = from_doubles(fpr.point);
        const auto d = dual_depth(F, cert.point);
        cert.depth = d.depth;
        cert.witness_direction = d.witness;
        cert.bound = depth_bound(F.size(), F.dim);
        cert.meets_bound = cert.depth >= cert.bound;
        r.result["iterations"] = fpr.iterations;
        r.result["converged"] = fpr.converged;
      } else {
        throw InputError("--method must be exact or fixed-point");
      }
      r.result["method"] = method;
      const json cj = certificate_json(cert);
      for (const auto& [k, v] : cj.items()) r.result[k] = v;
      r.code = cert.meets_bound ? kExitOk : kExitFail;
      return r;
    };
  });

  // tverberg-plane
  auto* plane = app.add_subcommand("tverberg-plane", "Circular-order partition of 3n lines");
  with_instance(plane);
  plane->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      const auto res = dual_tverberg_plane(file.instance);
      Outcome r;
      r.digest = instance_digest(file.instance);
      r.result = partition_json(res);
      r.code = sgn(res.margin) >= 0 ? kExitOk : kExitFail;
      return r;
    };
  });

  // tverberg-search
  std::size_t groups = 0;
  auto* search = app.add_subcommand("tverberg-search", "Exhaustive search for a strict partition");
  with_instance(search);
  search->add_option("--groups", groups, "Number of groups")->required();
  search->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      Outcome r;
      r.digest = instance_digest(file.instance);
      if (auto res = dual_tverberg_search(file.instance, groups)) {
        r.result = partition_json(*res);
      } else {
        r.result["found"] = false;
        r.code = kExitFail;
      }
      return r;
    };
  });

  // colorful
  std::size_t colorful_r = 0;
  auto* colorful = app.add_subcommand("colorful", "Search for disjoint colorful families with a common point");
  with_instance(colorful);
  colorful->add_option("--r", colorful_r, "Number of families")->required();
  colorful->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      const auto rep = colorful_dual_tverberg_search(file.instance, colorful_r);
      Outcome r;
      r.digest = instance_digest(file.instance);
      if (rep.result) {
        r.result = partition_json(*rep.result);
      } else {
        r.result["found"] = false;
        r.code = kExitFail;
      }
      r.result["preconditions_met"] = rep.preconditions_met;
      r.result["precondition_notes"] = rep.precondition_notes;
      return r;
    };
  });

  // verify-measure
  VerifyOptions vopt;
  std::size_t measure_index = 0, search_samples = 0;
  double tol = -1;
  auto* vmeas = app.add_subcommand("verify-measure", "Monte Carlo check of the ray bound for a measure on hyperplanes");
  with_instance(vmeas);
  vmeas->add_option("--point", point_text, "Candidate center (default: sampled center search)");
  vmeas->add_option("--measure-index", measure_index, "Which measure stanza to use");
  vmeas->add_option("--samples", vopt.samples, "Sample size N");
  vmeas->add_option("--search-samples", search_samples, "Sample size for the center search (default N)");
  vmeas->add_option("--probes", vopt.probes, "Ray probes");
  vmeas->add_option("--tol-mult", vopt.tol_multiplier, "Tolerance in binomial standard errors");
  vmeas->add_option("--tol", tol, "Absolute tolerance floor");
  vmeas->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      if (measure_index >= file.measures.size()) throw InputError("no measure stanza at --measure-index");
      const auto& spec = file.measures[measure_index];
      if (tol >= 0) vopt.tolerance = tol;
      Outcome r;
      r.digest = instance_digest(file.instance);
      std::vector<double> x;
      json search_info;
      if (point_text.empty()) {
        const auto sc = search_center_sampled(spec, search_samples ? search_samples : vopt.samples);
        x = sc.point;
        search_info["resamples"] = sc.resamples;
        search_info["refined"] = sc.refined;
      } else {
        x = parse_real_list(point_text, spec.dim, "--point");
      }
      const auto rep = verify_dual_cpt_measure(spec, x, vopt);
      r.result = report_json(rep);
      r.result["point"] = real_array(x);
      r.result["seed"] = spec.seed;
      if (!search_info.is_null()) r.result["search"] = search_info;
      r.code = rep.pass ? kExitOk : kExitFail;
      return r;
    };
  });

  // verify-transversal
  std::vector<std::string> direction_texts;
  auto* vtr = app.add_subcommand("verify-transversal", "Monte Carlo check of a candidate transversal flat");
  with_instance(vtr);
  vtr->add_option("--point", point_text, "Point of L (overrides the file's point)");
  vtr->add_option("--direction", direction_texts, "Direction of L (repeatable; replaces the file's directions)");
  vtr->add_option("--samples", vopt.samples, "Sample size N per measure");
  vtr->add_option("--probes", vopt.probes, "Half-flat probes");
  vtr->add_option("--tol-mult", vopt.tol_multiplier, "Tolerance in binomial standard errors");
  vtr->add_option("--tol", tol, "Absolute tolerance floor");
  vtr->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      if (file.measures.empty()) throw InputError("instance has no measures");
      if (tol >= 0) vopt.tolerance = tol;
      AffineFlat L;
      if (file.transversal) L = *file.transversal;
      if (!file.transversal && point_text.empty())
        throw InputError("no transversal in the file; pass --point (and --direction as needed)");
      if (!point_text.empty()) L.point = parse_real_list(point_text, file.instance.dim, "--point");
      if (!direction_texts.empty()) {
        L.directions.clear();
        for (const auto& d : direction_texts)
          L.directions.push_back(parse_real_list(d, file.instance.dim, "--direction"));
      }
      const auto rep = verify_dual_ctr(file.measures, L, vopt);
      Outcome r;
      r.digest = instance_digest(file.instance);
      r.result = report_json(rep);
      json seeds = json::array();
      for (const auto& m : file.measures) seeds.push_back(m.seed);
      r.result["seeds"] = seeds;
      r.code = rep.pass ? kExitOk : kExitFail;
      return r;
    };
  });

  // plot
  std::vector<std::string> plot_points, plot_triangles, plot_rays;
  std::string witness_text, viewport_text;
  bool partition_overlay = false;
  auto* plot = app.add_subcommand("plot", "Render a planar instance as SVG");
  with_instance(plot);
  plot->add_option("--out", out_path, "Write the SVG here and print a report");
  plot->add_option("--point", plot_points, "Marked point x,y (repeatable)");
  plot->add_option("--triangle", plot_triangles, "Triangle from hyperplane indices i,j,k (repeatable)");
  plot->add_option("--ray", plot_rays, "Ray ox,oy:dx,dy (repeatable)");
  plot->add_option("--witness", witness_text, "Witness marker x,y");
  plot->add_option("--viewport", viewport_text, "xmin,ymin,xmax,ymax");
  plot->add_flag("--partition", partition_overlay, "Overlay the circular-order partition");
  plot->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      const auto& F = file.instance;
      SvgOverlays ov;
      for (const auto& p : plot_points) ov.points.push_back(parse_real_list(p, 2, "--point"));
      for (const auto& t : plot_triangles) {
        std::vector<std::size_t> idx;
        for (double v : parse_real_list(t, 3, "--triangle")) {
          if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw InputError("--triangle: expected hyperplane indices");
          idx.push_back(static_cast<std::size_t>(v));
        }
        ov.triangles.push_back(std::move(idx));
      }
      for (const auto& ray : plot_rays) {
        const auto parts = split(ray, ':');
        if (parts.size() != 2) throw InputError("--ray: expected ox,oy:dx,dy");
        ov.rays.push_back(SvgRay{parse_real_list(parts[0], 2, "--ray"), parse_real_list(parts[1], 2, "--ray")});
      }
      if (!witness_text.empty()) ov.witness = parse_real_list(witness_text, 2, "--witness");
      if (!viewport_text.empty()) {
        const auto v = parse_real_list(viewport_text, 4, "--viewport");
        ov.viewport = std::array<double, 4>{v[0], v[1], v[2], v[3]};
      }
      if (partition_overlay) {
        const auto part = dual_tverberg_plane(F);
        for (const auto& g : part.groups) ov.triangles.push_back(g);
        ov.witness = to_doubles(part.witness);
      }
      const std::string svg = render_svg(F, ov);
      Outcome r;
      r.digest = instance_digest(F);
      if (out_path.empty()) {
        r.raw = svg;
        return r;
      }
      write_file(out_path, svg);
      r.result["path"] = out_path;
      r.result["bytes"] = svg.size();
      return r;
    };
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Parse an instance and check general position");
  with_instance(validate);
  validate->callback([&] {
    action = [&]() -> Outcome {
      const auto file = ctx.load();
      const auto& F = file.instance;
      const auto gp = check_general_position(F);
      Outcome r;
      r.digest = instance_digest(F);
      r.result["dim"] = F.dim;
      r.result["hyperplanes"] = F.size();
      r.result["colored"] = F.colors.has_value();
      r.result["measures"] = file.measures.size();
      r.result["transversal"] = file.transversal.has_value();
      json g;
      g["ok"] = gp.ok();
      g["kind"] = gp.kind == GeneralPosition::Kind::kOk                  ? "ok"
                  : gp.kind == GeneralPosition::Kind::kDependentNormals ? "dependent-normals"
                                                                        : "common-point";
      g["violation"] = index_array(gp.violation);
      r.result["general_position"] = g;
      r.code = gp.ok() ? kExitOk : kExitFail;
      return r;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitInput;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = action();
  } catch (const ParseError& e) {
    err << "dualdepth: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateInstance& e) {
    err << "dualdepth: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateSubfamily& e) {
    err << "dualdepth: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnsupportedDimension& e) {
    err << "dualdepth: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "dualdepth: " << e.what() << "\n";
    return kExitInput;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (outcome.raw) {
    out << *outcome.raw;
    return outcome.code;
  }
  json report;
  report["command"] = json(std::vector<std::string>(args.begin(), args.end()));
  report["version"] = kVersion;
  if (outcome.digest) report["instance_digest"] = *outcome.digest;
  report["result"] = outcome.result;
  report["timing_ms"] = ms;
  out << report.dump(2) << "\n";
  return outcome.code;
}

}  // namespace dualdepth
