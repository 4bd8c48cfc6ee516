#include "dualdepth/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dualdepth {
namespace {

constexpr double kCanvas = 600.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v == 0 ? 0.0 : v);  // no "-0.000"
  return buf;
}

struct View {
  double xmin, ymin, xmax, ymax;
  double sx(double x) const { return (x - xmin) / (xmax - xmin) * kCanvas; }
  double sy(double y) const { return (ymax - y) / (ymax - ymin) * kCanvas; }
};

View derive_view(const Instance& F, const SvgOverlays& ov) {
  if (ov.viewport) {
    const auto& v = *ov.viewport;
    if (!(v[2] > v[0]) || !(v[3] > v[1])) throw InputError("render_svg: empty viewport");
    return {v[0], v[1], v[2], v[3]};
  }
  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  auto include = [&](double x, double y) {
    lo[0] = std::min(lo[0], x), hi[0] = std::max(hi[0], x);
    lo[1] = std::min(lo[1], y), hi[1] = std::max(hi[1], y);
  };
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = i + 1; j < F.size(); ++j) {
      const std::size_t idx[2] = {i, j};
      try {
        const auto p = intersect_subfamily(F, idx);
        include(to_double(p[0]), to_double(p[1]));
      } catch (const DegenerateSubfamily&) {
      }
    }
  for (const auto& p : ov.points) include(p[0], p[1]);
  if (ov.witness) include((*ov.witness)[0], (*ov.witness)[1]);
  if (!std::isfinite(lo[0])) lo[0] = lo[1] = -1, hi[0] = hi[1] = 1;
  // Square view with a 20% margin.
  const double cx = 0.5 * (lo[0] + hi[0]), cy = 0.5 * (lo[1] + hi[1]);
  const double half = std::max({0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1]), 1.0}) * 1.2;
  return {cx - half, cy - half, cx + half, cy + half};
}

// Liang-Barsky clip of p + t q (t in [t0, t1]) to the view.
bool clip(const View& v, double px, double py, double qx, double qy, double& t0, double& t1) {
  const double p[4] = {-qx, qx, -qy, qy};
  const double q[4] = {px - v.xmin, v.xmax - px, py - v.ymin, v.ymax - py};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0) {
      if (q[k] < 0) return false;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0)
      t0 = std::max(t0, r);
    else
      t1 = std::min(t1, r);
  }
  return t0 <= t1;
}

void segment(std::ostringstream& os, const View& v, const std::string& id, const char* cls, double px, double py,
             double qx, double qy, double t0, double t1) {
  if (!clip(v, px, py, qx, qy, t0, t1)) return;
  os << "  <line id=\"" << id << "\" class=\"" << cls << "\" x1=\"" << num(v.sx(px + t0 * qx)) << "\" y1=\""
     << num(v.sy(py + t0 * qy)) << "\" x2=\"" << num(v.sx(px + t1 * qx)) << "\" y2=\"" << num(v.sy(py + t1 * qy))
     << "\"/>\n";
}

}  // namespace

std::string render_svg(const Instance& F, const SvgOverlays& ov) {
  if (F.dim != 2) throw UnsupportedDimension("render_svg: only planar instances can be drawn");
  F.validate();
  const View v = derive_view(F, ov);
  const double inf = std::numeric_limits<double>::infinity();

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n"
     << "  <style>.hyperplane{stroke:#333;stroke-width:1.5}.ray{stroke:#c33;stroke-width:1;stroke-dasharray:4 3}"
        ".triangle{fill-opacity:0.15;stroke:#36c;stroke-width:1}.point{fill:#393}.witness{fill:#c30}</style>\n"
     << "  <rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n";

  for (std::size_t t = 0; t < ov.triangles.size(); ++t) {
    const auto& tri = ov.triangles[t];
    if (tri.size() != 3) throw InputError("render_svg: triangle overlays need 3 hyperplane indices");
    os << "  <polygon id=\"t" << t << "\" class=\"triangle\" fill=\"hsl(" << (t * 137) % 360 << ",60%,50%)\" points=\"";
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t idx[2] = {tri[(i + 1) % 3], tri[(i + 2) % 3]};
      for (std::size_t k : idx)
        if (k >= F.size()) throw InputError("render_svg: triangle index out of range");
      const auto p = intersect_subfamily(F, idx);
      os << (i ? " " : "") << num(v.sx(to_double(p[0]))) << "," << num(v.sy(to_double(p[1])));
    }
    os << "\"/>\n";
  }

  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto& h = F.hyperplanes[i];
    const double a = to_double(h.normal[0]), b = to_double(h.normal[1]), c = to_double(h.offset);
    const double n2 = a * a + b * b;
    segment(os, v, "h" + std::to_string(i), "hyperplane", a * c / n2, b * c / n2, -b, a, -inf, inf);
  }

  for (std::size_t r = 0; r < ov.rays.size(); ++r) {
    const auto& ray = ov.rays[r];
    if (ray.origin.size() != 2 || ray.direction.size() != 2) throw InputError("render_svg: rays must be planar");
    segment(os, v, "r" + std::to_string(r), "ray", ray.origin[0], ray.origin[1], ray.direction[0], ray.direction[1],
            0, inf);
  }

  for (std::size_t p = 0; p < ov.points.size(); ++p) {
    if (ov.points[p].size() != 2) throw InputError("render_svg: points must be planar");
    os << "  <circle id=\"p" << p << "\" class=\"point\" cx=\"" << num(v.sx(ov.points[p][0])) << "\" cy=\""
       << num(v.sy(ov.points[p][1])) << "\" r=\"3\"/>\n";
  }
  if (ov.witness) {
    if (ov.witness->size() != 2) throw InputError("render_svg: witness must be planar");
    os << "  <circle id=\"witness\" class=\"witness\" cx=\"" << num(v.sx((*ov.witness)[0])) << "\" cy=\""
       << num(v.sy((*ov.witness)[1])) << "\" r=\"5\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dualdepth
