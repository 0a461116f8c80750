#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "polytope.hpp"

namespace logaff::svg {

struct Pt {
  double x, y;
};

inline Pt unit(const RatVector& v) {
  double x = static_cast<double>(v[0]), y = static_cast<double>(v[1]);
  double n = std::hypot(x, y);
  return {x / n, y / n};
}

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::fabs(x) < 5e-4 ? 0.0 : x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

// Square [-1,1]^2 clipped to { a.u > 0 }.
inline std::vector<Pt> clip_half_plane(const RatVector& a) {
  std::vector<Pt> poly{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  double ax = static_cast<double>(a[0]), ay = static_cast<double>(a[1]);
  auto f = [&](Pt p) { return ax * p.x + ay * p.y; };
  std::vector<Pt> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Pt p = poly[i], q = poly[(i + 1) % poly.size()];
    double fp = f(p), fq = f(q);
    if (fp >= 0) out.push_back(p);
    if ((fp >= 0) != (fq >= 0)) {
      double t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

class Panel {
 public:
  Panel(double ox, double oy, double scale) : ox_(ox), oy_(oy), s_(scale) {}

  double X(double x) const { return ox_ + s_ * x; }
  double Y(double y) const { return oy_ - s_ * y; }

  void fan(std::ostream& out, const Fan& f, const std::vector<std::string>& labels) const {
    for (const auto& c : f.cones_of_size(2)) {
      Pt a = unit(f.vectors[c[0]]), b = unit(f.vectors[c[1]]);
      out << "<polygon class=\"cone\" points=\"" << num(X(0)) << "," << num(Y(0)) << " " << num(X(a.x)) << ","
          << num(Y(a.y)) << " " << num(X(b.x)) << "," << num(Y(b.y)) << "\" fill=\"gray\" fill-opacity=\"0.3\"/>\n";
    }
    for (int i = 0; i < f.size(); ++i) {
      Pt a = unit(f.vectors[i]);
      out << "<line class=\"ray\" x1=\"" << num(X(0)) << "\" y1=\"" << num(Y(0)) << "\" x2=\"" << num(X(0.9 * a.x))
          << "\" y2=\"" << num(Y(0.9 * a.y)) << "\" stroke=\"black\" marker-end=\"url(#arrow)\"/>\n";
      if (i < static_cast<int>(labels.size()))
        out << "<text x=\"" << num(X(a.x)) << "\" y=\"" << num(Y(a.y)) << "\" font-size=\"10\">"
            << escape(labels[i]) << "</text>\n";
    }
  }

  void half_space(std::ostream& out, const RatVector& a) const {
    auto poly = clip_half_plane(a);
    out << "<polygon class=\"halfspace\" points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) out << (i ? " " : "") << num(X(poly[i].x)) << "," << num(Y(poly[i].y));
    out << "\" fill=\"url(#hatch)\"/>\n";
  }

  void title(std::ostream& out, const std::string& t) const {
    out << "<text x=\"" << num(X(-1)) << "\" y=\"" << num(Y(1) - 4) << "\" font-size=\"11\">" << escape(t)
        << "</text>\n";
  }

 private:
  double ox_, oy_, s_;
};

inline std::string document(int panels, const std::string& body) {
  const int cols = std::min(panels, 4), rows = (panels + 3) / 4;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 160 * std::max(cols, 1) << "\" height=\""
      << 170 * std::max(rows, 1) << "\">\n"
      << "<defs>\n"
      << "<marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\">"
      << "<path d=\"M0,0 L6,3 L0,6 z\"/></marker>\n"
      << "<pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
      << "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"black\" "
      << "stroke-opacity=\"0.4\"/></pattern>\n"
      << "</defs>\n"
      << body << "</svg>\n";
  return out.str();
}

inline Panel panel_at(int i) { return Panel(80 + 160 * (i % 4), 90 + 170 * (i / 4), 60); }

inline void require_planar(int dim) {
  if (dim != 2) throw UnsupportedError("rendering needs 2-dimensional input");
}

inline std::string render(const Fan& f) {
  require_planar(f.dim);
  std::ostringstream body;
  panel_at(0).fan(body, f, {});
  return document(1, body.str());
}

inline std::string render(const WeldingSpec& spec) {
  require_planar(spec.dim());
  std::ostringstream body;
  for (std::size_t d = 0; d < spec.domains.size(); ++d) {
    auto p = panel_at(static_cast<int>(d));
    p.title(body, spec.domains[d].name());
    p.fan(body, spec.fan(static_cast<int>(d)), d < spec.labels.size() ? spec.labels[d] : std::vector<std::string>{});
  }
  return document(static_cast<int>(spec.domains.size()), body.str());
}

// One panel per piece: the fan of its domain and the half-planes of its constraints.
inline std::string render(const LogPolytope& poly) {
  require_planar(poly.dim());
  std::ostringstream body;
  for (std::size_t i = 0; i < poly.spec.pieces.size(); ++i) {
    const auto& piece = poly.spec.pieces[i];
    const auto& dom = poly.space.domains[piece.domain];
    auto p = panel_at(static_cast<int>(i));
    p.title(body, dom.name());
    for (const auto& c : piece.constraints) p.half_space(body, c.f.linear_part);
    p.fan(body, dom.fan(), poly.space.labels.at(piece.domain));
  }
  return document(static_cast<int>(poly.spec.pieces.size()), body.str());
}

}  // namespace logaff::svg
