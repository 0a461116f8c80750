#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "welding.hpp"

namespace logaff {

struct CellComplex {
  struct Edge {
    int tail = -1, head = -1;  // -1: the edge runs off to infinity on that side
  };
  struct Cell2 {
    std::vector<std::pair<int, int>> boundary;  // (edge, sign)
    bool compact = true;
  };
  int vertices = 0;
  std::vector<Edge> edges;
  std::vector<Cell2> faces;
  std::vector<std::string> label0, label1, label2;  // optional

  int count(int k) const {
    return k == 0 ? vertices : k == 1 ? static_cast<int>(edges.size()) : static_cast<int>(faces.size());
  }
  // number of incidences of each edge with 2-cells
  std::vector<int> edge_degree() const {
    std::vector<int> deg(edges.size(), 0);
    for (const auto& f : faces)
      for (auto [e, _] : f.boundary) ++deg.at(e);
    return deg;
  }
  bool compact() const {
    for (const auto& e : edges)
      if (e.tail < 0 || e.head < 0) return false;
    for (const auto& f : faces)
      if (!f.compact) return false;
    return true;
  }
};

struct TopologyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline CellComplex cell_complex(const WeldedSpace& space) {
  if (space.dim != 2) throw DimensionError("cell complex needs a 2-dimensional space");
  CellComplex cx;
  auto vs = space.classes_of_codim(2);
  auto es = space.classes_of_codim(1);
  std::map<int, int> vid, eid;
  for (std::size_t i = 0; i < vs.size(); ++i) vid[vs[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < es.size(); ++i) eid[es[i]] = static_cast<int>(i);
  cx.vertices = static_cast<int>(vs.size());
  auto name_of = [&](const StratumRef& m) {
    const auto& d = space.domains[m.domain];
    std::string s = d.name().empty() ? "d" + std::to_string(m.domain) : d.name();
    const Cone& c = d.strata()[m.stratum].cone;
    for (int a : c)
      s += ":" + (m.domain < static_cast<int>(space.labels.size()) ? space.labels[m.domain][a]
                                                                    : "#" + std::to_string(a));
    return s;
  };
  for (int v : vs) cx.label0.push_back(name_of(space.strata[v].members.front()));
  for (int e : es) {
    const auto& m = space.strata[e].members.front();
    const Fan& fan = space.domains[m.domain].fan();
    int a = space.domains[m.domain].strata()[m.stratum].cone[0];
    CellComplex::Edge edge;
    for (int b : adjacent_indices(fan, a)) {
      if (!fan.has_cone({a, b})) continue;
      int cls = vid.at(space.class_of_cone(m.domain, {a, b}));
      if (cross2(fan.vectors[a], fan.vectors[b]) > 0) edge.head = cls;
      else edge.tail = cls;
    }
    cx.edges.push_back(edge);
    cx.label1.push_back(name_of(m));
  }
  for (int d = 0; d < static_cast<int>(space.domains.size()); ++d) {
    CellComplex::Cell2 f;
    const auto& dom = space.domains[d];
    for (int s : dom.codim_strata(1)) f.boundary.push_back({eid.at(space.class_of(d, s)), 1});
    f.compact = is_complete_2d(dom.fan());
    cx.faces.push_back(f);
    cx.label2.push_back(dom.name().empty() ? "d" + std::to_string(d) : dom.name());
  }
  return cx;
}

inline int euler_characteristic(const CellComplex& cx) {
  return cx.vertices - static_cast<int>(cx.edges.size()) + static_cast<int>(cx.faces.size());
}

// Connected components; returns component id per cell, indexed [dim][cell].
struct Components {
  int count = 0;
  std::array<std::vector<int>, 3> of;
};

inline Components components(const CellComplex& cx) {
  const int V = cx.vertices, E = static_cast<int>(cx.edges.size());
  DisjointSets ds(V + E + cx.faces.size());
  for (int e = 0; e < E; ++e) {
    if (cx.edges[e].tail >= 0) ds.join(V + e, cx.edges[e].tail);
    if (cx.edges[e].head >= 0) ds.join(V + e, cx.edges[e].head);
  }
  for (std::size_t f = 0; f < cx.faces.size(); ++f)
    for (auto [e, _] : cx.faces[f].boundary) ds.join(V + E + f, V + e);
  Components c;
  std::map<std::size_t, int> ids;
  auto id = [&](std::size_t x) {
    auto r = ds.find(x);
    auto it = ids.find(r);
    if (it != ids.end()) return it->second;
    return ids[r] = c.count++;
  };
  for (int v = 0; v < V; ++v) c.of[0].push_back(id(v));
  for (int e = 0; e < E; ++e) c.of[1].push_back(id(V + e));
  for (std::size_t f = 0; f < cx.faces.size(); ++f) c.of[2].push_back(id(V + E + f));
  return c;
}

// Coherent orientation signs of 2-cells; ok[c] is false for non-orientable components.
struct Orientation {
  std::vector<int> sign;
  std::vector<bool> ok;
  bool all() const {
    for (bool b : ok)
      if (!b) return false;
    return true;
  }
};

inline Orientation orient(const CellComplex& cx) {
  auto comp = components(cx);
  Orientation o;
  o.sign.assign(cx.faces.size(), 0);
  o.ok.assign(comp.count, true);
  std::vector<std::vector<std::pair<int, int>>> inc(cx.edges.size());
  for (int f = 0; f < static_cast<int>(cx.faces.size()); ++f)
    for (auto [e, s] : cx.faces[f].boundary) inc[e].push_back({f, s});
  for (int e = 0; e < static_cast<int>(cx.edges.size()); ++e)
    if (inc[e].size() > 2) o.ok[comp.of[1][e]] = false;
  for (int start = 0; start < static_cast<int>(cx.faces.size()); ++start) {
    if (o.sign[start]) continue;
    o.sign[start] = 1;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (auto [e, s] : cx.faces[f].boundary) {
        if (inc[e].size() != 2) continue;
        auto [g, t] = inc[e][0].first == f && inc[e][0].second == s ? inc[e][1] : inc[e][0];
        int want = -o.sign[f] * s * t;
        if (!o.sign[g]) {
          o.sign[g] = want;
          stack.push_back(g);
        } else if (o.sign[g] != want) {
          o.ok[comp.of[2][f]] = false;
        }
      }
    }
  }
  return o;
}

inline std::vector<int> coherent_orientation(const CellComplex& cx) {
  auto o = orient(cx);
  return o.all() ? o.sign : std::vector<int>{};
}

struct SurfaceClass {
  int genus = 0;
  bool orientable = true;
};

inline SurfaceClass classify_closed_surface(const CellComplex& cx) {
  if (!cx.compact()) throw TopologyError("complex is not compact");
  for (int d : cx.edge_degree()) {
    if (d < 2) throw TopologyError("complex has boundary");
    if (d > 2) throw TopologyError("an edge meets more than two 2-cells");
  }
  if (components(cx).count != 1) throw TopologyError("surface is not connected");
  SurfaceClass s;
  s.orientable = !coherent_orientation(cx).empty();
  int chi = euler_characteristic(cx);
  s.genus = s.orientable ? (2 - chi) / 2 : 2 - chi;
  return s;
}

struct Betti {
  std::array<int, 3> b{0, 0, 0};
  bool compact = true;
  int chi = 0;  // ordinary Euler characteristic
};

// Betti numbers from the surface structure: per component, connectedness, the top class and χ.
inline Betti surface_betti(const CellComplex& cx) {
  Betti out;
  auto comp = components(cx);
  auto deg = cx.edge_degree();
  std::vector<int> chi_c(comp.count, 0), bd_edges(comp.count, 0), bd_lines(comp.count, 0);
  std::vector<bool> compact(comp.count, true);
  for (int v = 0; v < cx.vertices; ++v) chi_c[comp.of[0][v]] += 1;
  for (std::size_t e = 0; e < cx.edges.size(); ++e) {
    int c = comp.of[1][e];
    chi_c[c] -= 1;
    if (cx.edges[e].tail < 0 || cx.edges[e].head < 0) compact[c] = false;
    if (deg[e] < 2) bd_edges[c] += 1;
  }
  for (std::size_t f = 0; f < cx.faces.size(); ++f) {
    chi_c[comp.of[2][f]] += 1;
    if (!cx.faces[f].compact) compact[comp.of[2][f]] = false;
  }
  // boundary chains: a chain with an end at infinity is a line
  {
    DisjointSets ds(cx.edges.size());
    std::map<int, int> seen_at;
    for (std::size_t e = 0; e < cx.edges.size(); ++e) {
      if (deg[e] >= 2) continue;
      for (int v : {cx.edges[e].tail, cx.edges[e].head}) {
        if (v < 0) continue;
        auto it = seen_at.find(v);
        if (it != seen_at.end()) ds.join(e, it->second);
        else seen_at[v] = static_cast<int>(e);
      }
    }
    std::map<std::size_t, int> open_ends;
    for (std::size_t e = 0; e < cx.edges.size(); ++e)
      if (deg[e] < 2) open_ends[ds.find(e)] += (cx.edges[e].tail < 0) + (cx.edges[e].head < 0);
    for (auto [r, ends] : open_ends)
      if (ends > 0) bd_lines[comp.of[1][r]] += 1;
  }
  auto ori = orient(cx);
  out.compact = true;
  for (int c = 0; c < comp.count; ++c) {
    int chi = chi_c[c] + bd_lines[c];
    out.chi += chi;
    out.b[0] += 1;
    int b2 = 0;
    if (compact[c]) {
      if (bd_edges[c] == 0 && ori.ok[c]) b2 = 1;
    } else {
      out.compact = false;
    }
    out.b[2] += b2;
    out.b[1] += 1 + b2 - chi;
  }
  return out;
}

struct DivisorInfo {
  enum Kind { Circle, Segment, Ray, Line };
  Kind kind = Circle;
  int b0 = 1, b1 = 0;
  int edges = 0;
  RatVector residue;
};

inline const char* kind_name(DivisorInfo::Kind k) {
  switch (k) {
    case DivisorInfo::Circle: return "circle";
    case DivisorInfo::Segment: return "segment";
    case DivisorInfo::Ray: return "ray";
    case DivisorInfo::Line: return "line";
  }
  return "?";
}

struct DivisorTopology {
  std::vector<DivisorInfo> components;
  std::map<std::pair<int, int>, int> crossings;  // (i <= j) -> count
  int crossing_total = 0;
};

inline DivisorTopology divisor_topology(const WeldedSpace& space) {
  if (space.dim != 2) throw DimensionError("divisor topology needs a 2-dimensional space");
  DivisorTopology out;
  for (const auto& dc : space.divisor_components) {
    DivisorInfo info;
    info.edges = static_cast<int>(dc.edges.size());
    info.residue = dc.residue;
    int closed_ends = 0, open_ends = 0;
    for (int e : dc.edges) {
      const auto& m = space.strata[e].members.front();
      const Fan& fan = space.domains[m.domain].fan();
      int a = space.domains[m.domain].strata()[m.stratum].cone[0];
      int cw = 0, ccw = 0;
      for (int b : adjacent_indices(fan, a)) {
        if (!fan.has_cone({a, b})) continue;
        int v = space.class_of_cone(m.domain, {a, b});
        (cross2(fan.vectors[a], fan.vectors[b]) > 0 ? ccw : cw) = 1;
        if (!space.strata[v].interior) ++closed_ends;
      }
      open_ends += (1 - cw) + (1 - ccw);
    }
    if (closed_ends + open_ends == 0) info.kind = DivisorInfo::Circle, info.b1 = 1;
    else if (open_ends == 0) info.kind = DivisorInfo::Segment;
    else if (closed_ends == 0) info.kind = DivisorInfo::Line;
    else info.kind = DivisorInfo::Ray;
    out.components.push_back(info);
  }
  for (const auto& c : space.crossings) {
    out.crossings[{c.comp_a, c.comp_b}] += 1;
    out.crossing_total += 1;
  }
  return out;
}

struct NormalCrossingData {
  Betti betti;
  std::vector<std::pair<int, int>> components;  // (b0, b1) per divisor component
  int pair_points = 0;                          // points of D_i ∩ D_j
  int triple_points = 0;
};

inline std::array<int, 4> log_betti_from(const NormalCrossingData& d) {
  std::array<int, 4> lb{d.betti.b[0], d.betti.b[1], d.betti.b[2], 0};
  for (auto [b0, b1] : d.components) {
    lb[1] += b0;
    lb[2] += b1;
  }
  lb[2] += d.pair_points;
  lb[3] += d.triple_points;
  return lb;
}

struct CohomologyReport {
  Betti betti;
  DivisorTopology divisor;
  std::array<int, 4> log_betti{0, 0, 0, 0};
  bool formal = false;  // non-compact input: combinatorial Betti numbers
  int euler = 0;        // compactly supported
  bool orientable = true;
};

inline CohomologyReport log_cohomology_dims(const WeldedSpace& space) {
  auto cx = cell_complex(space);
  CohomologyReport r;
  r.betti = surface_betti(cx);
  r.divisor = divisor_topology(space);
  r.euler = euler_characteristic(cx);
  r.formal = !r.betti.compact;
  r.orientable = space.orientable;
  NormalCrossingData nc;
  nc.betti = r.betti;
  for (const auto& c : r.divisor.components) nc.components.push_back({c.b0, c.b1});
  nc.pair_points = r.divisor.crossing_total;
  r.log_betti = log_betti_from(nc);
  return r;
}

}  // namespace logaff
