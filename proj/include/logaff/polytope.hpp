#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "surface_topology.hpp"

namespace logaff {

struct Constraint {
  AffineFunctional f;  // f >= 0
  std::string name;    // optional continuation name
};

struct Piece {
  int domain = -1;
  std::vector<Constraint> constraints;
};

struct FaceSpec {
  std::vector<Piece> pieces;  // at most one per domain; unlisted domains are outside the polytope
  int orientation = 1;        // +1 or -1
};

struct HalfSpace {
  RatVector a;  // H = { u : a(u) > 0 }
  bool contains(const RatVector& u) const { return dot(a, u) > 0; }
};

struct PolytopeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TransversalityError : PolytopeError {
  using PolytopeError::PolytopeError;
};

// Optional rational: nullopt stands for an infinite end.
using Bound = std::optional<Rational>;

struct PCell0 {
  enum Kind { Vertex, DPoint, CornerPoint } kind = Vertex;
  int domain = -1;      // Vertex
  RatVector point;      // Vertex
  int edge_class = -1;  // DPoint
  Rational w;           // DPoint
  int vertex_class = -1;  // CornerPoint
};

struct PCell1 {
  enum Kind { Edge, Divisor } kind = Edge;
  int tail = -1, head = -1;  // -1: runs off to infinity
  int piece = -1, constraint = -1;  // Edge
  int edge_class = -1;              // Divisor
  Bound lo, hi;                     // Divisor: w-range
  int cover = 0;                    // Divisor: number of pieces on it
  int face = -1;                    // boundary face, or -1
};

struct PCell2 {
  int piece = -1;
  int domain = -1;
  std::vector<int> boundary;  // 1-cells in traversal order
  bool compact = true;
};

struct PolytopeFace {
  enum Kind { Singular, Log, Interior } kind = Interior;
  std::vector<int> cells;  // 1-cells
  AffineFunctional f;      // nonsingular faces
  std::string name;
  int hypersurface = -1;   // singular faces
};

inline const char* kind_name(PolytopeFace::Kind k) {
  switch (k) {
    case PolytopeFace::Singular: return "singular";
    case PolytopeFace::Log: return "log";
    case PolytopeFace::Interior: return "interior";
  }
  return "?";
}

struct LogPolytope {
  WeldedSpace space;
  FaceSpec spec;
  std::vector<PCell0> cells0;
  std::vector<PCell1> cells1;
  std::vector<PCell2> cells2;
  std::vector<PolytopeFace> faces;
  bool compact = true;

  int dim() const { return space.dim; }
  int count(PolytopeFace::Kind k) const {
    return static_cast<int>(std::count_if(faces.begin(), faces.end(), [&](const PolytopeFace& f) { return f.kind == k; }));
  }
  bool elementary() const { return spec.pieces.size() == 1; }
  const Piece* piece_of(int domain) const {
    for (const auto& p : spec.pieces)
      if (p.domain == domain) return &p;
    return nullptr;
  }
  // faces whose closure contains the 0-cell
  std::vector<int> faces_at(int c0) const {
    std::set<int> out;
    for (std::size_t i = 0; i < faces.size(); ++i)
      for (int c : faces[i].cells)
        if (cells1[c].tail == c0 || cells1[c].head == c0) out.insert(static_cast<int>(i));
    return {out.begin(), out.end()};
  }
  std::vector<int> nonsingular_faces_at(int c0) const {
    std::vector<int> out;
    for (int f : faces_at(c0))
      if (faces[f].kind != PolytopeFace::Singular) out.push_back(f);
    return out;
  }
};

namespace detail {

// Position along a planar direction class, used to order directions counter-clockwise from a base.
inline bool ccw_from(const RatVector& base, const RatVector& a, const RatVector& b) {
  auto half = [&](const RatVector& v) {
    Rational c = cross2(base, v);
    return (c > 0 || (c == 0 && dot(base, v) > 0)) ? 0 : 1;
  };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return cross2(a, b) > 0;
}

struct EdgeGeom {
  int constraint;
  RatVector dir, base;
  Bound lo, hi;
};

inline RatVector point_at(const EdgeGeom& e, const Rational& t) { return e.base + t * e.dir; }

// w-coordinate on the divisor of ray r
inline Rational w_of(const RatVector& r, const RatVector& u) { return cross2(r, u); }

struct ArcElem {
  enum Kind { Ray, Inside, Gap } kind;
  int ray = -1;
  Cone cone;
};

inline ArcElem classify_direction(const Fan& fan, const RatVector& v) {
  for (int i = 0; i < fan.size(); ++i)
    if (same_direction(fan.vectors[i], v)) return {ArcElem::Ray, i, {}};
  for (const auto& c : fan.cones_of_size(2))
    if (cone_contains(fan.resolve(c), v, true)) return {ArcElem::Inside, -1, c};
  return {ArcElem::Gap, -1, {}};
}

// Elements met sweeping counter-clockwise from `from` to `to` (full turn when `full`).
inline std::vector<ArcElem> sweep(const Fan& fan, const RatVector& from, const RatVector& to, bool full) {
  std::vector<RatVector> dirs;
  auto add = [&](const RatVector& v) {
    for (const auto& x : dirs)
      if (same_direction(x, v)) return;
    dirs.push_back(v);
  };
  add(from);
  auto offset_le_end = [&](const RatVector& v) {
    if (full) return true;
    if (same_direction(v, to)) return true;
    return ccw_from(from, v, to);
  };
  std::vector<RatVector> crit = fan.vectors;
  for (auto [x, y] : {std::pair{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) crit.push_back(RatVector::of_ints({x, y}));
  if (!full) crit.push_back(to);
  for (const auto& v : crit)
    if (offset_le_end(v)) add(v);
  std::sort(dirs.begin() + 1, dirs.end(), [&](const RatVector& a, const RatVector& b) { return ccw_from(from, a, b); });
  if (!full) {
    // drop anything past `to` (zero-length arcs keep only the start)
    std::vector<RatVector> kept;
    for (const auto& d : dirs) {
      kept.push_back(d);
      if (same_direction(d, to)) break;
    }
    dirs = kept;
  }
  std::vector<ArcElem> out;
  auto push = [&](ArcElem e) {
    if (!out.empty() && e.kind != ArcElem::Ray && out.back().kind == e.kind && out.back().cone == e.cone) return;
    out.push_back(e);
  };
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    push(classify_direction(fan, dirs[k]));
    bool last = k + 1 == dirs.size();
    if (last && !full) break;
    const RatVector& next = last ? dirs[0] : dirs[k + 1];
    push(classify_direction(fan, dirs[k] + next));
  }
  if (full && out.size() > 1 && out.front().kind != ArcElem::Ray && out.back().kind == out.front().kind &&
      out.back().cone == out.front().cone)
    out.pop_back();
  return out;
}

inline std::vector<EdgeGeom> piece_edges(const Piece& piece) {
  std::vector<EdgeGeom> edges;
  const auto& cs = piece.constraints;
  std::vector<bool> skip(cs.size(), false);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& a = cs[i].f.linear_part;
    if (a.dim() != 2) throw DimensionError("constraint is not planar");
    if (a.is_zero()) throw PolytopeError("constraint with zero linear part");
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (skip[i]) continue;
    const auto& a = cs[i].f.linear_part;
    const Rational& c = cs[i].f.constant;
    EdgeGeom e;
    e.constraint = static_cast<int>(i);
    e.dir = RatVector{a[1], -a[0]};
    e.base = Rational(-c / dot(a, a)) * a;
    bool empty = false;
    for (std::size_t j = 0; j < cs.size() && !empty; ++j) {
      if (j == i) continue;
      const auto& b = cs[j].f.linear_part;
      Rational slope = dot(b, e.dir);
      Rational val = cs[j].f(e.base);
      if (slope == 0) {
        if (cross2(a, b) == 0) {
          // parallel lines
          Rational ratio = b[0] != 0 ? b[0] / a[0] : b[1] / a[1];
          if (val == 0) {
            if (ratio > 0) {
              if (j > i) skip[j] = true;
              else empty = true;
            } else {
              throw PolytopeError("constraints " + std::to_string(i) + " and " + std::to_string(j) +
                                  " cut the piece down to a line");
            }
          } else if (val < 0) {
            empty = true;
          }
        }
        continue;
      }
      Rational t = -val / slope;
      if (slope > 0) {
        if (!e.lo || t > *e.lo) e.lo = t;
      } else {
        if (!e.hi || t < *e.hi) e.hi = t;
      }
    }
    if (empty) continue;
    if (e.lo && e.hi && *e.lo >= *e.hi) continue;
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeGeom& x, const EdgeGeom& y) { return angle_less(x.dir, y.dir); });
  return edges;
}

// Whether the piece has interior points: a piece with constraints but no edge is empty.
inline bool piece_nonempty(const Piece& p, const std::vector<EdgeGeom>& edges) {
  return p.constraints.empty() || !edges.empty();
}

}  // namespace detail

// A raw element of a piece boundary, before divisor pieces are split.
struct BoundaryItem {
  enum Kind { EdgeItem, DivisorItem } kind;
  int constraint = -1;
  int ray = -1;
  Bound lo, hi;
  // end points
  int start_key = -1, end_key = -1;
};

namespace detail {

struct ZeroKey {
  int kind;  // 0 vertex, 1 d-point, 2 corner
  int a;     // domain / edge class / vertex class
  RatVector p;
  Rational w;
  friend bool operator<(const ZeroKey& x, const ZeroKey& y) {
    return std::tie(x.kind, x.a, x.p, x.w) < std::tie(y.kind, y.a, y.p, y.w);
  }
};

}  // namespace detail

inline LogPolytope build_polytope(const WeldedSpace& space, const FaceSpec& spec);

namespace detail {

struct Builder {
  const WeldedSpace& space;
  LogPolytope poly;
  std::map<ZeroKey, int> zero_ids;

  Builder(const WeldedSpace& s, const FaceSpec& f) : space(s) {
    poly.space = s;
    poly.spec = f;
  }

  int zero(const ZeroKey& k) {
    auto it = zero_ids.find(k);
    if (it != zero_ids.end()) return it->second;
    PCell0 c;
    c.kind = static_cast<PCell0::Kind>(k.kind);
    if (k.kind == 0) c.domain = k.a, c.point = k.p;
    if (k.kind == 1) c.edge_class = k.a, c.w = k.w;
    if (k.kind == 2) c.vertex_class = k.a;
    poly.cells0.push_back(c);
    return zero_ids[k] = static_cast<int>(poly.cells0.size()) - 1;
  }
  int vertex(int d, const RatVector& p) { return zero({0, d, p, 0}); }
  int dpoint(int edge_class, const Rational& w) { return zero({1, edge_class, {}, w}); }
  int corner(int vertex_class) { return zero({2, vertex_class, {}, 0}); }

  struct DivPiece {
    int piece;
    int edge_class;
    Bound lo, hi;
    int lo_end = -1, hi_end = -1;  // 0-cells at infinite ends (corner or -1)
  };
  struct RawBoundary {
    // sequence: >= 0 edge index into edges, < 0 divisor piece -(k+1)
    std::vector<int> seq;
    bool compact = true;
  };

  std::vector<std::vector<EdgeGeom>> edges_of;  // per piece
  std::vector<DivPiece> divs;
  std::vector<RawBoundary> raw;
  std::vector<std::vector<std::pair<int, int>>> edge_ends;  // per piece per edge: (tail, head)

  void run() {
    const auto& spec = poly.spec;
    std::set<int> seen;
    for (std::size_t pi = 0; pi < spec.pieces.size(); ++pi) {
      const auto& piece = spec.pieces[pi];
      if (piece.domain < 0 || piece.domain >= static_cast<int>(space.domains.size()))
        throw PolytopeError("piece refers to a missing domain");
      if (!seen.insert(piece.domain).second) throw PolytopeError("two pieces in one domain");
      for (const auto& c : piece.constraints)
        if (!is_primitive_integral(c.f.linear_part))
          throw PolytopeError("linear part " + to_string(c.f.linear_part) + " is not primitive integral");
      process_piece(static_cast<int>(pi));
    }
    split_divisors();
    build_faces();
  }

  void process_piece(int pi) {
    const auto& piece = poly.spec.pieces[pi];
    const int d = piece.domain;
    const Fan& fan = space.domains[d].fan();
    auto edges = piece_edges(piece);
    if (!piece_nonempty(piece, edges)) throw PolytopeError("piece in domain " + std::to_string(d) + " is empty");
    edges_of.push_back(edges);
    RawBoundary rb;
    std::vector<std::pair<int, int>> ends(edges.size(), {-1, -1});
    const int m = static_cast<int>(edges.size());
    for (int k = 0; k < m; ++k) {
      const auto& e = edges[k];
      if (e.lo) ends[k].first = vertex(d, point_at(e, *e.lo));
      if (e.hi) ends[k].second = vertex(d, point_at(e, *e.hi));
    }
    auto edge_class_of_ray = [&](int r) { return space.class_of_cone(d, {r}); };
    auto corner_of = [&](const Cone& c) { return corner(space.class_of_cone(d, c)); };

    auto do_arc = [&](int last, int next, bool full, const RatVector& from, const RatVector& to) {
      auto elems = sweep(fan, from, to, full);
      // landing of the outgoing and incoming edges
      if (last >= 0) {
        const auto& e = elems.front();
        if (e.kind == ArcElem::Ray)
          ends[last].second = dpoint(edge_class_of_ray(e.ray), w_of(fan.vectors[e.ray], edges[last].base));
        else if (e.kind == ArcElem::Inside)
          throw TransversalityError("a face of the piece in domain " + std::to_string(d) +
                                    " runs into a corner of the divisor");
      }
      if (next >= 0) {
        const auto& e = elems.back();
        if (e.kind == ArcElem::Ray)
          ends[next].first = dpoint(edge_class_of_ray(e.ray), w_of(fan.vectors[e.ray], edges[next].base));
        else if (e.kind == ArcElem::Inside)
          throw TransversalityError("a face of the piece in domain " + std::to_string(d) +
                                    " runs into a corner of the divisor");
      }
      const int n = static_cast<int>(elems.size());
      std::vector<int> items;
      for (int k = 0; k < n; ++k) {
        const auto& e = elems[k];
        if (e.kind == ArcElem::Gap) rb.compact = false;
        if (e.kind != ArcElem::Ray) continue;
        DivPiece dp;
        dp.piece = pi;
        dp.edge_class = edge_class_of_ray(e.ray);
        const RatVector& r = fan.vectors[e.ray];
        bool at_start = !full && k == 0 && last >= 0;
        bool at_end = !full && k == n - 1 && next >= 0;
        if (at_start) dp.hi = w_of(r, edges[last].base);
        if (at_end) dp.lo = w_of(r, edges[next].base);
        if (dp.lo && dp.hi && *dp.lo >= *dp.hi)
          throw PolytopeError("piece in domain " + std::to_string(d) + " has no width along a divisor");
        auto neighbour = [&](int j) -> int {
          if (full) j = (j + n) % n;
          if (j < 0 || j >= n) return -1;
          const auto& x = elems[j];
          if (x.kind == ArcElem::Inside) return corner_of(x.cone);
          return -1;
        };
        if (!dp.hi) dp.hi_end = neighbour(k - 1);
        if (!dp.lo) dp.lo_end = neighbour(k + 1);
        divs.push_back(dp);
        rb.seq.push_back(-static_cast<int>(divs.size()));
      }
    };

    if (m == 0) {
      do_arc(-1, -1, true, RatVector::of_ints({1, 0}), RatVector::of_ints({1, 0}));
    } else {
      for (int k = 0; k < m; ++k) {
        rb.seq.push_back(k);
        const auto& e = edges[k];
        int nk = (k + 1) % m;
        if (e.hi) continue;
        const auto& n = edges[nk];
        if (n.lo) throw PolytopeError("inconsistent boundary in domain " + std::to_string(d));
        do_arc(k, nk, false, -e.dir, n.dir);
      }
      for (int k = 0; k < m; ++k) {
        int nk = (k + 1) % m;
        if (edges[k].hi && edges[nk].lo && ends[k].second != ends[nk].first)
          throw PolytopeError("boundary does not close in domain " + std::to_string(d));
        if (ends[k].first < 0 || ends[k].second < 0) rb.compact = false;
      }
    }
    raw.push_back(rb);
    edge_ends.push_back(ends);
  }

  // per divisor piece, ordered list of 1-cells (decreasing w)
  std::vector<std::vector<int>> div_cells;

  void split_divisors() {
    // edges first, so that 1-cell ids follow pieces
    std::vector<std::vector<int>> edge_cell(edges_of.size());
    for (std::size_t pi = 0; pi < edges_of.size(); ++pi)
      for (std::size_t k = 0; k < edges_of[pi].size(); ++k) {
        PCell1 c;
        c.kind = PCell1::Edge;
        c.piece = static_cast<int>(pi);
        c.constraint = edges_of[pi][k].constraint;
        c.tail = edge_ends[pi][k].first;
        c.head = edge_ends[pi][k].second;
        poly.cells1.push_back(c);
        edge_cell[pi].push_back(static_cast<int>(poly.cells1.size()) - 1);
      }
    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < divs.size(); ++i) by_class[divs[i].edge_class].push_back(static_cast<int>(i));
    div_cells.assign(divs.size(), {});
    for (auto& [cls, ids] : by_class) {
      std::set<Rational> bps;
      for (int i : ids) {
        if (divs[i].lo) bps.insert(*divs[i].lo);
        if (divs[i].hi) bps.insert(*divs[i].hi);
      }
      // intervals between breakpoints in decreasing w, with infinite ends
      std::vector<Bound> pts;
      pts.push_back(std::nullopt);  // +inf
      for (auto it = bps.rbegin(); it != bps.rend(); ++it) pts.push_back(*it);
      pts.push_back(std::nullopt);  // -inf
      for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        Bound hi = pts[s], lo = pts[s + 1];
        std::vector<int> cov;
        for (int i : ids) {
          const auto& dp = divs[i];
          bool hi_ok = !dp.hi || (hi && *hi <= *dp.hi);
          bool lo_ok = !dp.lo || (lo && *lo >= *dp.lo);
          if (hi_ok && lo_ok) cov.push_back(i);
        }
        if (cov.empty()) continue;
        PCell1 c;
        c.kind = PCell1::Divisor;
        c.edge_class = cls;
        c.lo = lo;
        c.hi = hi;
        c.cover = static_cast<int>(cov.size());
        c.tail = hi ? dpoint(cls, *hi) : divs[cov[0]].hi_end;
        c.head = lo ? dpoint(cls, *lo) : divs[cov[0]].lo_end;
        for (int i : cov) {
          int t = hi ? c.tail : divs[i].hi_end;
          int h = lo ? c.head : divs[i].lo_end;
          if (t != c.tail || h != c.head) throw PolytopeError("divisor ends disagree across a weld");
        }
        poly.cells1.push_back(c);
        for (int i : cov) div_cells[i].push_back(static_cast<int>(poly.cells1.size()) - 1);
      }
    }
    for (std::size_t pi = 0; pi < raw.size(); ++pi) {
      PCell2 f;
      f.piece = static_cast<int>(pi);
      f.domain = poly.spec.pieces[pi].domain;
      f.compact = raw[pi].compact;
      for (int x : raw[pi].seq) {
        if (x >= 0) f.boundary.push_back(edge_cell[pi][x]);
        else
          for (int c : div_cells[-x - 1]) f.boundary.push_back(c);
      }
      poly.cells2.push_back(f);
    }
  }

  void build_faces() {
    auto& cells1 = poly.cells1;
    const auto& pieces = poly.spec.pieces;
    auto boundary = [&](int c) { return cells1[c].kind == PCell1::Edge || cells1[c].cover == 1; };
    auto fn = [&](int c) -> const Constraint& { return pieces[cells1[c].piece].constraints[cells1[c].constraint]; };
    auto hyp = [&](int c) { return space.hypersurface_of_edge(cells1[c].edge_class); };
    std::map<int, std::vector<int>> at;
    for (int c = 0; c < static_cast<int>(cells1.size()); ++c) {
      if (!boundary(c)) continue;
      if (cells1[c].tail >= 0) at[cells1[c].tail].push_back(c);
      if (cells1[c].head >= 0) at[cells1[c].head].push_back(c);
    }
    DisjointSets ds(cells1.size());
    for (auto& [z, cs] : at) {
      if (cs.size() != 2) continue;
      int a = cs[0], b = cs[1];
      if (cells1[a].kind != cells1[b].kind) continue;
      if (cells1[a].kind == PCell1::Divisor) {
        if (hyp(a) == hyp(b)) ds.join(a, b);
        continue;
      }
      const auto& fa = fn(a);
      const auto& fb = fn(b);
      bool across = poly.cells0[z].kind == PCell0::DPoint;
      if (fa.f == fb.f) {
        if (!fa.name.empty() && !fb.name.empty() && fa.name != fb.name)
          throw PolytopeError("faces " + fa.name + " and " + fb.name + " continue into each other");
        ds.join(a, b);
      } else if (across) {
        throw PolytopeError("a face does not continue across the divisor with the same affine function");
      }
    }
    std::map<std::size_t, std::vector<int>> groups;
    for (int c = 0; c < static_cast<int>(cells1.size()); ++c)
      if (boundary(c)) groups[ds.find(c)].push_back(c);
    // named constraints must agree
    std::map<std::string, AffineFunctional> by_name;
    for (const auto& p : pieces)
      for (const auto& c : p.constraints) {
        if (c.name.empty()) continue;
        auto [it, fresh] = by_name.emplace(c.name, c.f);
        if (!fresh && !(it->second == c.f))
          throw PolytopeError("constraints named " + c.name + " have different affine functions");
      }
    for (auto& [_, cs] : groups) {
      PolytopeFace face;
      face.cells = cs;
      if (cells1[cs[0]].kind == PCell1::Divisor) {
        face.kind = PolytopeFace::Singular;
        face.hypersurface = hyp(cs[0]);
      } else {
        face.f = fn(cs[0]).f;
        for (int c : cs)
          if (!fn(c).name.empty()) face.name = fn(c).name;
        bool touches = false;
        for (int c : cs)
          for (int z : {cells1[c].tail, cells1[c].head})
            if (z >= 0 && poly.cells0[z].kind != PCell0::Vertex) touches = true;
        face.kind = touches ? PolytopeFace::Log : PolytopeFace::Interior;
      }
      poly.faces.push_back(face);
    }
    std::sort(poly.faces.begin(), poly.faces.end(), [](const PolytopeFace& a, const PolytopeFace& b) {
      return std::tie(a.kind, a.cells) < std::tie(b.kind, b.cells);
    });
    for (int i = 0; i < static_cast<int>(poly.faces.size()); ++i)
      for (int c : poly.faces[i].cells) cells1[c].face = i;
    poly.compact = true;
    for (const auto& c : cells1)
      if (c.tail < 0 || c.head < 0) poly.compact = false;
    for (const auto& c : poly.cells2)
      if (!c.compact) poly.compact = false;
  }
};

struct Interval1 {
  Bound lo, hi;  // in u
};

}  // namespace detail

inline LogPolytope build_polytope_1d(const WeldedSpace& space, const FaceSpec& spec) {
  LogPolytope p;
  p.space = space;
  p.spec = spec;
  std::map<int, std::vector<std::pair<int, Bound>>> div_ends;  // edge class -> (piece, finite end)
  for (std::size_t pi = 0; pi < spec.pieces.size(); ++pi) {
    const auto& piece = spec.pieces[pi];
    const Fan& fan = space.domains.at(piece.domain).fan();
    Bound lo, hi;
    for (const auto& c : piece.constraints) {
      const Rational& a = c.f.linear_part[0];
      if (a == 0) throw PolytopeError("constraint with zero linear part");
      if (!is_primitive_integral(c.f.linear_part)) throw PolytopeError("linear part is not primitive integral");
      Rational t = -c.f.constant / a;
      if (a > 0) {
        if (!lo || t > *lo) lo = t;
      } else if (!hi || t < *hi) {
        hi = t;
      }
    }
    if (lo && hi && *lo >= *hi) throw PolytopeError("empty piece");
    PCell2 cell;
    cell.piece = static_cast<int>(pi);
    cell.domain = piece.domain;
    for (auto [end, sign] : {std::pair{lo, -1}, std::pair{hi, 1}}) {
      if (end) {
        PCell0 v;
        v.kind = PCell0::Vertex;
        v.domain = piece.domain;
        v.point = RatVector{*end};
        p.cells0.push_back(v);
        PolytopeFace f;
        f.kind = PolytopeFace::Interior;
        for (const auto& c : piece.constraints)
          if (-c.f.constant / c.f.linear_part[0] == *end) f.f = c.f;
        p.faces.push_back(f);
        continue;
      }
      // an infinite end in direction `sign` reaches the divisor of ray -sign
      int r = fan.index_of(RatVector{Rational(-sign)});
      if (r < 0) {
        cell.compact = false;
        continue;
      }
      div_ends[space.class_of_cone(piece.domain, {r})].push_back({static_cast<int>(pi), end});
    }
    p.cells2.push_back(cell);
  }
  for (auto& [cls, ends] : div_ends) {
    PCell0 z;
    z.kind = PCell0::DPoint;
    z.edge_class = cls;
    p.cells0.push_back(z);
    if (ends.size() == 1) {
      PolytopeFace f;
      f.kind = PolytopeFace::Singular;
      f.hypersurface = space.hypersurface_of_edge(cls);
      p.faces.push_back(f);
    }
  }
  p.compact = std::all_of(p.cells2.begin(), p.cells2.end(), [](const PCell2& c) { return c.compact; });
  return p;
}

inline LogPolytope build_polytope(const WeldedSpace& space, const FaceSpec& spec) {
  if (space.dim == 1) return build_polytope_1d(space, spec);
  if (space.dim != 2) throw UnsupportedError("polytopes are supported in dimensions 1 and 2");
  detail::Builder b(space, spec);
  b.run();
  return std::move(b.poly);
}

inline CellComplex cell_complex(const LogPolytope& p) {
  if (p.dim() != 2) throw DimensionError("cell complex needs a 2-dimensional polytope");
  CellComplex cx;
  cx.vertices = static_cast<int>(p.cells0.size());
  for (const auto& c : p.cells1) cx.edges.push_back({c.tail, c.head});
  for (const auto& c : p.cells2) {
    CellComplex::Cell2 f;
    for (int e : c.boundary) f.boundary.push_back({e, 1});
    f.compact = c.compact;
    cx.faces.push_back(f);
  }
  for (const auto& c : p.cells0)
    cx.label0.push_back(c.kind == PCell0::Vertex ? "vertex" : c.kind == PCell0::DPoint ? "dpoint" : "corner");
  for (const auto& c : p.cells1) cx.label1.push_back(c.kind == PCell1::Edge ? "edge" : "divisor");
  for (std::size_t i = 0; i < p.cells2.size(); ++i) cx.label2.push_back("piece");
  return cx;
}

struct FaceLemmaViolation {
  int face;
  int hypersurface;
  Rational value;  // a(v)
  std::string message;
};

struct FaceLemmaReport {
  std::vector<FaceLemmaViolation> violations;
  int checked = 0;
  bool ok() const { return violations.empty(); }
};

// hypersurfaces met by the closure of a set of 1-cells
inline std::set<int> hypersurfaces_met(const LogPolytope& p, const std::vector<int>& cells) {
  std::set<int> out;
  for (int c : cells) {
    const auto& cell = p.cells1[c];
    if (cell.kind == PCell1::Divisor) out.insert(p.space.hypersurface_of_edge(cell.edge_class));
    for (int z : {cell.tail, cell.head}) {
      if (z < 0) continue;
      const auto& zc = p.cells0[z];
      if (zc.kind == PCell0::DPoint) out.insert(p.space.hypersurface_of_edge(zc.edge_class));
      if (zc.kind == PCell0::CornerPoint) {
        const auto& m = p.space.strata[zc.vertex_class].members.front();
        for (int a : p.space.domains[m.domain].strata()[m.stratum].cone)
          out.insert(p.space.hypersurface_of_edge(p.space.class_of_cone(m.domain, {a})));
      }
    }
  }
  return out;
}

inline FaceLemmaReport check_face_lemmas(const LogPolytope& p) {
  FaceLemmaReport r;
  std::vector<int> all;
  for (int c = 0; c < static_cast<int>(p.cells1.size()); ++c) all.push_back(c);
  auto meets_delta = hypersurfaces_met(p, all);
  for (int i = 0; i < static_cast<int>(p.faces.size()); ++i) {
    const auto& f = p.faces[i];
    if (f.kind == PolytopeFace::Singular) continue;
    auto met = hypersurfaces_met(p, f.cells);
    if (f.kind == PolytopeFace::Log)
      for (int h : met) {
        Rational v = dot(f.f.linear_part, p.space.hypersurface(h).residue);
        ++r.checked;
        if (v != 0)
          r.violations.push_back({i, h, v, "log face meets a divisor component with a(v) = " + to_string(v)});
      }
    if (p.elementary())
      for (int h : meets_delta) {
        if (met.count(h)) continue;
        Rational v = dot(f.f.linear_part, p.space.hypersurface(h).residue);
        ++r.checked;
        if (v >= 0)
          r.violations.push_back({i, h, v, "face misses a divisor component meeting the polytope but a(v) = " +
                                               to_string(v)});
      }
  }
  return r;
}

inline std::vector<HalfSpace> half_spaces(const LogPolytope& p) {
  std::vector<HalfSpace> out;
  for (const auto& f : p.faces)
    if (f.kind != PolytopeFace::Singular) out.push_back({f.f.linear_part});
  return out;
}

inline bool direction_covered(const Fan& fan, const std::vector<HalfSpace>& hs, const RatVector& v, bool& overlap) {
  bool in_cone = false;
  for (const auto& c : fan.cones)
    if (!c.empty() && cone_contains(fan.resolve(c), v)) in_cone = true;
  bool in_h = std::any_of(hs.begin(), hs.end(), [&](const HalfSpace& h) { return h.contains(v); });
  if (in_cone && in_h) overlap = true;
  return in_cone || in_h;
}

// Compactness of an elementary polytope in one tropical domain: cones and half-spaces tile the directions.
inline bool is_compact_2d(const Fan& fan, const std::vector<HalfSpace>& hs) {
  if (fan.dim != 2) throw UnsupportedError("compactness is only implemented in dimension 2");
  std::vector<RatVector> crit = fan.vectors;
  for (const auto& h : hs) {
    crit.push_back(RatVector{h.a[1], -h.a[0]});
    crit.push_back(RatVector{-h.a[1], h.a[0]});
  }
  for (auto [x, y] : {std::pair{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) crit.push_back(RatVector::of_ints({x, y}));
  std::sort(crit.begin(), crit.end(), angle_less);
  std::vector<RatVector> dirs;
  for (const auto& v : crit)
    if (dirs.empty() || !same_direction(dirs.back(), v)) dirs.push_back(v);
  if (!dirs.empty() && dirs.size() > 1 && same_direction(dirs.front(), dirs.back())) dirs.pop_back();
  bool overlap = false;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const auto& p = dirs[k];
    const auto& q = dirs[(k + 1) % dirs.size()];
    if (!direction_covered(fan, hs, p, overlap)) return false;
    if (!direction_covered(fan, hs, p + q, overlap)) return false;
  }
  return !overlap;
}

inline bool is_compact_2d(const LogPolytope& p) {
  if (p.dim() != 2) throw UnsupportedError("compactness is only implemented in dimension 2");
  if (!p.elementary()) throw PolytopeError("compactness test needs an elementary polytope in one domain");
  return is_compact_2d(p.space.domains[p.spec.pieces[0].domain].fan(), half_spaces(p));
}

struct DelzantResult {
  bool ok = true;
  std::string witness;
  int cell = -1;  // failing 0-cell
};

inline DelzantResult delzant_check(const LogPolytope& p) {
  DelzantResult r;
  for (const auto& f : p.faces)
    if (f.kind != PolytopeFace::Singular && !f.f.linear_part.is_integral())
      throw std::invalid_argument("non-integral linear part " + to_string(f.f.linear_part));
  for (const auto& f : p.faces)
    if (f.kind != PolytopeFace::Singular && !is_saturated_lattice_basis({f.f.linear_part})) {
      r.ok = false;
      r.witness = "face with linear part " + to_string(f.f.linear_part) + " is not primitive";
      return r;
    }
  for (int z = 0; z < static_cast<int>(p.cells0.size()); ++z) {
    std::vector<RatVector> rows;
    std::set<RatVector> seen;
    for (int f : p.nonsingular_faces_at(z))
      if (seen.insert(p.faces[f].f.linear_part).second) rows.push_back(p.faces[f].f.linear_part);
    if (!is_saturated_lattice_basis(rows)) {
      r.ok = false;
      r.cell = z;
      std::string s;
      for (const auto& v : rows) s += (s.empty() ? "" : ", ") + to_string(v);
      r.witness = "linear parts {" + s + "} at a vertex are not a lattice basis";
      return r;
    }
  }
  return r;
}

struct PolytopeTopology {
  int euler = 0;
  int genus = 0;
  int boundary_circles = 0;
  bool orientable = true;
  int vertices = 0, edges = 0, cells = 0;
  int singular = 0, log = 0, interior = 0;
};

inline PolytopeTopology polytope_topology(const LogPolytope& p) {
  if (p.dim() != 2) throw UnsupportedError("polytope topology needs dimension 2");
  if (!p.compact) throw TopologyError("polytope is not compact");
  auto cx = cell_complex(p);
  PolytopeTopology t;
  t.vertices = cx.vertices;
  t.edges = static_cast<int>(cx.edges.size());
  t.cells = static_cast<int>(cx.faces.size());
  t.euler = euler_characteristic(cx);
  auto deg = cx.edge_degree();
  DisjointSets ds(cx.vertices);
  std::set<int> on_boundary;
  for (std::size_t e = 0; e < cx.edges.size(); ++e) {
    if (deg[e] != 1) continue;
    ds.join(cx.edges[e].tail, cx.edges[e].head);
    on_boundary.insert(cx.edges[e].tail);
  }
  std::set<std::size_t> loops;
  for (int v : on_boundary) loops.insert(ds.find(v));
  t.boundary_circles = static_cast<int>(loops.size());
  t.orientable = !coherent_orientation(cx).empty();
  int comps = components(cx).count;
  t.genus = t.orientable ? (2 * comps - t.euler - t.boundary_circles) / 2 : 2 * comps - t.euler - t.boundary_circles;
  t.singular = p.count(PolytopeFace::Singular);
  t.log = p.count(PolytopeFace::Log);
  t.interior = p.count(PolytopeFace::Interior);
  return t;
}

struct VolumeError : PolytopeError {
  using PolytopeError::PolytopeError;
};

namespace detail {

struct HalfPlane {
  RatVector a;
  Rational c;  // a.u + c >= 0
};

inline Rational polygon_area(const std::vector<HalfPlane>& hs) {
  std::vector<RatVector> pts;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      Rational det = cross2(hs[i].a, hs[j].a);
      if (det == 0) continue;
      // a_i.u = -c_i, a_j.u = -c_j
      Rational x = (-hs[i].c * hs[j].a[1] + hs[j].c * hs[i].a[1]) / det;
      Rational y = (-hs[j].c * hs[i].a[0] + hs[i].c * hs[j].a[0]) / det;
      RatVector u{x, y};
      bool inside = std::all_of(hs.begin(), hs.end(), [&](const HalfPlane& h) { return dot(h.a, u) + h.c >= 0; });
      if (inside && std::find(pts.begin(), pts.end(), u) == pts.end()) pts.push_back(u);
    }
  if (pts.size() < 3) return 0;
  RatVector c(2);
  for (const auto& q : pts) c = c + q;
  c = Rational(1, static_cast<long>(pts.size())) * c;
  std::sort(pts.begin(), pts.end(), [&](const RatVector& x, const RatVector& y) { return angle_less(x - c, y - c); });
  Rational twice = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) twice += cross2(pts[i], pts[(i + 1) % pts.size()]);
  return twice / 2;
}

inline Rational clipped_measure(const Piece& piece, const Fan& fan, const Rational& T) {
  if (fan.dim == 1) {
    Bound lo, hi;
    auto clip = [&](const Rational& a, const Rational& c) {
      Rational t = -c / a;
      if (a > 0) {
        if (!lo || t > *lo) lo = t;
      } else if (!hi || t < *hi) {
        hi = t;
      }
    };
    for (const auto& c : piece.constraints) clip(c.f.linear_part[0], c.f.constant);
    for (const auto& r : fan.vectors) clip(r[0] / (r[0] * r[0]), -T);
    if (!lo || !hi) throw VolumeError("piece is unbounded after excision");
    return *hi > *lo ? Rational(*hi - *lo) : Rational(0);
  }
  std::vector<HalfPlane> hs;
  for (const auto& c : piece.constraints) hs.push_back({c.f.linear_part, c.f.constant});
  for (const auto& r : fan.vectors) hs.push_back({Rational(1 / dot(r, r)) * r, -T});
  return polygon_area(hs);
}

}  // namespace detail

struct VolumeResult {
  double value = 0;
  std::optional<Rational> exact;
};

inline std::vector<int> piece_signs(const LogPolytope& p) {
  if (!p.space.orientable || p.space.domain_sign.empty()) throw VolumeError("polytope is not orientable");
  std::vector<int> out;
  if (p.spec.pieces.empty()) return out;
  int lowest = p.spec.pieces.front().domain;
  for (const auto& piece : p.spec.pieces) lowest = std::min(lowest, piece.domain);
  for (const auto& piece : p.spec.pieces)
    out.push_back(p.space.domain_sign[piece.domain] * p.space.domain_sign[lowest] * p.spec.orientation);
  return out;
}

// Principal value of the integral of det(xi) over the polytope: each piece contributes its area in
// log coordinates, cut off at depth T along every divisor; the constant term of the resulting
// polynomial in T is the regularized volume.
inline VolumeResult regularized_volume(const LogPolytope& p, long start = 1) {
  if (p.dim() != 1 && p.dim() != 2) throw UnsupportedError("regularized volume needs dimension 1 or 2");
  if (p.count(PolytopeFace::Singular) > 0) throw VolumeError("polytope has a singular face");
  if (!p.compact) throw VolumeError("polytope is not compact");
  auto signs = piece_signs(p);
  auto total = [&](const Rational& T) {
    Rational v = 0;
    for (std::size_t i = 0; i < p.spec.pieces.size(); ++i) {
      const auto& piece = p.spec.pieces[i];
      v += signs[i] * detail::clipped_measure(piece, p.space.domains[piece.domain].fan(), T);
    }
    return v;
  };
  Integer M = std::max(1L, start);
  for (int round = 0; round < 64; ++round, M *= 2) {
    Rational t1 = Rational(-M), t2 = Rational(-2 * M), t3 = Rational(-4 * M), t4 = Rational(-8 * M);
    Rational v1 = total(t1), v2 = total(t2), v3 = total(t3), v4 = total(t4);
    // quadratic through the first three points
    Rational d12 = (v2 - v1) / (t2 - t1), d23 = (v3 - v2) / (t3 - t2);
    Rational a = (d23 - d12) / (t3 - t1);
    Rational b = d12 - a * (t1 + t2);
    Rational c = v1 - a * t1 * t1 - b * t1;
    if (a * t4 * t4 + b * t4 + c != v4) continue;
    if (a != 0 || b != 0) throw VolumeError("principal value diverges");
    return {static_cast<double>(c), c};
  }
  throw VolumeError("excision did not stabilize");
}

// Box in normal-form coordinates; each divisor axis carries dx/x, the others dx.
struct NormalFormBox {
  std::vector<std::pair<double, double>> ranges;
  std::vector<bool> divisor;
};

inline double excised_volume(const NormalFormBox& box, double eps) {
  double total = 1;
  for (std::size_t i = 0; i < box.ranges.size(); ++i) {
    auto [lo, hi] = box.ranges[i];
    if (!box.divisor[i]) {
      total *= hi - lo;
      continue;
    }
    // split into sign orthants; on each, u = ln|x| with u >= ln eps
    double axis = 0;
    if (hi > 0) {
      double a = std::max(lo, 0.0);
      if (hi > eps) axis += std::log(hi) - std::log(std::max(a, eps));
    }
    if (lo < 0) {
      double b = std::min(hi, 0.0);
      if (-lo > eps) axis -= std::log(-lo) - std::log(std::max(-b, eps));
    }
    total *= axis;
  }
  return total;
}

inline double regularized_volume(const NormalFormBox& box, double eps = 1e-2, double tol = 1e-9) {
  if (box.ranges.size() != box.divisor.size()) throw DimensionError("box ranges and divisor flags differ in length");
  if (box.ranges.empty() || box.ranges.size() > 2) throw UnsupportedError("regularized volume needs dimension 1 or 2");
  for (auto [lo, hi] : box.ranges)
    if (!(lo < hi)) throw VolumeError("empty box");
  // Richardson extrapolation along eps, eps/2, eps/4, ... assuming error expansion in powers of eps
  std::vector<std::vector<double>> table;
  double e = eps, prev = 0;
  for (int k = 0; k < 40; ++k, e /= 2) {
    std::vector<double> row{excised_volume(box, e)};
    for (int j = 1; j <= k; ++j) {
      double f = std::ldexp(1.0, j);
      row.push_back((f * row[j - 1] - table[k - 1][j - 1]) / (f - 1));
    }
    table.push_back(row);
    double best = row.back();
    if (k >= 2 && std::fabs(best - prev) < tol) return best;
    prev = best;
  }
  throw VolumeError("extrapolation did not converge");
}

}  // namespace logaff
