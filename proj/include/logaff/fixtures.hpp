#pragma once

#include <map>
#include <string>
#include <vector>

#include "polytope.hpp"

namespace logaff::fixtures {

struct LabeledDomain {
  std::string name;
  Fan fan;
  std::vector<std::string> labels;  // one per fan vector
};

inline RatVector v2(long x, long y) { return RatVector::of_ints({x, y}); }

// Faces sharing a label are paired, in order of first appearance.
inline WeldingSpec spec_from_labels(const std::vector<LabeledDomain>& ds) {
  WeldingSpec spec;
  std::map<std::string, std::vector<Face>> by_label;
  std::vector<std::string> order;
  for (int d = 0; d < static_cast<int>(ds.size()); ++d) {
    spec.domains.emplace_back(ds[d].fan, ds[d].name);
    spec.labels.push_back(ds[d].labels);
    for (int i = 0; i < static_cast<int>(ds[d].labels.size()); ++i) {
      const auto& l = ds[d].labels[i];
      if (!by_label.count(l)) order.push_back(l);
      by_label[l].push_back({d, i});
    }
  }
  for (const auto& l : order) {
    const auto& fs = by_label[l];
    if (fs.size() == 2) spec.pairs.push_back({fs[0], fs[1]});
    else if (fs.size() > 2) throw std::invalid_argument("label " + l + " used more than twice");
  }
  return spec;
}

inline Face face(const WeldingSpec& s, const std::string& dom, const std::string& label) {
  for (int d = 0; d < static_cast<int>(s.domains.size()); ++d)
    if (s.domains[d].name() == dom)
      for (int i = 0; i < static_cast<int>(s.labels[d].size()); ++i)
        if (s.labels[d][i] == label) return {d, i};
  throw std::out_of_range("no face " + dom + ":" + label);
}

inline Fan three_ray_fan() { return Fan(2, {v2(1, 0), v2(1, 1), v2(0, 1)}, {{}, {0}, {1}, {2}, {1, 2}}); }

inline Fan hexagonal_fan() {
  return Fan::from_maximal(2, {v2(1, 0), v2(1, 1), v2(0, 1), v2(-1, 0), v2(-1, -1), v2(0, -1)},
                           {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
}

inline Fan triangle_fan() {
  return Fan::from_maximal(2, {v2(1, 0), v2(0, 1), v2(-1, -1)}, {{0, 1}, {1, 2}, {0, 2}});
}

inline Fan square_fan() {
  return Fan::from_maximal(2, {v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline Fan quadrant_fan() { return Fan::from_maximal(2, {v2(1, 0), v2(0, 1)}, {{0, 1}}); }

inline std::vector<LabeledDomain> sphere_domains() {
  auto f = triangle_fan();
  return {{"t1", f, {"alpha", "beta", "gamma"}},  {"t2", f, {"alpha", "delta", "epsilon"}},
          {"t3", f, {"zeta", "beta", "eta"}},     {"t4", f, {"theta", "iota", "gamma"}},
          {"t5", f, {"zeta", "delta", "kappa"}},  {"t6", f, {"theta", "lambda", "epsilon"}},
          {"t7", f, {"mu", "iota", "eta"}},       {"t8", f, {"mu", "lambda", "kappa"}}};
}

inline std::vector<LabeledDomain> torus_domains() {
  auto f = square_fan();
  return {{"s1", f, {"alpha", "beta", "gamma", "delta"}},
          {"s2", f, {"alpha", "epsilon", "gamma", "zeta"}},
          {"s3", f, {"theta", "beta", "eta", "delta"}},
          {"s4", f, {"theta", "epsilon", "eta", "zeta"}}};
}

inline std::vector<LabeledDomain> genus2_domains() {
  auto f = hexagonal_fan();
  return {{"h1", f, {"alpha", "beta", "gamma", "delta", "epsilon", "zeta"}},
          {"h2", f, {"a", "beta", "c", "delta", "e", "zeta"}},
          {"h3", f, {"alpha", "b", "gamma", "d", "epsilon", "z"}},
          {"h4", f, {"a", "b", "c", "d", "e", "z"}}};
}

inline std::vector<LabeledDomain> skew_lines_domains() {
  auto x = v2(1, 0), y = v2(0, 1), z = v2(-1, -1);
  return {{"d1", Fan::from_maximal(2, {x, y, z}, {{0, 1}, {1, 2}, {0, 2}}), {"alpha", "beta", "gamma"}},
          {"d2", Fan::from_maximal(2, {x, y, z}, {{1, 2}, {0, 2}}), {"delta", "epsilon", "gamma"}},
          {"d3", Fan::from_maximal(2, {y, z}, {{0, 1}}), {"epsilon", "zeta"}},
          {"d4", Fan::from_maximal(2, {x, y, z}, {{0, 1}, {1, 2}}), {"eta", "beta", "zeta"}},
          {"d5", Fan::from_maximal(2, {x, y}, {{0, 1}}), {"eta", "theta"}},
          {"d6", Fan::from_maximal(2, {x, y, z}, {{0, 1}, {0, 2}}), {"alpha", "theta", "iota"}},
          {"d7", Fan::from_maximal(2, {x, z}, {{0, 1}}), {"delta", "iota"}}};
}

inline WeldingSpec sphere() { return spec_from_labels(sphere_domains()); }
inline WeldingSpec torus() { return spec_from_labels(torus_domains()); }
inline WeldingSpec genus2() { return spec_from_labels(genus2_domains()); }
inline WeldingSpec skew_lines() { return spec_from_labels(skew_lines_domains()); }

// Four quadrants: three already welded around the corner, the fourth about to be welded.
struct PendingWeld {
  WeldingSpec spec;  // pairs = the list already welded
  MatchedPair pair;  // the pair to weld next
};

inline PendingWeld corner_glue() {
  auto f = quadrant_fan();
  auto s = spec_from_labels({{"q1", f, {"x1", "y1"}}, {"q2", f, {"x2", "y2"}},
                             {"q3", f, {"x3", "y3"}}, {"q4", f, {"x4", "y4"}}});
  s.pairs = {{face(s, "q3", "x3"), face(s, "q4", "x4")}, {face(s, "q3", "y3"), face(s, "q2", "y2")}};
  return {s, {face(s, "q1", "y1"), face(s, "q4", "y4")}};
}

inline PendingWeld condition1() {
  auto f = quadrant_fan();
  auto s = spec_from_labels({{"a", f, {"xa", "ya"}}, {"b", f, {"xb", "yb"}}});
  s.pairs = {{face(s, "a", "ya"), face(s, "b", "yb")}};
  return {s, {face(s, "a", "xa"), face(s, "b", "xb")}};
}

inline PendingWeld condition2() {
  auto f = quadrant_fan();
  auto s = spec_from_labels({{"i", f, {"xi", "yi"}}, {"j", f, {"xj", "yj"}}, {"k", f, {"xk", "yk"}},
                             {"l", f, {"xl", "yl"}}, {"m", f, {"xm", "ym"}}});
  s.pairs = {{face(s, "i", "yi"), face(s, "k", "yk")},
             {face(s, "k", "xk"), face(s, "l", "xl")},
             {face(s, "j", "yj"), face(s, "m", "ym")}};
  return {s, {face(s, "i", "xi"), face(s, "j", "xj")}};
}

// The corner-glue configuration where the coerced pair is itself blocked by an earlier weld.
inline PendingWeld coerced_conflict() {
  auto q = quadrant_fan();
  auto t = Fan::from_maximal(2, {v2(1, 0), v2(0, 1), v2(0, -1)}, {{0, 1}, {0, 2}});
  auto s = spec_from_labels({{"q1", t, {"x1", "y1", "w1"}}, {"q2", t, {"x2", "y2", "w2"}},
                             {"q3", q, {"x3", "y3"}}, {"q4", q, {"x4", "y4"}}});
  s.pairs = {{face(s, "q3", "x3"), face(s, "q4", "x4")},
             {face(s, "q3", "y3"), face(s, "q2", "y2")},
             {face(s, "q1", "w1"), face(s, "q2", "w2")}};
  return {s, {face(s, "q1", "y1"), face(s, "q4", "y4")}};
}

inline Constraint con(long ax, long ay, Rational c, std::string name = {}) {
  return {{v2(ax, ay), c}, std::move(name)};
}

struct PolytopeFixture {
  WeldedSpace space;
  FaceSpec spec;
  LogPolytope build() const { return build_polytope(space, spec); }
};

inline WeldedSpace single_domain(const Fan& f, std::vector<std::string> labels = {}) {
  if (labels.empty())
    for (int i = 0; i < f.size(); ++i) labels.push_back("r" + std::to_string(i));
  return build_welded_space(spec_from_labels({{"u", f, labels}}));
}

inline Fan compdelt_fan() { return Fan::from_maximal(2, {v2(1, 0), v2(1, 1)}, {{0, 1}}); }

inline PolytopeFixture compdelt() {
  return {single_domain(compdelt_fan()), {{{0, {con(0, -1, 0, "f1"), con(-1, 1, 0, "f2")}}}}};
}

inline PolytopeFixture compdelt_without_f2() {
  return {single_domain(compdelt_fan()), {{{0, {con(0, -1, 0, "f1")}}}}};
}

// Two quadrant charts of the upper half plane, welded along x = 0; y = 0 stays a free boundary.
inline PolytopeFixture quadrant_polytope() {
  auto f = quadrant_fan();
  auto ws = build_welded_space(spec_from_labels({{"pp", f, {"x", "ypp"}}, {"mp", f, {"x", "ymp"}}}));
  return {ws,
          {{{0, {con(-1, 0, 0), con(0, -1, 0, "top"), con(-1, -1, -1)}}, {1, {con(-1, 0, 0), con(0, -1, 0, "top")}}}}};
}

inline PolytopeFixture unit_square() {
  return {single_domain(Fan(2, {}, {})),
          {{{0, {con(1, 0, 0), con(0, 1, 0), con(-1, 0, 1), con(0, -1, 1)}}}}};
}

inline PolytopeFixture bad_vertex() {
  return {single_domain(Fan(2, {}, {})), {{{0, {con(1, 0, 0), con(1, 2, 0)}}}}};
}

inline PolytopeFixture gen1() {
  FaceSpec spec;
  for (int d = 0; d < 4; ++d) spec.pieces.push_back({d, {con(0, -1, 0, "h")}});
  return {build_welded_space(genus2()), spec};
}

inline PolytopeFixture whole_sphere() {
  FaceSpec spec;
  for (int d = 0; d < 8; ++d) spec.pieces.push_back({d, {}});
  return {build_welded_space(sphere()), spec};
}

// [-1, e] in the coordinate x, divisor {0}: u = ln|x| on both half lines.
inline PolytopeFixture log_interval() {
  Fan f(1, {RatVector{Rational(1)}}, {{}, {0}});
  auto ws = build_welded_space(spec_from_labels({{"pos", f, {"o"}}, {"neg", f, {"o"}}}));
  return {ws, {{{0, {{{RatVector{Rational(-1)}, 1}, ""}}}, {1, {{{RatVector{Rational(-1)}, 0}, ""}}}}}};
}

// [-1, e] x [-1, e] with both axes as divisor: four quadrant charts.
inline PolytopeFixture log_rectangle() {
  auto f = quadrant_fan();
  auto ws = build_welded_space(spec_from_labels({{"pp", f, {"xp", "yp"}},
                                                 {"mp", f, {"xp", "ym"}},
                                                 {"mm", f, {"xm", "ym"}},
                                                 {"pm", f, {"xm", "yp"}}}));
  FaceSpec spec;
  spec.pieces = {{0, {con(-1, 0, 1), con(0, -1, 1)}},
                 {1, {con(-1, 0, 0), con(0, -1, 1)}},
                 {2, {con(-1, 0, 0), con(0, -1, 0)}},
                 {3, {con(-1, 0, 1), con(0, -1, 0)}}};
  return {ws, spec};
}

}  // namespace logaff::fixtures
