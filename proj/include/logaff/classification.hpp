#pragma once

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polytope.hpp"

namespace logaff {

using LatticeMap = std::vector<RatVector>;  // rows of an n x n matrix

struct PrincipalBundleData {
  std::vector<RatVector> chern;  // one vector per circle factor, each of length b2 of the base

  bool trivial() const {
    return std::all_of(chern.begin(), chern.end(), [](const RatVector& c) { return c.is_zero(); });
  }
};

struct ObstructionOutcome {
  enum Status { Vanishes, Indeterminate } status = Vanishes;
  std::string reason;
  explicit operator bool() const { return status == Vanishes; }
};

inline ObstructionOutcome obstruction_vanishes(const WeldedSpace& space, const PrincipalBundleData& bundle) {
  if (space.dim <= 2) return {ObstructionOutcome::Vanishes, "target group vanishes"};
  if (bundle.trivial()) return {ObstructionOutcome::Vanishes, "trivial bundle"};
  return {ObstructionOutcome::Indeterminate,
          "pairing of the Chern classes with the log class is not computed in dimension " + std::to_string(space.dim)};
}

inline int moduli_dimension(const WeldedSpace& space) {
  if (space.dim != 2) throw UnsupportedError("moduli dimension needs a 2-dimensional space");
  auto r = log_cohomology_dims(space);
  if (!r.betti.compact) throw TopologyError("moduli dimension needs a compact space");
  return r.log_betti[2];
}

inline int chern_rank(const PrincipalBundleData& bundle) {
  if (bundle.chern.empty()) return 0;
  return static_cast<int>(rank(bundle.chern));
}

inline int effective_moduli_dimension(const WeldedSpace& space, const PrincipalBundleData& bundle) {
  return moduli_dimension(space) - chern_rank(bundle);
}

// H^2(Delta, log D): b2 of Delta, the loops of the divisor inside Delta, and the corner points.
inline int moduli_dimension(const LogPolytope& p) {
  if (p.dim() != 2) throw UnsupportedError("moduli dimension needs a 2-dimensional polytope");
  auto cx = cell_complex(p);
  int total = 0;
  auto deg = cx.edge_degree();
  bool closed = std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; });
  if (p.compact && closed) total += coherent_orientation(cx).empty() ? 0 : static_cast<int>(components(cx).count);
  std::map<int, std::vector<int>> by_hyp;
  for (int c = 0; c < static_cast<int>(p.cells1.size()); ++c)
    if (p.cells1[c].kind == PCell1::Divisor) by_hyp[p.space.hypersurface_of_edge(p.cells1[c].edge_class)].push_back(c);
  for (auto& [h, cs] : by_hyp) {
    std::set<int> verts;
    bool open = false;
    for (int c : cs)
      for (int z : {p.cells1[c].tail, p.cells1[c].head}) {
        if (z < 0) open = true;
        else verts.insert(z);
      }
    if (open) continue;
    DisjointSets ds(p.cells0.size());
    for (int c : cs) ds.join(p.cells1[c].tail, p.cells1[c].head);
    std::set<std::size_t> comps;
    for (int z : verts) comps.insert(ds.find(z));
    total += static_cast<int>(cs.size()) - static_cast<int>(verts.size()) + static_cast<int>(comps.size());
  }
  for (const auto& z : p.cells0)
    if (z.kind == PCell0::CornerPoint) ++total;
  return total;
}

struct CutStratum {
  int dim = 0;    // cell dimension in the polytope
  int cell = -1;  // index among cells of that dimension
  int rank = 0;   // rank of the torus fiber over it
};

struct CutReport {
  std::vector<CutStratum> strata;
  int euler = 0;
  int fixed_points = 0;
  std::vector<int> divisor_image;  // hypersurfaces met by the polytope
  int moduli_dim = 0;
  bool smooth_closed = false;
};

struct CutError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline CutReport cut_report(const LogPolytope& p, const PrincipalBundleData& bundle) {
  if (p.dim() != 2) throw UnsupportedError("cut report needs a 2-dimensional polytope");
  auto dz = delzant_check(p);
  if (!dz.ok) throw CutError("Delzant condition fails: " + dz.witness);
  auto ob = obstruction_vanishes(p.space, bundle);
  if (!ob) throw CutError("obstruction class does not vanish: " + ob.reason);
  const int n = p.dim();
  CutReport r;
  for (int z = 0; z < static_cast<int>(p.cells0.size()); ++z) {
    int k = static_cast<int>(p.nonsingular_faces_at(z).size());
    r.strata.push_back({0, z, n - k});
    if (n - k == 0) ++r.fixed_points;
  }
  for (int c = 0; c < static_cast<int>(p.cells1.size()); ++c) {
    int f = p.cells1[c].face;
    bool nonsingular = f >= 0 && p.faces[f].kind != PolytopeFace::Singular;
    r.strata.push_back({1, c, n - (nonsingular ? 1 : 0)});
  }
  for (int c = 0; c < static_cast<int>(p.cells2.size()); ++c) r.strata.push_back({2, c, n});
  r.euler = r.fixed_points;
  std::vector<int> all(p.cells1.size());
  std::iota(all.begin(), all.end(), 0);
  auto met = hypersurfaces_met(p, all);
  r.divisor_image.assign(met.begin(), met.end());
  r.moduli_dim = moduli_dimension(p);
  r.smooth_closed = p.count(PolytopeFace::Singular) == 0 && p.compact;
  return r;
}

// Combinatorial and linear data of a polytope, up to lattice automorphism and translation.
struct InvariantRecord {
  struct Cell1 {
    int tail, head, kind, face, hyp;
  };
  struct Face {
    int kind;
    RatVector covector;
    Rational constant;
    int hyp;
  };
  int dim = 0;
  std::vector<int> cells0;  // kinds
  std::vector<Cell1> cells1;
  std::vector<std::vector<int>> cells2;  // sorted boundary 1-cells
  std::vector<Face> faces;
  std::vector<RatVector> residues;  // per hypersurface
  std::vector<RatVector> chern;
  int moduli_dim = 0;
};

inline InvariantRecord make_record(const LogPolytope& p, const PrincipalBundleData& bundle) {
  if (p.dim() != 2) throw UnsupportedError("invariant records need a 2-dimensional polytope");
  InvariantRecord r;
  r.dim = p.dim();
  for (const auto& z : p.cells0) r.cells0.push_back(z.kind);
  for (const auto& c : p.cells1)
    r.cells1.push_back({c.tail, c.head, c.kind, c.face,
                        c.kind == PCell1::Divisor ? p.space.hypersurface_of_edge(c.edge_class) : -1});
  for (const auto& c : p.cells2) {
    auto b = c.boundary;
    std::sort(b.begin(), b.end());
    r.cells2.push_back(b);
  }
  for (const auto& f : p.faces)
    r.faces.push_back({f.kind, f.kind == PolytopeFace::Singular ? RatVector(r.dim) : f.f.linear_part,
                       f.kind == PolytopeFace::Singular ? Rational(0) : f.f.constant, f.hypersurface});
  for (int h = 0; h < p.space.hypersurface_count(); ++h) r.residues.push_back(p.space.hypersurface(h).residue);
  r.chern = bundle.chern;
  r.moduli_dim = moduli_dimension(p);
  return r;
}

namespace detail {

// Unimodular g with g v1 = v2 for residue pairs and a1 = a2 g for covector pairs.
inline std::vector<LatticeMap> lattice_maps(int n, const std::vector<std::pair<RatVector, RatVector>>& residues,
                                           const std::vector<std::pair<RatVector, RatVector>>& covectors) {
  // unknown g(i,j) at index i*n + j
  std::vector<std::vector<Rational>> rows;
  for (const auto& [v1, v2] : residues)
    for (int i = 0; i < n; ++i) {
      std::vector<Rational> row(n * n + 1, 0);
      for (int j = 0; j < n; ++j) row[i * n + j] = v1[j];
      row[n * n] = v2[i];
      rows.push_back(row);
    }
  for (const auto& [a1, a2] : covectors)
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> row(n * n + 1, 0);
      for (int i = 0; i < n; ++i) row[i * n + j] = a2[i];
      row[n * n] = a1[j];
      rows.push_back(row);
    }
  auto satisfies = [&](const std::vector<Rational>& g) {
    for (const auto& row : rows) {
      Rational s = 0;
      for (int k = 0; k < n * n; ++k) s += row[k] * g[k];
      if (s != row[n * n]) return false;
    }
    return true;
  };
  auto unimodular = [&](const std::vector<Rational>& g) {
    for (const auto& x : g)
      if (denominator(x) != 1) return false;
    std::vector<RatVector> m;
    for (int i = 0; i < n; ++i) m.push_back(RatVector(std::vector<Rational>(g.begin() + i * n, g.begin() + (i + 1) * n)));
    auto ints = to_integer_rows(m);
    auto s = smith_normal_form(ints);
    if (s.rank != static_cast<std::size_t>(n)) return false;
    return std::all_of(s.divisors.begin(), s.divisors.end(), [](const Integer& d) { return abs(d) == 1; });
  };
  auto to_matrix = [&](const std::vector<Rational>& g) {
    LatticeMap m;
    for (int i = 0; i < n; ++i) m.push_back(RatVector(std::vector<Rational>(g.begin() + i * n, g.begin() + (i + 1) * n)));
    return m;
  };
  std::vector<RatVector> lhs;
  for (const auto& row : rows) lhs.push_back(RatVector(std::vector<Rational>(row.begin(), row.begin() + n * n)));
  std::vector<LatticeMap> out;
  if (!lhs.empty() && rank(lhs) == static_cast<std::size_t>(n * n)) {
    // unique solution by elimination on the augmented rows
    auto m = rows;
    const int cols = n * n;
    int r = 0;
    for (int c = 0; c < cols; ++c) {
      int piv = -1;
      for (int i = r; i < static_cast<int>(m.size()); ++i)
        if (m[i][c] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      std::swap(m[piv], m[r]);
      Rational inv = 1 / m[r][c];
      for (auto& x : m[r]) x *= inv;
      for (int i = 0; i < static_cast<int>(m.size()); ++i)
        if (i != r && m[i][c] != 0) {
          Rational f = m[i][c];
          for (int k = 0; k <= cols; ++k) m[i][k] -= f * m[r][k];
        }
      ++r;
    }
    std::vector<Rational> g(cols);
    for (int i = 0; i < cols; ++i) g[i] = m[i][cols];
    if (satisfies(g) && unimodular(g)) out.push_back(to_matrix(g));
    return out;
  }
  std::vector<Rational> g(n * n, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == n * n) {
      if (satisfies(g) && unimodular(g)) out.push_back(to_matrix(g));
      return;
    }
    for (int x = -1; x <= 1; ++x) {
      g[k] = x;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

inline RatVector apply(const LatticeMap& g, const RatVector& v) {
  RatVector out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = dot(g[i], v);
  return out;
}

// Translation t with a2.t = c1 - c2 for each matched face.
inline bool translation_exists(const std::vector<std::tuple<RatVector, Rational, Rational>>& faces) {
  if (faces.empty()) return true;
  std::vector<RatVector> a, aug;
  for (const auto& [a2, c1, c2] : faces) {
    a.push_back(a2);
    auto v = a2.coords();
    v.push_back(c1 - c2);
    aug.push_back(RatVector(v));
  }
  return rank(a) == rank(aug);
}

}  // namespace detail

inline bool records_equivalent(const InvariantRecord& r1, const InvariantRecord& r2) {
  if (r1.dim != r2.dim || r1.moduli_dim != r2.moduli_dim) return false;
  if (r1.cells0.size() != r2.cells0.size() || r1.cells1.size() != r2.cells1.size() ||
      r1.cells2.size() != r2.cells2.size() || r1.faces.size() != r2.faces.size())
    return false;
  if (r1.chern.size() != r2.chern.size()) return false;
  const int n = r1.dim;
  const int E = static_cast<int>(r1.cells1.size());

  std::vector<int> m0(r1.cells0.size(), -1), inv0(r2.cells0.size(), -1);
  std::vector<int> m1(E, -1), inv1(E, -1);
  std::map<int, int> mf, invf, mh, invh;
  bool flip = false;

  auto check_rest = [&]() -> bool {
    // 2-cells
    std::set<std::vector<int>> targets(r2.cells2.begin(), r2.cells2.end());
    std::set<std::vector<int>> images;
    for (const auto& b : r1.cells2) {
      std::vector<int> img;
      for (int c : b) img.push_back(m1[c]);
      std::sort(img.begin(), img.end());
      if (!targets.count(img)) return false;
      images.insert(img);
    }
    if (images.size() != targets.size()) return false;
    // isolated 0-cells are matched by kind only
    std::multiset<int> left, right;
    for (std::size_t z = 0; z < m0.size(); ++z)
      if (m0[z] < 0) left.insert(r1.cells0[z]);
    for (std::size_t z = 0; z < inv0.size(); ++z)
      if (inv0[z] < 0) right.insert(r2.cells0[z]);
    if (left != right) return false;
    std::vector<std::pair<RatVector, RatVector>> res, cov;
    for (auto [h1, h2] : mh) res.push_back({r1.residues.at(h1), r2.residues.at(h2)});
    std::vector<std::tuple<RatVector, Rational, Rational>> trans;
    for (auto [f1, f2] : mf) {
      const auto& a = r1.faces[f1];
      const auto& b = r2.faces[f2];
      if (a.kind != b.kind) return false;
      if (a.kind == PolytopeFace::Singular) continue;
      cov.push_back({a.covector, b.covector});
      trans.push_back({b.covector, a.constant, b.constant});
    }
    if (!detail::translation_exists(trans)) return false;
    for (const auto& g : detail::lattice_maps(n, res, cov)) {
      bool ok = (g[0][0] * g[1][1] - g[0][1] * g[1][0] < 0) == flip;
      for (std::size_t k = 0; ok && k < r1.chern.size(); ++k) {
        RatVector expect(r1.chern[k].dim());
        for (std::size_t j = 0; j < r1.chern.size(); ++j) expect = expect + g[k][j] * r1.chern[j];
        if (!(expect == r2.chern[k])) ok = false;
      }
      if (ok) return true;
    }
    return false;
  };

  auto bind = [](std::map<int, int>& m, std::map<int, int>& inv, int a, int b, std::vector<std::pair<int, int>>& log) {
    if (a < 0 || b < 0) return a == b;
    auto it = m.find(a);
    if (it != m.end()) return it->second == b;
    if (inv.count(b)) return false;
    m[a] = b;
    inv[b] = a;
    log.push_back({a, b});
    return true;
  };
  auto bind0 = [&](int a, int b, std::vector<std::pair<int, int>>& log) {
    if (a < 0 || b < 0) return a == b;
    if (m0[a] >= 0) return m0[a] == b;
    if (inv0[b] >= 0 || r1.cells0[a] != r2.cells0[b]) return false;
    m0[a] = b;
    inv0[b] = a;
    log.push_back({a, b});
    return true;
  };

  std::function<bool(int)> rec = [&](int e) -> bool {
    if (e == E) return check_rest();
    const auto& c1 = r1.cells1[e];
    for (int t = 0; t < E; ++t) {
      if (inv1[t] >= 0) continue;
      const auto& c2 = r2.cells1[t];
      if (c1.kind != c2.kind || (c1.face < 0) != (c2.face < 0) || (c1.hyp < 0) != (c2.hyp < 0)) continue;
      std::vector<std::pair<int, int>> l0, lf, lh;
      bool ok = flip ? bind0(c1.tail, c2.head, l0) && bind0(c1.head, c2.tail, l0)
                     : bind0(c1.tail, c2.tail, l0) && bind0(c1.head, c2.head, l0);
      ok = ok && bind(mf, invf, c1.face, c2.face, lf) && bind(mh, invh, c1.hyp, c2.hyp, lh);
      if (ok) {
        m1[e] = t;
        inv1[t] = e;
        if (rec(e + 1)) return true;
        m1[e] = inv1[t] = -1;
      }
      for (auto [a, b] : l0) m0[a] = inv0[b] = -1;
      for (auto [a, b] : lf) mf.erase(a), invf.erase(b);
      for (auto [a, b] : lh) mh.erase(a), invh.erase(b);
    }
    return false;
  };

  for (bool f : {false, true}) {
    flip = f;
    if (rec(0)) return true;
  }
  return false;
}

// Change of lattice basis u -> g u applied to a space and a face spec.
inline WeldingSpec transform_spec(const WeldingSpec& spec, const LatticeMap& g) {
  WeldingSpec out;
  out.pairs = spec.pairs;
  out.labels = spec.labels;
  for (const auto& d : spec.domains) {
    std::vector<RatVector> vs;
    for (const auto& v : d.fan().vectors) vs.push_back(detail::apply(g, v));
    Fan f = d.fan();
    f.vectors = vs;
    out.domains.emplace_back(f, d.name());
  }
  return out;
}

inline FaceSpec transform_face_spec(const FaceSpec& spec, const LatticeMap& g) {
  // a -> a g^{-1}: solve b g = a, i.e. a is the combination of the rows of g with coefficients b
  FaceSpec out = spec;
  for (auto& p : out.pieces)
    for (auto& c : p.constraints) {
      auto [ok, b] = solve_in_span(g, c.f.linear_part);
      if (!ok) throw std::invalid_argument("lattice map is singular");
      c.f.linear_part = RatVector(b);
    }
  return out;
}

}  // namespace logaff
