#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "domain.hpp"

namespace logaff {

struct Face {
  int domain = -1;
  int vec = -1;
  friend auto operator<=>(const Face&, const Face&) = default;
};

struct MatchedPair {
  Face left, right;
  MatchedPair normalized() const { return right < left ? MatchedPair{right, left} : *this; }
  friend bool operator==(const MatchedPair& a, const MatchedPair& b) {
    auto x = a.normalized(), y = b.normalized();
    return x.left == y.left && x.right == y.right;
  }
  friend bool operator<(const MatchedPair& a, const MatchedPair& b) {
    auto x = a.normalized(), y = b.normalized();
    return std::tie(x.left, x.right) < std::tie(y.left, y.right);
  }
};

struct WeldingSpec {
  std::vector<TropicalDomain> domains;
  std::vector<MatchedPair> pairs;
  std::vector<std::vector<std::string>> labels;  // optional face labels per domain

  int dim() const { return domains.empty() ? 0 : domains.front().dim(); }
  const Fan& fan(int d) const { return domains.at(d).fan(); }

  std::string face_name(Face f) const {
    std::string dn = domains.at(f.domain).name();
    if (dn.empty()) dn = "d" + std::to_string(f.domain);
    if (f.domain < static_cast<int>(labels.size()) && f.vec < static_cast<int>(labels[f.domain].size()))
      return dn + ":" + labels[f.domain][f.vec];
    return dn + ":#" + std::to_string(f.vec);
  }
  std::string pair_name(const MatchedPair& p) const { return face_name(p.left) + "~" + face_name(p.right); }

  std::optional<Face> partner(Face f) const {
    for (const auto& p : pairs) {
      if (p.left == f) return p.right;
      if (p.right == f) return p.left;
    }
    return std::nullopt;
  }
  bool contains(const MatchedPair& p) const {
    return std::find(pairs.begin(), pairs.end(), p) != pairs.end();
  }
  void check_face(Face f) const {
    if (f.domain < 0 || f.domain >= static_cast<int>(domains.size()))
      throw std::out_of_range("bad domain index " + std::to_string(f.domain));
    check_index(fan(f.domain), f.vec);
  }
  void check_dims() const {
    for (const auto& d : domains)
      if (d.dim() != dim()) throw DimensionError("domains of different dimension");
  }
};

struct MatchResult {
  bool matched = false;
  std::map<int, int> psi;  // adjacent vector index on the left -> index on the right
  explicit operator bool() const { return matched; }
};

inline MatchResult is_matched_pair(const WeldingSpec& spec, const MatchedPair& p) {
  spec.check_face(p.left);
  spec.check_face(p.right);
  MatchResult r;
  if (p.left == p.right) return r;
  const Fan& fl = spec.fan(p.left.domain);
  const Fan& fr = spec.fan(p.right.domain);
  if (fl.dim != fr.dim) return r;
  if (star(fl, p.left.vec) != star(fr, p.right.vec)) return r;
  r.matched = true;
  for (int b : adjacent_indices(fl, p.left.vec)) r.psi[b] = fr.index_of(fl.vectors[b]);
  return r;
}

// Index in domain d' of the vector with index a in domain d.
inline int carry(const WeldingSpec& spec, int d, int a, int d2) {
  return spec.fan(d2).index_of(spec.fan(d).vectors.at(a));
}

struct ObstructionWitness {
  int condition = 0;  // 1 or 2 for the two clauses of the definition, 3 for a corner that cannot close
  std::vector<Face> faces;
  std::string message;
};

struct ObstructionResult {
  bool obstructed = false;
  ObstructionWitness witness;
  explicit operator bool() const { return obstructed; }
};

struct NotMatchedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A corner is a domain together with a 2-cone of its fan.
struct Corner {
  int domain;
  int a, b;
  friend auto operator<=>(const Corner&, const Corner&) = default;
};

inline Corner make_corner(int d, int a, int b) { return a < b ? Corner{d, a, b} : Corner{d, b, a}; }

// Quadrants around a corner, walking through the welds of `pairs`.
struct CornerOrbit {
  std::vector<Corner> chain;
  bool closed = false;
  std::optional<Face> end_first, end_last;  // free faces at either end of an open chain
};

inline std::optional<Face> partner_in(const std::vector<MatchedPair>& pairs, Face f) {
  for (const auto& p : pairs) {
    if (p.left == f) return p.right;
    if (p.right == f) return p.left;
  }
  return std::nullopt;
}

inline CornerOrbit corner_orbit(const WeldingSpec& spec, const std::vector<MatchedPair>& pairs, Corner start) {
  // one step: leave corner (d,{in,out}) through `out`
  auto walk = [&](int d, int in, int out, std::vector<std::pair<Corner, int>>& seq,
                  std::optional<Face>& free_end) -> bool {
    std::set<Corner> seen{make_corner(d, in, out)};
    for (;;) {
      auto q = partner_in(pairs, Face{d, out});
      if (!q) {
        free_end = Face{d, out};
        return false;
      }
      int nd = q->domain;
      int nin = q->vec;
      int nout = carry(spec, d, in, nd);
      Corner c = make_corner(nd, nin, nout);
      if (nout < 0 || !spec.fan(nd).has_cone({nin, nout})) {
        free_end = Face{d, out};
        return false;
      }
      if (c == make_corner(start.domain, start.a, start.b)) return true;
      if (seen.count(c)) return true;
      seen.insert(c);
      seq.push_back({c, nout});
      d = nd;
      in = nin;
      out = nout;
    }
  };
  CornerOrbit o;
  std::vector<std::pair<Corner, int>> fwd, bwd;
  std::optional<Face> e1, e2;
  bool closed = walk(start.domain, start.a, start.b, fwd, e1);
  if (closed) {
    o.closed = true;
    o.chain.push_back(start);
    for (auto& [c, _] : fwd) o.chain.push_back(c);
    return o;
  }
  walk(start.domain, start.b, start.a, bwd, e2);
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) o.chain.push_back(it->first);
  o.chain.push_back(start);
  for (auto& [c, _] : fwd) o.chain.push_back(c);
  o.end_first = e2;
  o.end_last = e1;
  return o;
}

inline std::vector<Corner> corners_at(const WeldingSpec& spec, Face f) {
  std::vector<Corner> out;
  for (int b : adjacent_indices(spec.fan(f.domain), f.vec))
    if (spec.fan(f.domain).has_cone({f.vec, b})) out.push_back(make_corner(f.domain, f.vec, b));
  return out;
}

inline ObstructionResult is_locally_obstructed(const WeldingSpec& spec, const MatchedPair& p) {
  auto m = is_matched_pair(spec, p);
  if (!m) throw NotMatchedError("not a matched pair: " + spec.pair_name(p));
  ObstructionResult r;
  auto obstruct = [&](int cond, std::vector<Face> faces, const std::string& msg) {
    r.obstructed = true;
    r.witness = {cond, std::move(faces), msg};
  };
  for (int side = 0; side < 2 && !r; ++side) {
    Face fi = side == 0 ? p.left : p.right;
    Face fj = side == 0 ? p.right : p.left;
    for (int bi : adjacent_indices(spec.fan(fi.domain), fi.vec)) {
      Face beta_i{fi.domain, bi};
      Face psi_beta{fj.domain, carry(spec, fi.domain, bi, fj.domain)};
      auto k = spec.partner(beta_i);
      if (k && *k == psi_beta) {
        obstruct(1, {beta_i, psi_beta},
                 spec.face_name(beta_i) + " is already welded to " + spec.face_name(psi_beta));
        break;
      }
      if (!k) continue;
      Face alpha_k{k->domain, carry(spec, fi.domain, fi.vec, k->domain)};
      if (alpha_k.vec < 0) continue;
      auto l = spec.partner(alpha_k);
      auto mm = spec.partner(psi_beta);
      if (!l || !mm) continue;
      // the chain closes into four quadrants when both ends reach the same corner
      if (l->domain == mm->domain) continue;
      obstruct(2, {beta_i, *k, alpha_k, *l, psi_beta, *mm},
               "corner of " + spec.face_name(fi) + " and " + spec.face_name(beta_i) +
                   " would carry more than four quadrants");
      break;
    }
  }
  if (r) return r;
  // corners must close into exactly four quadrants
  auto trial = spec.pairs;
  trial.push_back(p);
  for (Face f : {p.left, p.right})
    for (Corner c : corners_at(spec, f)) {
      auto o = corner_orbit(spec, trial, c);
      const auto q = o.chain.size();
      if ((o.closed && q != 4) || (!o.closed && q > 4)) {
        std::vector<Face> faces;
        for (auto& cc : o.chain) faces.push_back(Face{cc.domain, cc.a});
        obstruct(3, faces,
                 "corner at " + spec.face_name(f) + " would carry " + std::to_string(q) + " quadrants");
        return r;
      }
    }
  return r;
}

inline std::vector<MatchedPair> coerced_pairs(const WeldingSpec& spec, const MatchedPair& p) {
  if (is_locally_obstructed(spec, p)) throw std::invalid_argument("pair is obstructed: " + spec.pair_name(p));
  auto trial = spec.pairs;
  trial.push_back(p);
  std::set<MatchedPair> out;
  for (Face f : {p.left, p.right})
    for (Corner c : corners_at(spec, f)) {
      auto o = corner_orbit(spec, trial, c);
      if (o.closed || o.chain.size() != 4 || !o.end_first || !o.end_last) continue;
      MatchedPair q{*o.end_first, *o.end_last};
      if (!(q == p)) out.insert(q.normalized());
    }
  return {out.begin(), out.end()};
}

struct GloballyObstructedError : std::runtime_error {
  MatchedPair pair;
  ObstructionWitness witness;
  GloballyObstructedError(const std::string& msg, MatchedPair p, ObstructionWitness w)
      : std::runtime_error(msg), pair(p), witness(std::move(w)) {}
};

struct WeldingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline WeldingSpec weld_pair(const WeldingSpec& spec, const MatchedPair& p) {
  if (spec.contains(p)) throw WeldingError("pair already welded: " + spec.pair_name(p));
  WeldingSpec out = spec;
  std::deque<MatchedPair> queue{p};
  while (!queue.empty()) {
    MatchedPair q = queue.front();
    queue.pop_front();
    if (out.contains(q)) continue;
    if (!is_matched_pair(out, q))
      throw GloballyObstructedError("coerced pair is not matched: " + out.pair_name(q), q,
                                    {0, {q.left, q.right}, "stars differ"});
    for (Face f : {q.left, q.right})
      if (auto o = out.partner(f))
        throw GloballyObstructedError(out.face_name(f) + " is already welded to " + out.face_name(*o), q,
                                      {1, {f, *o}, "face already welded"});
    auto ob = is_locally_obstructed(out, q);
    if (ob)
      throw GloballyObstructedError("locally obstructed pair " + out.pair_name(q) + ": " + ob.witness.message,
                                    q, ob.witness);
    auto forced = coerced_pairs(out, q);
    out.pairs.push_back(q);
    for (auto& f : forced) queue.push_back(f);
  }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n = 0) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p_[x] != x) x = p_[x] = p_[p_[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) p_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> p_;
};

struct StratumRef {
  int domain;
  int stratum;  // index into the domain's strata
  friend auto operator<=>(const StratumRef&, const StratumRef&) = default;
};

struct StratumClass {
  int codim = 0;
  std::vector<StratumRef> members;
  bool interior = false;  // codim 1: welded; codim 2: closed 4-cycle of quadrants
};

struct DivisorComponent {
  std::vector<int> edges;  // codim-1 stratum classes
  RatVector residue;
};

struct Crossing {
  int stratum;      // codim-2 stratum class
  int comp_a, comp_b;  // divisor components through it, comp_a <= comp_b
};

struct WeldedSpace {
  int dim = 0;
  std::vector<TropicalDomain> domains;
  std::vector<MatchedPair> pairs;
  std::vector<std::vector<std::string>> labels;
  std::vector<StratumClass> strata;  // canonical order
  std::vector<DivisorComponent> divisor_components;
  std::vector<Crossing> crossings;
  std::vector<int> boundary;  // unwelded codim-1 classes
  std::vector<DivisorComponent> boundary_components;
  std::vector<int> domain_sign;  // +1/-1 orientation class per domain, empty when non-orientable
  bool orientable = true;

  int class_of(int domain, int stratum) const {
    for (std::size_t i = 0; i < strata.size(); ++i)
      for (const auto& m : strata[i].members)
        if (m.domain == domain && m.stratum == stratum) return static_cast<int>(i);
    return -1;
  }
  int class_of_cone(int domain, const Cone& c) const {
    return class_of(domain, domains.at(domain).stratum_index(c));
  }
  std::vector<int> classes_of_codim(int k) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < strata.size(); ++i)
      if (strata[i].codim == k) out.push_back(static_cast<int>(i));
    return out;
  }
  int count_codim(int k) const { return static_cast<int>(classes_of_codim(k).size()); }
  int component_of_edge(int edge_class) const {
    for (std::size_t i = 0; i < divisor_components.size(); ++i)
      for (int e : divisor_components[i].edges)
        if (e == edge_class) return static_cast<int>(i);
    return -1;
  }
  std::optional<Face> partner(Face f) const { return partner_in(pairs, f); }
  // Every codim-1 class lies on one hypersurface: divisor components first, then boundary components.
  int hypersurface_of_edge(int edge_class) const {
    int c = component_of_edge(edge_class);
    if (c >= 0) return c;
    for (std::size_t i = 0; i < boundary_components.size(); ++i)
      for (int e : boundary_components[i].edges)
        if (e == edge_class) return static_cast<int>(divisor_components.size() + i);
    return -1;
  }
  const DivisorComponent& hypersurface(int h) const {
    const int nd = static_cast<int>(divisor_components.size());
    return h < nd ? divisor_components.at(h) : boundary_components.at(h - nd);
  }
  int hypersurface_count() const {
    return static_cast<int>(divisor_components.size() + boundary_components.size());
  }
  WeldingSpec as_spec() const { return {domains, pairs, labels}; }
};

struct AssemblyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline WeldedSpace assemble(const WeldingSpec& spec) {
  spec.check_dims();
  WeldedSpace ws;
  ws.dim = spec.dim();
  ws.domains = spec.domains;
  ws.pairs = spec.pairs;
  ws.labels = spec.labels;
  std::sort(ws.pairs.begin(), ws.pairs.end());
  for (auto& p : ws.pairs) p = p.normalized();

  // flat index of every (domain, stratum)
  std::vector<StratumRef> refs;
  std::map<StratumRef, std::size_t> at;
  for (int d = 0; d < static_cast<int>(spec.domains.size()); ++d)
    for (int s = 0; s < static_cast<int>(spec.domains[d].strata().size()); ++s) {
      at[{d, s}] = refs.size();
      refs.push_back({d, s});
    }
  DisjointSets ds(refs.size());
  for (const auto& p : ws.pairs) {
    if (!is_matched_pair(spec, p)) throw AssemblyError("pair is not matched: " + spec.pair_name(p));
    const auto& dl = spec.domains[p.left.domain];
    const auto& dr = spec.domains[p.right.domain];
    for (int s = 0; s < static_cast<int>(dl.strata().size()); ++s) {
      const Cone& A = dl.strata()[s].cone;
      if (!std::binary_search(A.begin(), A.end(), p.left.vec)) continue;
      std::vector<int> img;
      for (int a : A) img.push_back(carry(spec, p.left.domain, a, p.right.domain));
      int t = dr.stratum_index(make_cone(img));
      if (t < 0) throw AssemblyError("cone has no image across " + spec.pair_name(p));
      ds.join(at[{p.left.domain, s}], at[{p.right.domain, t}]);
    }
  }
  std::map<std::size_t, std::vector<StratumRef>> groups;
  for (std::size_t i = 0; i < refs.size(); ++i) groups[ds.find(i)].push_back(refs[i]);
  std::vector<StratumClass> cls;
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end());
    StratumClass c;
    c.members = members;
    c.codim = spec.domains[members[0].domain].strata()[members[0].stratum].codim();
    cls.push_back(c);
  }
  std::sort(cls.begin(), cls.end(), [](const StratumClass& a, const StratumClass& b) {
    return std::tie(a.codim, a.members) < std::tie(b.codim, b.members);
  });
  ws.strata = cls;

  // interior flags
  for (auto& c : ws.strata) {
    if (c.codim == 1) {
      c.interior = c.members.size() == 2;
      if (c.members.size() > 2) throw AssemblyError("a face is welded more than once");
    } else if (c.codim == 2 && ws.dim == 2) {
      const auto& m = c.members.front();
      const Cone& A = spec.domains[m.domain].strata()[m.stratum].cone;
      auto o = corner_orbit(spec, ws.pairs, make_corner(m.domain, A[0], A[1]));
      if (o.chain.size() != c.members.size()) throw AssemblyError("inconsistent corner orbit");
      if (o.closed && o.chain.size() != 4) throw AssemblyError("crossing without four quadrants");
      if (o.chain.size() > 4) throw AssemblyError("corner with more than four quadrants");
      c.interior = o.closed;
    } else if (c.codim >= 2) {
      c.interior = true;
      for (const auto& m : c.members)
        for (int a : spec.domains[m.domain].strata()[m.stratum].cone)
          if (!partner_in(ws.pairs, Face{m.domain, a})) c.interior = false;
    }
  }

  // divisor components: welded edges continued through corners
  auto edges = ws.classes_of_codim(1);
  std::map<int, std::size_t> epos;
  for (std::size_t i = 0; i < edges.size(); ++i) epos[edges[i]] = i;
  DisjointSets de(edges.size());
  for (const auto& p : ws.pairs)
    for (auto [f, g] : {std::pair{p.left, p.right}, std::pair{p.right, p.left}})
      for (int a : adjacent_indices(spec.fan(f.domain), f.vec)) {
        if (!spec.fan(f.domain).has_cone({a, f.vec})) continue;
        int a2 = carry(spec, f.domain, a, g.domain);
        if (!partner_in(ws.pairs, Face{f.domain, a}) != !partner_in(ws.pairs, Face{g.domain, a2})) continue;
        int e1 = ws.class_of_cone(f.domain, {a});
        int e2 = ws.class_of_cone(g.domain, {a2});
        de.join(epos[e1], epos[e2]);
      }
  std::map<std::size_t, std::vector<int>> comps, bcomps;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!ws.strata[edges[i]].interior) {
      ws.boundary.push_back(edges[i]);
      bcomps[de.find(i)].push_back(edges[i]);
    } else {
      comps[de.find(i)].push_back(edges[i]);
    }
  }
  for (auto* group : {&comps, &bcomps})
    for (auto& [_, es] : *group) {
      DivisorComponent dc;
      dc.edges = es;
      const auto& m = ws.strata[es[0]].members[0];
      dc.residue = residue(spec.domains[m.domain], m.stratum);
      for (int e : es)
        for (const auto& mm : ws.strata[e].members)
          if (residue(spec.domains[mm.domain], mm.stratum) != dc.residue)
            throw AssemblyError("divisor component with two residues");
      (group == &comps ? ws.divisor_components : ws.boundary_components).push_back(dc);
    }

  if (ws.dim == 2)
    for (int v : ws.classes_of_codim(2)) {
      if (!ws.strata[v].interior) continue;
      const auto& m = ws.strata[v].members.front();
      const Cone& A = spec.domains[m.domain].strata()[m.stratum].cone;
      int ca = ws.component_of_edge(ws.class_of_cone(m.domain, {A[0]}));
      int cb = ws.component_of_edge(ws.class_of_cone(m.domain, {A[1]}));
      ws.crossings.push_back({v, std::min(ca, cb), std::max(ca, cb)});
    }

  // orientation classes: every weld reverses the induced orientation
  const int nd = static_cast<int>(spec.domains.size());
  ws.domain_sign.assign(nd, 0);
  for (int s = 0; s < nd && ws.orientable; ++s) {
    if (ws.domain_sign[s]) continue;
    ws.domain_sign[s] = 1;
    std::deque<int> q{s};
    while (!q.empty() && ws.orientable) {
      int d = q.front();
      q.pop_front();
      for (const auto& p : ws.pairs) {
        int other = -1;
        if (p.left.domain == d) other = p.right.domain;
        else if (p.right.domain == d) other = p.left.domain;
        else continue;
        if (other == d) {
          ws.orientable = false;
          break;
        }
        if (!ws.domain_sign[other]) {
          ws.domain_sign[other] = -ws.domain_sign[d];
          q.push_back(other);
        } else if (ws.domain_sign[other] == ws.domain_sign[d]) {
          ws.orientable = false;
          break;
        }
      }
    }
  }
  if (!ws.orientable) ws.domain_sign.clear();
  return ws;
}

inline WeldedSpace build_welded_space(const WeldingSpec& spec) {
  WeldingSpec cur = spec;
  cur.pairs.clear();
  cur.check_dims();
  for (const auto& p : spec.pairs) {
    if (cur.contains(p)) continue;
    cur = weld_pair(cur, p);
  }
  return assemble(cur);
}

inline RatVector affine_monodromy(const WeldedSpace& space, const std::vector<int>& loop) {
  const int nd = static_cast<int>(space.domains.size());
  for (int d : loop)
    if (d < 0 || d >= nd) throw std::out_of_range("bad domain in loop");
  for (std::size_t i = 0; loop.size() > 1 && i < loop.size(); ++i) {
    int a = loop[i], b = loop[(i + 1) % loop.size()];
    if (a == b) continue;
    bool adjacent = std::any_of(space.pairs.begin(), space.pairs.end(), [&](const MatchedPair& p) {
      return (p.left.domain == a && p.right.domain == b) || (p.left.domain == b && p.right.domain == a);
    });
    if (!adjacent)
      throw std::invalid_argument("strata " + std::to_string(a) + " and " + std::to_string(b) +
                                  " share no welded face");
  }
  // transitions across welds are the identity on U
  return RatVector(static_cast<std::size_t>(space.dim));
}

}  // namespace logaff
