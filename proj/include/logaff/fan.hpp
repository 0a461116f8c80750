#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "exact_linalg.hpp"

namespace logaff {

using Cone = std::vector<int>;  // sorted vector indices

inline Cone make_cone(std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

struct Fan {
  int dim = 0;
  std::vector<RatVector> vectors;
  std::set<Cone> cones{Cone{}};

  Fan() = default;
  Fan(int n, std::vector<RatVector> vs, const std::vector<Cone>& cs) : dim(n), vectors(std::move(vs)) {
    for (const auto& c : cs) cones.insert(make_cone(c));
  }

  // Adds every face of the listed maximal cones.
  static Fan from_maximal(int n, std::vector<RatVector> vs, const std::vector<Cone>& maximal) {
    Fan f(n, std::move(vs), {});
    for (const auto& c : maximal) {
      Cone s = make_cone(c);
      const std::size_t k = s.size();
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        Cone sub;
        for (std::size_t i = 0; i < k; ++i)
          if (mask & (1u << i)) sub.push_back(s[i]);
        f.cones.insert(sub);
      }
    }
    for (int i = 0; i < static_cast<int>(f.vectors.size()); ++i) f.cones.insert(Cone{i});
    return f;
  }

  int size() const { return static_cast<int>(vectors.size()); }
  bool has_cone(const Cone& c) const { return cones.count(make_cone(c)) > 0; }
  std::vector<RatVector> resolve(const Cone& c) const {
    std::vector<RatVector> out;
    for (int i : c) out.push_back(vectors.at(i));
    return out;
  }
  int index_of(const RatVector& v) const {
    for (int i = 0; i < size(); ++i)
      if (vectors[i] == v) return i;
    return -1;
  }
  std::vector<Cone> cones_of_size(std::size_t k) const {
    std::vector<Cone> out;
    for (const auto& c : cones)
      if (c.size() == k) out.push_back(c);
    return out;
  }
};

struct FanViolation {
  enum Kind { BadVector, DuplicateVector, ZeroVector, BadIndex, TooLarge, Dependent, NotClosed, HullMeets };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<FanViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline std::string cone_str(const Cone& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "}";
}

inline ValidationReport validate_fan(const Fan& fan) {
  ValidationReport r;
  auto add = [&](FanViolation::Kind k, std::string m) { r.violations.push_back({k, std::move(m)}); };
  if (fan.dim <= 0) add(FanViolation::BadVector, "dimension must be positive");
  for (int i = 0; i < fan.size(); ++i) {
    const auto& v = fan.vectors[i];
    if (static_cast<int>(v.dim()) != fan.dim) {
      add(FanViolation::BadVector, "vector " + std::to_string(i) + " has wrong dimension");
      continue;
    }
    if (v.is_zero()) add(FanViolation::ZeroVector, "vector " + std::to_string(i) + " is zero");
    for (int j = 0; j < i; ++j)
      if (fan.vectors[j] == v)
        add(FanViolation::DuplicateVector,
            "vectors " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
  }
  if (!r.ok()) return r;
  if (!fan.cones.count(Cone{})) add(FanViolation::NotClosed, "empty cone missing");
  for (const auto& c : fan.cones) {
    bool idx_ok = true;
    for (int i : c)
      if (i < 0 || i >= fan.size()) idx_ok = false;
    if (!idx_ok) {
      add(FanViolation::BadIndex, "cone " + cone_str(c) + " has an out-of-range index");
      continue;
    }
    if (static_cast<int>(c.size()) > fan.dim) {
      add(FanViolation::TooLarge, "cone " + cone_str(c) + " exceeds the dimension");
      continue;
    }
    auto gens = fan.resolve(c);
    if (!linear_independent(gens)) {
      add(FanViolation::Dependent, "cone " + cone_str(c) + " is linearly dependent");
      continue;
    }
    for (std::size_t drop = 0; drop < c.size(); ++drop) {
      Cone sub;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (i != drop) sub.push_back(c[i]);
      if (!fan.cones.count(sub))
        add(FanViolation::NotClosed, "face " + cone_str(sub) + " of cone " + cone_str(c) + " missing");
    }
    for (int j = 0; j < fan.size(); ++j) {
      if (std::binary_search(c.begin(), c.end(), j)) continue;
      if (cone_contains(gens, fan.vectors[j]))
        add(FanViolation::HullMeets,
            "vector " + std::to_string(j) + " " + to_string(fan.vectors[j]) + " lies in the hull of cone " +
                cone_str(c));
    }
  }
  return r;
}

inline void check_index(const Fan& fan, int a) {
  if (a < 0 || a >= fan.size()) throw std::out_of_range("bad vector index " + std::to_string(a));
}

using VectorSetFamily = std::set<std::set<RatVector>>;

inline VectorSetFamily star(const Fan& fan, int a) {
  check_index(fan, a);
  VectorSetFamily out;
  for (const auto& c : fan.cones)
    if (std::binary_search(c.begin(), c.end(), a)) {
      auto g = fan.resolve(c);
      out.insert(std::set<RatVector>(g.begin(), g.end()));
    }
  return out;
}

inline std::vector<int> adjacent_indices(const Fan& fan, int a) {
  check_index(fan, a);
  std::set<int> s;
  for (const auto& c : fan.cones)
    if (std::binary_search(c.begin(), c.end(), a))
      for (int b : c)
        if (b != a) s.insert(b);
  return {s.begin(), s.end()};
}

inline std::set<RatVector> adjacent_vectors(const Fan& fan, int a) {
  std::set<RatVector> out;
  for (int b : adjacent_indices(fan, a)) out.insert(fan.vectors[b]);
  return out;
}

// Half-plane index used to order planar directions counter-clockwise from (1,0).
inline int half_of(const RatVector& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; }

inline bool angle_less(const RatVector& a, const RatVector& b) {
  int ha = half_of(a), hb = half_of(b);
  if (ha != hb) return ha < hb;
  return cross2(a, b) > 0;
}

inline bool same_direction(const RatVector& a, const RatVector& b) {
  return cross2(a, b) == 0 && dot(a, b) > 0;
}

inline bool is_complete_2d(const Fan& fan) {
  if (fan.dim != 2) throw UnsupportedError("completeness is only implemented in dimension 2");
  if (fan.size() < 3) return false;
  std::vector<int> order(fan.size());
  for (int i = 0; i < fan.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return angle_less(fan.vectors[a], fan.vectors[b]); });
  for (std::size_t k = 0; k < order.size(); ++k) {
    int a = order[k], b = order[(k + 1) % order.size()];
    if (cross2(fan.vectors[a], fan.vectors[b]) <= 0) return false;
    if (!fan.has_cone({a, b})) return false;
  }
  return true;
}

}  // namespace logaff
