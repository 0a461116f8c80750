#pragma once

#include <array>
#include <string>
#include <vector>

#include "fan.hpp"

namespace logaff {

struct InvalidFanError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Stratum {
  Cone cone;  // the residue set A
  int dim = 0;
  int codim() const { return static_cast<int>(cone.size()); }
};

struct Quadrant {
  int sign_a = 1, sign_b = 1;
  bool owned = false;
};

class TropicalDomain {
 public:
  TropicalDomain() = default;
  explicit TropicalDomain(Fan fan, std::string name = {}) : fan_(std::move(fan)), name_(std::move(name)) {
    auto rep = validate_fan(fan_);
    if (!rep.ok()) throw InvalidFanError("invalid fan: " + rep.violations.front().message);
    for (const auto& c : fan_.cones) strata_.push_back({c, fan_.dim - static_cast<int>(c.size())});
  }

  const Fan& fan() const { return fan_; }
  const std::string& name() const { return name_; }
  int dim() const { return fan_.dim; }
  const std::vector<Stratum>& strata() const { return strata_; }

  int stratum_index(const Cone& c) const {
    Cone s = make_cone(c);
    for (std::size_t i = 0; i < strata_.size(); ++i)
      if (strata_[i].cone == s) return static_cast<int>(i);
    return -1;
  }
  int open_stratum() const { return stratum_index({}); }

  // stratum(a) lies in the closure of stratum(b)
  bool in_closure(int a, int b) const {
    const auto& A = strata_.at(a).cone;
    const auto& B = strata_.at(b).cone;
    return std::includes(A.begin(), A.end(), B.begin(), B.end());
  }

  std::vector<int> codim_strata(int k) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < strata_.size(); ++i)
      if (strata_[i].codim() == k) out.push_back(static_cast<int>(i));
    return out;
  }

 private:
  Fan fan_;
  std::string name_;
  std::vector<Stratum> strata_;
};

inline TropicalDomain build_domain(const Fan& fan, std::string name = {}) {
  return TropicalDomain(fan, std::move(name));
}

inline RatVector residue(const TropicalDomain& d, int stratum) {
  const auto& s = d.strata().at(stratum);
  if (s.codim() != 1)
    throw std::invalid_argument("residue needs a codimension 1 stratum, got codimension " +
                                std::to_string(s.codim()));
  return d.fan().vectors[s.cone[0]];
}

inline std::array<Quadrant, 4> corner_quadrants(const TropicalDomain& d, const Cone& cone2) {
  Cone c = make_cone(cone2);
  if (c.size() != 2) throw std::invalid_argument("corner needs a 2-element cone");
  if (!d.fan().has_cone(c)) throw std::invalid_argument("cone " + cone_str(c) + " is not in the fan");
  return {Quadrant{1, 1, true}, Quadrant{-1, 1, false}, Quadrant{-1, -1, false}, Quadrant{1, -1, false}};
}

}  // namespace logaff
