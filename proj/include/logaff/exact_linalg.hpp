#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace logaff {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

class RatVector {
 public:
  RatVector() = default;
  explicit RatVector(std::size_t n) : c_(n, Rational(0)) {}
  RatVector(std::initializer_list<Rational> xs) : c_(xs) {}
  explicit RatVector(std::vector<Rational> xs) : c_(std::move(xs)) {}

  static RatVector of_ints(std::initializer_list<long> xs) {
    RatVector v;
    for (long x : xs) v.c_.emplace_back(x);
    return v;
  }

  std::size_t dim() const { return c_.size(); }
  const Rational& operator[](std::size_t i) const { return c_[i]; }
  Rational& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Rational>& coords() const { return c_; }

  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
  }
  bool is_integral() const {
    return std::all_of(c_.begin(), c_.end(),
                       [](const Rational& x) { return denominator(x) == 1; });
  }

  friend bool operator==(const RatVector&, const RatVector&) = default;
  friend bool operator<(const RatVector& a, const RatVector& b) { return a.c_ < b.c_; }

  RatVector operator-() const {
    RatVector r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend RatVector operator+(const RatVector& a, const RatVector& b) {
    check_same(a, b);
    RatVector r(a);
    for (std::size_t i = 0; i < r.dim(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend RatVector operator-(const RatVector& a, const RatVector& b) { return a + (-b); }
  friend RatVector operator*(const Rational& s, const RatVector& a) {
    RatVector r(a);
    for (auto& x : r.c_) x *= s;
    return r;
  }

  static void check_same(const RatVector& a, const RatVector& b) {
    if (a.dim() != b.dim()) throw DimensionError("vector dimension mismatch");
  }

  friend std::ostream& operator<<(std::ostream& os, const RatVector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v.c_[i];
    return os << ')';
  }

 private:
  std::vector<Rational> c_;
};

inline std::string to_string(const RatVector& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  RatVector::check_same(a, b);
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

// z-component of the planar cross product
inline Rational cross2(const RatVector& a, const RatVector& b) {
  if (a.dim() != 2 || b.dim() != 2) throw DimensionError("cross2 needs planar vectors");
  return a[0] * b[1] - a[1] * b[0];
}

struct AffineFunctional {
  RatVector linear_part;
  Rational constant{0};

  Rational operator()(const RatVector& x) const { return dot(linear_part, x) + constant; }
  std::size_t dim() const { return linear_part.dim(); }
  friend bool operator==(const AffineFunctional&, const AffineFunctional&) = default;
};

using RatMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<Integer>>;

inline std::size_t rank(RatMatrix m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline RatMatrix rows_of(const std::vector<RatVector>& vs) {
  RatMatrix m;
  for (const auto& v : vs) m.push_back(v.coords());
  return m;
}

inline std::size_t common_dim(const std::vector<RatVector>& vs) {
  if (vs.empty()) return 0;
  for (const auto& v : vs)
    if (v.dim() != vs.front().dim()) throw DimensionError("vectors of different dimension");
  return vs.front().dim();
}

inline std::size_t rank(const std::vector<RatVector>& vs) {
  common_dim(vs);
  return rank(rows_of(vs));
}

inline bool linear_independent(const std::vector<RatVector>& vs) {
  return rank(vs) == vs.size();
}

// Solves sum c_i g_i = v for independent g; returns nullopt-like empty vector when v is outside the span.
inline std::pair<bool, std::vector<Rational>> solve_in_span(const std::vector<RatVector>& g,
                                                           const RatVector& v) {
  const std::size_t k = g.size(), n = v.dim();
  for (const auto& x : g)
    if (x.dim() != n) throw DimensionError("generator dimension mismatch");
  // augmented system: n equations, k unknowns
  RatMatrix a(n, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = g[j][i];
    a[i][k] = v[i];
  }
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t p = r;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j <= k; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j <= k; ++j) a[i][j] -= f * a[r][j];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (a[i][k] != 0) return {false, {}};
  std::vector<Rational> coef(k, Rational(0));
  for (std::size_t i = 0; i < r; ++i) coef[pivcol[i]] = a[i][k];
  return {true, coef};
}

inline bool cone_contains(const std::vector<RatVector>& generators, const RatVector& v,
                          bool strict = false) {
  if (!linear_independent(generators)) throw std::invalid_argument("cone generators are dependent");
  if (!generators.empty() && generators.front().dim() != v.dim())
    throw DimensionError("vector dimension mismatch");
  if (generators.empty()) return !strict && v.is_zero();
  auto [ok, c] = solve_in_span(generators, v);
  if (!ok) return false;
  for (const auto& x : c)
    if (strict ? x <= 0 : x < 0) return false;
  return true;
}

struct SmithResult {
  std::vector<Integer> divisors;  // nonzero elementary divisors, in order
  std::size_t rank = 0;
};

inline SmithResult smith_normal_form(IntMatrix m) {
  SmithResult out;
  if (m.empty()) return out;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // pivot: smallest nonzero absolute value in the remaining block
      std::size_t pr = rows, pc = cols;
      Integer best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m[i][j] != 0 && (best == 0 || abs(m[i][j]) < best)) {
            best = abs(m[i][j]);
            pr = i;
            pc = j;
          }
      if (pr == rows) {
        out.rank = t;
        return out;
      }
      std::swap(m[pr], m[t]);
      for (auto& row : m) std::swap(row[pc], row[t]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        Integer q = m[i][t] / m[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        Integer q = m[t][j] / m[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the remaining block
      std::size_t bad_r = rows;
      for (std::size_t i = t + 1; i < rows && bad_r == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m[i][j] % m[t][t] != 0) {
            bad_r = i;
            break;
          }
      if (bad_r == rows) break;
      for (std::size_t j = t; j < cols; ++j) m[t][j] += m[bad_r][j];
    }
    out.divisors.push_back(abs(m[t][t]));
    out.rank = t + 1;
  }
  return out;
}

inline IntMatrix to_integer_rows(const std::vector<RatVector>& vs) {
  IntMatrix m;
  for (const auto& v : vs) {
    if (!v.is_integral()) throw std::invalid_argument("non-integer entry " + to_string(v));
    std::vector<Integer> row;
    for (const auto& x : v) row.push_back(numerator(x));
    m.push_back(row);
  }
  return m;
}

inline bool is_saturated_lattice_basis(const std::vector<RatVector>& covectors) {
  const std::size_t n = common_dim(covectors);
  auto m = to_integer_rows(covectors);
  if (covectors.size() > n && !covectors.empty()) return false;
  auto s = smith_normal_form(m);
  if (s.rank != covectors.size()) return false;
  return std::all_of(s.divisors.begin(), s.divisors.end(), [](const Integer& d) { return d == 1; });
}

inline Integer gcd_of(const RatVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, Integer(abs(numerator(x))));
  return g;
}

inline bool is_primitive_integral(const RatVector& v) {
  return v.is_integral() && gcd_of(v) == 1;
}

inline Rational det2(const RatVector& a, const RatVector& b) { return cross2(a, b); }

}  // namespace logaff
