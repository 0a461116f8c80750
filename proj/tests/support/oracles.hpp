#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "logaff/surface_topology.hpp"

namespace oracle {

using logaff::CellComplex;
using logaff::Integer;
using logaff::Rational;
using logaff::RatMatrix;
using logaff::RatVector;

// Exact rank by fraction-free elimination, kept separate from the library routine.
inline std::size_t bareiss_rank(std::vector<std::vector<Integer>> m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

struct BoundaryMatrices {
  std::vector<std::vector<Integer>> d1, d2;  // d1: E x V, d2: F x E
};

inline BoundaryMatrices boundary_matrices(const CellComplex& cx) {
  BoundaryMatrices b;
  for (const auto& e : cx.edges) {
    std::vector<Integer> row(cx.vertices, 0);
    if (e.head >= 0) row[e.head] += 1;
    if (e.tail >= 0) row[e.tail] -= 1;
    b.d1.push_back(row);
  }
  for (const auto& f : cx.faces) {
    std::vector<Integer> row(cx.edges.size(), 0);
    for (auto [e, s] : f.boundary) row[e] += s;
    b.d2.push_back(row);
  }
  return b;
}

inline bool boundary_squares_to_zero(const CellComplex& cx) {
  auto b = boundary_matrices(cx);
  for (const auto& f : b.d2)
    for (int v = 0; v < cx.vertices; ++v) {
      Integer s = 0;
      for (std::size_t e = 0; e < f.size(); ++e)
        if (f[e] != 0) s += f[e] * b.d1[e][v];
      if (s != 0) return false;
    }
  return true;
}

// Borel-Moore Betti numbers of the cell decomposition (ordinary ones when compact).
inline std::array<int, 3> bm_betti(const CellComplex& cx) {
  auto b = boundary_matrices(cx);
  int r1 = static_cast<int>(bareiss_rank(b.d1));
  int r2 = static_cast<int>(bareiss_rank(b.d2));
  int V = cx.vertices, E = static_cast<int>(cx.edges.size()), F = static_cast<int>(cx.faces.size());
  return {V - r1, E - r1 - r2, F - r2};
}

// Ordinary Betti numbers; non-compact inputs must be orientable surfaces without boundary.
inline std::array<int, 3> betti(const CellComplex& cx) {
  auto bm = bm_betti(cx);
  if (cx.compact()) return bm;
  return {bm[2], bm[1], bm[0]};
}

inline Rational det_minor(const std::vector<RatVector>& rows, const std::vector<int>& cols) {
  // Laplace expansion along the first row
  const std::size_t k = rows.size();
  if (k == 0) return 1;
  Rational s = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<RatVector> sub;
    for (std::size_t i = 1; i < k; ++i) sub.push_back(rows[i]);
    std::vector<int> sc;
    for (std::size_t t = 0; t < k; ++t)
      if (t != j) sc.push_back(cols[t]);
    Rational term = rows[0][cols[j]] * det_minor(sub, sc);
    s += (j % 2 == 0) ? term : Rational(-term);
  }
  return s;
}

// Independent iff some maximal minor is nonzero.
inline bool independent_by_minors(const std::vector<RatVector>& vs) {
  if (vs.empty()) return true;
  const int n = static_cast<int>(vs[0].dim());
  const int k = static_cast<int>(vs.size());
  if (k > n) return false;
  std::vector<int> cols(k);
  std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
    if (pos == k) return det_minor(vs, cols) != 0;
    for (int c = start; c < n; ++c) {
      cols[pos] = c;
      if (rec(pos + 1, c + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

// A k x 2 integer matrix (k <= 2) has saturated rows iff it extends to a unimodular 2x2 matrix;
// searched over completions with entries in [-bound, bound].
inline bool extends_to_unimodular(const std::vector<std::array<long, 2>>& rows, long bound = 3) {
  if (rows.size() == 2) {
    long d = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    return d == 1 || d == -1;
  }
  if (rows.empty()) return true;
  for (long x = -bound; x <= bound; ++x)
    for (long y = -bound; y <= bound; ++y) {
      long d = rows[0][0] * y - rows[0][1] * x;
      if (d == 1 || d == -1) return true;
    }
  return false;
}

// Symmetric principal value of f(x)/x over [lo, hi] with lo < 0 < hi, by folding onto (0, r].
inline double pv_over_x(const std::function<double(double)>& f, double lo, double hi) {
  double r = std::min(-lo, hi);
  auto odd = [&](double x) { return x == 0 ? 0.0 : (f(x) - f(-x)) / x; };
  std::function<double(double, double, double, double, double, double, int)> simpson =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) -> double {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = odd(lm), frm = odd(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth > 40 || std::fabs(left + right - whole) < 1e-14) return left + right;
    return simpson(a, m, fa, flm, fm, left, depth + 1) + simpson(m, b, fm, frm, fb, right, depth + 1);
  };
  auto integrate = [&](const std::function<double(double)>& g, double a, double b) {
    if (b <= a) return 0.0;
    // plain adaptive Simpson for a regular integrand
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double x0, double x1, double g0, double gm, double g1, double whole, int depth) -> double {
      double m = 0.5 * (x0 + x1), l = 0.5 * (x0 + m), rr = 0.5 * (m + x1);
      double gl = g(l), gr = g(rr);
      double left = (m - x0) / 6 * (g0 + 4 * gl + gm), right = (x1 - m) / 6 * (gm + 4 * gr + g1);
      if (depth > 40 || std::fabs(left + right - whole) < 1e-14) return left + right;
      return rec(x0, m, g0, gl, gm, left, depth + 1) + rec(m, x1, gm, gr, g1, right, depth + 1);
    };
    double g0 = g(a), g1 = g(b), gm = g(0.5 * (a + b));
    return rec(a, b, g0, gm, g1, (b - a) / 6 * (g0 + 4 * gm + g1), 0);
  };
  double eps = 1e-300;
  double a = eps, b = r;
  double fa = odd(std::max(a, 1e-12)), fm = odd(0.5 * (a + b)), fb = odd(b);
  double core = simpson(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 0);
  auto tail = [&](double x) { return f(x) / x; };
  double rest = hi > r ? integrate(tail, r, hi) : integrate(tail, lo, -r);
  return core + rest;
}

}  // namespace oracle
