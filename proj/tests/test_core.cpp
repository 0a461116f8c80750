#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "logaff/fixtures.hpp"
#include "support/oracles.hpp"

using namespace logaff;
using fixtures::v2;

namespace {

RatVector vec(std::initializer_list<long> xs) { return RatVector::of_ints(xs); }

std::vector<RatVector> random_vectors(std::mt19937& rng, int count, int dim, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<RatVector> out;
  for (int i = 0; i < count; ++i) {
    std::vector<Rational> xs;
    for (int j = 0; j < dim; ++j) xs.push_back(d(rng));
    out.push_back(RatVector(xs));
  }
  return out;
}

}  // namespace

TEST(ExactLinalg, IndependenceExamples) {
  EXPECT_TRUE(linear_independent({vec({1, 0}), vec({1, 1})}));
  EXPECT_FALSE(linear_independent({vec({1, 0}), vec({2, 0})}));
  EXPECT_FALSE(linear_independent({vec({1, 0}), vec({1, 1}), vec({0, 1})}));
  EXPECT_TRUE(linear_independent({}));
  EXPECT_THROW(linear_independent({vec({1, 0}), vec({1, 0, 0})}), DimensionError);
}

TEST(ExactLinalg, RationalArithmeticIsExact) {
  RatVector a{Rational(1, 3), Rational(2, 7)};
  RatVector b{Rational(-1, 3), Rational(5, 7)};
  EXPECT_EQ(a + b, (RatVector{Rational(0), Rational(1)}));
  EXPECT_EQ(dot(a, b), Rational(-1, 9) + Rational(10, 49));
  AffineFunctional f{vec({-1, 1}), Rational(1, 2)};
  EXPECT_EQ(f(RatVector{Rational(1), Rational(3, 2)}), Rational(1));
}

TEST(ExactLinalg, ConeContainsExamples) {
  EXPECT_TRUE(cone_contains({vec({1, 0}), vec({0, 1})}, vec({1, 1})));
  EXPECT_FALSE(cone_contains({vec({1, 0}), vec({1, 1})}, vec({0, 1})));
  EXPECT_FALSE(cone_contains({vec({1, 0})}, vec({0, 0}), true));
  EXPECT_TRUE(cone_contains({vec({1, 0})}, vec({0, 0})));
  EXPECT_FALSE(cone_contains({vec({1, 0}), vec({0, 1})}, vec({1, 0}), true));
  EXPECT_THROW(cone_contains({vec({1, 0}), vec({2, 0})}, vec({1, 0})), std::invalid_argument);
}

TEST(ExactLinalg, SaturationExamples) {
  EXPECT_TRUE(is_saturated_lattice_basis({vec({1, 0}), vec({0, 1})}));
  EXPECT_TRUE(is_saturated_lattice_basis({vec({1, 0}), vec({1, 1})}));
  EXPECT_FALSE(is_saturated_lattice_basis({vec({2, 0})}));
  EXPECT_FALSE(is_saturated_lattice_basis({vec({1, 0}), vec({1, 2})}));
  EXPECT_TRUE(is_saturated_lattice_basis({}));
  EXPECT_THROW(is_saturated_lattice_basis({RatVector{Rational(1, 2), Rational(0)}}), std::invalid_argument);
}

TEST(ExactLinalg, SmithNormalFormFrozen) {
  auto s = smith_normal_form({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  ASSERT_EQ(s.rank, 3u);
  EXPECT_EQ(s.divisors, (std::vector<Integer>{2, 6, 12}));
  auto t = smith_normal_form({{1, 0}, {1, 2}});
  EXPECT_EQ(t.divisors, (std::vector<Integer>{1, 2}));
}

TEST(ExactLinalgProperty, IndependenceMatchesMinorOracle) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    int dim = 2 + trial % 3;
    int count = 1 + (trial / 3) % 4;
    auto vs = random_vectors(rng, count, dim, -2, 2);
    EXPECT_EQ(linear_independent(vs), oracle::independent_by_minors(vs)) << "trial " << trial;
  }
}

TEST(ExactLinalgProperty, GeneratorsLieInTheirCone) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto vs = random_vectors(rng, 2, 3, -3, 3);
    if (!linear_independent(vs)) continue;
    for (const auto& g : vs) EXPECT_TRUE(cone_contains(vs, g));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ExactLinalgProperty, SaturationInvariantUnderUnimodularRowOps) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> k(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    auto vs = random_vectors(rng, 2, 3, -3, 3);
    if (!linear_independent(vs)) continue;
    bool base = is_saturated_lattice_basis(vs);
    std::vector<RatVector> swapped{vs[1], vs[0]};
    EXPECT_EQ(is_saturated_lattice_basis(swapped), base);
    std::vector<RatVector> sheared{vs[0], vs[1] + Rational(k(rng)) * vs[0]};
    EXPECT_EQ(is_saturated_lattice_basis(sheared), base);
    std::vector<RatVector> negated{-vs[0], vs[1]};
    EXPECT_EQ(is_saturated_lattice_basis(negated), base);
  }
}

TEST(ExactLinalgProperty, SaturationMatchesUnimodularCompletionSearch) {
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      if (a == 0 && b == 0) continue;
      bool lib = is_saturated_lattice_basis({vec({a, b})});
      EXPECT_EQ(lib, oracle::extends_to_unimodular({{a, b}})) << a << "," << b;
    }
}

TEST(ExactLinalgProperty, SmithDivisorProductMatchesDeterminant) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix m{{d(rng), d(rng)}, {d(rng), d(rng)}};
    Integer det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    auto s = smith_normal_form(m);
    Integer prod = 1;
    for (const auto& x : s.divisors) prod *= x;
    if (det == 0) EXPECT_LT(s.rank, 2u);
    else EXPECT_EQ(prod, abs(det));
    for (std::size_t i = 1; i < s.divisors.size(); ++i) EXPECT_EQ(s.divisors[i] % s.divisors[i - 1], 0);
  }
}

TEST(Fans, ThreeRayFanValidates) {
  EXPECT_TRUE(validate_fan(fixtures::three_ray_fan()).ok());
  EXPECT_TRUE(validate_fan(Fan(2, {}, {})).ok());
}

TEST(Fans, HullViolationNamesTheVector) {
  Fan f(2, {v2(1, 0), v2(1, 1), v2(0, 1)}, {{}, {0}, {1}, {2}, {1, 2}, {0, 2}});
  auto rep = validate_fan(f);
  ASSERT_FALSE(rep.ok());
  bool hull = false;
  for (const auto& v : rep.violations)
    if (v.kind == FanViolation::HullMeets) {
      hull = true;
      EXPECT_NE(v.message.find("(1,1)"), std::string::npos);
    }
  EXPECT_TRUE(hull);
}

TEST(Fans, StructuralViolations) {
  EXPECT_FALSE(validate_fan(Fan(2, {v2(1, 0), v2(1, 0)}, {{}})).ok());
  EXPECT_FALSE(validate_fan(Fan(2, {v2(0, 0)}, {{}})).ok());
  EXPECT_FALSE(validate_fan(Fan(2, {v2(1, 0), v2(-1, 0)}, {{}, {0}, {1}, {0, 1}})).ok());
  EXPECT_FALSE(validate_fan(Fan(2, {v2(1, 0), v2(0, 1)}, {{}, {0}, {0, 1}})).ok());  // missing face {1}
  EXPECT_FALSE(validate_fan(Fan(2, {v2(1, 0)}, {{}, {3}})).ok());
  Fan no_empty(2, {v2(1, 0)}, {{0}});
  no_empty.cones.erase(Cone{});
  EXPECT_FALSE(validate_fan(no_empty).ok());
}

TEST(Fans, StarAndAdjacency) {
  auto f = fixtures::three_ray_fan();
  EXPECT_EQ(star(f, 2), (VectorSetFamily{{v2(0, 1)}, {v2(0, 1), v2(1, 1)}}));
  EXPECT_EQ(star(f, 0), (VectorSetFamily{{v2(1, 0)}}));
  EXPECT_EQ(adjacent_vectors(f, 2), (std::set<RatVector>{v2(1, 1)}));
  EXPECT_TRUE(adjacent_vectors(f, 0).empty());
  Fan single(2, {v2(1, 0)}, {{}, {0}});
  EXPECT_EQ(star(single, 0), (VectorSetFamily{{v2(1, 0)}}));
  EXPECT_TRUE(adjacent_vectors(single, 0).empty());
  EXPECT_THROW(star(f, 5), std::out_of_range);
}

TEST(Fans, Completeness) {
  EXPECT_TRUE(is_complete_2d(fixtures::hexagonal_fan()));
  EXPECT_TRUE(is_complete_2d(fixtures::triangle_fan()));
  EXPECT_FALSE(is_complete_2d(fixtures::three_ray_fan()));
  EXPECT_FALSE(is_complete_2d(Fan(2, {}, {})));
  EXPECT_THROW(is_complete_2d(Fan(1, {}, {})), UnsupportedError);
}

TEST(FansProperty, CompletenessInvariantUnderRelabeling) {
  std::mt19937 rng(19);
  for (const auto& base : {fixtures::hexagonal_fan(), fixtures::square_fan(), fixtures::three_ray_fan(),
                           fixtures::triangle_fan()}) {
    bool expect = is_complete_2d(base);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> perm(base.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<RatVector> vs(base.size());
      for (int i = 0; i < base.size(); ++i) vs[perm[i]] = base.vectors[i];
      std::vector<Cone> cs;
      for (const auto& c : base.cones) {
        Cone m;
        for (int i : c) m.push_back(perm[i]);
        cs.push_back(m);
      }
      Fan f(2, vs, cs);
      EXPECT_TRUE(validate_fan(f).ok());
      EXPECT_EQ(is_complete_2d(f), expect);
    }
  }
}

TEST(FansProperty, AdjacencyIsSymmetric) {
  for (const auto& f : {fixtures::hexagonal_fan(), fixtures::three_ray_fan(), fixtures::triangle_fan()})
    for (int a = 0; a < f.size(); ++a)
      for (int b : adjacent_indices(f, a)) {
        auto back = adjacent_indices(f, b);
        EXPECT_TRUE(std::find(back.begin(), back.end(), a) != back.end());
      }
}

TEST(Domains, StrataMirrorCones) {
  auto d = build_domain(fixtures::three_ray_fan(), "u");
  EXPECT_EQ(d.strata().size(), 5u);
  EXPECT_EQ(d.codim_strata(0).size(), 1u);
  EXPECT_EQ(d.codim_strata(1).size(), 3u);
  EXPECT_EQ(d.codim_strata(2).size(), 1u);
  int corner = d.stratum_index({1, 2});
  int edge = d.stratum_index({2});
  EXPECT_TRUE(d.in_closure(corner, edge));
  EXPECT_TRUE(d.in_closure(edge, d.open_stratum()));
  EXPECT_FALSE(d.in_closure(edge, corner));
  EXPECT_EQ(d.strata()[corner].dim, 0);
}

TEST(Domains, Residues) {
  auto d = build_domain(fixtures::three_ray_fan());
  EXPECT_EQ(residue(d, d.stratum_index({1})), v2(1, 1));
  EXPECT_THROW(residue(d, d.stratum_index({1, 2})), std::invalid_argument);
  EXPECT_THROW(residue(d, d.open_stratum()), std::invalid_argument);
}

TEST(Domains, InvalidFanRejected) {
  EXPECT_THROW(build_domain(Fan(2, {v2(1, 0), v2(-1, 0)}, {{}, {0}, {1}, {0, 1}})), InvalidFanError);
}

TEST(Domains, CornerQuadrants) {
  auto d = build_domain(fixtures::three_ray_fan());
  auto q = corner_quadrants(d, {1, 2});
  int owned = 0;
  for (const auto& x : q) owned += x.owned;
  EXPECT_EQ(owned, 1);
  EXPECT_TRUE(q[0].owned);
  EXPECT_EQ(q[0].sign_a, 1);
  EXPECT_EQ(q[0].sign_b, 1);
  EXPECT_THROW(corner_quadrants(d, {0, 1}), std::invalid_argument);
  EXPECT_THROW(corner_quadrants(d, {1}), std::invalid_argument);
}
