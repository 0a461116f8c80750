#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "logaff/fixtures.hpp"
#include "support/oracles.hpp"

using namespace logaff;
using fixtures::face;
using fixtures::v2;

namespace {

struct Frozen {
  const char* name;
  WeldingSpec (*make)();
  int euler;
  std::array<int, 3> betti;
  std::array<int, 4> log_betti;
  int components;
  int crossings;
};

const Frozen kFrozen[] = {
    {"sphere", fixtures::sphere, 2, {1, 0, 1}, {1, 3, 10, 0}, 3, 6},
    {"torus", fixtures::torus, 0, {1, 2, 1}, {1, 6, 9, 0}, 4, 4},
    {"genus2", fixtures::genus2, -2, {1, 4, 1}, {1, 10, 13, 0}, 6, 6},
    {"skew_lines", fixtures::skew_lines, 1, {1, 0, 0}, {1, 3, 3, 0}, 3, 3},
};

std::set<std::set<StratumRef>> classes(const WeldedSpace& w) {
  std::set<std::set<StratumRef>> out;
  for (const auto& c : w.strata) out.insert({c.members.begin(), c.members.end()});
  return out;
}

}  // namespace

TEST(Welding, MatchedPairsOfFixtures) {
  for (const auto& fx : kFrozen) {
    auto s = fx.make();
    for (const auto& p : s.pairs) EXPECT_TRUE(is_matched_pair(s, p)) << fx.name << " " << s.pair_name(p);
  }
}

TEST(Welding, MatchedPairRejectsDifferentStars) {
  auto f = fixtures::three_ray_fan();
  WeldingSpec s{{TropicalDomain(f, "a"), TropicalDomain(f, "b")}, {}, {}};
  EXPECT_TRUE(is_matched_pair(s, {{0, 2}, {1, 2}}));
  EXPECT_FALSE(is_matched_pair(s, {{0, 0}, {1, 2}}));
  EXPECT_FALSE(is_matched_pair(s, {{0, 2}, {0, 2}}));
  EXPECT_THROW(is_matched_pair(s, {{0, 7}, {1, 2}}), std::out_of_range);
}

TEST(Welding, MatchedPairCarriesAdjacency) {
  auto s = fixtures::sphere();
  auto m = is_matched_pair(s, s.pairs.front());
  ASSERT_TRUE(m);
  const auto& p = s.pairs.front();
  for (auto [b, c] : m.psi) EXPECT_EQ(s.fan(p.left.domain).vectors[b], s.fan(p.right.domain).vectors[c]);
}

TEST(Welding, CornerGlueCoercesOnePair) {
  auto pw = fixtures::corner_glue();
  EXPECT_FALSE(is_locally_obstructed(pw.spec, pw.pair));
  auto forced = coerced_pairs(pw.spec, pw.pair);
  ASSERT_EQ(forced.size(), 1u);
  MatchedPair expect{face(pw.spec, "q1", "x1"), face(pw.spec, "q2", "x2")};
  EXPECT_EQ(forced.front(), expect);
  auto out = weld_pair(pw.spec, pw.pair);
  EXPECT_EQ(out.pairs.size(), pw.spec.pairs.size() + 2);
  EXPECT_TRUE(out.contains(expect));
  auto w = assemble(out);
  int interior_corners = 0;
  for (int c : w.classes_of_codim(2)) interior_corners += w.strata[c].interior;
  EXPECT_EQ(interior_corners, 1);
}

TEST(Welding, Condition1Witness) {
  auto pw = fixtures::condition1();
  auto r = is_locally_obstructed(pw.spec, pw.pair);
  ASSERT_TRUE(r);
  EXPECT_EQ(r.witness.condition, 1);
  ASSERT_EQ(r.witness.faces.size(), 2u);
  EXPECT_EQ(pw.spec.face_name(r.witness.faces[0]), "a:ya");
  EXPECT_EQ(pw.spec.face_name(r.witness.faces[1]), "b:yb");
  EXPECT_THROW(weld_pair(pw.spec, pw.pair), GloballyObstructedError);
}

TEST(Welding, Condition2Witness) {
  auto pw = fixtures::condition2();
  auto r = is_locally_obstructed(pw.spec, pw.pair);
  ASSERT_TRUE(r);
  EXPECT_EQ(r.witness.condition, 2);
  EXPECT_EQ(r.witness.faces.size(), 6u);
  EXPECT_FALSE(r.witness.message.empty());
  try {
    weld_pair(pw.spec, pw.pair);
    FAIL() << "expected a global obstruction";
  } catch (const GloballyObstructedError& e) {
    EXPECT_EQ(e.witness.condition, 2);
    EXPECT_EQ(e.pair, pw.pair);
  }
}

TEST(Welding, CoercedPairBlockedDownstream) {
  auto pw = fixtures::coerced_conflict();
  EXPECT_THROW(weld_pair(pw.spec, pw.pair), GloballyObstructedError);
}

TEST(Welding, AlreadyWeldedPairRejected) {
  auto s = fixtures::sphere();
  EXPECT_THROW(weld_pair(s, s.pairs.front()), WeldingError);
}

TEST(Welding, NotMatchedPairRejected) {
  auto f = fixtures::three_ray_fan();
  WeldingSpec s{{TropicalDomain(f, "a"), TropicalDomain(f, "b")}, {}, {}};
  EXPECT_THROW(is_locally_obstructed(s, {{0, 0}, {1, 2}}), NotMatchedError);
}

TEST(Welding, DisjointSets) {
  DisjointSets ds(5);
  ds.join(0, 3);
  ds.join(3, 4);
  EXPECT_EQ(ds.find(0), ds.find(4));
  EXPECT_NE(ds.find(1), ds.find(0));
  EXPECT_NE(ds.find(1), ds.find(2));
}

TEST(Welding, AffineMonodromyIsTrivial) {
  auto w = build_welded_space(fixtures::sphere());
  int a = w.pairs.front().left.domain, b = w.pairs.front().right.domain;
  EXPECT_TRUE(affine_monodromy(w, {a, b}).is_zero());
  EXPECT_THROW(affine_monodromy(w, {0, 99}), std::out_of_range);
}

TEST(WeldingProperty, PairOrderDoesNotMatter) {
  std::mt19937 rng(23);
  for (const auto& fx : kFrozen) {
    auto s = fx.make();
    auto base = build_welded_space(s);
    auto want = classes(base);
    for (int trial = 0; trial < 20; ++trial) {
      auto t = s;
      std::shuffle(t.pairs.begin(), t.pairs.end(), rng);
      for (auto& p : t.pairs)
        if (rng() % 2) std::swap(p.left, p.right);
      auto w = build_welded_space(t);
      EXPECT_EQ(classes(w), want) << fx.name;
      EXPECT_EQ(w.divisor_components.size(), base.divisor_components.size());
      EXPECT_EQ(w.crossings.size(), base.crossings.size());
      EXPECT_EQ(euler_characteristic(cell_complex(w)), euler_characteristic(cell_complex(base)));
    }
  }
}

TEST(WeldingProperty, CornerGlueOrderIndependent) {
  auto pw = fixtures::corner_glue();
  auto direct = build_welded_space([&] {
    auto s = pw.spec;
    s.pairs.push_back(pw.pair);
    return s;
  }());
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = pw.spec;
    s.pairs.push_back(pw.pair);
    std::shuffle(s.pairs.begin(), s.pairs.end(), rng);
    EXPECT_EQ(classes(build_welded_space(s)), classes(direct));
  }
}

TEST(Topology, FrozenInvariants) {
  for (const auto& fx : kFrozen) {
    auto w = build_welded_space(fx.make());
    auto cx = cell_complex(w);
    auto r = log_cohomology_dims(w);
    EXPECT_EQ(euler_characteristic(cx), fx.euler) << fx.name;
    EXPECT_EQ(r.betti.b, fx.betti) << fx.name;
    EXPECT_EQ(r.log_betti, fx.log_betti) << fx.name;
    EXPECT_EQ(static_cast<int>(r.divisor.components.size()), fx.components) << fx.name;
    EXPECT_EQ(r.divisor.crossing_total, fx.crossings) << fx.name;
    EXPECT_TRUE(r.orientable) << fx.name;
  }
}

TEST(Topology, BettiMatchesBoundaryRankOracle) {
  for (const auto& fx : kFrozen) {
    auto cx = cell_complex(build_welded_space(fx.make()));
    EXPECT_TRUE(oracle::boundary_squares_to_zero(cx)) << fx.name;
    EXPECT_EQ(surface_betti(cx).b, oracle::betti(cx)) << fx.name;
  }
}

TEST(Topology, ClosedSurfaceClassification) {
  EXPECT_EQ(classify_closed_surface(cell_complex(build_welded_space(fixtures::sphere()))).genus, 0);
  EXPECT_EQ(classify_closed_surface(cell_complex(build_welded_space(fixtures::torus()))).genus, 1);
  auto g2 = classify_closed_surface(cell_complex(build_welded_space(fixtures::genus2())));
  EXPECT_EQ(g2.genus, 2);
  EXPECT_TRUE(g2.orientable);
  EXPECT_THROW(classify_closed_surface(cell_complex(build_welded_space(fixtures::skew_lines()))), TopologyError);
}

TEST(Topology, DivisorKinds) {
  for (auto make : {fixtures::sphere, fixtures::torus, fixtures::genus2}) {
    auto d = divisor_topology(build_welded_space(make()));
    for (const auto& c : d.components) {
      EXPECT_EQ(c.kind, DivisorInfo::Circle);
      EXPECT_EQ(c.b1, 1);
    }
  }
  auto d = divisor_topology(build_welded_space(fixtures::skew_lines()));
  for (const auto& c : d.components) EXPECT_EQ(c.kind, DivisorInfo::Line);
  for (const auto& [ij, n] : d.crossings) EXPECT_LT(ij.first, ij.second);
}

TEST(Topology, SingleDomainIsAnOpenDisk) {
  auto w = fixtures::single_domain(fixtures::quadrant_fan());
  auto r = log_cohomology_dims(w);
  EXPECT_TRUE(r.formal);
  EXPECT_EQ(r.betti.b, (std::array<int, 3>{1, 0, 0}));
  EXPECT_TRUE(r.divisor.components.empty());
  EXPECT_EQ(r.divisor.crossing_total, 0);
  EXPECT_EQ(w.boundary.size(), 2u);
}

TEST(Topology, OrientationIsCoherent) {
  for (auto make : {fixtures::sphere, fixtures::torus, fixtures::genus2}) {
    auto cx = cell_complex(build_welded_space(make()));
    auto sign = coherent_orientation(cx);
    ASSERT_EQ(sign.size(), cx.faces.size());
    std::vector<int> sum(cx.edges.size(), 0);
    for (std::size_t f = 0; f < cx.faces.size(); ++f)
      for (auto [e, s] : cx.faces[f].boundary) sum[e] += s * sign[f];
    for (int x : sum) EXPECT_EQ(x, 0);
  }
}
