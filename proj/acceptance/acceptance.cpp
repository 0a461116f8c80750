#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "logaff/cli.hpp"
#include "support/oracles.hpp"

using namespace logaff;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = LOGAFF_FIXTURES;

class Criterion {
 public:
  explicit Criterion(int n) : n_(n) {}
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  bool report() const {
    std::cout << "criterion " << n_ << ": " << (failures_.empty() ? "PASS" : "FAIL") << " (" << checks_ - failures_.size()
              << "/" << checks_ << " checks)";
    for (const auto& f : failures_) std::cout << "\n    failed: " << f;
    std::cout << "\n";
    return failures_.empty();
  }

 private:
  int n_;
  int checks_ = 0;
  std::vector<std::string> failures_;
};

std::string cli_out(std::vector<std::string> args) {
  std::ostringstream out, err;
  cli::run(std::move(args), out, err);
  return "\n" + out.str();
}

bool has_line(const std::string& out, const std::string& line) { return out.find("\n" + line + "\n") != std::string::npos; }

std::set<std::set<StratumRef>> classes(const WeldedSpace& w) {
  std::set<std::set<StratumRef>> out;
  for (const auto& c : w.strata) out.insert({c.members.begin(), c.members.end()});
  return out;
}

int count_kind(const DivisorTopology& d, DivisorInfo::Kind k) {
  return static_cast<int>(std::count_if(d.components.begin(), d.components.end(),
                                        [&](const DivisorInfo& c) { return c.kind == k; }));
}

template <class F>
void guarded(Criterion& c, const std::string& what, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    c.check(false, what + " threw: " + e.what());
  }
}

bool criterion1() {
  Criterion c(1);
  guarded(c, "cohomology", [&] {
    c.check(log_cohomology_dims(build_welded_space(fixtures::sphere())).log_betti[2] == 10, "sphere h2_log = 10");
    c.check(log_cohomology_dims(build_welded_space(fixtures::genus2())).log_betti[2] == 13, "genus 2 h2_log = 13");
    c.check(has_line(cli_out({"cohomology", (kDir / "sphere.weld").string()}), "h2_log = 10"), "cli sphere");
    c.check(has_line(cli_out({"cohomology", (kDir / "genus2.weld").string()}), "h2_log = 13"), "cli genus 2");
  });
  return c.report();
}

bool criterion2() {
  Criterion c(2);
  struct Case {
    const char* name;
    WeldingSpec (*make)();
    int euler, genus, circles, lines, crossings;
  };
  const Case cases[] = {{"sphere", fixtures::sphere, 2, 0, 3, 0, 6},
                        {"torus", fixtures::torus, 0, 1, 4, 0, 4},
                        {"genus2", fixtures::genus2, -2, 2, 6, 0, 6},
                        {"skew_lines", fixtures::skew_lines, 1, -1, 0, 3, 3}};
  for (const auto& k : cases)
    guarded(c, k.name, [&] {
      auto w = build_welded_space(k.make());
      auto cx = cell_complex(w);
      auto d = divisor_topology(w);
      std::string n = k.name;
      c.check(euler_characteristic(cx) == k.euler, n + " euler");
      if (k.genus >= 0) {
        auto s = classify_closed_surface(cx);
        c.check(s.genus == k.genus, n + " genus");
        c.check(s.orientable, n + " orientable");
      }
      c.check(count_kind(d, DivisorInfo::Circle) == k.circles, n + " divisor circles");
      c.check(count_kind(d, DivisorInfo::Line) == k.lines, n + " divisor lines");
      c.check(static_cast<int>(d.components.size()) == k.circles + k.lines, n + " divisor components");
      c.check(d.crossing_total == k.crossings, n + " crossings");
      c.check(w.orientable, n + " orientable space");
    });
  return c.report();
}

bool criterion3() {
  Criterion c(3);
  guarded(c, "matched pairs", [&] {
    for (auto make : {fixtures::sphere, fixtures::torus, fixtures::genus2, fixtures::skew_lines}) {
      auto s = make();
      for (const auto& p : s.pairs) c.check(bool(is_matched_pair(s, p)), "matched " + s.pair_name(p));
    }
    for (auto make : {fixtures::corner_glue, fixtures::condition1, fixtures::condition2}) {
      auto pw = make();
      for (const auto& p : pw.spec.pairs) c.check(bool(is_matched_pair(pw.spec, p)), "matched " + pw.spec.pair_name(p));
      c.check(bool(is_matched_pair(pw.spec, pw.pair)), "matched " + pw.spec.pair_name(pw.pair));
    }
  });
  guarded(c, "corner glue", [&] {
    auto pw = fixtures::corner_glue();
    auto forced = coerced_pairs(pw.spec, pw.pair);
    MatchedPair want{fixtures::face(pw.spec, "q1", "x1"), fixtures::face(pw.spec, "q2", "x2")};
    c.check(forced.size() == 1 && forced.front() == want, "corner glue coerces exactly q1:x1~q2:x2");
    auto out = weld_pair(pw.spec, pw.pair);
    c.check(out.pairs.size() == pw.spec.pairs.size() + 2 && out.contains(want), "welded list gains exactly the coerced pair");
  });
  guarded(c, "obstructions", [&] {
    auto c1 = fixtures::condition1();
    auto r1 = is_locally_obstructed(c1.spec, c1.pair);
    c.check(r1.obstructed && r1.witness.condition == 1 && !r1.witness.faces.empty(), "condition 1 witness");
    auto c2 = fixtures::condition2();
    auto r2 = is_locally_obstructed(c2.spec, c2.pair);
    c.check(r2.obstructed && r2.witness.condition == 2 && !r2.witness.faces.empty(), "condition 2 witness");
    for (auto* pw : {&c1, &c2}) {
      bool thrown = false;
      try {
        weld_pair(pw->spec, pw->pair);
      } catch (const GloballyObstructedError&) {
        thrown = true;
      }
      c.check(thrown, "weld of obstructed pair rejected");
    }
  });
  guarded(c, "permutations", [&] {
    std::mt19937 rng(2024);
    for (auto make : {fixtures::sphere, fixtures::torus, fixtures::genus2, fixtures::skew_lines}) {
      auto s = make();
      auto want = classes(build_welded_space(s));
      for (int trial = 0; trial < 25; ++trial) {
        auto t = s;
        std::shuffle(t.pairs.begin(), t.pairs.end(), rng);
        for (auto& p : t.pairs)
          if (rng() % 2) std::swap(p.left, p.right);
        c.check(classes(build_welded_space(t)) == want, "isomorphic under permutation " + std::to_string(trial));
      }
    }
  });
  return c.report();
}

bool criterion4() {
  Criterion c(4);
  guarded(c, "compdelt", [&] {
    auto p = fixtures::compdelt().build();
    c.check(p.compact && is_compact_2d(p), "compdelt compact");
    c.check(p.count(PolytopeFace::Singular) == 2, "compdelt 2 singular faces");
    c.check(p.count(PolytopeFace::Log) == 2, "compdelt 2 log faces");
    auto q = fixtures::compdelt_without_f2().build();
    c.check(!q.compact && !is_compact_2d(q), "dropping f2 loses compactness");
  });
  guarded(c, "gen1", [&] {
    auto p = fixtures::gen1().build();
    auto t = polytope_topology(p);
    c.check(t.genus == 1, "gen1 genus 1");
    c.check(t.log == 1 && t.singular == 0, "gen1 one log face, no singular face");
    c.check(delzant_check(p).ok, "gen1 Delzant");
    auto cut = cut_report(p, {});
    c.check(cut.euler == 0, "gen1 cut euler 0");
    c.check(cut.smooth_closed, "gen1 cut smooth and closed");
  });
  return c.report();
}

bool criterion5() {
  Criterion c(5);
  guarded(c, "examples", [&] {
    c.check(delzant_check(fixtures::unit_square().build()).ok, "unit square passes");
    c.check(!delzant_check(fixtures::bad_vertex().build()).ok, "(1,0)/(1,2) vertex fails");
  });
  guarded(c, "sweep", [&] {
    using fixtures::v2;
    int mismatches = 0, wedges = 0;
    for (long a0 = -3; a0 <= 3; ++a0)
      for (long a1 = -3; a1 <= 3; ++a1)
        for (long b0 = -3; b0 <= 3; ++b0)
          for (long b1 = -3; b1 <= 3; ++b1) {
            bool want = oracle::extends_to_unimodular({{a0, a1}, {b0, b1}});
            if (is_saturated_lattice_basis({v2(a0, a1), v2(b0, b1)}) != want) ++mismatches;
            if (a0 * b1 - a1 * b0 == 0 || !is_primitive_integral(v2(a0, a1)) || !is_primitive_integral(v2(b0, b1)))
              continue;
            auto ws = fixtures::single_domain(Fan(2, {}, {}));
            auto p = build_polytope(ws, {{{0, {fixtures::con(a0, a1, 0), fixtures::con(b0, b1, 0)}}}});
            if (delzant_check(p).ok != want) ++mismatches;
            ++wedges;
          }
    for (long a0 = -3; a0 <= 3; ++a0)
      for (long a1 = -3; a1 <= 3; ++a1)
        if (a0 || a1)
          if (is_saturated_lattice_basis({v2(a0, a1)}) != oracle::extends_to_unimodular({{a0, a1}})) ++mismatches;
    c.check(mismatches == 0, std::to_string(mismatches) + " mismatches against the completion search");
    c.check(wedges == 960, "wedge count");
  });
  return c.report();
}

bool criterion6() {
  Criterion c(6);
  guarded(c, "interval", [&] {
    auto v = regularized_volume(fixtures::log_interval().build());
    c.check(std::fabs(v.value - 1) < 1e-9, "[-1,e] has volume 1");
    auto sym = fixtures::log_interval();
    sym.spec.pieces[1].constraints[0].f.constant = 1;
    c.check(std::fabs(regularized_volume(sym.build()).value) < 1e-12, "[-e,e] has volume 0");
    for (double a : {0.5, 1.0, 3.0})
      c.check(std::fabs(regularized_volume(NormalFormBox{{{-a, a}}, {true}})) < 1e-12, "symmetric box volume 0");
  });
  guarded(c, "rectangles", [&] {
    const double rects[][4] = {{1, 2, 1, 3}, {0.5, 4, 2, 0.25}, {3, 3, 1, 7}, {1.5, 2.5, 0.2, 0.9}, {0.75, 5, 4, 1.25}};
    for (const auto& r : rects) {
      NormalFormBox box{{{-r[0], r[1]}, {-r[2], r[3]}}, {true, true}};
      double want = std::log(r[1] / r[0]) * std::log(r[3] / r[2]);
      c.check(std::fabs(regularized_volume(box) - want) < 1e-9, "rectangle closed form");
    }
    c.check(std::fabs(regularized_volume(fixtures::log_rectangle().build()).value - 1) < 1e-9, "[-1,e]^2 has volume 1");
  });
  guarded(c, "additivity", [&] {
    NormalFormBox whole{{{-1, 2}, {-0.5, 3}}, {true, true}};
    double total = regularized_volume(whole);
    for (double t : {-0.5, 0.25, 1.0, 1.5}) {
      NormalFormBox left{{{-1, t}, {-0.5, 3}}, {true, true}};
      NormalFormBox right{{{t, 2}, {-0.5, 3}}, {true, true}};
      c.check(std::fabs(regularized_volume(left) + regularized_volume(right) - total) < 1e-8, "x subdivision");
      NormalFormBox low{{{-1, 2}, {-0.5, t + 1}}, {true, true}};
      NormalFormBox high{{{-1, 2}, {t + 1, 3}}, {true, true}};
      c.check(std::fabs(regularized_volume(low) + regularized_volume(high) - total) < 1e-8, "y subdivision");
    }
  });
  return c.report();
}

bool criterion7() {
  Criterion c(7);
  for (auto make : {fixtures::sphere, fixtures::torus, fixtures::genus2, fixtures::skew_lines})
    guarded(c, "welded", [&] {
      auto cx = cell_complex(build_welded_space(make()));
      c.check(oracle::boundary_squares_to_zero(cx), "boundary of boundary vanishes");
      c.check(oracle::betti(cx) == surface_betti(cx).b, "welded space Betti numbers");
    });
  for (auto make : {fixtures::compdelt, fixtures::gen1, fixtures::whole_sphere, fixtures::unit_square,
                    fixtures::quadrant_polytope, fixtures::log_rectangle})
    guarded(c, "polytope", [&] {
      auto cx = cell_complex(make().build());
      c.check(oracle::boundary_squares_to_zero(cx), "polytope boundary of boundary vanishes");
      c.check(oracle::bm_betti(cx) == surface_betti(cx).b, "polytope Betti numbers");
    });
  guarded(c, "gen1 cut", [&] { c.check(cut_report(fixtures::gen1().build(), {}).euler == 0, "gen1 cut euler 0"); });
  return c.report();
}

}  // namespace

int main() {
  bool ok = true;
  for (auto f : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7}) ok = f() && ok;
  return ok ? 0 : 1;
}
