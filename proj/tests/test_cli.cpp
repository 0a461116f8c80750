#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "logaff/cli.hpp"

using namespace logaff;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = LOGAFF_FIXTURES;

std::string fx(const std::string& name) { return (kDir / name).string(); }

struct Run {
  int code;
  std::string out, err;
  bool has(const std::string& line) const { return ("\n" + out).find("\n" + line + "\n") != std::string::npos; }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

fs::path scratch_file(const std::string& name, const std::string& text) {
  auto dir = fs::temp_directory_path() / "logaff_cli_tests";
  fs::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::set<std::set<StratumRef>> classes(const WeldedSpace& w) {
  std::set<std::set<StratumRef>> out;
  for (const auto& c : w.strata) out.insert({c.members.begin(), c.members.end()});
  return out;
}

}  // namespace

TEST(Io, MalformedFileReportsLineAndColumn) {
  try {
    io::parse_fan(io::detail::read_file(fx("malformed.fan")));
    FAIL() << "expected a parse error";
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line, 5);
    EXPECT_EQ(e.column, 1);
  }
  try {
    io::parse_fan(io::detail::read_file(fx("unknown_key.fan")));
    FAIL() << "expected a parse error";
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line, 7);
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(Io, HeaderChecks) {
  EXPECT_THROW(io::parse_fan("format: logaff-fan\nversion: 2\ndim: 2\nvectors: []\ncones: [[]]\n"), io::ParseError);
  EXPECT_THROW(io::parse_fan("format: logaff-box\nversion: 1\n"), io::ParseError);
  EXPECT_THROW(io::detect_kind("just: text\n"), io::ParseError);
  EXPECT_THROW(io::parse_fan("format: logaff-fan\nversion: 1\ndim: 2\nvectors: [[1/0, 1]]\ncones: [[]]\n"),
               io::ParseError);
}

TEST(Io, RationalsAreExact) {
  auto f = io::parse_fan("format: logaff-fan\nversion: 1\ndim: 2\nvectors: [[1/3, -2/4]]\ncones: [[], [0]]\n");
  EXPECT_EQ(f.fan.vectors[0], (RatVector{Rational(1, 3), Rational(-1, 2)}));
}

TEST(Io, EveryCorpusFileIsCanonical) {
  int files = 0;
  for (const auto& entry : fs::directory_iterator(kDir)) {
    auto name = entry.path().filename().string();
    if (name == "malformed.fan" || name == "unknown_key.fan") continue;
    auto r = run({"fmt", entry.path().string()});
    EXPECT_EQ(r.code, 0) << name << ": " << r.err;
    EXPECT_EQ(r.out, io::detail::read_file(entry.path())) << name;
    ++files;
  }
  EXPECT_GE(files, 28);
}

TEST(Io, CorpusMatchesInMemoryFixtures) {
  const std::pair<const char*, WeldingSpec (*)()> weldings[] = {{"sphere.weld", fixtures::sphere},
                                                                {"torus.weld", fixtures::torus},
                                                                {"genus2.weld", fixtures::genus2},
                                                                {"skew_lines.weld", fixtures::skew_lines}};
  for (auto [file, make] : weldings) {
    auto spec = cli::load_spec(fx(file));
    EXPECT_EQ(classes(build_welded_space(spec)), classes(build_welded_space(make()))) << file;
  }
  const std::pair<const char*, fixtures::PolytopeFixture (*)()> polys[] = {
      {"compdelt.poly", fixtures::compdelt}, {"gen1.poly", fixtures::gen1}, {"quadrant.poly", fixtures::quadrant_polytope},
      {"sphere.poly", fixtures::whole_sphere}, {"rect.poly", fixtures::log_rectangle}};
  for (auto [file, make] : polys) {
    auto a = cli::load_polytope(fx(file));
    auto b = make().build();
    EXPECT_EQ(a.cells0.size(), b.cells0.size()) << file;
    EXPECT_EQ(a.cells1.size(), b.cells1.size()) << file;
    EXPECT_EQ(a.faces.size(), b.faces.size()) << file;
  }
}

TEST(Io, EmittedFilesParseBack) {
  auto text = io::emit(io::welding_file(fixtures::corner_glue().spec));
  auto back = io::emit(io::parse_welding(text));
  EXPECT_EQ(text, back);
  io::BundleFile b{{{RatVector{Rational(2, 3)}}}};
  EXPECT_EQ(io::parse_bundle(io::emit(b)).bundle.chern, b.bundle.chern);
}

TEST(Cli, CohomologyReports) {
  auto s = run({"cohomology", fx("sphere.weld")});
  EXPECT_EQ(s.code, 0);
  EXPECT_TRUE(s.has("h2_log = 10")) << s.out;
  auto g = run({"cohomology", fx("genus2.weld")});
  EXPECT_TRUE(g.has("h2_log = 13")) << g.out;
  auto h = run({"cohomology", "--bundle", fx("hopf.bundle"), fx("sphere.weld")});
  EXPECT_TRUE(h.has("effective_moduli_dim = 9")) << h.out;
  auto kv = run({"--format", "kv", "cohomology", fx("torus.weld")});
  EXPECT_TRUE(kv.has("h2_log=9")) << kv.out;
}

TEST(Cli, TopologyReports) {
  auto r = run({"topology", fx("genus2.weld")});
  EXPECT_TRUE(r.has("euler = -2"));
  EXPECT_TRUE(r.has("genus = 2"));
  EXPECT_TRUE(r.has("orientable = true"));
  auto s = run({"topology", fx("skew_lines.weld")});
  EXPECT_TRUE(s.has("euler = 1"));
  EXPECT_TRUE(s.has("divisor_other = 3"));
}

TEST(Cli, WeldReportsCoercedPairs) {
  auto r = run({"weld", fx("corner_glue.weld")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.has("coerced = q1:x1~q2:x2")) << r.out;
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", fx("three_ray.fan")}).code, 0);
  EXPECT_EQ(run({"validate", fx("three_ray_hull.fan")}).code, 1);
  EXPECT_EQ(run({"validate", fx("dependent.fan")}).code, 1);
  auto c1 = run({"validate", fx("condition1.weld")});
  EXPECT_EQ(c1.code, 1);
  EXPECT_NE(c1.out.find("a:ya"), std::string::npos);
  EXPECT_EQ(run({"validate", fx("condition2.weld")}).code, 1);
  auto m = run({"validate", fx("malformed.fan")});
  EXPECT_EQ(m.code, 2);
  EXPECT_NE(m.err.find("5:1"), std::string::npos);
  EXPECT_EQ(run({"validate", fx("unknown_key.fan")}).code, 2);
  EXPECT_EQ(run({"validate", fx("no_such_file.fan")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, DelzantAndVolume) {
  EXPECT_EQ(run({"delzant", fx("unit_square.poly")}).code, 0);
  auto bad = run({"delzant", fx("bad_vertex.poly")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(bad.has("delzant = false"));
  auto v = run({"volume", fx("interval.poly")});
  EXPECT_TRUE(v.has("volume = 1.000000000000")) << v.out;
  EXPECT_TRUE(v.has("volume_exact = 1"));
  auto box = run({"volume", fx("rect.box")});
  EXPECT_TRUE(box.has("volume = 1.241953024337")) << box.out;
  EXPECT_EQ(run({"volume", fx("compdelt.poly")}).code, 1);
}

TEST(Cli, CutReport) {
  auto r = run({"cut", fx("gen1.poly")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.has("euler = 0"));
  EXPECT_TRUE(r.has("smooth_closed = true"));
  auto rec = run({"cut", "--record", fx("unit_square.poly")});
  EXPECT_NE(rec.out.find("format: logaff-record"), std::string::npos);
}

TEST(Cli, RenderSvg) {
  auto f = run({"render", fx("three_ray.fan")});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(count(f.out, "class=\"ray\""), 3);
  EXPECT_EQ(count(f.out, "class=\"cone\""), 1);
  auto p = run({"render", fx("compdelt.poly")});
  EXPECT_EQ(count(p.out, "class=\"halfspace\""), 2);
  auto w = run({"render", fx("sphere.weld")});
  EXPECT_EQ(count(w.out, "class=\"ray\""), 24);
  auto three = scratch_file("cube.fan", "format: logaff-fan\nversion: 1\ndim: 3\nvectors: [[1, 0, 0]]\ncones: [[], [0]]\n");
  auto r3 = run({"render", three.string()});
  EXPECT_EQ(r3.code, 3);
  EXPECT_NE(r3.err.find("unsupported"), std::string::npos);
}

TEST(Cli, OutFlagWritesFile) {
  auto dest = fs::temp_directory_path() / "logaff_cli_tests" / "sphere.txt";
  fs::create_directories(dest.parent_path());
  auto r = run({"--out", dest.string(), "topology", fx("sphere.weld")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(io::detail::read_file(dest).find("genus = 0"), std::string::npos);
}
