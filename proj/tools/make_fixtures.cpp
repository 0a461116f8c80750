#include <filesystem>
#include <fstream>
#include <iostream>

#include "logaff/io.hpp"

using namespace logaff;
using namespace logaff::fixtures;

static std::filesystem::path out_dir = "fixtures";

static void put(const std::string& name, const std::string& text) { std::ofstream(out_dir / name) << text; }

static io::WeldingFile pending(const PendingWeld& pw) {
  auto s = pw.spec;
  s.pairs.push_back(pw.pair);
  return io::welding_file(s);
}

static io::WeldingFile shared(io::WeldingFile w, const std::string& path, const Fan& f) {
  for (auto& d : w.domains)
    if (d.fan.vectors == f.vectors && d.fan.cones == f.cones) d.fan_path = path;
  return w;
}

// Writes the fixture corpus; the first argument overrides the output directory.
int main(int argc, char** argv) {
  if (argc > 1) out_dir = argv[1];
  std::filesystem::create_directories(out_dir);
  put("triangle.fan", io::emit(io::FanFile{triangle_fan()}));
  put("square.fan", io::emit(io::FanFile{square_fan()}));
  put("three_ray.fan", io::emit(io::FanFile{three_ray_fan()}));
  put("three_ray_hull.fan", io::emit(io::FanFile{Fan(2, {v2(1,0), v2(1,1), v2(0,1)}, {{}, {0}, {1}, {2}, {1,2}, {0,2}})}));
  put("dependent.fan", io::emit(io::FanFile{Fan(2, {v2(1,0), v2(-1,0)}, {{}, {0}, {1}, {0,1}})}));
  put("hexagonal.fan", io::emit(io::FanFile{hexagonal_fan()}));
  put("sphere.weld", io::emit(shared(io::welding_file(sphere_domains()), "triangle.fan", triangle_fan())));
  put("torus.weld", io::emit(shared(io::welding_file(torus_domains()), "square.fan", square_fan())));
  put("genus2.weld", io::emit(shared(io::welding_file(genus2_domains()), "hexagonal.fan", hexagonal_fan())));
  put("skew_lines.weld", io::emit(io::welding_file(skew_lines_domains())));
  put("corner_glue.weld", io::emit(pending(corner_glue())));
  put("condition1.weld", io::emit(pending(condition1())));
  put("condition2.weld", io::emit(pending(condition2())));
  auto poly = [&](const std::string& name, const PolytopeFixture& f, const std::string& weld, bool write_weld) {
    auto pf = io::polytope_file(f, weld);
    if (write_weld) put(weld, io::emit(pf.welding));
    put(name, io::emit(pf));
  };
  poly("compdelt.poly", compdelt(), "compdelt.weld", true);
  poly("compdelt_open.poly", compdelt_without_f2(), "compdelt.weld", false);
  poly("quadrant.poly", quadrant_polytope(), "half_plane.weld", true);
  poly("unit_square.poly", unit_square(), "plane.weld", true);
  poly("bad_vertex.poly", bad_vertex(), "plane.weld", false);
  poly("gen1.poly", gen1(), "genus2.weld", false);
  poly("sphere.poly", whole_sphere(), "sphere.weld", false);
  poly("interval.poly", log_interval(), "line.weld", true);
  poly("rect.poly", log_rectangle(), "rect.weld", true);
  put("hopf.bundle", io::emit(io::BundleFile{{{RatVector{Rational(1)}, RatVector{Rational(0)}}}}));
  put("trivial.bundle", io::emit(io::BundleFile{{{RatVector{Rational(0)}, RatVector{Rational(0)}}}}));
  io::BoxFile b;
  b.exact_ranges = {{-1, 2}, {Rational(-1, 2), 3}};
  b.box = {{{-1, 2}, {-0.5, 3}}, {true, true}};
  put("rect.box", io::emit(b));
  put("malformed.fan", "format: logaff-fan\nversion: 1\ndim: 2\nvectors: [[1, 0], [0, 1]\ncones: [[]]\n");
  put("unknown_key.fan", "format: logaff-fan\nversion: 1\ndim: 2\nvectors: []\ncones:\n  - []\ncolour: red\n");
}
