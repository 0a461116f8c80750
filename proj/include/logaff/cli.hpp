#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"
#include "render.hpp"

namespace logaff::cli {

enum Exit { Ok = 0, Invalid = 1, Parse = 2, Unsupported = 3 };

struct Options {
  std::string path;
  std::string format = "text";
  std::string out;
  std::string eps;
  double tol = 1e-9;
  std::string bundle;
  bool record = false;
};

class Printer {
 public:
  Printer(std::ostream& out, bool kv) : out_(out), kv_(kv) {}
  template <class T>
  void operator()(const std::string& key, const T& value) {
    out_ << key << (kv_ ? "=" : " = ") << value << "\n";
  }
  void flag(const std::string& key, bool v) { (*this)(key, v ? "true" : "false"); }

 private:
  std::ostream& out_;
  bool kv_;
};

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

inline std::filesystem::path base_of(const std::string& path) { return std::filesystem::path(path).parent_path(); }

struct Loaded {
  io::Kind kind;
  std::string text;
};

inline Loaded load(const std::string& path) {
  auto text = io::detail::read_file(path);
  return {io::detect_kind(text), text};
}

inline WeldingSpec load_spec(const std::string& path) {
  return io::to_spec(io::parse_welding(io::detail::read_file(path), base_of(path)));
}

inline LogPolytope load_polytope(const std::string& path) {
  auto pf = io::parse_polytope(io::detail::read_file(path), base_of(path));
  auto spec = io::to_spec(pf.welding);
  return build_polytope(build_welded_space(spec), io::to_face_spec(pf, spec));
}

inline int cmd_validate(const Options& o, std::ostream& out) {
  auto [kind, text] = load(o.path);
  Printer p(out, o.format == "kv");
  std::vector<std::string> problems;
  switch (kind) {
    case io::Kind::Fan: {
      p("kind", "fan");
      auto rep = validate_fan(io::parse_fan(text).fan);
      for (const auto& v : rep.violations) problems.push_back(v.message);
      break;
    }
    case io::Kind::Welding: {
      p("kind", "welding");
      auto w = io::parse_welding(text, base_of(o.path));
      bool fans_ok = true;
      for (const auto& d : w.domains)
        for (const auto& v : validate_fan(d.fan).violations) {
          problems.push_back(d.name + ": " + v.message);
          fans_ok = false;
        }
      if (!fans_ok) break;
      auto spec = io::to_spec(w);
      for (const auto& pr : spec.pairs)
        if (!is_matched_pair(spec, pr)) problems.push_back("not a matched pair: " + spec.pair_name(pr));
      if (!problems.empty()) break;
      try {
        auto ws = build_welded_space(spec);
        p("pairs", ws.pairs.size());
      } catch (const GloballyObstructedError& e) {
        problems.push_back(e.what());
      } catch (const WeldingError& e) {
        problems.push_back(e.what());
      }
      break;
    }
    case io::Kind::Polytope: {
      p("kind", "polytope");
      try {
        auto poly = load_polytope(o.path);
        for (const auto& v : check_face_lemmas(poly).violations)
          problems.push_back("face " + std::to_string(v.face) + ": " + v.message);
      } catch (const PolytopeError& e) {
        problems.push_back(e.what());
      }
      break;
    }
    case io::Kind::Bundle:
      p("kind", "bundle");
      io::parse_bundle(text);
      break;
    case io::Kind::Box:
      p("kind", "box");
      io::parse_box(text);
      break;
  }
  p.flag("valid", problems.empty());
  for (const auto& m : problems) p("violation", m);
  return problems.empty() ? Ok : Invalid;
}

inline void print_divisors(Printer& p, const WeldedSpace& ws) {
  auto dt = divisor_topology(ws);
  for (std::size_t i = 0; i < dt.components.size(); ++i) {
    const auto& c = dt.components[i];
    p("divisor." + std::to_string(i), std::string(kind_name(c.kind)) + " edges=" + std::to_string(c.edges) +
                                          " residue=" + to_string(c.residue));
  }
}

inline int cmd_weld(const Options& o, std::ostream& out) {
  auto spec = load_spec(o.path);
  auto ws = build_welded_space(spec);
  Printer p(out, o.format == "kv");
  p("domains", ws.domains.size());
  p("pairs_listed", spec.pairs.size());
  p("pairs", ws.pairs.size());
  for (const auto& pr : ws.pairs)
    if (!spec.contains(pr)) p("coerced", ws.as_spec().pair_name(pr));
  for (int k = 0; k <= ws.dim; ++k) p("strata.codim" + std::to_string(k), ws.count_codim(k));
  p("divisor_components", ws.divisor_components.size());
  p("boundary_components", ws.boundary_components.size());
  p("crossings", ws.crossings.size());
  p.flag("orientable", ws.orientable);
  if (ws.dim == 2) print_divisors(p, ws);
  return Ok;
}

inline int cmd_topology(const Options& o, std::ostream& out) {
  auto [kind, text] = load(o.path);
  Printer p(out, o.format == "kv");
  if (kind == io::Kind::Polytope) {
    auto t = polytope_topology(load_polytope(o.path));
    p("vertices", t.vertices);
    p("edges", t.edges);
    p("cells", t.cells);
    p("euler", t.euler);
    p("genus", t.genus);
    p("boundary_circles", t.boundary_circles);
    p.flag("orientable", t.orientable);
    p("faces.singular", t.singular);
    p("faces.log", t.log);
    p("faces.interior", t.interior);
    return Ok;
  }
  if (kind != io::Kind::Welding) throw UnsupportedError("topology needs a welding or polytope file");
  auto ws = build_welded_space(load_spec(o.path));
  if (ws.dim != 2) throw UnsupportedError("topology needs a 2-dimensional space");
  auto cx = cell_complex(ws);
  auto b = surface_betti(cx);
  p("vertices", cx.vertices);
  p("edges", cx.edges.size());
  p("cells", cx.faces.size());
  p("euler", euler_characteristic(cx));
  p.flag("compact", b.compact);
  p("b0", b.b[0]);
  p("b1", b.b[1]);
  p("b2", b.b[2]);
  if (b.compact && components(cx).count == 1) {
    auto sc = classify_closed_surface(cx);
    p("genus", sc.genus);
  }
  p.flag("orientable", ws.orientable);
  auto dt = divisor_topology(ws);
  int circles = 0, lines = 0;
  for (const auto& c : dt.components) {
    if (c.kind == DivisorInfo::Circle) ++circles;
    else ++lines;
  }
  p("divisor_circles", circles);
  p("divisor_other", lines);
  p("crossings", dt.crossing_total);
  return Ok;
}

inline PrincipalBundleData load_bundle(const Options& o) {
  if (o.bundle.empty()) return {};
  return io::parse_bundle(io::detail::read_file(o.bundle)).bundle;
}

inline int cmd_cohomology(const Options& o, std::ostream& out) {
  auto ws = build_welded_space(load_spec(o.path));
  auto r = log_cohomology_dims(ws);
  Printer p(out, o.format == "kv");
  for (int k = 0; k < 3; ++k) p("b" + std::to_string(k), r.betti.b[k]);
  for (int k = 0; k < 4; ++k) p("h" + std::to_string(k) + "_log", r.log_betti[k]);
  p.flag("formal", r.formal);
  p("divisor_components", r.divisor.components.size());
  p("crossings", r.divisor.crossing_total);
  if (r.betti.compact) {
    p("moduli_dim", r.log_betti[2]);
    if (!o.bundle.empty()) {
      auto bundle = load_bundle(o);
      auto ob = obstruction_vanishes(ws, bundle);
      p("obstruction", ob ? "vanishes" : "indeterminate");
      p("obstruction_reason", ob.reason);
      p("effective_moduli_dim", effective_moduli_dimension(ws, bundle));
    }
  }
  return Ok;
}

inline int cmd_delzant(const Options& o, std::ostream& out) {
  auto poly = load_polytope(o.path);
  auto r = delzant_check(poly);
  Printer p(out, o.format == "kv");
  p.flag("delzant", r.ok);
  if (!r.ok) p("witness", r.witness);
  return r.ok ? Ok : Invalid;
}

inline long excision_start(const std::string& eps) {
  if (eps.empty()) return 1;
  auto q = io::detail::rational(YAML::Node(eps));
  if (q <= 0 || q >= 1) throw std::invalid_argument("--eps must lie strictly between 0 and 1");
  return std::max(1L, static_cast<long>(std::ceil(-std::log(static_cast<double>(q)))));
}

inline int cmd_volume(const Options& o, std::ostream& out) {
  auto [kind, text] = load(o.path);
  Printer p(out, o.format == "kv");
  if (o.tol <= 0) throw std::invalid_argument("--tol must be positive");
  if (kind == io::Kind::Box) {
    auto b = io::parse_box(text);
    double eps = 1e-2;
    if (!o.eps.empty()) eps = static_cast<double>(io::detail::rational(YAML::Node(o.eps)));
    p("volume", fixed12(regularized_volume(b.box, eps, o.tol)));
    return Ok;
  }
  if (kind != io::Kind::Polytope) throw UnsupportedError("volume needs a polytope or box file");
  auto v = regularized_volume(load_polytope(o.path), excision_start(o.eps));
  p("volume", fixed12(v.value));
  if (v.exact) p("volume_exact", to_string(*v.exact));
  return Ok;
}

inline int cmd_cut(const Options& o, std::ostream& out) {
  auto poly = load_polytope(o.path);
  auto bundle = load_bundle(o);
  if (o.record) {
    out << io::emit_record(make_record(poly, bundle));
    return Ok;
  }
  auto r = cut_report(poly, bundle);
  Printer p(out, o.format == "kv");
  p("euler", r.euler);
  p("fixed_points", r.fixed_points);
  p.flag("smooth_closed", r.smooth_closed);
  p("moduli_dim", r.moduli_dim);
  std::string img;
  for (int h : r.divisor_image) img += (img.empty() ? "" : " ") + std::to_string(h);
  p("divisor_image", "[" + img + "]");
  std::map<int, int> by_rank;
  for (const auto& s : r.strata) ++by_rank[s.rank];
  for (auto [rank, n] : by_rank) p("strata.rank" + std::to_string(rank), n);
  return Ok;
}

inline int cmd_render(const Options& o, std::ostream& out) {
  auto [kind, text] = load(o.path);
  std::string doc;
  switch (kind) {
    case io::Kind::Fan: doc = svg::render(io::parse_fan(text).fan); break;
    case io::Kind::Welding: doc = svg::render(load_spec(o.path)); break;
    case io::Kind::Polytope: doc = svg::render(load_polytope(o.path)); break;
    default: throw UnsupportedError("nothing to render in this file");
  }
  out << doc;
  return Ok;
}

inline int cmd_fmt(const Options& o, std::ostream& out) {
  auto [kind, text] = load(o.path);
  switch (kind) {
    case io::Kind::Fan: out << io::emit(io::parse_fan(text)); break;
    case io::Kind::Welding: out << io::emit(io::parse_welding(text, base_of(o.path))); break;
    case io::Kind::Polytope: out << io::emit(io::parse_polytope(text, base_of(o.path))); break;
    case io::Kind::Bundle: out << io::emit(io::parse_bundle(text)); break;
    case io::Kind::Box: out << io::emit(io::parse_box(text)); break;
  }
  return Ok;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log affine welding, polytope and cohomology reports", "logaff"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "text or kv")->check(CLI::IsMember({"text", "kv"}));
  app.add_option("--out", o.out, "write output to this path");
  using Cmd = int (*)(const Options&, std::ostream&);
  std::vector<std::pair<CLI::App*, Cmd>> cmds;
  auto add = [&](const char* name, const char* help, Cmd f) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("path", o.path, "input file")->required();
    sub->fallthrough();
    cmds.push_back({sub, f});
    return sub;
  };
  add("validate", "check a fan, welding, polytope, bundle or box file", cmd_validate);
  add("weld", "assemble a welded space and summarize it", cmd_weld);
  add("topology", "Euler characteristic, Betti numbers and genus", cmd_topology);
  add("cohomology", "log cohomology dimensions", cmd_cohomology)->add_option("--bundle", o.bundle, "bundle file");
  add("delzant", "check the Delzant condition", cmd_delzant);
  auto* vol = add("volume", "regularized volume", cmd_volume);
  vol->add_option("--eps", o.eps, "excision start (rational)");
  vol->add_option("--tol", o.tol, "extrapolation tolerance");
  auto* cut = add("cut", "symplectic cut report", cmd_cut);
  cut->add_option("--bundle", o.bundle, "bundle file");
  cut->add_flag("--record", o.record, "emit the invariant record");
  add("render", "SVG picture of fans and half-planes", cmd_render);
  add("fmt", "rewrite a file in canonical form", cmd_fmt);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return Parse;
  }
  std::ostringstream buf;
  try {
    int code = Ok;
    for (auto [sub, f] : cmds)
      if (sub->parsed()) code = f(o, buf);
    if (!o.out.empty()) {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + o.out);
      file << buf.str();
    } else {
      out << buf.str();
    }
    return code;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return Parse;
  } catch (const UnsupportedError& e) {
    out << buf.str();
    err << "unsupported: " << e.what() << "\n";
    return Unsupported;
  } catch (const std::exception& e) {
    out << buf.str();
    err << "error: " << e.what() << "\n";
    return Invalid;
  }
}

}  // namespace logaff::cli
