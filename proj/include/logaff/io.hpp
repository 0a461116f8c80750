#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "classification.hpp"
#include "fixtures.hpp"

namespace logaff::io {

struct ParseError : std::runtime_error {
  int line = 0, column = 0;  // 1-based, 0 when unknown
  ParseError(const std::string& msg, int l = 0, int c = 0)
      : std::runtime_error(l > 0 ? std::to_string(l) + ":" + std::to_string(c) + ": " + msg : msg), line(l), column(c) {}
  ParseError(const std::string& msg, const YAML::Mark& m)
      : ParseError(msg, m.is_null() ? 0 : m.line + 1, m.is_null() ? 0 : m.column + 1) {}
};

enum class Kind { Fan, Welding, Polytope, Bundle, Box };

inline const char* format_tag(Kind k) {
  switch (k) {
    case Kind::Fan: return "logaff-fan";
    case Kind::Welding: return "logaff-welding";
    case Kind::Polytope: return "logaff-polytope";
    case Kind::Bundle: return "logaff-bundle";
    case Kind::Box: return "logaff-box";
  }
  return "";
}

constexpr int kVersion = 1;

struct FanFile {
  Fan fan;
};

struct DomainEntry {
  std::string name;
  std::string fan_path;  // empty when the fan is inline
  Fan fan;
  std::vector<std::string> labels;
};

struct WeldingFile {
  std::vector<DomainEntry> domains;
  std::vector<std::pair<std::string, std::string>> pairs;  // "domain:label"
};

struct ConstraintEntry {
  RatVector covector;
  Rational constant;
  std::string name;
};

struct PieceEntry {
  std::string domain;
  std::vector<ConstraintEntry> constraints;
};

struct PolytopeFile {
  std::string welding_path;
  WeldingFile welding;
  int orientation = 1;
  std::vector<PieceEntry> pieces;
};

struct BundleFile {
  PrincipalBundleData bundle;
};

struct BoxFile {
  NormalFormBox box;
  std::vector<std::pair<Rational, Rational>> exact_ranges;
};

namespace detail {

inline const std::regex& rational_re() {
  static const std::regex re(R"(^-?[0-9]+(/[0-9]+)?$)");
  return re;
}

inline void require_map(const YAML::Node& n, const std::string& what) {
  if (!n.IsMap()) throw ParseError(what + " must be a mapping", n.Mark());
}

inline void require_seq(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) throw ParseError(what + " must be a list", n.Mark());
}

inline void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed, const std::string& what) {
  require_map(n, what);
  for (const auto& kv : n) {
    auto key = kv.first.as<std::string>();
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
      throw ParseError("unknown key '" + key + "' in " + what, kv.first.Mark());
  }
}

inline YAML::Node required(const YAML::Node& n, const char* key, const std::string& what) {
  auto v = n[key];
  if (!v) throw ParseError("missing key '" + std::string(key) + "' in " + what, n.Mark());
  return v;
}

inline Rational rational(const YAML::Node& n) {
  if (!n.IsScalar()) throw ParseError("expected a rational number", n.Mark());
  auto s = n.Scalar();
  if (!std::regex_match(s, rational_re())) throw ParseError("'" + s + "' is not a rational number", n.Mark());
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Integer(s));
  Integer den(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator", n.Mark());
  return Rational(Integer(s.substr(0, slash)), den);
}

inline int integer(const YAML::Node& n) {
  auto q = rational(n);
  if (denominator(q) != 1) throw ParseError("expected an integer", n.Mark());
  return static_cast<int>(numerator(q));
}

inline std::string string(const YAML::Node& n) {
  if (!n.IsScalar()) throw ParseError("expected a string", n.Mark());
  return n.Scalar();
}

inline RatVector vector(const YAML::Node& n, std::size_t dim) {
  require_seq(n, "vector");
  std::vector<Rational> xs;
  for (const auto& x : n) xs.push_back(rational(x));
  if (xs.size() != dim)
    throw ParseError("vector has " + std::to_string(xs.size()) + " entries, expected " + std::to_string(dim), n.Mark());
  return RatVector(xs);
}

inline Fan fan_body(const YAML::Node& n, const std::string& what) {
  int dim = integer(required(n, "dim", what));
  if (dim <= 0) throw ParseError("dim must be positive", n["dim"].Mark());
  std::vector<RatVector> vs;
  auto vn = required(n, "vectors", what);
  require_seq(vn, "vectors");
  for (const auto& v : vn) vs.push_back(vector(v, dim));
  std::vector<Cone> cones;
  auto cn = required(n, "cones", what);
  require_seq(cn, "cones");
  for (const auto& c : cn) {
    require_seq(c, "cone");
    Cone cone;
    for (const auto& i : c) cone.push_back(integer(i));
    cones.push_back(cone);
  }
  return Fan(dim, vs, cones);
}

inline void check_header(const YAML::Node& root, Kind kind) {
  require_map(root, "document");
  auto f = required(root, "format", "document");
  if (string(f) != format_tag(kind))
    throw ParseError("expected format '" + std::string(format_tag(kind)) + "', found '" + string(f) + "'", f.Mark());
  auto v = required(root, "version", "document");
  if (integer(v) != kVersion) throw ParseError("unsupported version " + v.Scalar(), v.Mark());
}

inline YAML::Node load(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark);
  }
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline Kind detect_kind(const std::string& text) {
  auto root = detail::load(text);
  detail::require_map(root, "document");
  auto f = detail::required(root, "format", "document");
  auto tag = detail::string(f);
  for (Kind k : {Kind::Fan, Kind::Welding, Kind::Polytope, Kind::Bundle, Kind::Box})
    if (tag == format_tag(k)) return k;
  throw ParseError("unknown format '" + tag + "'", f.Mark());
}

inline FanFile parse_fan(const std::string& text) {
  auto root = detail::load(text);
  detail::check_header(root, Kind::Fan);
  detail::check_keys(root, {"format", "version", "dim", "vectors", "cones"}, "fan");
  return {detail::fan_body(root, "fan")};
}

inline WeldingFile parse_welding(const std::string& text, const std::filesystem::path& base = {}) {
  auto root = detail::load(text);
  detail::check_header(root, Kind::Welding);
  detail::check_keys(root, {"format", "version", "domains", "pairs"}, "welding");
  WeldingFile w;
  auto ds = detail::required(root, "domains", "welding");
  detail::require_seq(ds, "domains");
  for (const auto& d : ds) {
    detail::check_keys(d, {"name", "fan", "labels"}, "domain");
    DomainEntry e;
    e.name = detail::string(detail::required(d, "name", "domain"));
    auto fn = detail::required(d, "fan", "domain");
    if (fn.IsScalar()) {
      e.fan_path = fn.Scalar();
      e.fan = parse_fan(detail::read_file(base / e.fan_path)).fan;
    } else {
      detail::check_keys(fn, {"dim", "vectors", "cones"}, "fan");
      e.fan = detail::fan_body(fn, "fan");
    }
    auto ls = detail::required(d, "labels", "domain");
    detail::require_seq(ls, "labels");
    for (const auto& l : ls) e.labels.push_back(detail::string(l));
    if (static_cast<int>(e.labels.size()) != e.fan.size())
      throw ParseError("domain " + e.name + " needs one label per fan vector", ls.Mark());
    for (const auto& other : w.domains)
      if (other.name == e.name) throw ParseError("duplicate domain name " + e.name, d.Mark());
    w.domains.push_back(e);
  }
  auto ps = detail::required(root, "pairs", "welding");
  detail::require_seq(ps, "pairs");
  for (const auto& p : ps) {
    detail::require_seq(p, "pair");
    if (p.size() != 2) throw ParseError("a pair has exactly two faces", p.Mark());
    w.pairs.push_back({detail::string(p[0]), detail::string(p[1])});
  }
  return w;
}

inline Face resolve_face(const WeldingSpec& spec, const std::string& ref) {
  auto colon = ref.find(':');
  if (colon == std::string::npos) throw ParseError("face reference '" + ref + "' is not of the form domain:label");
  try {
    return fixtures::face(spec, ref.substr(0, colon), ref.substr(colon + 1));
  } catch (const std::out_of_range&) {
    throw ParseError("no face " + ref);
  }
}

// Fans are validated here; invalid fans raise InvalidFanError.
inline WeldingSpec to_spec(const WeldingFile& w) {
  WeldingSpec spec;
  for (const auto& d : w.domains) {
    spec.domains.emplace_back(d.fan, d.name);
    spec.labels.push_back(d.labels);
  }
  for (const auto& [a, b] : w.pairs) spec.pairs.push_back({resolve_face(spec, a), resolve_face(spec, b)});
  return spec;
}

inline PolytopeFile parse_polytope(const std::string& text, const std::filesystem::path& base = {}) {
  auto root = detail::load(text);
  detail::check_header(root, Kind::Polytope);
  detail::check_keys(root, {"format", "version", "welding", "orientation", "pieces"}, "polytope");
  PolytopeFile p;
  p.welding_path = detail::string(detail::required(root, "welding", "polytope"));
  auto wpath = base / p.welding_path;
  p.welding = parse_welding(detail::read_file(wpath), wpath.parent_path());
  if (auto o = root["orientation"]) {
    p.orientation = detail::integer(o);
    if (p.orientation != 1 && p.orientation != -1) throw ParseError("orientation must be 1 or -1", o.Mark());
  }
  const std::size_t dim = p.welding.domains.empty() ? 0 : p.welding.domains.front().fan.dim;
  auto ps = detail::required(root, "pieces", "polytope");
  detail::require_seq(ps, "pieces");
  for (const auto& pn : ps) {
    detail::check_keys(pn, {"domain", "constraints"}, "piece");
    PieceEntry e;
    auto dn = detail::required(pn, "domain", "piece");
    e.domain = detail::string(dn);
    if (std::none_of(p.welding.domains.begin(), p.welding.domains.end(),
                     [&](const DomainEntry& d) { return d.name == e.domain; }))
      throw ParseError("no domain named " + e.domain, dn.Mark());
    auto cs = pn["constraints"];
    if (cs) {
      detail::require_seq(cs, "constraints");
      for (const auto& c : cs) {
        detail::check_keys(c, {"covector", "constant", "name"}, "constraint");
        ConstraintEntry ce;
        auto cv = detail::required(c, "covector", "constraint");
        ce.covector = detail::vector(cv, dim);
        if (!ce.covector.is_integral()) throw ParseError("covector must be integral", cv.Mark());
        ce.constant = c["constant"] ? detail::rational(c["constant"]) : Rational(0);
        if (c["name"]) ce.name = detail::string(c["name"]);
        e.constraints.push_back(ce);
      }
    }
    p.pieces.push_back(e);
  }
  return p;
}

inline FaceSpec to_face_spec(const PolytopeFile& p, const WeldingSpec& spec) {
  FaceSpec f;
  f.orientation = p.orientation;
  for (const auto& e : p.pieces) {
    Piece piece;
    for (int d = 0; d < static_cast<int>(spec.domains.size()); ++d)
      if (spec.domains[d].name() == e.domain) piece.domain = d;
    for (const auto& c : e.constraints) piece.constraints.push_back({{c.covector, c.constant}, c.name});
    f.pieces.push_back(piece);
  }
  return f;
}

inline BundleFile parse_bundle(const std::string& text) {
  auto root = detail::load(text);
  detail::check_header(root, Kind::Bundle);
  detail::check_keys(root, {"format", "version", "chern"}, "bundle");
  BundleFile b;
  auto cs = detail::required(root, "chern", "bundle");
  detail::require_seq(cs, "chern");
  std::size_t len = 0;
  for (const auto& c : cs) {
    detail::require_seq(c, "chern vector");
    if (b.bundle.chern.empty()) len = c.size();
    b.bundle.chern.push_back(detail::vector(c, len));
  }
  return b;
}

inline BoxFile parse_box(const std::string& text) {
  auto root = detail::load(text);
  detail::check_header(root, Kind::Box);
  detail::check_keys(root, {"format", "version", "axes"}, "box");
  BoxFile b;
  auto as = detail::required(root, "axes", "box");
  detail::require_seq(as, "axes");
  for (const auto& a : as) {
    detail::check_keys(a, {"range", "divisor"}, "axis");
    auto r = detail::required(a, "range", "axis");
    auto v = detail::vector(r, 2);
    if (v[0] >= v[1]) throw ParseError("axis range must be increasing", r.Mark());
    b.exact_ranges.push_back({v[0], v[1]});
    b.box.ranges.push_back({static_cast<double>(v[0]), static_cast<double>(v[1])});
    bool div = false;
    if (auto d = a["divisor"]) {
      if (!d.IsScalar() || (d.Scalar() != "true" && d.Scalar() != "false"))
        throw ParseError("divisor must be true or false", d.Mark());
      div = d.Scalar() == "true";
    }
    b.box.divisor.push_back(div);
  }
  return b;
}

// Canonical emitters: parse followed by emit reproduces canonical files byte for byte.

namespace detail {

inline std::string flow(const RatVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + "]";
}

inline std::string flow(const Cone& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + std::to_string(c[i]);
  return s + "]";
}

inline bool plain(const std::string& s) {
  static const std::regex re(R"(^[A-Za-z_][A-Za-z0-9_.\-/]*$)");
  static const std::set<std::string> reserved{"true", "false", "null", "yes", "no", "on", "off", "y", "n"};
  return std::regex_match(s, re) && !reserved.count(s);
}

inline std::string scalar(const std::string& s) {
  if (plain(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string header(Kind k) {
  return std::string("format: ") + format_tag(k) + "\nversion: " + std::to_string(kVersion) + "\n";
}

inline void fan_lines(std::ostream& out, const Fan& f, const std::string& ind) {
  out << ind << "dim: " << f.dim << "\n";
  if (f.vectors.empty()) out << ind << "vectors: []\n";
  else {
    out << ind << "vectors:\n";
    for (const auto& v : f.vectors) out << ind << "  - " << flow(v) << "\n";
  }
  out << ind << "cones:\n";
  for (const auto& c : f.cones) out << ind << "  - " << flow(c) << "\n";
}

}  // namespace detail

inline std::string emit(const FanFile& f) {
  std::ostringstream out;
  out << detail::header(Kind::Fan);
  detail::fan_lines(out, f.fan, "");
  return out.str();
}

inline std::string emit(const WeldingFile& w) {
  std::ostringstream out;
  out << detail::header(Kind::Welding) << "domains:\n";
  for (const auto& d : w.domains) {
    out << "  - name: " << detail::scalar(d.name) << "\n";
    if (!d.fan_path.empty()) {
      out << "    fan: " << detail::scalar(d.fan_path) << "\n";
    } else {
      out << "    fan:\n";
      detail::fan_lines(out, d.fan, "      ");
    }
    out << "    labels: [";
    for (std::size_t i = 0; i < d.labels.size(); ++i) out << (i ? ", " : "") << detail::scalar(d.labels[i]);
    out << "]\n";
  }
  if (w.pairs.empty()) out << "pairs: []\n";
  else {
    out << "pairs:\n";
    for (const auto& [a, b] : w.pairs) out << "  - [" << detail::scalar(a) << ", " << detail::scalar(b) << "]\n";
  }
  return out.str();
}

inline std::string emit(const PolytopeFile& p) {
  std::ostringstream out;
  out << detail::header(Kind::Polytope) << "welding: " << detail::scalar(p.welding_path) << "\n"
      << "orientation: " << p.orientation << "\npieces:\n";
  for (const auto& e : p.pieces) {
    out << "  - domain: " << detail::scalar(e.domain) << "\n";
    if (e.constraints.empty()) {
      out << "    constraints: []\n";
      continue;
    }
    out << "    constraints:\n";
    for (const auto& c : e.constraints) {
      out << "      - covector: " << detail::flow(c.covector) << "\n"
          << "        constant: " << to_string(c.constant) << "\n";
      if (!c.name.empty()) out << "        name: " << detail::scalar(c.name) << "\n";
    }
  }
  return out.str();
}

inline std::string emit(const BundleFile& b) {
  std::ostringstream out;
  out << detail::header(Kind::Bundle);
  if (b.bundle.chern.empty()) out << "chern: []\n";
  else {
    out << "chern:\n";
    for (const auto& c : b.bundle.chern) out << "  - " << detail::flow(c) << "\n";
  }
  return out.str();
}

inline std::string emit(const BoxFile& b) {
  std::ostringstream out;
  out << detail::header(Kind::Box) << "axes:\n";
  for (std::size_t i = 0; i < b.exact_ranges.size(); ++i)
    out << "  - range: " << detail::flow(RatVector{b.exact_ranges[i].first, b.exact_ranges[i].second}) << "\n"
        << "    divisor: " << (b.box.divisor[i] ? "true" : "false") << "\n";
  return out.str();
}

inline std::string emit_record(const InvariantRecord& r) {
  std::ostringstream out;
  out << "format: logaff-record\nversion: " << kVersion << "\ndim: " << r.dim << "\nmoduli_dim: " << r.moduli_dim
      << "\ncells0: [";
  for (std::size_t i = 0; i < r.cells0.size(); ++i) out << (i ? ", " : "") << r.cells0[i];
  out << "]\ncells1:\n";
  for (const auto& c : r.cells1)
    out << "  - [" << c.tail << ", " << c.head << ", " << c.kind << ", " << c.face << ", " << c.hyp << "]\n";
  out << "cells2:\n";
  for (const auto& b : r.cells2) out << "  - " << detail::flow(Cone(b.begin(), b.end())) << "\n";
  out << "faces:\n";
  for (const auto& f : r.faces)
    out << "  - {kind: " << kind_name(static_cast<PolytopeFace::Kind>(f.kind)) << ", covector: " << detail::flow(f.covector)
        << ", constant: " << to_string(f.constant) << ", hypersurface: " << f.hyp << "}\n";
  out << "residues:\n";
  for (const auto& v : r.residues) out << "  - " << detail::flow(v) << "\n";
  out << "chern:\n";
  for (const auto& v : r.chern) out << "  - " << detail::flow(v) << "\n";
  return out.str();
}

// Fixture data as canonical files.
inline WeldingFile welding_file(const std::vector<fixtures::LabeledDomain>& ds) {
  WeldingFile w;
  for (const auto& d : ds) w.domains.push_back({d.name, "", d.fan, d.labels});
  auto spec = fixtures::spec_from_labels(ds);
  for (const auto& p : spec.pairs) w.pairs.push_back({spec.face_name(p.left), spec.face_name(p.right)});
  return w;
}

inline WeldingFile welding_file(const WeldingSpec& spec) {
  WeldingFile w;
  for (std::size_t d = 0; d < spec.domains.size(); ++d)
    w.domains.push_back({spec.domains[d].name(), "", spec.domains[d].fan(), spec.labels[d]});
  for (const auto& p : spec.pairs) w.pairs.push_back({spec.face_name(p.left), spec.face_name(p.right)});
  return w;
}

inline PolytopeFile polytope_file(const fixtures::PolytopeFixture& f, const std::string& welding_path) {
  PolytopeFile p;
  p.welding_path = welding_path;
  p.welding = welding_file(f.space.as_spec());
  p.orientation = f.spec.orientation;
  for (const auto& piece : f.spec.pieces) {
    PieceEntry e;
    e.domain = f.space.domains[piece.domain].name();
    for (const auto& c : piece.constraints) e.constraints.push_back({c.f.linear_part, c.f.constant, c.name});
    p.pieces.push_back(e);
  }
  return p;
}

}  // namespace logaff::io
