#include "cli_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "rcov/error.hpp"

namespace rcov::cli {

namespace {

// JSON-pointer escaping of a member name.
std::string escape(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

std::string where(const std::string& ptr) { return ptr.empty() ? "/" : ptr; }

}  // namespace

void Node::fail(const std::string& msg) const { throw ValidationError("schema violation at " + where(ptr_) + ": " + msg); }

Node Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  if (!j_->contains(key)) fail("missing member \"" + key + "\"");
  return Node(j_->at(key), ptr_ + "/" + escape(key));
}

Node Node::at(std::size_t i) const {
  if (!j_->is_array()) fail("expected an array");
  if (i >= j_->size()) fail("missing element " + std::to_string(i));
  return Node(j_->at(i), ptr_ + "/" + std::to_string(i));
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

i64 Node::integer() const {
  if (!j_->is_number_integer()) fail("expected an integer");
  return j_->get<i64>();
}

bool Node::boolean() const {
  if (!j_->is_boolean()) fail("expected a boolean");
  return j_->get<bool>();
}

std::string Node::str() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

Rational Node::rational() const {
  if (j_->is_number_integer()) return Rational(j_->get<i64>());
  if (!j_->is_string()) fail("expected an integer or a string \"p/q\"");
  std::string s = j_->get<std::string>();
  std::size_t slash = s.find('/');
  auto parse_int = [&](const std::string& t) {
    std::size_t used = 0;
    i64 v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      fail("malformed rational \"" + s + "\"");
    }
    if (used != t.size()) fail("malformed rational \"" + s + "\"");
    return v;
  };
  i64 num = parse_int(s.substr(0, slash));
  i64 den = slash == std::string::npos ? 1 : parse_int(s.substr(slash + 1));
  if (den == 0) fail("zero denominator");
  return Rational(num, den);
}

Vec Node::vec() const {
  Vec v;
  for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).integer());
  return v;
}

Mat Node::mat() const {
  Mat m;
  for (std::size_t i = 0; i < size(); ++i) m.push_back(at(i).vec());
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i].size() != m[0].size()) at(i).fail("ragged matrix row");
  return m;
}

std::vector<Mat> Node::mats() const {
  std::vector<Mat> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).mat());
  return out;
}

json read_json_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open input file " + path);
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
}

FiniteGroup parse_group(const Node& n) {
  FiniteGroup G;
  if (n.raw().is_string()) {
    std::string s = n.str();
    if (s == "1") return FiniteGroup::trivial();
    if (s == "V4") return FiniteGroup::klein();
    if (s.rfind("Z/", 0) == 0) {
      int order = 0;
      try {
        order = std::stoi(s.substr(2));
      } catch (const std::exception&) {
        n.fail("unknown group \"" + s + "\"");
      }
      if (order < 1 || order > 64) n.fail("cyclic order must lie in [1, 64]");
      return FiniteGroup::cyclic(order);
    }
    n.fail("unknown group \"" + s + "\"; use \"1\", \"Z/n\", \"V4\" or a table");
  }
  Node t = n.at("table");
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<int> row;
    for (std::size_t j = 0; j < t.at(i).size(); ++j) row.push_back(static_cast<int>(t.at(i).at(j).integer()));
    G.table.push_back(row);
  }
  if (n.has("names")) {
    Node names = n.at("names");
    for (std::size_t i = 0; i < names.size(); ++i) G.names.push_back(names.at(i).str());
  } else {
    for (int i = 0; i < G.order(); ++i) G.names.push_back("g" + std::to_string(i));
  }
  if (G.names.size() != G.table.size()) n.fail("names and table sizes differ");
  try {
    G.validate();
  } catch (const ValidationError& e) {
    t.fail(e.what());
  }
  return G;
}

RootDatum parse_root_datum(const Node& n) {
  if (n.raw().is_string()) {
    std::string s = n.str();
    auto names = RootDatum::preset_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) n.fail("unknown root datum preset \"" + s + "\"");
    return RootDatum::preset(s);
  }
  RootDatum rd;
  rd.rank = static_cast<int>(n.at("rank").integer());
  rd.roots = n.at("roots").mat();
  rd.coroots = n.at("coroots").mat();
  Vec simple = n.at("simple").vec();
  for (i64 k : simple) rd.simple.push_back(static_cast<int>(k));
  for (const auto& r : rd.roots)
    if (static_cast<int>(r.size()) != rd.rank) n.at("roots").fail("row length differs from rank");
  for (const auto& r : rd.coroots)
    if (static_cast<int>(r.size()) != rd.rank) n.at("coroots").fail("row length differs from rank");
  if (rd.roots.size() != rd.coroots.size()) n.fail("roots and coroots differ in number");
  for (int k : rd.simple)
    if (k < 0 || k >= static_cast<int>(rd.roots.size())) n.at("simple").fail("index out of range");
  try {
    rd.finalize();
  } catch (const ValidationError& e) {
    n.fail(e.what());
  }
  return rd;
}

TorsionPoint parse_torsion_point(const Node& n) {
  std::vector<std::pair<i64, i64>> raw;
  for (std::size_t i = 0; i < n.size(); ++i) {
    Node c = n.at(i);
    if (c.size() != 2) c.fail("expected [numerator, denominator]");
    i64 den = c.at(1).integer();
    if (den <= 0) c.at(1).fail("denominator must be positive");
    raw.emplace_back(c.at(0).integer(), den);
  }
  return TorsionPoint::make(raw);
}

namespace {

void check_matrices(const Node& n, const std::vector<Mat>& ms, std::size_t count, std::size_t dim) {
  if (ms.size() != count) n.fail("expected one matrix per group element (" + std::to_string(count) + ")");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].size() != dim) n.at(i).fail("expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    for (const auto& row : ms[i])
      if (row.size() != dim) n.at(i).fail("expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  }
}

template <class F>
auto rethrow_at(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    std::string what = e.what();
    if (what.rfind("schema violation", 0) == 0) throw;
    n.fail(what);
  }
}

}  // namespace

EndoscopicDatum parse_datum(const Node& n) {
  EndoscopicDatum d;
  d.G = parse_group(n.at("group"));
  d.dual = parse_root_datum(n.at("dual"));
  std::size_t r = static_cast<std::size_t>(d.dual.rank);
  d.sigma_G = n.at("sigma_G").mats();
  check_matrices(n.at("sigma_G"), d.sigma_G, d.G.order(), r);
  d.s = parse_torsion_point(n.at("s"));
  if (d.s.coords.size() != r) n.at("s").fail("expected " + std::to_string(r) + " coordinates");
  d.w = n.at("w").mats();
  check_matrices(n.at("w"), d.w, d.G.order(), r);
  if (n.has("strict_s")) d.strict_s = n.at("strict_s").boolean();
  rethrow_at(n, [&] {
    validate_datum(d);
    return 0;
  });
  return d;
}

FiniteModule parse_module(const Node& n, const FiniteGroup& G) {
  FiniteModule M;
  M.moduli = n.at("moduli").vec();
  for (std::size_t i = 0; i < M.moduli.size(); ++i)
    if (M.moduli[i] < 2) n.at("moduli").at(i).fail("modulus must be at least 2");
  M.act = n.at("action").mats();
  check_matrices(n.at("action"), M.act, G.order(), M.moduli.size());
  for (std::size_t g = 0; g < M.act.size(); ++g)
    for (std::size_t i = 0; i < M.dim(); ++i)
      for (auto& x : M.act[g][i]) x = mod(x, M.moduli[i]);
  rethrow_at(n, [&] {
    M.validate(G);
    return 0;
  });
  return M;
}

CoverBase parse_base(const Node& n) {
  FiniteGroup G = parse_group(n.at("group"));
  if (n.has("torus")) {
    Node t = n.at("torus");
    std::vector<Mat> act = t.mats();
    if (act.empty()) t.fail("expected one matrix per group element");
    check_matrices(t, act, G.order(), act[0].size());
    GaloisLattice L{static_cast<int>(act[0].size()), act};
    return rethrow_at(n, [&] { return CoverBase::make_torus(G, L); });
  }
  RootDatum dual = parse_root_datum(n.at("dual"));
  std::vector<Mat> act = n.at("action").mats();
  check_matrices(n.at("action"), act, G.order(), static_cast<std::size_t>(dual.rank));
  return rethrow_at(n, [&] { return CoverBase::make_group(G, dual, act); });
}

CoverDescriptor parse_descriptor(const Node& n) {
  CoverDescriptor t;
  t.n = n.at("n").integer();
  if (t.n < 1) n.at("n").fail("level must be positive");
  t.z = n.at("z").vec();
  if (n.has("c")) t.c = n.at("c").vec();
  return t;
}

QuadExt parse_field(const Node& n) {
  Node p = n.at("place");
  Place v;
  if (p.raw().is_string()) {
    if (p.str() != "real") p.fail("expected \"real\" or a prime");
    v = Place::real();
  } else {
    i64 q = p.integer();
    if (!is_prime(q)) p.fail(std::to_string(q) + " is not prime");
    v = Place::padic(q);
  }
  Rational d = n.at("d").rational();
  return rethrow_at(n.at("d"), [&] { return QuadExt::make(v, d); });
}

QuadExtElement parse_element(const Node& n, const QuadExt& E) {
  if (n.size() != 2) n.fail("expected [a, b] for a + b sqrt(d)");
  return QuadExtElement{E, n.at(0).rational(), n.at(1).rational()};
}

CoverElement parse_cover_element(const Node& n, const QuadExt& E) {
  CoverElement c;
  Node dv = n.at("delta");
  for (std::size_t i = 0; i < dv.size(); ++i) c.delta.values.push_back(parse_element(dv.at(i), E));
  Node rv = n.at("roots");
  for (std::size_t i = 0; i < rv.size(); ++i) c.root_values.push_back(parse_element(rv.at(i), E));
  if (n.has("flips")) {
    Vec f = n.at("flips").vec();
    for (i64 x : f) c.asymmetric_flips.push_back(static_cast<int>(x));
  }
  return c;
}

Normalization parse_normalization(const std::string& s, const std::string& where_) {
  if (s == "pinning") return Normalization::pinning;
  if (s == "whittaker") return Normalization::whittaker;
  throw ValidationError(where_ + ": unknown normalization \"" + s + "\" (pinning or whittaker)");
}

CftConvention parse_cft(const std::string& s, const std::string& where_) {
  if (s == "deligne") return CftConvention::deligne;
  if (s == "artin") return CftConvention::artin;
  throw ValidationError(where_ + ": unknown convention \"" + s + "\" (deligne or artin)");
}

TransferInput parse_transfer_input(const Node& n) {
  TransferInput in;
  if (n.has("fixture") == n.has("datum")) n.fail("give exactly one of \"fixture\" and \"datum\"");
  if (n.has("fixture")) {
    Node f = n.at("fixture");
    auto names = endoscopic_fixture_names();
    if (std::find(names.begin(), names.end(), f.str()) == names.end()) f.fail("unknown fixture \"" + f.str() + "\"");
    in.datum = endoscopic_fixture(f.str());
  } else {
    in.datum = parse_datum(n.at("datum"));
  }
  in.E = parse_field(n.at("field"));
  in.embedding.omega = n.at("omega").mat();
  in.gamma = parse_cover_element(n.at("gamma"), in.E);
  in.delta = parse_cover_element(n.at("delta"), in.E);
  if (n.has("base")) in.base = parse_cover_element(n.at("base"), in.E);
  if (n.has("base_value")) {
    i64 b = n.at("base_value").integer();
    if (b != 1 && b != -1) n.at("base_value").fail("expected 1 or -1");
    in.base_value = static_cast<int>(b);
  }
  if (n.has("kostant_trivial")) in.kostant_trivial = n.at("kostant_trivial").boolean();
  if (n.has("stable_class")) {
    Node sc = n.at("stable_class");
    for (std::size_t i = 0; i < sc.size(); ++i) {
      Rational t = sc.at(i).rational();
      if (t == Rational(0)) sc.at(i).fail("class representative must be nonzero");
      in.stable_class.push_back(t);
    }
  }
  if (n.has("cft")) in.cft = parse_cft(n.at("cft").str(), n.at("cft").ptr());
  if (n.has("normalization")) in.normalization = parse_normalization(n.at("normalization").str(), n.at("normalization").ptr());
  if (n.has("lambda")) {
    Node l = n.at("lambda");
    if (l.has("sign")) {
      i64 s = l.at("sign").integer();
      if (s != 1 && s != -1) l.at("sign").fail("expected 1 or -1");
      in.lambda.sign = static_cast<int>(s);
    }
    if (l.has("scale")) {
      in.lambda.scale = l.at("scale").rational();
      if (in.lambda.scale == Rational(0)) l.at("scale").fail("scale must be nonzero");
    }
  }
  return in;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

json to_json(const FiniteGroup& G) { return json{{"names", G.names}, {"table", G.table}}; }

json to_json(const RootDatum& rd) {
  return json{{"rank", rd.rank}, {"roots", rd.roots}, {"coroots", rd.coroots}, {"simple", rd.simple}};
}

json to_json(const TorsionPoint& s) {
  json out = json::array();
  for (const auto& [num, den] : s.coords) out.push_back({num, den});
  return out;
}

json to_json(const EndoscopicDatum& d) {
  return json{{"group", to_json(d.G)}, {"dual", to_json(d.dual)}, {"sigma_G", d.sigma_G},
              {"s", to_json(d.s)},     {"w", d.w},                {"strict_s", d.strict_s}};
}

json to_json(const CoverDescriptor& t) { return json{{"n", t.n}, {"z", t.z}, {"c", t.c}}; }

json to_json(const QuadExt& E) {
  json place = E.v.is_real() ? json("real") : json(E.v.p);
  return json{{"place", place}, {"d", rational_string(E.d)}};
}

json to_json(const QuadExtElement& x) { return json::array({rational_string(x.a), rational_string(x.b)}); }

json to_json(const CoverElement& c) {
  json delta = json::array(), roots = json::array();
  for (const auto& x : c.delta.values) delta.push_back(to_json(x));
  for (const auto& x : c.root_values) roots.push_back(to_json(x));
  return json{{"delta", delta}, {"roots", roots}, {"flips", c.asymmetric_flips}};
}

json to_json(const RootOfUnity& r) {
  RootOfUnity q = r.reduced();
  return json{{"num", q.num}, {"den", q.den}};
}

std::string to_string(Normalization n) { return n == Normalization::pinning ? "pinning" : "whittaker"; }
std::string to_string(CftConvention c) { return c == CftConvention::deligne ? "deligne" : "artin"; }

json to_json(const TransferInput& in) {
  json out{{"datum", to_json(in.datum)},
           {"field", to_json(in.E)},
           {"omega", in.embedding.omega},
           {"gamma", to_json(in.gamma)},
           {"delta", to_json(in.delta)},
           {"base_value", in.base_value},
           {"kostant_trivial", in.kostant_trivial},
           {"cft", to_string(in.cft)},
           {"normalization", to_string(in.normalization)},
           {"lambda", {{"sign", in.lambda.sign}, {"scale", rational_string(in.lambda.scale)}}}};
  if (in.base) out["base"] = to_json(*in.base);
  json sc = json::array();
  for (const auto& t : in.stable_class) sc.push_back(rational_string(t));
  out["stable_class"] = sc;
  return out;
}

json input_schemas() {
  static const char* text = R"json({
  "group": {
    "description": "Finite Galois group: \"1\", \"Z/n\", \"V4\", or a multiplication table with identity at index 0",
    "oneOf": [
      {"type": "string"},
      {"type": "object", "required": ["table"],
       "properties": {"table": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                      "names": {"type": "array", "items": {"type": "string"}}}}
    ]
  },
  "root_datum": {
    "description": "Root datum of the dual group: a preset name or explicit rows on X = Z^rank",
    "oneOf": [
      {"enum": ["A1.sc", "A1.ad", "A2.sc", "C2.sc", "C2.ad", "G2", "A1xA1 in C2", "GL1"]},
      {"type": "object", "required": ["rank", "roots", "coroots", "simple"],
       "properties": {"rank": {"type": "integer"}, "roots": {"$ref": "#/matrix"}, "coroots": {"$ref": "#/matrix"},
                      "simple": {"type": "array", "items": {"type": "integer"}}}}
    ]
  },
  "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
  "rational": {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}]},
  "cohomology": {
    "description": "Input of the cohomology command",
    "type": "object", "required": ["group", "module"],
    "properties": {
      "group": {"$ref": "#/group"},
      "module": {"type": "object", "required": ["moduli", "action"],
                 "properties": {"moduli": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                                "action": {"type": "array", "items": {"$ref": "#/matrix"}}}}
    }
  },
  "cover_base": {
    "description": "Torus by the action on X^*(S) = X_*(S^), or quasi-split group by its dual root datum and the pinned action on X^*(T^)",
    "type": "object", "required": ["group"],
    "properties": {"group": {"$ref": "#/group"}, "torus": {"type": "array", "items": {"$ref": "#/matrix"}},
                   "dual": {"$ref": "#/root_datum"}, "action": {"type": "array", "items": {"$ref": "#/matrix"}}}
  },
  "descriptor": {
    "description": "Cover descriptor t = (z, c); entries are exponents k of zeta_n^k, cochains flattened by (g_1, ..., g_i, coordinate)",
    "type": "object", "required": ["n", "z"],
    "properties": {"n": {"type": "integer", "minimum": 1}, "z": {"type": "array", "items": {"type": "integer"}},
                   "c": {"type": "array", "items": {"type": "integer"}}}
  },
  "endoscopic_datum": {
    "type": "object", "required": ["group", "dual", "sigma_G", "s", "w"],
    "properties": {"group": {"$ref": "#/group"}, "dual": {"$ref": "#/root_datum"},
                   "sigma_G": {"type": "array", "items": {"$ref": "#/matrix"}},
                   "s": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
                   "w": {"type": "array", "items": {"$ref": "#/matrix"}},
                   "strict_s": {"type": "boolean"}}
  },
  "field": {
    "description": "Quadratic extension F(sqrt d) of F = Q_p or R",
    "type": "object", "required": ["place", "d"],
    "properties": {"place": {"oneOf": [{"const": "real"}, {"type": "integer"}]}, "d": {"$ref": "#/rational"}}
  },
  "cover_element": {
    "description": "delta on the basis of X^*(T), one value per root, flips per asymmetric orbit; elements are [a, b] for a + b sqrt(d)",
    "type": "object", "required": ["delta", "roots"],
    "properties": {"delta": {"type": "array"}, "roots": {"type": "array"}, "flips": {"type": "array", "items": {"type": "integer"}}}
  },
  "transfer": {
    "type": "object", "required": ["field", "omega", "gamma", "delta"],
    "properties": {
      "fixture": {"type": "string"}, "datum": {"$ref": "#/endoscopic_datum"},
      "field": {"$ref": "#/field"}, "omega": {"$ref": "#/matrix"},
      "gamma": {"$ref": "#/cover_element"}, "delta": {"$ref": "#/cover_element"}, "base": {"$ref": "#/cover_element"},
      "base_value": {"enum": [1, -1]}, "kostant_trivial": {"type": "boolean"},
      "stable_class": {"type": "array", "items": {"$ref": "#/rational"}},
      "cft": {"enum": ["deligne", "artin"]}, "normalization": {"enum": ["pinning", "whittaker"]},
      "lambda": {"type": "object", "properties": {"sign": {"enum": [1, -1]}, "scale": {"$ref": "#/rational"}}}
    }
  },
  "endo_report": {
    "description": "Output of endo cover, accepted back by endo check",
    "type": "object", "required": ["datum", "pinning_signs", "x", "certificate"]
  }
})json";
  return json::parse(text);
}

}  // namespace rcov::cli
