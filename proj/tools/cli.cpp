#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "cli_fixtures.hpp"
#include "cli_io.hpp"
#include "rcov/cohomology.hpp"
#include "rcov/covers.hpp"
#include "rcov/endoscopy.hpp"
#include "rcov/error.hpp"
#include "rcov/localfield.hpp"
#include "rcov/transfer.hpp"

namespace rcov::cli {

namespace {

const char* kNotation = "entries are exponents k of zeta_n^k; cochains are flattened by (g_1, ..., g_i, coordinate)";

// Largest cochain space the commands accept.
constexpr std::size_t kMaxCochainDim = 20000;

struct Options {
  std::string output;
  std::string verify = "standard";

  int degree = -1;
  std::string input;

  std::string preset, base_file;
  i64 n = 2;
  std::size_t max_reps = 64;
  std::string from_file, to_file, a_file, b_file, descriptor_file;
  bool inverse = false;
  std::size_t witness_limit = 16;

  std::string datum_file, report_file;
  std::vector<int> pinning;
  bool strict_s = false;
  i64 level = 0;

  std::vector<std::string> hilbert_args;
  std::string place;

  std::string fixture, sample_field = "q5", normalization, cft;
  std::string fixture_id;
};

json load(const std::string& path) { return read_json_file(path); }

CoverBase load_base(const Options& o, std::string& label) {
  if (o.preset.empty() == o.base_file.empty()) throw ValidationError("give exactly one of --preset and --base");
  if (!o.preset.empty()) {
    label = o.preset;
    return fixture_base(o.preset);
  }
  label = o.base_file;
  json j = load(o.base_file);
  return parse_base(Node(j, ""));
}

CoverDescriptor load_descriptor(const CoverBase& base, const std::string& path) {
  json j = load(path);
  Node n(j, "");
  CoverDescriptor t = parse_descriptor(n);
  try {
    validate_descriptor(base, t);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return t;
}

void check_level(const CoverBase& base, i64 n) {
  if (n < 1) throw ValidationError("--n must be positive");
  std::size_t dim = total_dim(base.G, base.complex(n), 3);
  if (dim > kMaxCochainDim) throw UnsupportedError("cochain space of dimension " + std::to_string(dim) + " exceeds the desk-scale limit");
}

json classes_json(const CohomologyGroup& H) { return json{{"orders", H.orders()}, {"order", H.order()}}; }

json cmd_cohomology(const Options& o) {
  json j = load(o.input);
  Node root(j, "");
  FiniteGroup G = parse_group(root.at("group"));
  FiniteModule M = parse_module(root.at("module"), G);
  if (o.degree < -1 || o.degree > 3) throw ValidationError("--degree must lie in [0, 3]");
  std::vector<int> degrees;
  if (o.degree >= 0)
    degrees.push_back(o.degree);
  else
    degrees = {0, 1, 2};
  json out{{"command", "cohomology"}, {"group_order", G.order()}, {"moduli", M.moduli}, {"notation", kNotation}};
  json list = json::array();
  for (int deg : degrees) {
    if (cochain_dim(G, M, deg + 1) > kMaxCochainDim) throw UnsupportedError("cochain space too large in degree " + std::to_string(deg + 1));
    CohomologyGroup H = cohomology_group(G, M, deg);
    json gens = json::array();
    for (const auto& g : H.generators()) gens.push_back(g);
    list.push_back(json{{"degree", deg}, {"orders", H.orders()}, {"order", H.order()}, {"generators", gens}});
  }
  out["degrees"] = list;
  return out;
}

json cmd_covers_classify(const Options& o) {
  std::string label;
  CoverBase base = load_base(o, label);
  check_level(base, o.n);
  CoverClassification cl = classify_covers(base, o.n, o.max_reps);
  json reps = json::array();
  for (const auto& r : cl.representatives) {
    validate_descriptor(base, r);  // re-validated before emission
    reps.push_back(to_json(r));
  }
  if (o.verify == "full")
    for (std::size_t i = 0; i < cl.representatives.size(); ++i)
      for (std::size_t k = i + 1; k < cl.representatives.size(); ++k)
        if (cover_isomorphisms(base, cl.representatives[i], cl.representatives[k]).exists)
          throw CertificateError("representatives " + std::to_string(i) + " and " + std::to_string(k) + " are isomorphic");
  json out{{"command", "covers classify"},
           {"base", label},
           {"kind", base.torus ? "torus" : "group"},
           {"n", o.n},
           {"classes", classes_json(cl.classes)},
           {"representatives", reps},
           {"notation", kNotation}};
  if (!base.torus) {
    out["center_h2_orders"] = cl.center_h2_orders;
    out["tilde_orders"] = cl.tilde_orders;
  }
  return out;
}

json cmd_covers_isom(const Options& o) {
  std::string label;
  CoverBase base = load_base(o, label);
  CoverDescriptor t = load_descriptor(base, o.from_file), t2 = load_descriptor(base, o.to_file);
  if (t.n != t2.n) throw ValidationError("descriptors have different levels");
  IsomorphismSet iso = cover_isomorphisms(base, t, t2);
  json ws = json::array();
  if (iso.exists)
    for (const auto& h : enumerate_witnesses(iso, o.witness_limit)) {
      if (!is_isomorphism_witness(base, t, t2, h)) throw CertificateError("computed witness fails its check");
      ws.push_back(h);
    }
  return json{{"command", "covers isom"}, {"base", label},  {"n", t.n},          {"exists", iso.exists},
              {"count", iso.count()},      {"witnesses", ws}, {"notation", kNotation}};
}

json cmd_covers_aut(const Options& o) {
  std::string label;
  CoverBase base = load_base(o, label);
  check_level(base, o.n);
  Subquotient A = automorphism_group(base, o.n);
  return json{{"command", "covers aut"}, {"base", label}, {"n", o.n}, {"orders", A.orders()}, {"order", A.order()}};
}

json cmd_covers_baer(const Options& o) {
  std::string label;
  CoverBase base = load_base(o, label);
  CoverDescriptor a = load_descriptor(base, o.a_file);
  CoverDescriptor r;
  if (o.inverse) {
    if (!o.b_file.empty()) throw ValidationError("--inverse takes only --a");
    r = baer_inverse(base, a);
  } else {
    if (o.b_file.empty()) throw ValidationError("--b is required for a Baer sum");
    CoverDescriptor b = load_descriptor(base, o.b_file);
    if (a.n != b.n) throw ValidationError("descriptors have different levels");
    r = baer_sum(base, a, b);
  }
  validate_descriptor(base, r);
  CohomologyGroup classes = hyper_h2(base.G, base.complex(r.n));
  return json{{"command", o.inverse ? "covers baer --inverse" : "covers baer"},
              {"base", label},
              {"result", to_json(r)},
              {"class", class_of(base, classes, r)},
              {"classes", classes_json(classes)},
              {"notation", kNotation}};
}

json cmd_covers_validate(const Options& o) {
  std::string label;
  CoverBase base = load_base(o, label);
  CoverDescriptor t = load_descriptor(base, o.descriptor_file);
  CohomologyGroup classes = hyper_h2(base.G, base.complex(t.n));
  return json{{"command", "covers validate"}, {"base", label}, {"valid", true}, {"class", class_of(base, classes, t)},
              {"classes", classes_json(classes)}};
}

json cmd_covers_torsion(const Options& o) {
  std::string label;
  CoverBase base = load_base(o, label);
  if (!base.torus) throw ValidationError("torsion lifting applies to tori");
  check_level(base, o.n);
  TorsionLiftingReport r = torsion_lifting(base, o.n);
  return json{{"command", "covers torsion-lift"},
              {"base", label},
              {"n", o.n},
              {"finite_coboundaries", r.finite_coboundaries},
              {"torsion_coboundaries", r.torsion_coboundaries},
              {"bijective", r.bijective}};
}

EndoscopicDatum load_datum(const Options& o) {
  if (o.preset.empty() == o.datum_file.empty()) throw ValidationError("give exactly one of --preset and --datum");
  EndoscopicDatum d;
  if (!o.preset.empty()) {
    auto names = endoscopic_fixture_names();
    if (std::find(names.begin(), names.end(), o.preset) == names.end()) throw ValidationError("unknown endoscopic preset \"" + o.preset + "\"");
    d = endoscopic_fixture(o.preset);
  } else {
    json j = load(o.datum_file);
    d = parse_datum(Node(j, ""));
  }
  if (o.strict_s) {
    d.strict_s = true;
    validate_datum(d);
  }
  return d;
}

// Re-derives every check of an endo cover report from its own contents.
json verify_endo_report(const json& report) {
  Node root(report, "");
  EndoscopicDatum d = parse_datum(root.at("datum"));
  Vec sv = root.at("pinning_signs").vec();
  std::vector<int> signs(sv.begin(), sv.end());
  CoverDescriptor x = parse_descriptor(root.at("x"));
  Node cert = root.at("certificate");
  Vec lift = cert.at("lift").vec();
  i64 level = cert.at("level").integer();

  EndoscopicCoverResult r = endoscopic_cover(d, signs);
  json checks;
  checks["x matches recomputation"] = (r.x.n == x.n && r.x.z == x.z && r.x.c == x.c) ? "passed" : "failed";
  try {
    validate_descriptor(r.base, x);
    checks["dc = zbar"] = "passed";
  } catch (const ValidationError&) {
    checks["dc = zbar"] = "failed";
  }
  r.x = x;
  try {
    checks["certificate"] = check_l_embedding(d, r, lift, level).verified() ? "passed" : "failed";
  } catch (const ValidationError&) {
    checks["certificate"] = "failed";
  }
  return checks;
}

bool all_passed(const json& checks) {
  for (const auto& [k, v] : checks.items())
    if (v != "passed") return false;
  return true;
}

json cmd_endo_cover(const Options& o) {
  EndoscopicDatum d = load_datum(o);
  EndoscopicCoverResult r = endoscopic_cover(d, o.pinning);
  try {
    validate_descriptor(r.base, r.x);
  } catch (const ValidationError& e) {
    throw CertificateError(std::string("dc = zbar failed: ") + e.what());
  }
  LEmbeddingCertificate cert = l_embedding_certificate(d, r, {}, o.level);
  if (o.verify == "full") {
    for (int m = 0; m < (1 << r.H.simple.size()); ++m) {
      std::vector<int> s(r.H.simple.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = (m >> i) & 1 ? -1 : 1;
      EndoscopicCoverResult r2 = endoscopic_cover(d, s);
      if (r2.class_coords != r.class_coords) throw CertificateError("class depends on the adapted pinning");
      l_embedding_certificate(d, r2);
    }
  }
  json report{{"command", "endo cover"},
              {"datum", to_json(d)},
              {"H", to_json(r.H)},
              {"root_in_G", r.root_in_G},
              {"sigma_H", r.sigma_H},
              {"pinning_signs", r.pinning_signs},
              {"eps", r.eps},
              {"x", to_json(r.x)},
              {"class", {{"orders", r.class_orders}, {"coords", r.class_coords}, {"trivial", r.trivial_class}}},
              {"pi1_H", {{"invariants", r.pi1_H.invariants}}},
              {"conjugacy_note", r.conjugacy_note},
              {"notation", kNotation},
              {"certificate",
               {{"level", cert.level},
                {"lift", cert.lift},
                {"adjoint_shift", cert.adjoint_shift},
                {"weyl_index", cert.weyl_index},
                {"twisted_cocycle", cert.twisted_cocycle},
                {"products_checked", cert.products_checked},
                {"homomorphic_twisting", cert.homomorphic_twisting},
                {"multiplicative", cert.multiplicative},
                {"pinning_preserved", cert.pinning_preserved},
                {"verified", cert.verified()}}}};
  json checks = verify_endo_report(report);
  if (!all_passed(checks)) throw CertificateError("emitted report fails its own check");
  report["checks"] = checks;
  return report;
}

Place parse_place(const std::string& s) {
  if (s == "real" || s == "inf") return Place::real();
  i64 p = 0;
  try {
    std::size_t used = 0;
    p = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ValidationError("--place: expected \"real\" or a prime, got \"" + s + "\"");
  }
  if (!is_prime(p)) throw ValidationError("--place: " + s + " is not prime");
  return Place::padic(p);
}

json cmd_field_hilbert(Options o) {
  // "--place" may arrive after "--" among the positionals.
  std::vector<std::string> vals;
  for (std::size_t i = 0; i < o.hilbert_args.size(); ++i) {
    if (o.hilbert_args[i] == "--place" && i + 1 < o.hilbert_args.size()) {
      o.place = o.hilbert_args[++i];
      continue;
    }
    vals.push_back(o.hilbert_args[i]);
  }
  if (vals.size() != 2) throw ValidationError("field hilbert takes exactly two rationals");
  if (o.place.empty()) throw ValidationError("--place is required");
  Place v = parse_place(o.place);
  json raw = json::array({vals[0], vals[1]});
  Node args(raw, "/args");
  Rational a = args.at(0).rational(), b = args.at(1).rational();
  if (a == Rational(0) || b == Rational(0)) throw ValidationError("Hilbert symbol arguments must be nonzero");
  return json{{"command", "field hilbert"},
              {"a", rational_string(a)},
              {"b", rational_string(b)},
              {"place", v.name()},
              {"symbol", hilbert_symbol(a, b, v)}};
}

json transfer_report(const TransferInput& in) {
  TransferGroup tg = TransferGroup::from_datum(in.datum, in.E);
  TransferReport rep = delta_prime(in);
  json xs = json::array();
  for (const auto& v : rep.x_sigma_torus) xs.push_back(to_json(v));
  json eta = nullptr;
  if (in.base && rep.related) {
    EtaShift shift = eta_between(tg, in.embedding, *in.base, in.delta);
    eta = eta_shift_pairing(tg, in.embedding, shift, KappaCharacter{in.datum.s});
  }
  return json{{"command", "transfer eval"},
              {"input", to_json(in)},
              {"related", rep.related},
              {"cover",
               {{"x", to_json(rep.cover.x)}, {"class", rep.cover.class_coords}, {"trivial", rep.cover.trivial_class}, {"notation", kNotation}}},
              {"x_sigma_torus", xs},
              {"eta_pairing", eta},
              {"inv_pairing", rep.inv_pairing},
              {"inv_H", rep.inv_H},
              {"epsilon", to_json(rep.epsilon)},
              {"value", {{"zero", rep.value.zero}, {"phase", to_json(rep.value.phase)}}}};
}

json cmd_transfer_eval(const Options& o) {
  if (o.fixture.empty() == o.input.empty()) throw ValidationError("give exactly one of --fixture and --input");
  TransferInput in;
  bool json_normalization = false;
  if (!o.fixture.empty()) {
    if (o.fixture != "a1-elliptic") throw ValidationError("no built-in transfer sample for \"" + o.fixture + "\"; use --input");
    in = transfer_sample(o.sample_field);
  } else {
    json j = load(o.input);
    Node root(j, "");
    in = parse_transfer_input(root);
    json_normalization = root.has("normalization");
  }
  if (!o.normalization.empty()) {
    in.normalization = parse_normalization(o.normalization, "--normalization");
  } else if (!json_normalization) {
    const char* env = std::getenv(kNormalizationEnv);
    if (env != nullptr && *env != '\0') in.normalization = parse_normalization(env, kNormalizationEnv);
  }
  if (!o.cft.empty()) in.cft = parse_cft(o.cft, "--cft");
  return transfer_report(in);
}

json cmd_fixtures_list() {
  json list = json::array();
  for (const auto& f : fixture_catalog()) list.push_back(json{{"id", f.id}, {"kind", f.kind}, {"description", f.description}});
  return json{{"command", "fixtures list"}, {"fixtures", list}};
}

json cmd_fixtures_run(const Options& o, bool& passed) {
  auto results = run_fixture(o.fixture_id);
  json checks = json::array();
  passed = true;
  for (const auto& c : results) {
    checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    passed = passed && c.passed;
  }
  return json{{"command", "fixtures run"}, {"fixture", o.fixture_id}, {"checks", checks}, {"passed", passed}};
}

void emit(const json& j, const Options& o, std::ostream& out) {
  std::string text = j.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw ValidationError("cannot write " + o.output);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  bool schema = false;
  CLI::App app{"Exact finite computations for covers of reductive groups"};
  app.add_flag("--schema", schema, "Print the JSON schemas of all inputs and exit");
  app.add_option("-o,--output", o.output, "Write the JSON result to a file");
  app.add_option("--verify", o.verify, "Verification level")->check(CLI::IsMember({"standard", "full"}));

  auto* coh = app.add_subcommand("cohomology", "Group cohomology of a finite Galois module");
  coh->add_option("input", o.input, "Module JSON file (- for stdin)")->required();
  coh->add_option("--degree", o.degree, "Degree (default: 0, 1 and 2)");

  auto* covers = app.add_subcommand("covers", "Covers of tori and quasi-split groups");
  covers->require_subcommand(1);
  auto add_base = [&](CLI::App* c) {
    c->add_option("--preset", o.preset, "Fixture id (see fixtures list)");
    c->add_option("--base", o.base_file, "Cover base JSON file");
  };
  auto* classify = covers->add_subcommand("classify", "Isomorphism classes of n-fold covers");
  add_base(classify);
  classify->add_option("--n", o.n, "Level n")->capture_default_str();
  classify->add_option("--max-representatives", o.max_reps, "Refuse to list more classes than this")->capture_default_str();
  auto* isom = covers->add_subcommand("isom", "Isomorphisms between two covers");
  add_base(isom);
  isom->add_option("--from", o.from_file, "Descriptor JSON file")->required();
  isom->add_option("--to", o.to_file, "Descriptor JSON file")->required();
  isom->add_option("--limit", o.witness_limit, "Cap on emitted witnesses")->capture_default_str();
  auto* aut = covers->add_subcommand("aut", "Automorphism group of a cover");
  add_base(aut);
  aut->add_option("--n", o.n, "Level n")->capture_default_str();
  auto* baer = covers->add_subcommand("baer", "Baer sum or inverse");
  add_base(baer);
  baer->add_option("--a", o.a_file, "Descriptor JSON file")->required();
  baer->add_option("--b", o.b_file, "Descriptor JSON file");
  baer->add_flag("--inverse", o.inverse, "Baer inverse of --a");
  auto* validate = covers->add_subcommand("validate", "Check a descriptor and report its class");
  add_base(validate);
  validate->add_option("--descriptor", o.descriptor_file, "Descriptor JSON file")->required();
  auto* torsion = covers->add_subcommand("torsion-lift", "Torsion lifting for a torus");
  add_base(torsion);
  torsion->add_option("--n", o.n, "Level n")->capture_default_str();

  auto* endo = app.add_subcommand("endo", "Endoscopic cover character");
  endo->require_subcommand(1);
  auto* ecover = endo->add_subcommand("cover", "Compute x_{H,G} with its L-embedding certificate");
  ecover->add_option("--preset", o.preset, "Endoscopic fixture id");
  ecover->add_option("--datum", o.datum_file, "Endoscopic datum JSON file");
  ecover->add_option("--pinning", o.pinning, "Adapted pinning signs, one per simple root of H")->delimiter(',');
  ecover->add_flag("--strict-s", o.strict_s, "Require sigma_H(s) = s exactly");
  ecover->add_option("--level", o.level, "Certificate level (default: derived)");
  auto* echeck = endo->add_subcommand("check", "Re-verify an endo cover report");
  echeck->add_option("--report", o.report_file, "Report JSON file")->required();

  auto* field = app.add_subcommand("field", "Local field arithmetic");
  field->require_subcommand(1);
  auto* hilbert = field->add_subcommand("hilbert", "Hilbert symbol (a, b)_v");
  hilbert->add_option("args", o.hilbert_args, "a b")->required();
  hilbert->add_option("--place", o.place, "real or a prime p");

  auto* transfer = app.add_subcommand("transfer", "Transfer factors");
  transfer->require_subcommand(1);
  auto* teval = transfer->add_subcommand("eval", "Evaluate Delta'_x with every intermediate");
  teval->add_option("--fixture", o.fixture, "Fixture id with a built-in sample");
  teval->add_option("--field", o.sample_field, "Built-in sample field: q3, q5 or real")->capture_default_str();
  teval->add_option("--input", o.input, "Transfer input JSON file");
  teval->add_option("--normalization", o.normalization, std::string("pinning or whittaker (default from ") + kNormalizationEnv + ")");
  teval->add_option("--cft", o.cft, "deligne or artin");

  auto* fixtures = app.add_subcommand("fixtures", "Bundled fixtures");
  fixtures->require_subcommand(1);
  auto* flist = fixtures->add_subcommand("list", "List fixtures");
  auto* frun = fixtures->add_subcommand("run", "Run the checks of one fixture");
  frun->add_option("id", o.fixture_id, "Fixture id")->required();

  std::vector<std::string> argv_store{"rcov"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (!schema && app.get_subcommands().empty()) throw CLI::RequiredError("a subcommand");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (schema) {
      emit(input_schemas(), o, out);
      return 0;
    }
    json result;
    int code = 0;
    if (coh->parsed()) {
      result = cmd_cohomology(o);
    } else if (classify->parsed()) {
      result = cmd_covers_classify(o);
    } else if (isom->parsed()) {
      result = cmd_covers_isom(o);
    } else if (aut->parsed()) {
      result = cmd_covers_aut(o);
    } else if (baer->parsed()) {
      result = cmd_covers_baer(o);
    } else if (validate->parsed()) {
      result = cmd_covers_validate(o);
    } else if (torsion->parsed()) {
      result = cmd_covers_torsion(o);
    } else if (ecover->parsed()) {
      result = cmd_endo_cover(o);
    } else if (echeck->parsed()) {
      json checks = verify_endo_report(load(o.report_file));
      bool ok = all_passed(checks);
      result = json{{"command", "endo check"}, {"checks", checks}, {"valid", ok}};
      code = ok ? 0 : 2;
    } else if (hilbert->parsed()) {
      result = cmd_field_hilbert(o);
    } else if (teval->parsed()) {
      result = cmd_transfer_eval(o);
    } else if (flist->parsed()) {
      result = cmd_fixtures_list();
    } else if (frun->parsed()) {
      bool passed = false;
      result = cmd_fixtures_run(o, passed);
      code = passed ? 0 : 1;
    }
    emit(result, o, out);
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const CertificateError& e) {
    err << "certificate failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rcov::cli
