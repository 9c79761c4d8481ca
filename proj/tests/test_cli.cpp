#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cli_fixtures.hpp"
#include "cli_io.hpp"
#include "doctest.h"

using rcov::i64;
using rcov::cli::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = rcov::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const json& j) {
  auto p = std::filesystem::temp_directory_path() / ("rcov_test_" + name + ".json");
  std::ofstream(p) << j.dump();
  return p.string();
}

}  // namespace

TEST_CASE("classify reports the two classes of the anisotropic torus deterministically") {
  Result a = call({"covers", "classify", "--preset", "aniso1", "--n", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.j()["classes"]["order"] == 2);
  CHECK(a.j()["representatives"].size() == 2);
  CHECK(call({"covers", "classify", "--preset", "aniso1", "--n", "2"}).out == a.out);
}

TEST_CASE("every fixture passes its checks") {
  for (const auto& f : rcov::cli::fixture_catalog()) {
    Result r = call({"fixtures", "run", f.id});
    CAPTURE(f.id);
    CHECK(r.code == 0);
    CHECK(r.j()["passed"] == true);
  }
}

TEST_CASE("exit codes") {
  CHECK(call({"--help"}).code == 0);
  CHECK(call({}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"fixtures", "run", "nosuch"}).code == 2);
  CHECK(call({"covers", "classify"}).code == 2);
  CHECK(call({"covers", "classify", "--preset", "aniso1", "--n", "0"}).code == 2);
  CHECK(call({"field", "hilbert", "0", "3", "--place", "3"}).code == 2);
  CHECK(call({"field", "hilbert", "2", "3", "--place", "4"}).code == 2);
  CHECK(call({"cohomology", "/nonexistent/file.json"}).code == 2);

  json m{{"group", "Z/30"}, {"module", {{"moduli", {2}}, {"action", json::array()}}}};
  for (int i = 0; i < 30; ++i) m["module"]["action"].push_back({{1}});
  std::string big = write_temp("big", m);
  CHECK(call({"cohomology", big, "--degree", "1"}).code == 0);
  CHECK(call({"cohomology", big, "--degree", "2"}).code == 3);
}

TEST_CASE("schema violations carry a JSON pointer") {
  json in = rcov::cli::to_json(rcov::cli::transfer_sample("q5"));
  in["datum"]["s"][0][1] = "x";
  Result r = call({"transfer", "eval", "--input", write_temp("bad_s", in)});
  CHECK(r.code == 2);
  CHECK(r.err.find("/datum/s/0/1") != std::string::npos);

  json bad_desc{{"n", 2}, {"z", {0, 0, 0}}, {"c", json::array()}};
  r = call({"covers", "validate", "--preset", "aniso1", "--descriptor", write_temp("bad_desc", bad_desc)});
  CHECK(r.code == 2);
}

TEST_CASE("Hilbert symbol accepts negative arguments") {
  Result r = call({"field", "hilbert", "--", "-1", "-1", "--place", "real"});
  REQUIRE(r.code == 0);
  CHECK(r.j()["symbol"] == -1);
  CHECK(call({"field", "hilbert", "2", "5", "--place", "5"}).j()["symbol"] == -1);
  CHECK(call({"field", "hilbert", "1/4", "-7", "--place", "2"}).j()["symbol"] == 1);
}

TEST_CASE("endo cover reports survive endo check and tampering is caught") {
  for (std::string id : {"a1-elliptic", "a1xa1-in-c2"}) {
    CAPTURE(id);
    Result r = call({"endo", "cover", "--preset", id});
    REQUIRE(r.code == 0);
    json rep = r.j();
    CHECK(rep["certificate"]["verified"] == true);
    CHECK(rep["class"]["trivial"] == (id == "a1xa1-in-c2"));
    std::string path = write_temp("endo_" + id, rep);
    CHECK(call({"endo", "check", "--report", path}).code == 0);

    json bad = rep;
    i64 n = bad["x"]["n"];
    bad["x"]["z"][0] = (bad["x"]["z"][0].get<i64>() + 1) % n;
    Result c = call({"endo", "check", "--report", write_temp("endo_bad_" + id, bad)});
    CHECK(c.code == 2);
    CHECK(c.j()["valid"] == false);
  }
}

TEST_CASE("transfer eval echoes its input and round trips") {
  for (const auto& f : rcov::cli::transfer_sample_fields()) {
    CAPTURE(f);
    Result r = call({"transfer", "eval", "--fixture", "a1-elliptic", "--field", f});
    REQUIRE(r.code == 0);
    json rep = r.j();
    CHECK(rep["related"] == true);
    CHECK(rep["value"]["zero"] == false);
    Result again = call({"transfer", "eval", "--input", write_temp("echo_" + f, rep["input"])});
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
  }
}

TEST_CASE("normalization precedence: flag, then input, then environment") {
  std::string env = rcov::cli::kNormalizationEnv;
  auto norm = [](const Result& r) { return r.j()["input"]["normalization"].get<std::string>(); };
  ::unsetenv(env.c_str());
  CHECK(norm(call({"transfer", "eval", "--fixture", "a1-elliptic"})) == "pinning");
  ::setenv(env.c_str(), "whittaker", 1);
  CHECK(norm(call({"transfer", "eval", "--fixture", "a1-elliptic"})) == "whittaker");
  CHECK(norm(call({"transfer", "eval", "--fixture", "a1-elliptic", "--normalization", "pinning"})) == "pinning");
  json in = rcov::cli::to_json(rcov::cli::transfer_sample("q3"));
  in["normalization"] = "pinning";
  CHECK(norm(call({"transfer", "eval", "--input", write_temp("norm", in)})) == "pinning");
  ::setenv(env.c_str(), "bogus", 1);
  CHECK(call({"transfer", "eval", "--fixture", "a1-elliptic"}).code == 2);
  ::unsetenv(env.c_str());
}

TEST_CASE("--output writes the result to a file") {
  auto p = std::filesystem::temp_directory_path() / "rcov_test_output.json";
  std::filesystem::remove(p);
  Result r = call({"--output", p.string(), "fixtures", "list"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(p);
  json j = json::parse(f);
  CHECK(j["fixtures"].size() == rcov::cli::fixture_catalog().size());
}

TEST_CASE("schemas cover every input kind") {
  Result r = call({"--schema"});
  REQUIRE(r.code == 0);
  json s = r.j();
  for (const char* k : {"group", "root_datum", "cohomology", "cover_base", "descriptor", "endoscopic_datum", "field", "transfer", "endo_report"})
    CHECK(s.contains(k));
}

TEST_CASE("covers subcommands on descriptor files") {
  std::string nontrivial = write_temp("d1", json{{"n", 2}, {"z", {0, 0, 0, 1}}, {"c", json::array()}});
  std::string trivial = write_temp("d0", json{{"n", 2}, {"z", {0, 0, 0, 0}}, {"c", json::array()}});
  auto run = [](std::vector<std::string> a) {
    Result r = call(a);
    REQUIRE(r.code == 0);
    return r.j();
  };
  CHECK(run({"covers", "validate", "--preset", "aniso1", "--descriptor", nontrivial})["class"] == json{1});
  CHECK(run({"covers", "validate", "--preset", "aniso1", "--descriptor", trivial})["class"] == json{0});
  CHECK(run({"covers", "baer", "--preset", "aniso1", "--a", nontrivial, "--b", nontrivial})["class"] == json{0});
  CHECK(run({"covers", "baer", "--preset", "aniso1", "--a", nontrivial, "--inverse"})["class"] == json{1});
  json iso = run({"covers", "isom", "--preset", "aniso1", "--from", nontrivial, "--to", nontrivial});
  CHECK(iso["exists"] == true);
  CHECK(iso["count"] == 1);
  CHECK(run({"covers", "isom", "--preset", "aniso1", "--from", nontrivial, "--to", trivial})["exists"] == false);
  CHECK(run({"covers", "aut", "--preset", "split1", "--n", "2"})["order"] == 2);
  CHECK(run({"covers", "torsion-lift", "--preset", "induced-Z/2", "--n", "4"})["bijective"] == true);
  CHECK(call({"covers", "torsion-lift", "--preset", "a1-elliptic"}).code == 2);
  CHECK(call({"covers", "classify", "--preset", "split1", "--n", "4", "--max-representatives", "1"}).code == 3);
}
