#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "substrata/spec_io.hpp"

using nlohmann::json;

namespace {

struct Run {
  int status = 0;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SUBSTRATA_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/substrata_test_" + name;
  std::ofstream(path) << text;
  return path;
}

double mass(const json& j, const std::string& w) { return j["measure"]["masses"][w]["value"].get<double>(); }

}  // namespace

TEST_CASE("bundled spec files match the embedded examples") {
  for (const auto& name : substrata::builtin_names()) {
    std::ifstream f(std::string(SUBSTRATA_SPEC_DIR) + "/" + name + ".spec");
    REQUIRE_MESSAGE(f, name);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == substrata::builtin_text(name));
  }
}

TEST_CASE("analyze reports the counterexample verdict and is byte-stable") {
  const auto spec = std::string(SUBSTRATA_SPEC_DIR) + "/counterexample.spec";
  const auto a = run("analyze " + spec + " --levels 4");
  const auto b = run("analyze " + spec + " --levels 4");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j["schema"] == "substrata/1");
  CHECK(j["ergodicity"]["verdict"] == "NonErgodicCertified");
  CHECK(j["ergodicity"]["intrinsic_ergodicity"] == "NotIntrinsicallyErgodic");
  CHECK(j["spectral"]["lambda"]["mode"] == "exact");
  CHECK(j["spectral"]["lambda"]["value"] == "4");
  CHECK(j["counts"]["counts"]["c"][2]["count"]["value"] == "4");
}

TEST_CASE("analyze of fibonacci_ac reports the entropy") {
  const auto r = run("analyze fibonacci_ac --skip ergodicity --skip measure");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["entropy"]["value"]["value"].get<double>() == doctest::Approx(0.264769).epsilon(1e-4));
  CHECK(j["stages"]["ergodicity"] == "skipped");
}

TEST_CASE("analyze halts with exit 2 on a non-primitive substitution") {
  const auto path = temp_file("np.spec", R"({"alphabet": ["a", "b"], "rules": {"a": ["a"], "b": ["ab"]}})");
  const auto r = run("analyze " + path);
  CHECK(r.status == 2);
}

TEST_CASE("malformed specs exit 2 with a position") {
  const auto path = temp_file("bad.spec", "{\n  \"alphabet\": [\"a\", \"b\"],\n  \"rules\": {\"a\": [\"ab\" \"ba\"]}\n}\n");
  const auto r = run("count " + path);
  CHECK(r.status == 2);
  CHECK(r.out.find("line 3") != std::string::npos);

  const auto unknown = temp_file("unknown.spec", R"({"alphabet": ["a"], "rules": {"a": ["ab"]}})");
  const auto u = run("count " + unknown);
  CHECK(u.status == 2);
  CHECK(u.out.find("not in alphabet") != std::string::npos);
}

TEST_CASE("spec parsing details") {
  const auto spec = substrata::parse_spec(R"({
    "alphabet": ["a", "b"],
    "rules": {"a": ["ba", ["a", "b"]], "b": ["a"]},
    "probabilities": {"a": ["0.25", "3/4"], "b": [1]},
    "lengths": {"a": "1.5", "b": 1}
  })");
  // Weights follow the file order and are remapped to sorted image order.
  CHECK((*spec.probabilities)[0][0] == mpq_class(3, 4));
  CHECK((*spec.probabilities)[0][1] == mpq_class(1, 4));
  CHECK((*spec.lengths)[0] == mpq_class(3, 2));
  CHECK(substrata::parse_rational("1e-2") == mpq_class(1, 100));
  CHECK(substrata::parse_rational("-2.50") == mpq_class(-5, 2));
  CHECK_THROWS_AS(substrata::parse_rational("1/0"), substrata::Error);
  CHECK_THROWS_AS(substrata::parse_spec(R"({"alphabet": ["a"], "rules": {}})"), substrata::SpecError);
}

TEST_CASE("measure command") {
  const auto f = run("measure random_fibonacci --uniform --float --cylinders 1");
  REQUIRE(f.status == 0);
  const auto jf = json::parse(f.out);
  CHECK(mass(jf, "a") == doctest::Approx(0.618034).epsilon(1e-5));
  CHECK(mass(jf, "b") == doctest::Approx(0.381966).epsilon(1e-5));

  const auto det = temp_file("det.spec", R"({"alphabet": ["a", "b"], "rules": {"a": ["ab"], "b": ["a"]}})");
  const auto e = run("measure " + det + " --cylinders 2 --levels 5");
  REQUIRE(e.status == 0);
  const auto je = json::parse(e.out);
  mpq_class one = 0, two = 0;
  for (auto& [w, v] : je["measure"]["masses"].items()) {
    CHECK(v["mode"] == "exact");
    (w.size() == 1 ? one : two) += mpq_class(v["value"].get<std::string>());
  }
  CHECK(one == 1);
  CHECK(two == 1);

  const auto ex = run("measure random_fibonacci --cylinders 2 --levels 4");
  const auto mc = run("measure random_fibonacci --cylinders 2 --levels 4 --mode mc --samples 200000 --seed 3");
  REQUIRE(ex.status == 0);
  REQUIRE(mc.status == 0);
  const auto jx = json::parse(ex.out), jm = json::parse(mc.out);
  for (auto& [w, v] : jm["measure"]["masses"].items()) {
    const double se = v["stderr"].get<double>();
    const double exact = mpq_class(jx["measure"]["masses"][w]["value"].get<std::string>()).get_d();
    CHECK(std::abs(v["value"].get<double>() - exact) <= 4 * se + 1e-15);
  }
  CHECK(run("measure fibonacci_ac --cylinders 2").status == 2);
}

TEST_CASE("count, entropy, ergodicity and recog subcommands") {
  const auto c = run("count fibonacci_ac --levels 5 --exact");
  REQUIRE(c.status == 0);
  CHECK(json::parse(c.out)["table"]["counts"]["a"][5]["count"]["value"] == "32");

  const std::string csv = "/tmp/substrata_test_entropy.csv";
  const auto e = run("entropy abb --levels 6 --letter b --csv " + csv);
  REQUIRE(e.status == 0);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "level,approximant,lower,upper");

  const auto g = run("ergodicity ergodic_abc");
  REQUIRE(g.status == 0);
  CHECK(json::parse(g.out)["ergodicity"]["verdict"] == "ErgodicCertified");

  const auto r = run("recog random_fibonacci --window 8");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["recog"]["status"] == "RefutedDSC");

  const std::string out = "/tmp/substrata_test_out.json";
  REQUIRE(run("recog counterexample --window 6 --levels 3 --out " + out).status == 0);
  std::ifstream o(out);
  CHECK(json::parse(o)["recog"]["status"] == "Inconclusive");
}
