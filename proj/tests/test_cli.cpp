#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>

#include "singfib/cli.hpp"

using namespace singfib;
using singfib::io::json;

#ifndef SINGFIB_DATA_DIR
#define SINGFIB_DATA_DIR "data"
#endif

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expected_code = 0) {
  args.push_back("--json");
  const auto r = run(args);
  INFO(r.err);
  REQUIRE(r.code == expected_code);
  const auto j = json::parse(r.out);
  CHECK(j["schema"] == "singfib/1");
  return j;
}

std::string data(const std::string& name) {
  const char* dir = std::getenv("SINGFIB_DATA_DIR");
  return std::string(dir ? dir : SINGFIB_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("index", "[cli][index]") {
  const auto j = run_json({"index", "--builtin", "s4"});
  CHECK(j["command"] == "index");
  REQUIRE(j["pairs"].size() == 1);
  CHECK(j["pairs"][0]["lambda"] == 1);
  CHECK(j["pairs"][0]["rho"] == 1);
  CHECK(j["pairs"][0]["mu"] == 2);

  const auto m = run_json({"index", "--builtin", "m_s1xs3:2"});
  CHECK(m["pairs"][0]["lambda"] == -1);
  CHECK(m["pairs"][0]["feasible"] == false);

  const auto cp2 = run_json({"index", "--builtin", "cp2", "--window", "100"});
  CHECK(cp2["lambdas"] == json::array({2, 0, -4, -10, -18}));

  const auto f = run_json({"index", "--form", data("hyperbolic_form.json")});
  CHECK(f["omega"]["label"] == "window, box=8");

  CHECK(run({"index", "--builtin", "k3"}).code == 3);
  CHECK(run({"index", "--builtin", "k3", "--box", "2"}).code == 0);
  CHECK(run({"index", "--builtin", "nope"}).code == 2);
  CHECK(run({"index"}).code == 2);
}

TEST_CASE("index reads forms from stdin", "[cli][index]") {
  const auto r = run({"index", "--form", "-", "--json"}, R"J({"matrix": [[1]]})J");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["lambdas"][0] == 2);
  CHECK(run({"index", "--form", "-"}, "[[1, 2").code == 2);
}

TEST_CASE("obstruct", "[cli][obstruct]") {
  const auto j = run_json({"obstruct", "--builtin", "s4", "--base", "s2", "--fiber", "t2"});
  bool torus = false;
  for (const auto& v : j["verdicts"])
    if (v["kind"] == "BaseOrFiberTorus") torus = v["satisfied"];
  CHECK(torus);
  CHECK(run({"obstruct", "--b1", "0", "--b2", "0", "--sigma", "0"}).code == 0);
  CHECK(run({"obstruct", "--b1", "0", "--b2", "1", "--sigma", "3"}).code == 2);
}

TEST_CASE("gphi", "[cli][gphi]") {
  const auto m = run_json({"gphi", "--k=1,-1,1"});
  CHECK(m["verdict"] == "Trivial");
  CHECK(m["note"] == "Matsumoto / pretzel (2,-2,2)");
  CHECK(run_json({"gphi", "--k", "1,1,1"})["abelianization"]["text"] == "Z/3");
  CHECK(run_json({"gphi", "--k", "2,-1,3"})["verdict"] == "Trivial");
  const auto big = run_json({"gphi", "--k=-2,3,5"});
  CHECK(big["verdict"] == "Nontrivial");
  CHECK(big["coset_enumeration"]["index"] == 120);
  CHECK(run_json({"gphi", "--k=-3,5,7", "--max-cosets", "2000"})["verdict"] == "Inconclusive");

  CHECK(run_json({"gphi", "--monodromy", data("matsumoto_monodromy.json")})["verdict"] == "Trivial");
  CHECK(run_json({"gphi", "--monodromy", data("annular_monodromy.json")})["verdict"] == "Trivial");
  CHECK(run_json({"gphi", "--monodromy", data("generic_monodromy.json")})["abelianization"]["text"] == "Z/15");

  CHECK(run({"gphi", "--k", "1,2"}).code == 2);
  CHECK(run({"gphi"}).code == 2);
  CHECK(run({"gphi", "--monodromy", "/nonexistent.json"}).code == 2);
}

TEST_CASE("enumerate", "[cli][enumerate]") {
  const auto j = run_json({"enumerate", "--bound", "3"});
  std::int64_t total = 0;
  for (const auto& f : j["families"]) total += f["count"].get<std::int64_t>();
  CHECK(total == 54);
  CHECK(j["anomalies"].size() == 0);
  CHECK(run_json({"enumerate", "--bound", "2", "--torus-expandable"})["torus_expandable_only"] == true);
  CHECK(run({"enumerate"}).code == 2);
  CHECK(run({"enumerate", "--bound", "0"}).code == 2);
}

TEST_CASE("unfold", "[cli][unfold]") {
  const auto t = run_json({"unfold", "totals", data("hopf_mix.json")});
  CHECK(t["totals"]["mu"] == 5);
  CHECK(t["totals"]["lambda"] == 3);
  CHECK(run_json({"unfold", "equiv", data("algebraic5.json"), data("hopf5.json")})["equivalent"] == true);
  const auto h = run_json({"unfold", "hopf", data("hopf_mix.json")});
  CHECK(h["hopf"]["positive"] == 3);
  CHECK(h["hopf"]["negative"] == 2);
  const auto neg = run_json({"unfold", "hopf", data("negative_lambda.json")});
  CHECK(neg["hopf"].is_null());
  CHECK(neg["refusal"] == "lambda < 0");
  CHECK(run({"unfold", "totals", data("pretzel_unknown.json")}).code == 4);
  const auto s = run({"unfold", "totals", "-", "--json"}, R"J(["hopf+", "hopf+"])J");
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["totals"]["mu"] == 2);
  CHECK(run({"unfold", "totals", "-"}, R"J([{"name": "x", "mu": 1, "lambda": 1, "rho": 1}])J").code == 2);
}

TEST_CASE("mcg", "[cli][mcg]") {
  CHECK(run_json({"mcg", "order", "--matrix", "1,1,-1,0"})["order"] == 6);
  CHECK(run_json({"mcg", "order", "--matrix", "2,1,1,1"})["order"] == "infinite");
  CHECK(run_json({"mcg", "twotwist", "--c1", "1,0", "--c2", "1,0", "--k1", "2", "--k2", "-2"})["trivial"] == true);
  CHECK(run_json({"mcg", "twotwist", "--c1", "1,0", "--c2", "0,1", "--k1", "1", "--k2", "-1"})["trivial"] == false);
  CHECK(run_json({"mcg", "ishida", "--c1", "1,0", "--c2", "1,2"})["class"] == "free_rank2");
  CHECK(run_json({"mcg", "abelian", "--matrix", "0,-1,1,0"})["image"] == 9);
  CHECK(run_json({"mcg", "word", "--twist", "1,0,1", "--twist", "0,1,1"})["matrix"] == json::array({0, -1, 1, 1}));
  CHECK(run({"mcg", "order", "--matrix", "1,1,1,1"}).code == 2);
  CHECK(run({"mcg", "ishida", "--c1", "2,4", "--c2", "1,0"}).code == 2);
}

TEST_CASE("dbeta and shell", "[cli][dbeta]") {
  CHECK(run_json({"dbeta", "--ambient", "free=2", "--class", "4,6"})["d_beta"] == 4);
  CHECK(run_json({"dbeta", "--fiber-genus", "1"})["d_beta"] == 0);
  CHECK(run_json({"dbeta", "--fiber-genus", "2"})["d_beta"] == 2);
  CHECK(run_json({"dbeta", "--ambient", "free=1;torsion=2", "--class", "0,1"})["d_beta"] == 0);
  CHECK(run_json({"shell", "--pair", "1,1"})["invariant"] == json::array({-1, 1}));
  CHECK(run_json({"shell", "--pair", "3,5", "--d1", "2", "--d2", "2"})["invariant"] == json::array({1, 1}));
  CHECK(run({"dbeta", "--ambient", "free=2", "--class", "1"}).code == 2);
  CHECK(run({"shell", "--pair", "1"}).code == 2);
}

TEST_CASE("catalog and selfcheck", "[cli][catalog]") {
  const auto c = run_json({"catalog"});
  CHECK(c["entries"].size() == cli::catalog().size());
  CHECK(c["entries"][0]["name"] == "s4");
  const auto s = run_json({"selfcheck"});
  CHECK(s["pass"] == true);
  CHECK(s["checks"].size() == 10);
}

TEST_CASE("exit codes and help", "[cli]") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--help"}).out.find("SINGFIB_ENUM_BUDGET") != std::string::npos);
  CHECK(run({"index", "--builtin", "s4", "--window", "-1"}).code == 2);
}

TEST_CASE("output is deterministic", "[cli]") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"index", "--builtin", "cp2", "--json"}, {"enumerate", "--bound", "4"}, {"gphi", "--k=-2,3,5", "--json"}}) {
    const auto a = run(args), b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("the enumeration budget can be lowered from the environment", "[cli][budget]") {
  ::setenv(cli::kBudgetVariable, "1000", 1);
  CHECK(run({"index", "--builtin", "s2xs2", "--box", "80"}).code == 3);
  ::setenv(cli::kBudgetVariable, "junk", 1);
  CHECK(run({"index", "--builtin", "s4"}).code == 2);
  ::unsetenv(cli::kBudgetVariable);
  CHECK(run({"index", "--builtin", "s2xs2", "--box", "20"}).code == 0);
}
