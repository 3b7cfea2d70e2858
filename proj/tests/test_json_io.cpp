#include <catch_amalgamated.hpp>

#include "singfib/json_io.hpp"

using namespace singfib;
using namespace singfib::io;

TEST_CASE("integers", "[json]") {
  CHECK(integer_to_json(Integer(42)) == json(42));
  const Integer big("123456789012345678901234567890");
  CHECK(integer_to_json(big) == json("123456789012345678901234567890"));
  CHECK(integer_from_json(integer_to_json(big), "x") == big);
  CHECK(integer_from_json(json("-17"), "x") == -17);
  CHECK_THROWS_AS(integer_from_json(json("1.5"), "x"), InputError);
  CHECK_THROWS_AS(integer_from_json(json(1.5), "x"), InputError);
  CHECK_THROWS_AS(integer_from_json(json("-"), "x"), InputError);
  CHECK_THROWS_AS(int64_from_json(json("99999999999999999999999"), "x"), InputError);
}

TEST_CASE("schema tag", "[json]") {
  CHECK_NOTHROW(parse(R"J({"schema": "singfib/1"})J", "t"));
  CHECK_THROWS_AS(parse(R"J({"schema": "singfib/2"})J", "t"), InputError);
  CHECK_THROWS_AS(parse("{", "t"), InputError);
}

TEST_CASE("group specs", "[json]") {
  CHECK(parse_group_spec("free=2") == AbelianGroup::free(2));
  CHECK(parse_group_spec("free=1;torsion=2,4") == AbelianGroup(1, {2, 4}));
  CHECK(parse_group_spec("torsion=3") == AbelianGroup(0, {3}));
  CHECK_THROWS_AS(parse_group_spec("free=x"), InputError);
  CHECK_THROWS_AS(parse_group_spec("rank=2"), InputError);
  CHECK_THROWS_AS(parse_group_spec("torsion=2,3"), InputError);
}

TEST_CASE("SL(2,Z) round trip", "[json]") {
  const sl2::Sl2Element g(2, 1, 1, 1);
  CHECK(sl2_to_json(g) == json::array({2, 1, 1, 1}));
  CHECK(sl2_from_json(sl2_to_json(g)) == g);
  CHECK_THROWS_AS(sl2_from_json(json::array({1, 1, 1, 1})), InputError);
  CHECK_THROWS_AS(sl2_from_json(json::array({1, 0, 1})), InputError);
}

TEST_CASE("presentation round trip", "[json]") {
  const auto p = fp::build_g_phi(fp::boundary_twist_data(2, -1, 3));
  const auto j = presentation_to_json(p);
  CHECK(j["schema"] == kSchema);
  const auto q = presentation_from_json(json::parse(j.dump()));
  CHECK(q.generators() == p.generators());
  CHECK(q.relators() == p.relators());
  CHECK_THROWS_AS(presentation_from_json(json::parse(R"J({"generators": ["a"], "relators": [[2]]})J")), InputError);
  CHECK_THROWS_AS(presentation_from_json(json::parse(R"J({"generators": ["a"]})J")), InputError);
}

TEST_CASE("monodromy round trip", "[json]") {
  auto d = fp::boundary_twist_data(1, -1, 1);
  const auto back = monodromy_from_json(json::parse(monodromy_to_json(d).dump()));
  CHECK(back.N == d.N);
  CHECK(back.phi_images == d.phi_images);
  CHECK(back.boundary_words == d.boundary_words);
  CHECK(back.spherical_exponents == d.spherical_exponents);
  CHECK(back.annular_exponents == d.annular_exponents);

  auto j = monodromy_to_json(d);
  j["annular_exponents"] = json::array({1, 1});
  j["spherical_exponents"] = json::array({1});
  CHECK_THROWS_AS(monodromy_from_json(j), InputError);
  j = monodromy_to_json(d);
  j["f1_closed"] = true;
  CHECK_THROWS_AS(monodromy_from_json(j), InputError);
  j = monodromy_to_json(d);
  j["phi_images"] = json::array({json::array({1, 0})});
  CHECK_THROWS_AS(monodromy_from_json(j), InputError);
}

TEST_CASE("forms", "[json]") {
  const auto nested = form_from_json(json::parse(R"J({"matrix": [[0,1],[1,0]], "b1": 1})J"));
  CHECK(nested.b1 == 1);
  CHECK(nested.form.signature() == 0);
  const auto flat = form_from_json(json::parse("[0,1,1,0]"));
  CHECK(flat.form.matrix() == nested.form.matrix());
  CHECK(form_from_json(json::parse("[]")).form.rank() == 0);
  CHECK_THROWS_AS(form_from_json(json::parse("[1,2,3]")), InputError);
  CHECK_THROWS_AS(form_from_json(json::parse("[[2]]")), InputError);
  CHECK_THROWS_AS(form_from_json(json::parse(R"J({"matrix": [[1]], "torsion": [2]})J")), InputError);
  CHECK_THROWS_AS(form_from_json(json::parse(R"J({"matrix": [[1,0],[0]]})J")), InputError);
  const auto again = form_from_json(form_to_json(nested.form, 1));
  CHECK(again.form.matrix() == nested.form.matrix());
}

TEST_CASE("link collections", "[json]") {
  const auto c = collection_from_json(json::parse(R"J([
    {"name": "hopf+", "mu": 1, "lambda": 1, "multiplicity": 3},
    {"name": "hopf-", "multiplicity": 2},
    "figure8",
    {"name": "pretzel(2,-2,2)", "lambda": null},
    {"name": "pretzel(2,-2,4)", "lambda": 1},
    {"name": "custom", "mu": 3, "rho": 1}
  ])J"));
  REQUIRE(c.entries().size() == 6);
  CHECK(c.entries()[0].multiplicity == 3);
  CHECK(c.entries()[1].link == links::builtin_link("hopf-"));
  CHECK_FALSE(c.entries()[3].link.lambda_known());
  CHECK(c.entries()[4].link.lambda() == 1);
  CHECK(c.entries()[5].link.lambda() == 2);

  const auto back = collection_from_json(json::parse(collection_to_json(c).dump()));
  REQUIRE(back.entries().size() == c.entries().size());
  for (std::size_t i = 0; i < c.entries().size(); ++i) {
    CHECK(back.entries()[i].link == c.entries()[i].link);
    CHECK(back.entries()[i].multiplicity == c.entries()[i].multiplicity);
  }

  CHECK_THROWS_AS(collection_from_json(json::parse(R"J([{"name": "x", "mu": 2, "lambda": 1, "rho": 0}])J")), InputError);
  CHECK_THROWS_AS(collection_from_json(json::parse(R"J([{"name": "hopf+", "lambda": 0}])J")), InputError);
  CHECK_THROWS_AS(collection_from_json(json::parse(R"J([{"mu": 2}])J")), InputError);
  CHECK_THROWS_AS(collection_from_json(json::parse(R"J({"items": []})J")), InputError);
  CHECK_THROWS_AS(collection_from_json(json::parse(R"J([{"name": "hopf+", "multiplicity": 0}])J")), InputError);
}
