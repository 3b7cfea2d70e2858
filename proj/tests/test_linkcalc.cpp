#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "singfib/linkcalc.hpp"

using namespace singfib;
using namespace singfib::links;

namespace {

LinkCollection random_collection(std::mt19937& rng) {
  std::uniform_int_distribution<int> mu(0, 6), count(0, 4), mult(1, 3);
  LinkCollection c;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int m = mu(rng);
    const int l = std::uniform_int_distribution<int>(-2, m + 2)(rng);
    c.add({"k" + std::to_string(i), m, l, m - l}, mult(rng));
  }
  return c;
}

}  // namespace

TEST_CASE("built-in links", "[links][builtin]") {
  auto triple = [](const FiberedLinkClass& k) { return std::tuple{k.mu(), *k.lambda(), *k.rho()}; };
  CHECK(triple(builtin_link("hopf+")) == std::tuple{1, 1, 0});
  CHECK(triple(builtin_link("hopf-")) == std::tuple{1, 0, 1});
  CHECK(triple(builtin_link("hopf\xE2\x88\x92")) == std::tuple{1, 0, 1});
  CHECK(triple(builtin_link("figure8")) == std::tuple{2, 1, 1});
  CHECK(triple(builtin_link("trefoil+")) == std::tuple{2, 2, 0});
  CHECK(triple(builtin_link("trefoil-")) == std::tuple{2, 0, 2});
  CHECK(triple(builtin_link("algebraic(4)")) == std::tuple{4, 4, 0});
  const auto p = builtin_link("pretzel(2,-2,4)");
  CHECK(p.mu() == 2);
  CHECK_FALSE(p.lambda_known());
  CHECK(builtin_link("pretzel(2, -2, 2)", 1).lambda() == 1);
  CHECK_THROWS_AS(builtin_link("pretzel(2,-2,3)"), InputError);
  CHECK_THROWS_AS(builtin_link("pretzel(3,-2,2)"), InputError);
  CHECK_THROWS_AS(builtin_link("algebraic(-1)"), InputError);
  CHECK_THROWS_AS(builtin_link("unknot2"), InputError);
  CHECK_THROWS_AS(FiberedLinkClass("bad", 2, 1, 2), InputError);
  CHECK_THROWS_AS(FiberedLinkClass("bad", -1, 0, -1), InputError);
}

TEST_CASE("mirror", "[links][mirror]") {
  const auto m = mirror(builtin_link("hopf+"));
  CHECK(m.mu() == 1);
  CHECK(m.lambda() == 0);
  CHECK(m.rho() == 1);
  CHECK(m == builtin_link("hopf-"));
  CHECK(mirror(builtin_link("figure8")) == builtin_link("figure8"));
  CHECK(mirror(builtin_link("trefoil-")) == builtin_link("trefoil+"));
  for (std::int64_t mu = 0; mu <= 5; ++mu)
    for (std::int64_t l = -3; l <= mu + 3; ++l) {
      const FiberedLinkClass k("x", mu, l, mu - l);
      CHECK(mirror(mirror(k)) == k);
      CHECK(mirror(k).lambda() == k.rho());
    }
  const auto unknown = builtin_link("pretzel(2,-2,2)");
  CHECK(mirror(mirror(unknown)) == unknown);
  CHECK_FALSE(mirror(unknown).lambda_known());
}

TEST_CASE("totals", "[links][totals]") {
  const LinkCollection c{{builtin_link("hopf+"), 3}, {builtin_link("hopf-"), 2}};
  CHECK(totals(c) == Totals{5, 3});
  CHECK(totals(LinkCollection{}) == Totals{0, 0});
  CHECK(totals(LinkCollection{{builtin_link("algebraic(4)"), 1}}) == Totals{4, 4});
  CHECK_THROWS_AS(totals(LinkCollection{{builtin_link("pretzel(2,-2,2)"), 1}}), MissingInvariant);
  LinkCollection merged;
  merged.add(builtin_link("hopf+"));
  merged.add(builtin_link("hopf+"), 2);
  CHECK(merged.entries().size() == 1);
  CHECK(merged.entries()[0].multiplicity == 3);
  CHECK_THROWS_AS(merged.add(builtin_link("hopf+"), 0), InputError);
}

TEST_CASE("stable equivalence", "[links][equiv]") {
  const LinkCollection a5{{builtin_link("algebraic(5)"), 1}}, h5{{builtin_link("hopf+"), 5}};
  CHECK(stably_equivalent(a5, h5));
  CHECK_FALSE(stably_equivalent(LinkCollection{{builtin_link("hopf+"), 1}}, LinkCollection{{builtin_link("hopf-"), 1}}));
  for (int mu = 1; mu <= 20; ++mu)
    CHECK(stably_equivalent(LinkCollection{{builtin_link("algebraic(" + std::to_string(mu) + ")"), 1}},
                            LinkCollection{{builtin_link("hopf+"), mu}}));

  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_collection(rng), b = random_collection(rng), c = random_collection(rng);
    CHECK(stably_equivalent(a, a));
    CHECK(stably_equivalent(a, b) == stably_equivalent(b, a));
    if (stably_equivalent(a, b) && stably_equivalent(b, c)) CHECK(stably_equivalent(a, c));
    const auto ta = totals(a), tb = totals(b), tab = totals(a + b);
    CHECK(tab.mu == ta.mu + tb.mu);
    CHECK(tab.lambda == ta.lambda + tb.lambda);
  }
}

TEST_CASE("Hopf unfoldability", "[links][hopf]") {
  CHECK(hopf_unfoldable(Totals{5, 3}) == HopfDecomposition{3, 2});
  CHECK_FALSE(hopf_unfoldable(Totals{2, -1}));
  CHECK(hopf_unfoldable(Totals{0, 0}) == HopfDecomposition{0, 0});

  // Oracle: search a, b >= 0 with a hopf+ + b hopf- having totals (mu, lambda).
  for (std::int64_t mu = 0; mu <= 9; ++mu)
    for (std::int64_t l = -3; l <= 12; ++l) {
      std::optional<HopfDecomposition> brute;
      for (std::int64_t a = 0; a <= mu; ++a)
        for (std::int64_t b = 0; b <= mu; ++b)
          if (a + b == mu && a == l) brute = HopfDecomposition{a, b};
      CHECK(hopf_unfoldable(Totals{mu, l}) == brute);
    }

  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_collection(rng);
    const auto h = hopf_unfoldable(c);
    const auto hm = hopf_unfoldable(mirror(c));
    REQUIRE(h.has_value() == hm.has_value());
    if (h) {
      CHECK(stably_equivalent(c, hopf_collection(*h)));
      CHECK(hm->positives == h->negatives);
      CHECK(hm->negatives == h->positives);
    }
  }
}

TEST_CASE("d_beta", "[links][dbeta]") {
  CHECK(d_beta({AbelianGroup::free(2), {4, 6}}) == 4);
  CHECK(d_beta({AbelianGroup(0, {5}), {3}}) == 0);
  CHECK(d_beta({AbelianGroup::free(2), {0, 0}}) == 0);
  CHECK_THROWS_AS(CohomologyClassIn3Manifold(AbelianGroup::free(2), {1}), InputError);
  for (std::int64_t g = 0; g <= 10; ++g) CHECK(fiber_d_beta(g) == std::abs(2 - 2 * g));

  std::mt19937 rng(4);
  std::uniform_int_distribution<int> coord(-30, 30), rank(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = static_cast<std::size_t>(rank(rng));
    const AbelianGroup g(r, {2, 6});
    std::vector<Integer> v;
    std::int64_t expected = 0;
    for (std::size_t i = 0; i < r; ++i) {
      v.emplace_back(coord(rng));
      expected = std::gcd(expected, static_cast<std::int64_t>(v.back()));
    }
    v.emplace_back(coord(rng));
    v.emplace_back(coord(rng));
    CHECK(d_beta({g, v}) == 2 * expected);
    const int k = 1 + trial % 5;
    auto kv = v;
    for (auto& x : kv) x *= k;
    if (expected != 0) CHECK(d_beta({g, kv}) == k * d_beta({g, v}));
  }
}

TEST_CASE("shell reduction", "[links][shell]") {
  CHECK(shell_reduction({1, 1}, 0, 0) == ShellInvariant{-1, 1, 0, 0});
  CHECK(shell_reduction({3, 5}, 2, 2) == ShellInvariant{1, 1, 2, 2});
  const Integer d = fiber_d_beta(2);
  CHECK(shell_reduction({1, 1}, d, d) == ShellInvariant{1, 1, 2, 2});
  CHECK_THROWS_AS(shell_reduction({1, 1}, -1, 0), InputError);
}

TEST_CASE("fiber Euler characteristic and relative minimality", "[links][minimality]") {
  CHECK(fiber_chi(1, 0) == 0);
  CHECK(fiber_chi(0, 3) == -1);
  CHECK_THROWS_AS(fiber_chi(-1, 0), InputError);
  using C = ComplementComponent;
  const std::vector<C> annulus{C::annulus}, disk{C::disk}, generic{C::generic, C::generic};
  CHECK(relatively_minimal(1, annulus).pass);
  CHECK_FALSE(relatively_minimal(1, disk).pass);
  CHECK_FALSE(relatively_minimal(2, annulus).pass);
  CHECK(relatively_minimal(2, generic).pass);
  CHECK(relatively_minimal(3, {}).pass);
  CHECK_THROWS_AS(relatively_minimal(0, annulus), InputError);
}
