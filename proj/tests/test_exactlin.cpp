#include <catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "singfib/exactlin.hpp"

using namespace singfib;

namespace {

std::vector<Integer> ints(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

// Oracle: k-th determinantal divisor = gcd of all k x k minors, by brute
// force over row/column subsets with cofactor-expansion determinants.
Integer minor_det(const IntegerMatrix& m, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
  if (r.size() == 1) return m(r[0], c[0]);
  Integer det = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    std::vector<std::size_t> rr(r.begin() + 1, r.end()), cc;
    for (std::size_t k = 0; k < c.size(); ++k)
      if (k != j) cc.push_back(c[k]);
    const Integer term = m(r[0], c[j]) * minor_det(m, rr, cc);
    det += (j % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (cur.size() == k) {
    f(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, f);
    cur.pop_back();
  }
}

Integer determinantal_divisor(const IntegerMatrix& m, std::size_t k) {
  Integer g = 0;
  std::vector<std::size_t> rs, cs;
  subsets(m.rows(), k, 0, rs, [&](const std::vector<std::size_t>& r) {
    subsets(m.cols(), k, 0, cs, [&](const std::vector<std::size_t>& c) { g = gcd(g, minor_det(m, r, c)); });
  });
  return g;
}

IntegerMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lim) {
  std::uniform_int_distribution<int> d(-lim, lim);
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

IntegerMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
  IntegerMatrix u = IntegerMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> f(-3, 3);
  for (int step = 0; step < 12; ++step) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) u.swap_rows(0, n - 1);
    else u.add_row(i, j, f(rng));
  }
  return u;
}

}  // namespace

TEST_CASE("smith normal form examples", "[exactlin][snf]") {
  SECTION("identity") {
    const auto s = smith_normal_form(IntegerMatrix::identity(2));
    CHECK(s.invariant_factors == ints({1, 1}));
    CHECK(s.free_rank_of_cokernel == 0);
  }
  SECTION("[[2,4],[6,8]]") {
    const auto s = smith_normal_form(IntegerMatrix{{2, 4}, {6, 8}});
    CHECK(s.invariant_factors == ints({2, 4}));
    CHECK(s.free_rank_of_cokernel == 0);
  }
  SECTION("zero 1x2") {
    const auto s = smith_normal_form(IntegerMatrix(1, 2));
    CHECK(s.invariant_factors.empty());
    CHECK(s.free_rank_of_cokernel == 2);
  }
  SECTION("empty shapes") {
    CHECK(smith_normal_form(IntegerMatrix(0, 0)).free_rank_of_cokernel == 0);
    CHECK(smith_normal_form(IntegerMatrix(0, 3)).free_rank_of_cokernel == 3);
    CHECK(smith_normal_form(IntegerMatrix(4, 0)).invariant_factors.empty());
  }
  SECTION("large pivots stay exact") {
    const Integer big("123456789012345678901234567890");
    const auto s = smith_normal_form(IntegerMatrix{{big, 0}, {0, big * 3}});
    CHECK(s.invariant_factors == std::vector<Integer>{big, big * 3});
  }
}

TEST_CASE("smith normal form agrees with determinantal divisors", "[exactlin][snf][oracle]") {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    const auto m = random_matrix(rng, r, c, 6);
    const auto s = smith_normal_form(m);
    Integer product = 1;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      const Integer dk = determinantal_divisor(m, k);
      if (dk == 0) {
        CHECK(s.rank() == k - 1);
        break;
      }
      REQUIRE(s.rank() >= k);
      product *= s.invariant_factors[k - 1];
      CHECK(product == dk);
    }
    for (std::size_t i = 0; i + 1 < s.rank(); ++i) CHECK(s.invariant_factors[i + 1] % s.invariant_factors[i] == 0);
    CHECK(s.free_rank_of_cokernel == c - s.rank());
  }
}

TEST_CASE("smith normal form is invariant under unimodular transforms", "[exactlin][snf][property]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const auto m = random_matrix(rng, r, c, 9);
    const auto u = random_unimodular(rng, r), v = random_unimodular(rng, c);
    REQUIRE(abs_value(determinant(u)) == 1);
    const auto a = smith_normal_form(m), b = smith_normal_form(u * m * v);
    CHECK(a.invariant_factors == b.invariant_factors);
    CHECK(a.free_rank_of_cokernel == b.free_rank_of_cokernel);
  }
}

TEST_CASE("cokernel", "[exactlin][cokernel]") {
  CHECK(cokernel(IntegerMatrix{{1, 0}, {0, 1}}).is_trivial());
  // Abelianized G(phi) for k = (1,-1,1) in the basis a1, a2, t.
  CHECK(cokernel(IntegerMatrix{{1, 0, 1}, {0, -1, 1}, {-1, -1, 1}}).is_trivial());
  const auto z3 = cokernel(IntegerMatrix{{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}});
  CHECK(z3 == AbelianGroup(0, {3}));
  CHECK(z3.str() == "Z/3");
  CHECK(cokernel(IntegerMatrix{{2, 0, 0}, {0, 4, 0}}).str() == "Z + Z/2 + Z/4");
}

TEST_CASE("cokernel triviality matches the maximal-minor criterion", "[exactlin][cokernel][oracle]") {
  // Z^c / rowspan(m) = 0 iff the c x c minors have gcd 1.
  std::mt19937 rng(99);
  int trivial_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t c = 1 + rng() % 3, r = c + rng() % 3;
    const auto m = random_matrix(rng, r, c, 3);
    const bool by_minors = determinantal_divisor(m, c) == 1;
    CHECK(cokernel(m).is_trivial() == by_minors);
    trivial_seen += by_minors;
  }
  CHECK(trivial_seen > 20);
}

TEST_CASE("abelian group invariants", "[exactlin][group]") {
  CHECK_THROWS_AS(AbelianGroup(0, {Integer(1)}), InputError);
  CHECK_THROWS_AS(AbelianGroup(0, {Integer(2), Integer(3)}), InputError);
  CHECK(AbelianGroup(0, {}).is_trivial());
  CHECK_FALSE(AbelianGroup(1, {}).is_trivial());
  CHECK(AbelianGroup(0, {2, 6}).order() == 12);
}

TEST_CASE("divisibility", "[exactlin][divisibility]") {
  const auto z2 = AbelianGroup::free(2);
  CHECK(divisibility(ints({4, 6}), z2) == 2);
  CHECK(divisibility(ints({0, 0}), z2) == 0);
  CHECK(divisibility(ints({3, 2}), AbelianGroup(1, {5})) == 3);
  CHECK(divisibility(ints({-9}), AbelianGroup::free(1)) == 9);
  CHECK_THROWS_AS(divisibility(ints({1, 2, 3}), z2), InputError);

  std::mt19937 rng(3);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Integer> v{d(rng), d(rng), d(rng)};
    if (v[0] == 0 && v[1] == 0) continue;
    const AbelianGroup g(2, {4});
    const long k = 1 + trial % 7;
    std::vector<Integer> kv = v;
    for (auto& x : kv) x *= k;
    CHECK(divisibility(kv, g) == k * divisibility(v, g));
  }
}

TEST_CASE("determinant and unimodular inverse", "[exactlin]") {
  CHECK(determinant(IntegerMatrix{{2, 1}, {1, 1}}) == 1);
  CHECK(determinant(IntegerMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(determinant(IntegerMatrix(0, 0)) == 1);
  CHECK(determinant(IntegerMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == -3);
  const IntegerMatrix m{{2, 1}, {1, 1}};
  const auto inv = unimodular_inverse(m);
  REQUIRE(inv);
  CHECK(m * *inv == IntegerMatrix::identity(2));
  CHECK_FALSE(unimodular_inverse(IntegerMatrix{{2, 0}, {0, 1}}));
}

TEST_CASE("box enumeration", "[exactlin][box]") {
  using P = BoxRange::Point;
  std::vector<P> got(enumerate_box(1, 1).begin(), enumerate_box(1, 1).end());
  CHECK(got == std::vector<P>{{-1}, {0}, {1}});

  std::set<P> pts;
  for (const auto& p : enumerate_box(2, 1)) pts.insert(p);
  CHECK(pts.size() == 9);

  std::vector<P> origin;
  for (const auto& p : enumerate_box(2, 0)) origin.push_back(p);
  CHECK(origin == std::vector<P>{{0, 0}});

  std::size_t n = 0;
  for (const auto& p : enumerate_box(3, 2)) {
    ++n;
    for (auto x : p) CHECK(std::abs(x) <= 2);
  }
  CHECK(n == 125);
  CHECK(enumerate_box(0, 5).size() == 1);

  CHECK_THROWS_AS(enumerate_box(8, 10), BudgetExceeded);  // 21^8 > 10^7
  CHECK_THROWS_AS(enumerate_box(2, 5, 100), BudgetExceeded);
  CHECK_NOTHROW(enumerate_box(2, 5, 121));
  CHECK_THROWS_AS(enumerate_box(1, -1), InputError);
}
