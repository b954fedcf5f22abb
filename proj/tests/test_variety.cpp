#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "mds/variety.hpp"
#include "oracles.hpp"

using namespace mds;

namespace {

using Set = std::vector<Exponents>;

LaurentMonomialSystem diagonal() { return LaurentMonomialSystem(2, {{1, -1}}, {1}, {1}); }
LaurentMonomialSystem product3() { return LaurentMonomialSystem(3, {{1, 1, -1}}, {1}, {1}); }

std::vector<Exponents> sorted(std::vector<Exponents> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("local_solutions examples", "[variety][local]") {
  for (i64 p : {2, 3, 97}) CHECK(local_solutions(diagonal(), p, 3).exponents == Set{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(sorted(local_solutions(product3(), 5, 2).exponents) ==
        sorted({{0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {2, 0, 2}, {0, 2, 2}, {1, 1, 2}}));
  LaurentMonomialSystem sq(1, {{2}}, {1}, {4});
  CHECK(local_solutions(sq, 2, 3).exponents == Set{{1}});
  CHECK(local_solutions(sq, 3, 3).exponents == Set{{0}});
  CHECK_THROWS_AS(local_solutions(sq, 4, 3), Error);
  CHECK_THROWS_AS(local_solutions(sq, 2, 65), Error);
}

TEST_CASE("local solutions match the brute-force filter", "[variety][local][property]") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    auto S = oracle::random_system(rng, {});
    for (i64 p : {2, 3, 5, 7}) {
      const int B = S.t() <= 3 ? 5 : 3;
      REQUIRE(local_solutions(S, p, B).exponents == oracle::brute_local(S, p, B));
    }
  }
}

TEST_CASE("enumerate_box examples", "[variety][box]") {
  CHECK(enumerate_box(parse_constraints("x1 + x2 - 5", 2), 5) == std::vector<Point>{{1, 4}, {2, 3}, {3, 2}, {4, 1}});
  CHECK(enumerate_box(diagonal(), 4) == std::vector<Point>{{1, 1}, {2, 2}, {3, 3}, {4, 4}});
  auto pts = enumerate_box(product3(), 4);
  CHECK(pts.size() == 8);
  for (const auto& p : pts) CHECK(p[0] * p[1] == p[2]);
  CHECK(enumerate_box(LaurentMonomialSystem(2, {{0, 0}}, {2}, {3}), 10).empty());
  CHECK(enumerate_box(LaurentMonomialSystem(1, {{1}}, {1}, {1009}), 1000).empty());
  CHECK(enumerate_box(LaurentMonomialSystem(1, {{1}}, {1}, {997}), 1000) == std::vector<Point>{{997}});
  CHECK(enumerate_box(LaurentMonomialSystem(2, {{1, -1}}, {7919}, {7919}), 3).size() == 3);
  CHECK(enumerate_box(LaurentMonomialSystem(1, {{1}}, {2 * 7919}, {7919 * 4}), 10) == std::vector<Point>{{2}});
}

TEST_CASE("box enumeration agrees with scan and exact rational evaluation", "[variety][box][property]") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    auto S = oracle::random_system(rng, {});
    const i64 N = S.t() <= 3 ? 18 : 9;
    auto dfs = enumerate_box(S, N);
    REQUIRE(dfs == scan_box(S, N));
    REQUIRE(dfs == oracle::rational_box(S, N));
  }
}

TEST_CASE("valuation membership equals rational evaluation on every box point", "[variety][property]") {
  std::mt19937_64 rng(13);
  oracle::RandomSystemSpec spec{1, 3, 1, 3, 3, 6};
  for (int rep = 0; rep < 30; ++rep) {
    auto S = oracle::random_system(rng, spec);
    std::vector<i64> x(S.t(), 1);
    while (true) {
      REQUIRE(contains(S, std::span<const i64>(x)) == oracle::rational_member(S, x));
      std::size_t j = S.t();
      while (j > 0) {
        if (++x[j - 1] <= 30) break;
        x[j - 1] = 1;
        --j;
      }
      if (j == 0) break;
    }
  }
}

TEST_CASE("recombine examples", "[variety][recombine]") {
  auto x = make_point({4, 1});
  auto y = make_point({2, 3});
  auto z = recombine(x, y, {{2, Source::X}, {3, Source::Y}});
  CHECK(z.coords == Point{4, 3});
  CHECK_FALSE(contains(parse_constraints("x1 + x2 - 5", 2), z));
  CHECK(recombine(x, y, {{2, Source::X}, {3, Source::X}}).coords == x.coords);
  CHECK(recombine(x, y, {{2, Source::Y}, {3, Source::Y}}).coords == y.coords);
  auto w = make_point({12, 35});
  CHECK(recombine(w, w, {{2, Source::Y}, {3, Source::X}, {5, Source::Y}, {7, Source::X}}).coords == w.coords);
  CHECK_THROWS_AS(recombine(x, y, {{2, Source::X}}), Error);
}

TEST_CASE("recombined valuations come from the chosen source", "[variety][recombine][property]") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<i64> d(1, 5000);
  std::bernoulli_distribution coin(0.5);
  for (int rep = 0; rep < 500; ++rep) {
    auto x = make_point({d(rng), d(rng), d(rng)});
    auto y = make_point({d(rng), d(rng), d(rng)});
    PrimeChoice choice;
    std::set<i64> primes;
    for (const auto& pt : {x, y})
      for (i64 p : prime_support(pt)) primes.insert(p);
    for (i64 p : primes) choice[p] = coin(rng) ? Source::X : Source::Y;
    auto z = recombine(x, y, choice);
    for (i64 p : primes)
      for (std::size_t j = 0; j < 3; ++j) {
        const auto& src = choice[p] == Source::X ? x : y;
        REQUIRE(valuation(p, z.coords[j]) == valuation(p, src.coords[j]));
      }
    for (std::size_t j = 0; j < 3; ++j)
      for (const auto& pe : factorize(z.coords[j])) REQUIRE(primes.count(pe.prime));
  }
}

TEST_CASE("check_property_S examples", "[variety][property-s]") {
  auto V = parse_constraints("x1 + x2 - 5", 2);
  auto r = check_property_S(V, 5);
  REQUIRE_FALSE(r.holds());
  const auto& w = *r.witness;
  CHECK(contains(V, w.x));
  CHECK(contains(V, w.y));
  CHECK_FALSE(contains(V, w.point));
  CHECK(recombine(w.x, w.y, w.choice) == w.point);

  CHECK(check_property_S(product3(), 30).holds());
  CHECK(check_property_S(parse_constraints("x1 - x2", 2), 20).holds());
  CHECK(check_property_S(diagonal(), 30).holds());
}

TEST_CASE("non-monomial varieties can fail closure", "[variety][property-s]") {
  auto r = check_property_S(parse_constraints("x1^2 + x2^2 - x3^2", 3), 30);
  REQUIRE_FALSE(r.holds());
  CHECK_FALSE(contains(parse_constraints("x1^2 + x2^2 - x3^2", 3), r.witness->point));
}

TEST_CASE("monomial systems have no recombination counterexample", "[variety][property-s][property]") {
  std::mt19937_64 rng(2024);
  oracle::RandomSystemSpec spec{1, 3, 1, 2, 3, 6};
  int tested = 0;
  while (tested < 20) {
    auto S = oracle::random_system(rng, spec);
    if (enumerate_box(S, 20).size() > 300) continue;
    ++tested;
    REQUIRE(check_property_S(S, 20).holds());
  }
}

TEST_CASE("twist primes beyond the prime bound", "[variety]") {
  LaurentMonomialSystem S(2, {{1, -1}}, {1}, {101});
  try {
    cartesian_check(S, 30, 30, 5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TwistPrimeBeyondBound);
    CHECK(std::string(e.what()).find("101") != std::string::npos);
  }
}

TEST_CASE("cartesian_check examples", "[variety][cartesian]") {
  auto c1 = cartesian_check(diagonal(), 30, 30, 5);
  CHECK(c1.equal);
  CHECK(c1.box_count == 30);
  auto c2 = cartesian_check(product3(), 36, 7, 3);
  CHECK(c2.equal);
  CHECK(c2.box_count > 0);
  auto c3 = cartesian_check(LaurentMonomialSystem(1, {{0}}, {2}, {3}), 30, 30, 5);
  CHECK(c3.equal);
  CHECK(c3.box_count == 0);
  CHECK(c3.product_count == 0);
}

TEST_CASE("cartesian decomposition holds on random systems", "[variety][cartesian][property]") {
  std::mt19937_64 rng(6);
  oracle::RandomSystemSpec spec{1, 3, 1, 2, 3, 6};
  for (int rep = 0; rep < 60; ++rep) {
    auto S = oracle::random_system(rng, spec);
    auto c = cartesian_check(S, 24, 7, 3);
    INFO("system rows " << S.m() << " vars " << S.t());
    REQUIRE(c.equal);
  }
}
