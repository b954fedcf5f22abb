#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "mds/system.hpp"
#include "mds/variety.hpp"
#include "oracles.hpp"

using namespace mds;

namespace {

std::set<Point> box_set(const LaurentMonomialSystem& S, i64 N) {
  auto v = enumerate_box(S, N);
  return {v.begin(), v.end()};
}

std::set<Point> oracle_set(const LaurentMonomialSystem& S, i64 N) {
  auto v = oracle::rational_box(S, N);
  return {v.begin(), v.end()};
}

/// Applies ops one at a time, skipping any that would overflow a twist.
LaurentMonomialSystem apply_tolerant(LaurentMonomialSystem S, const std::vector<RowOperation>& ops,
                                     std::vector<RowOperation>* applied = nullptr) {
  for (const auto& op : ops) {
    try {
      S = apply_row_op(S, op);
      if (applied) applied->push_back(op);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::Overflow);
    }
  }
  return S;
}

}  // namespace

TEST_CASE("system validation", "[system]") {
  CHECK_THROWS_AS(LaurentMonomialSystem(2, {{1, -1}, {1}}, {1, 1}, {1, 1}), Error);
  try {
    LaurentMonomialSystem(2, {{1, -1}, {1}}, {1, 1}, {1, 1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("A[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(LaurentMonomialSystem(1, {{1}}, {0}, {1}), Error);
  CHECK_THROWS_AS(LaurentMonomialSystem(1, {{1}}, {1, 2}, {1}), Error);
  LaurentMonomialSystem z(2, {{0, 0}}, {2}, {3});
  CHECK(z.empty_variety());
  CHECK_FALSE(LaurentMonomialSystem(2, {{0, 0}}, {3}, {3}).empty_variety());
}

TEST_CASE("apply_row_op examples", "[system]") {
  const Matrix A{{1, -1, 0}, {0, 1, -1}};
  LaurentMonomialSystem S(3, A, {1, 1}, {1, 1});
  auto R = apply_row_op(S, RowOperation::add(0, 1, 1));
  CHECK(R.A() == Matrix{{1, 0, -1}, {0, 1, -1}});
  CHECK(R.omega() == std::vector<i64>{1, 1});
  CHECK(R.omega_prime() == std::vector<i64>{1, 1});

  LaurentMonomialSystem T(3, A, {1, 2}, {1, 3});
  auto U = apply_row_op(T, RowOperation::add(0, 1, 1));
  CHECK(U.omega() == std::vector<i64>{2, 2});
  CHECK(U.omega_prime() == std::vector<i64>{3, 3});

  auto V = apply_row_op(T, RowOperation::add(0, 1, -1));
  CHECK(V.A() == Matrix{{1, -2, 1}, {0, 1, -1}});
  CHECK(V.omega()[0] == 3);
  CHECK(V.omega_prime()[0] == 2);
  CHECK(oracle_set(V, 50) == oracle_set(T, 50));

  auto W = apply_row_op(T, RowOperation::swap(0, 1));
  CHECK(W.A() == Matrix{{0, 1, -1}, {1, -1, 0}});
  CHECK(W.omega() == std::vector<i64>{2, 1});

  auto X = apply_row_op(T, RowOperation::negate(1));
  CHECK(X.A()[1] == std::vector<i64>{0, -1, 1});
  CHECK(X.omega()[1] == 3);
  CHECK(X.omega_prime()[1] == 2);
}

TEST_CASE("apply_row_op rejects bad indices and overflow", "[system]") {
  LaurentMonomialSystem S(2, {{1, -1}, {0, 1}}, {1, 1 << 20}, {1, 1});
  CHECK_THROWS_AS(apply_row_op(S, RowOperation::swap(0, 0)), Error);
  CHECK_THROWS_AS(apply_row_op(S, RowOperation::add(0, 2, 1)), Error);
  CHECK_THROWS_AS(apply_row_op(S, RowOperation::negate(5)), Error);
  try {
    apply_row_op(S, RowOperation::add(0, 1, 4));
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("negate_system", "[system]") {
  auto N1 = negate_system(LaurentMonomialSystem(2, {{1, -1}}, {1}, {1}));
  CHECK(N1.A() == Matrix{{-1, 1}});
  CHECK(N1.omega() == std::vector<i64>{1});
  auto N2 = negate_system(LaurentMonomialSystem(3, {{1, 1, -1}}, {2}, {3}));
  CHECK(N2.A() == Matrix{{-1, -1, 1}});
  CHECK(N2.omega() == std::vector<i64>{3});
  CHECK(N2.omega_prime() == std::vector<i64>{2});
}

TEST_CASE("block_compose", "[system]") {
  LaurentMonomialSystem S1(2, {{1, -1}}, {1}, {1});
  LaurentMonomialSystem S2(1, {{2}}, {1}, {4});
  auto B = block_compose(S1, S2);
  CHECK(B.t() == 3);
  CHECK(B.A() == Matrix{{1, -1, 0}, {0, 0, 2}});
  CHECK(B.omega() == std::vector<i64>{1, 1});
  CHECK(B.omega_prime() == std::vector<i64>{1, 4});

  LaurentMonomialSystem empty(0, {}, {}, {});
  CHECK(block_compose(S1, empty) == S1);
  CHECK(block_compose(empty, S1) == S1);
}

TEST_CASE("permute_columns", "[system]") {
  LaurentMonomialSystem S(3, {{1, 2, -3}}, {5}, {7});
  auto P = permute_columns(S, {2, 0, 1});
  CHECK(P.A() == Matrix{{-3, 1, 2}});
  CHECK(P.omega() == S.omega());
  CHECK_THROWS_AS(permute_columns(S, {0, 0, 1}), Error);
  CHECK_THROWS_AS(permute_columns(S, {0, 1}), Error);
}

TEST_CASE("normalize examples", "[system]") {
  auto n1 = normalize(LaurentMonomialSystem(2, {{2, -2}, {1, -1}}, {1, 1}, {1, 1}));
  CHECK(n1.system.A() == Matrix{{1, -1}});
  CHECK(n1.dropped_rows == 1);
  CHECK_FALSE(n1.empty_variety);
  CHECK(apply_row_ops(LaurentMonomialSystem(2, {{2, -2}, {1, -1}}, {1, 1}, {1, 1}), n1.ops).A() ==
        Matrix{{1, -1}, {0, 0}});

  auto n2 = normalize(LaurentMonomialSystem(2, {{0, 0}}, {2}, {3}));
  CHECK(n2.empty_variety);
  CHECK(n2.system.m() == 1);

  LaurentMonomialSystem canonical(3, {{1, 0, -1}, {0, 1, -1}}, {2, 3}, {5, 7});
  auto n3 = normalize(canonical);
  CHECK(n3.ops.empty());
  CHECK(n3.system == canonical);
  CHECK(n3.dropped_rows == 0);
}

TEST_CASE("normalize is idempotent and reproducible from its log", "[system][property]") {
  std::mt19937_64 rng(21);
  int done = 0;
  while (done < 200) {
    auto S = oracle::random_system(rng, {});
    Normalization n;
    try {
      n = normalize(S);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::Overflow);
      continue;
    }
    ++done;
    auto again = normalize(n.system);
    CHECK(again.ops.empty());
    CHECK(again.system == n.system);
    auto H = apply_row_ops(S, n.ops);
    Matrix kept;
    for (std::size_t i = 0; i < H.m(); ++i)
      if (!H.row_is_zero(i) || H.omega()[i] != H.omega_prime()[i]) kept.push_back(H.A()[i]);
    CHECK(kept == n.system.A());
    CHECK(H.m() - kept.size() == n.dropped_rows);
  }
}

TEST_CASE("row operations preserve the box solution set", "[system][property]") {
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 100; ++rep) {
    auto S = oracle::random_system(rng, {});
    auto ops = oracle::random_ops(rng, S.m(), 10);
    auto T = apply_tolerant(S, ops);
    REQUIRE(box_set(S, 20) == box_set(T, 20));
  }
}

TEST_CASE("negation preserves the box solution set", "[system][property]") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    auto S = oracle::random_system(rng, {});
    REQUIRE(box_set(S, 25) == box_set(negate_system(S), 25));
  }
}

TEST_CASE("normalize preserves the box solution set", "[system][property]") {
  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 100) {
    auto S = oracle::random_system(rng, {});
    Normalization n;
    try {
      n = normalize(S);
    } catch (const Error&) {
      continue;
    }
    ++done;
    auto before = oracle_set(S, 12);
    if (n.empty_variety) {
      REQUIRE(before.empty());
      REQUIRE(box_set(n.system, 12).empty());
    } else {
      REQUIRE(before == box_set(n.system, 12));
    }
  }
}

TEST_CASE("block_compose is the Cartesian product of solution sets", "[system][property]") {
  std::mt19937_64 rng(55);
  oracle::RandomSystemSpec spec{1, 2, 1, 2, 3, 6};
  for (int rep = 0; rep < 50; ++rep) {
    auto S1 = oracle::random_system(rng, spec);
    auto S2 = oracle::random_system(rng, spec);
    const i64 N = 12;
    auto a = oracle_set(S1, N), b = oracle_set(S2, N);
    std::set<Point> prod;
    for (const auto& x : a)
      for (const auto& y : b) {
        Point z = x;
        z.insert(z.end(), y.begin(), y.end());
        prod.insert(z);
      }
    REQUIRE(box_set(block_compose(S1, S2), N) == prod);
  }
}

TEST_CASE("hermite_normal_form and lattice membership", "[system]") {
  auto H = hermite_normal_form({{2, 4, 6}, {1, 1, 1}}, 3);
  CHECK(H == Matrix{{1, 1, 1}, {0, 2, 4}});
  CHECK(in_row_lattice(H, {3, 5, 7}));
  CHECK_FALSE(in_row_lattice(H, {0, 1, 2}));
  CHECK(hermite_normal_form({{1, 0}, {0, 1}}, 2) == hermite_normal_form({{1, 1}, {1, 2}}, 2));
}

TEST_CASE("support_reducible examples", "[system][support]") {
  auto r1 = support_reducible({{1, -1, 0}, {0, 1, -1}}, 10);
  CHECK(r1.reducible);
  CHECK(r1.basis == Matrix{{1, -1, 0}, {0, 1, -1}});

  auto r2 = support_reducible({{1, 1, -1}}, 10);
  CHECK_FALSE(r2.reducible);

  auto r3 = support_reducible({{1, 1, -1}, {0, 0, 1}}, 10);
  CHECK(r3.reducible);
  CHECK(r3.basis == Matrix{{1, 1, 0}, {0, 0, 1}});

  CHECK_THROWS_AS(support_reducible({{1, 1, -1}}, 0), Error);
  CHECK_THROWS_AS(support_reducible({{1, 1, -1}}, kMaxSupportCoeffBound + 1), Error);
}

TEST_CASE("support_reducible bases generate the row lattice", "[system][support][property]") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> ad(-2, 2);
  int reducible = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t m = 1 + rep % 2, t = 3;
    Matrix A(m, std::vector<i64>(t));
    for (auto& row : A)
      for (auto& v : row) v = ad(rng);
    auto r = support_reducible(A, 4);
    if (!r.reducible) continue;
    ++reducible;
    for (const auto& row : r.basis) {
      REQUIRE(support_size(row) <= 2);
      REQUIRE(oracle::express_in_basis(A, row, 8));
    }
    for (const auto& row : A) REQUIRE(oracle::express_in_basis(r.basis, row, 8));
  }
  CHECK(reducible > 10);
}
