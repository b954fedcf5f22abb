#pragma once

/**
 * @file variety.hpp
 * @brief Integer points on varieties: box enumeration, the per-prime
 * recombination property, and per-prime local solution sets.
 *
 * Two kinds of variety are supported. A PolynomialVariety is a parsed system
 * of integer polynomial constraints, enumerated by brute force over the box.
 * A LaurentMonomialSystem is handled through valuations: n lies on
 * omega_i prod_j n_j^{a_ij} = omega'_i iff for every prime p
 *
 *     sum_j a_ij v_p(n_j) = v_p(omega'_i) - v_p(omega_i)      for all i,
 *
 * so its solution set is the Cartesian product over primes of the local sets
 * V_p of admissible exponent columns. enumerate_box builds box points prime by
 * prime from these local sets; scan_box is the brute-force counterpart.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mds/arith.hpp"
#include "mds/expr.hpp"
#include "mds/system.hpp"

namespace mds {

using Point = std::vector<i64>;
using Exponents = std::vector<int>;

class PolynomialVariety {
 public:
  PolynomialVariety() = default;
  PolynomialVariety(std::size_t t, std::vector<ExprPtr> constraints, std::vector<std::string> sources)
      : t_(t), constraints_(std::move(constraints)), sources_(std::move(sources)) {}

  std::size_t t() const { return t_; }
  std::size_t m() const { return constraints_.size(); }
  const std::vector<ExprPtr>& constraints() const { return constraints_; }
  const std::vector<std::string>& sources() const { return sources_; }

 private:
  std::size_t t_ = 0;
  std::vector<ExprPtr> constraints_;
  std::vector<std::string> sources_;
};

inline PolynomialVariety parse_constraints(std::string_view text, std::size_t t) {
  std::vector<std::string> sources;
  auto constraints = detail::Parser(text, t).parse_all(sources);
  return PolynomialVariety(t, std::move(constraints), std::move(sources));
}

/// Coordinates together with their factorizations.
struct IntegerPoint {
  Point coords;
  std::vector<Factorization> factors;
  friend bool operator==(const IntegerPoint& a, const IntegerPoint& b) { return a.coords == b.coords; }
};

inline IntegerPoint make_point(Point coords) {
  IntegerPoint x;
  for (i64 c : coords) {
    if (c < 1) throw Error(ErrorKind::InvalidArgument, "integer points must have positive coordinates");
    x.factors.push_back(factorize(c));
  }
  x.coords = std::move(coords);
  return x;
}

inline std::vector<i64> prime_support(const IntegerPoint& x) {
  std::vector<i64> ps;
  for (const auto& f : x.factors)
    for (const auto& pe : f) ps.push_back(pe.prime);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

inline int exponent_of(const Factorization& f, i64 p) {
  for (const auto& pe : f)
    if (pe.prime == p) return pe.exponent;
  return 0;
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

inline bool contains(const PolynomialVariety& V, std::span<const i64> x) {
  if (x.size() != V.t()) throw Error(ErrorKind::InvalidArgument, "point dimension does not match the variety");
  return std::all_of(V.constraints().begin(), V.constraints().end(),
                     [&](const ExprPtr& e) { return expr_is_zero(*e, x); });
}

inline bool contains(const PolynomialVariety& V, const IntegerPoint& x) { return contains(V, std::span<const i64>(x.coords)); }

/// Valuation test: at every prime of the point the exponent identity holds, and
/// the parts of omega_i, omega'_i coprime to the point agree.
inline bool contains(const LaurentMonomialSystem& S, const IntegerPoint& x) {
  if (x.coords.size() != S.t()) throw Error(ErrorKind::InvalidArgument, "point dimension does not match the system");
  const auto primes = prime_support(x);
  for (std::size_t i = 0; i < S.m(); ++i) {
    i64 w = S.omega()[i], wp = S.omega_prime()[i];
    for (i64 p : primes) {
      i64 lhs = 0;
      for (std::size_t j = 0; j < S.t(); ++j) lhs += S.a(i, j) * exponent_of(x.factors[j], p);
      int vw = 0, vwp = 0;
      while (w % p == 0) w /= p, ++vw;
      while (wp % p == 0) wp /= p, ++vwp;
      if (lhs != vwp - vw) return false;
    }
    if (w != wp) return false;
  }
  return true;
}

inline bool contains(const LaurentMonomialSystem& S, std::span<const i64> x) {
  return contains(S, make_point(Point(x.begin(), x.end())));
}

// ---------------------------------------------------------------------------
// Local solution sets
// ---------------------------------------------------------------------------

struct LocalSolutionSet {
  i64 prime = 0;
  int bound = 0;
  std::vector<Exponents> exponents;  // lexicographic
};

inline constexpr int kMaxLocalExponent = 64;

/// All alpha in [0, B]^t with sum_j A[i][j] alpha_j = rhs[i] for every i, lexicographic.
inline std::vector<Exponents> solve_local(const Matrix& A, std::size_t t, const std::vector<i64>& rhs, int B) {
  const std::size_t m = A.size();
  // reach[i][j] = range of sum_{k >= j} A[i][k] alpha_k over alpha in [0,B]
  std::vector<std::vector<i64>> lo(m, std::vector<i64>(t + 1, 0)), hi(m, std::vector<i64>(t + 1, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = t; j-- > 0;) {
      i64 v = A[i][j] * B;
      lo[i][j] = lo[i][j + 1] + std::min<i64>(0, v);
      hi[i][j] = hi[i][j + 1] + std::max<i64>(0, v);
    }
  std::vector<Exponents> out;
  Exponents alpha(t, 0);
  std::vector<i64> partial(m, 0);
  auto feasible = [&](std::size_t j) {
    for (std::size_t i = 0; i < m; ++i) {
      i64 need = rhs[i] - partial[i];
      if (need < lo[i][j] || need > hi[i][j]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (!feasible(j)) return;
    if (j == t) {
      out.push_back(alpha);
      return;
    }
    for (int e = 0; e <= B; ++e) {
      alpha[j] = e;
      for (std::size_t i = 0; i < m; ++i) partial[i] += A[i][j] * e;
      self(self, j + 1);
      for (std::size_t i = 0; i < m; ++i) partial[i] -= A[i][j] * e;
    }
    alpha[j] = 0;
  };
  rec(rec, 0);
  return out;
}

/// rhs_i = v_p(omega'_i) - v_p(omega_i).
inline std::vector<i64> local_rhs(const LaurentMonomialSystem& S, i64 p) {
  std::vector<i64> rhs(S.m());
  for (std::size_t i = 0; i < S.m(); ++i)
    rhs[i] = valuation_unchecked(p, S.omega_prime()[i]) - valuation_unchecked(p, S.omega()[i]);
  return rhs;
}

inline LocalSolutionSet local_solutions(const LaurentMonomialSystem& S, i64 p, int B) {
  if (B < 0 || B > kMaxLocalExponent)
    throw Error(ErrorKind::InvalidArgument, "local_solutions: exponent bound must lie in [0, 64]");
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "local_solutions: " + std::to_string(p) + " is not prime");
  return {p, B, solve_local(S.A(), S.t(), local_rhs(S, p), B)};
}

// ---------------------------------------------------------------------------
// Twist primes
// ---------------------------------------------------------------------------

struct TwistProfile {
  std::vector<std::pair<i64, std::vector<i64>>> special;  // primes <= bound with nonzero rhs
  bool consistent_beyond = true;  // rhs vanishes at every prime > bound
  std::optional<i64> prime_beyond;  // some prime factor of a twist above the bound
  bool any_twist_beyond = false;
};

namespace detail {

inline std::optional<i64> prime_factor_above(i64 r, i64 bound) {
  constexpr i64 kSearchLimit = 10'000'000;
  for (i64 d = bound + 1; d <= r / d && d <= bound + kSearchLimit; ++d)
    if (r % d == 0) return d;
  i64 d = bound + kSearchLimit;
  if (d > r / d) return r;  // r is prime
  return std::nullopt;
}

}  // namespace detail

inline TwistProfile twist_profile(const LaurentMonomialSystem& S, const std::vector<i64>& primes) {
  TwistProfile out;
  const i64 bound = primes.empty() ? 1 : primes.back();
  std::vector<i64> w = S.omega(), wp = S.omega_prime();
  std::set<i64> touched;
  for (auto* vec : {&w, &wp})
    for (i64& v : *vec)
      for (i64 p : primes) {
        if (v == 1) break;
        if (p > v / p) {  // v itself is prime
          if (v <= bound) {
            touched.insert(v);
            v = 1;
          }
          break;
        }
        if (v % p == 0) {
          touched.insert(p);
          while (v % p == 0) v /= p;
        }
      }
  for (i64 p : touched) {
    auto rhs = local_rhs(S, p);
    if (std::any_of(rhs.begin(), rhs.end(), [](i64 r) { return r != 0; })) out.special.emplace_back(p, std::move(rhs));
  }
  for (std::size_t i = 0; i < S.m(); ++i) {
    if (w[i] != wp[i]) out.consistent_beyond = false;
    for (i64 r : {w[i], wp[i]}) {
      if (r == 1) continue;
      out.any_twist_beyond = true;
      if (!out.prime_beyond) out.prime_beyond = detail::prime_factor_above(r, bound);
    }
  }
  return out;
}

inline void require_twists_within(const LaurentMonomialSystem& S, const TwistProfile& tp, i64 P) {
  if (!tp.any_twist_beyond) return;
  std::string which = tp.prime_beyond ? "prime " + std::to_string(*tp.prime_beyond) : "a prime factor";
  (void)S;
  throw Error(ErrorKind::TwistPrimeBeyondBound,
              "twist " + which + " of omega/omega_prime exceeds the prime bound P = " + std::to_string(P));
}

// ---------------------------------------------------------------------------
// Box enumeration
// ---------------------------------------------------------------------------

namespace detail {

inline int floor_log(i64 p, i64 N) {
  int e = 0;
  i64 v = 1;
  while (v <= N / p) v *= p, ++e;
  return e;
}

/**
 * Points of [1,N]^t on S whose coordinates are products of primes <= prime_limit
 * with exponents <= exp_bound, built from local solution sets prime by prime.
 * Primes with nonzero right-hand side must take one of their local solutions;
 * all other primes share the homogeneous set and are visited in ascending order,
 * stopping at the first prime where no nonzero column fits in the box.
 */
inline std::vector<Point> enumerate_local_products(const LaurentMonomialSystem& S, i64 N, i64 prime_limit, int exp_bound,
                                                   const TwistProfile& tp, const std::vector<i64>& primes, i64 cap) {
  const std::size_t t = S.t();
  std::vector<Point> out;
  i64 used = 0;
  const int gen_bound = std::min(exp_bound, floor_log(2, N));
  std::vector<Exponents> generic = solve_local(S.A(), t, std::vector<i64>(S.m(), 0), gen_bound);
  generic.erase(generic.begin());  // the zero column
  std::set<i64> special_primes;
  for (const auto& [p, _] : tp.special) special_primes.insert(p);

  struct Special {
    i64 p;
    std::vector<Exponents> sets;
  };
  std::vector<Special> specials;
  for (const auto& [p, rhs] : tp.special) {
    if (p > prime_limit) return out;
    specials.push_back({p, solve_local(S.A(), t, rhs, std::min(exp_bound, floor_log(p, N)))});
    if (specials.back().sets.empty()) return out;
  }

  Point coords(t, 1);
  std::vector<i64> ppow;
  auto fits = [&](const Exponents& alpha, std::vector<i64>& pw) {
    for (std::size_t j = 0; j < t; ++j) {
      if (alpha[j] == 0) continue;
      if (static_cast<std::size_t>(alpha[j]) >= pw.size()) return false;
      if (pw[alpha[j]] > N / coords[j]) return false;
    }
    return true;
  };
  auto powers = [&](i64 p) {
    std::vector<i64> pw{1};
    while (pw.back() <= N / p) pw.push_back(pw.back() * p);
    return pw;
  };
  auto scale = [&](i64 sign, const Exponents& alpha, const std::vector<i64>& pw) {
    for (std::size_t j = 0; j < t; ++j)
      if (alpha[j]) coords[j] = sign > 0 ? coords[j] * pw[alpha[j]] : coords[j] / pw[alpha[j]];
  };

  auto generic_rec = [&](auto&& self, std::size_t start) -> void {
    charge_work(used, 1, cap, "enumerate_box");
    out.push_back(coords);
    for (std::size_t idx = start; idx < primes.size(); ++idx) {
      const i64 p = primes[idx];
      if (p > prime_limit) break;
      if (special_primes.count(p)) continue;
      auto pw = powers(p);
      bool any = false;
      for (const auto& alpha : generic) {
        if (!fits(alpha, pw)) continue;
        any = true;
        scale(1, alpha, pw);
        self(self, idx + 1);
        scale(-1, alpha, pw);
      }
      if (!any) break;
    }
  };

  auto special_rec = [&](auto&& self, std::size_t k) -> void {
    if (k == specials.size()) {
      generic_rec(generic_rec, 0);
      return;
    }
    auto pw = powers(specials[k].p);
    for (const auto& alpha : specials[k].sets) {
      if (!fits(alpha, pw)) continue;
      scale(1, alpha, pw);
      self(self, k + 1);
      scale(-1, alpha, pw);
    }
  };
  special_rec(special_rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// All points of [1,N]^t on the monomial system, lexicographic.
inline std::vector<Point> enumerate_box(const LaurentMonomialSystem& S, i64 N, i64 cap = work_cap()) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "enumerate_box: N must be >= 1");
  if (S.t() == 0) return S.empty_variety() ? std::vector<Point>{} : std::vector<Point>{Point{}};
  const auto primes = primes_up_to(N);
  const auto tp = twist_profile(S, primes);
  if (!tp.consistent_beyond) return {};
  return detail::enumerate_local_products(S, N, N, detail::floor_log(2, N), tp, primes, cap);
}

namespace detail {

/// Calls f(point) for every point of [1,N]^t in lexicographic order.
template <class F>
void for_each_box_point(std::size_t t, i64 N, i64 cap, const char* what, F&& f) {
  i64 total = 1;
  for (std::size_t j = 0; j < t; ++j) {
    if (total > cap / N) throw Error(ErrorKind::WorkCapExceeded, std::string(what) + ": N^t exceeds the work cap");
    total *= N;
  }
  Point x(t, 1);
  for (i64 k = 0; k < total; ++k) {
    f(std::as_const(x));
    for (std::size_t j = t; j-- > 0;) {
      if (++x[j] <= N) break;
      x[j] = 1;
    }
  }
}

}  // namespace detail

/// Brute-force box scan of a monomial system with the valuation membership test.
inline std::vector<Point> scan_box(const LaurentMonomialSystem& S, i64 N, i64 cap = work_cap()) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "scan_box: N must be >= 1");
  std::vector<Factorization> table(static_cast<std::size_t>(N) + 1);
  for (i64 n = 1; n <= N; ++n) table[n] = factorize(n);
  std::vector<Point> out;
  IntegerPoint x;
  detail::for_each_box_point(S.t(), N, cap, "scan_box", [&](const Point& p) {
    x.coords = p;
    x.factors.clear();
    for (i64 c : p) x.factors.push_back(table[c]);
    if (contains(S, x)) out.push_back(p);
  });
  return out;
}

inline std::vector<Point> enumerate_box(const PolynomialVariety& V, i64 N, i64 cap = work_cap()) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "enumerate_box: N must be >= 1");
  std::vector<Point> out;
  detail::for_each_box_point(V.t(), N, cap, "enumerate_box", [&](const Point& p) {
    if (contains(V, std::span<const i64>(p))) out.push_back(p);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Recombination and the per-prime closure property
// ---------------------------------------------------------------------------

enum class Source { X, Y };

using PrimeChoice = std::map<i64, Source>;

/// The point whose exponent column at each prime p comes from x or y per choice.
inline IntegerPoint recombine(const IntegerPoint& x, const IntegerPoint& y, const PrimeChoice& choice) {
  if (x.coords.size() != y.coords.size()) throw Error(ErrorKind::InvalidArgument, "recombine: dimension mismatch");
  auto primes = prime_support(x);
  auto py = prime_support(y);
  primes.insert(primes.end(), py.begin(), py.end());
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  const std::size_t t = x.coords.size();
  IntegerPoint z;
  z.coords.assign(t, 1);
  z.factors.assign(t, {});
  for (i64 p : primes) {
    auto it = choice.find(p);
    if (it == choice.end())
      throw Error(ErrorKind::InvalidArgument, "recombine: no choice given for prime " + std::to_string(p));
    const IntegerPoint& src = it->second == Source::X ? x : y;
    for (std::size_t j = 0; j < t; ++j) {
      int e = exponent_of(src.factors[j], p);
      if (e == 0) continue;
      z.coords[j] = checked_mul(z.coords[j], checked_pow(p, e, "recombined coordinate"), "recombined coordinate");
      z.factors[j].push_back({p, e});
    }
  }
  return z;
}

struct PropertySWitness {
  IntegerPoint x, y;
  PrimeChoice choice;
  IntegerPoint point;
};

struct PropertySResult {
  std::optional<PropertySWitness> witness;  // empty: no counterexample found
  std::size_t box_points = 0;
  i64 recombinations_checked = 0;
  bool holds() const { return !witness.has_value(); }
};

template <class V>
concept BoxVariety = requires(const V& v, const IntegerPoint& x, i64 N) {
  { enumerate_box(v, N) } -> std::same_as<std::vector<Point>>;
  { contains(v, x) } -> std::same_as<bool>;
};

/**
 * Pairwise check of per-prime recombination on box solutions. For each
 * unordered pair of distinct solutions, every nontrivial choice over the
 * primes where their exponent columns differ is tested by direct membership
 * of the recombined point, which may lie outside the box.
 */
template <BoxVariety V>
PropertySResult check_property_S(const V& variety, i64 N, i64 cap = work_cap()) {
  PropertySResult result;
  std::vector<IntegerPoint> pts;
  for (auto& p : enumerate_box(variety, N, cap)) pts.push_back(make_point(std::move(p)));
  result.box_points = pts.size();
  i64 used = 0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const auto& x = pts[a];
      const auto& y = pts[b];
      auto primes = prime_support(x);
      auto py = prime_support(y);
      primes.insert(primes.end(), py.begin(), py.end());
      std::sort(primes.begin(), primes.end());
      primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
      std::vector<i64> differing;
      for (i64 p : primes) {
        for (std::size_t j = 0; j < x.coords.size(); ++j) {
          if (exponent_of(x.factors[j], p) != exponent_of(y.factors[j], p)) {
            differing.push_back(p);
            break;
          }
        }
      }
      if (differing.size() < 2) continue;  // only the trivial choices exist
      if (differing.size() > 40) throw Error(ErrorKind::WorkCapExceeded, "check_property_S: too many differing primes");
      const u64 masks = u64{1} << differing.size();
      charge_work(used, static_cast<i64>(masks - 2), cap, "check_property_S");
      PrimeChoice choice;
      for (i64 p : primes) choice[p] = Source::X;
      for (u64 mask = 1; mask + 1 < masks; ++mask) {
        for (std::size_t k = 0; k < differing.size(); ++k)
          choice[differing[k]] = (mask >> k) & 1 ? Source::Y : Source::X;
        IntegerPoint z = recombine(x, y, choice);
        ++result.recombinations_checked;
        if (!contains(variety, z)) {
          result.witness = PropertySWitness{x, y, choice, std::move(z)};
          return result;
        }
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Cartesian decomposition check
// ---------------------------------------------------------------------------

struct CartesianCheck {
  bool equal = true;
  std::optional<Point> mismatch;
  bool mismatch_in_box_only = false;  // true: box solution missing from the local products
  std::size_t box_count = 0, product_count = 0;
};

/**
 * Compares the box solutions that are P-smooth with exponents <= B (found by
 * brute-force scan) against every product of local solutions at primes <= P
 * that lands in the box.
 */
inline CartesianCheck cartesian_check(const LaurentMonomialSystem& S, i64 N, i64 P, int B, i64 cap = work_cap()) {
  if (N < 1 || P < 2 || B < 0 || B > kMaxLocalExponent)
    throw Error(ErrorKind::InvalidArgument, "cartesian_check: need N >= 1, P >= 2, 0 <= B <= 64");
  const auto primes = primes_up_to(P);
  const auto tp = twist_profile(S, primes);
  require_twists_within(S, tp, P);

  std::vector<Point> box;
  for (auto& p : scan_box(S, N, cap)) {
    bool keep = true;
    for (i64 c : p) {
      for (const auto& pe : factorize(c))
        if (pe.prime > P || pe.exponent > B) keep = false;
    }
    if (keep) box.push_back(std::move(p));
  }
  std::vector<Point> products;
  if (S.t() == 0)
    products = S.empty_variety() ? std::vector<Point>{} : std::vector<Point>{Point{}};
  else if (tp.consistent_beyond)
    products = detail::enumerate_local_products(S, N, P, B, tp, primes, cap);

  CartesianCheck out;
  out.box_count = box.size();
  out.product_count = products.size();
  std::vector<Point> only_box, only_products;
  std::set_difference(box.begin(), box.end(), products.begin(), products.end(), std::back_inserter(only_box));
  std::set_difference(products.begin(), products.end(), box.begin(), box.end(), std::back_inserter(only_products));
  if (!only_box.empty()) {
    out.equal = false;
    out.mismatch = only_box.front();
    out.mismatch_in_box_only = true;
  } else if (!only_products.empty()) {
    out.equal = false;
    out.mismatch = only_products.front();
  }
  return out;
}

}  // namespace mds
