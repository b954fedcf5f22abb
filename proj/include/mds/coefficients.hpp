#pragma once

/**
 * @file coefficients.hpp
 * @brief Multiplicative coefficient families and the product coefficient
 * a(n) = prod_j lambda_j(n_j).
 *
 * A family is only ever defined on prime powers and extended
 * multiplicatively, so multiplicativity holds by construction. Supported
 * kinds: trivial (zeta), a Dirichlet character mod a prime, normalized GL(2)
 * Hecke eigenvalues given at primes, the normalized Ramanujan tau function,
 * and an explicit prime-power table.
 */

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "mds/arith.hpp"

namespace mds {

/// lambda(p^e) from lambda(p) via lambda(p^{e+1}) = lambda(p) lambda(p^e) - lambda(p^{e-1}).
inline Complex hecke_prime_power(Complex lambda_p, int e) {
  if (e < 0) throw Error(ErrorKind::InvalidArgument, "hecke_prime_power: negative exponent");
  std::complex<long double> prev = 1.0L, cur = {lambda_p.real(), lambda_p.imag()};
  if (e == 0) return 1.0;
  const std::complex<long double> lp = cur;
  for (int k = 1; k < e; ++k) {
    auto next = lp * cur - prev;
    prev = cur;
    cur = next;
  }
  return {static_cast<double>(cur.real()), static_cast<double>(cur.imag())};
}

inline constexpr i64 kMaxTauTable = 100'000;

/**
 * tau(n) for 1 <= n <= N, read off q * prod_{k>=1} (1 - q^k)^24.
 *
 * The product prod (1 - q^k) is expanded exactly by the pentagonal number
 * series (coefficients in {0, +1, -1}) and raised to the 24th power by 24
 * sparse multiplications. Index 0 of the result is unused.
 */
inline std::vector<i128> ramanujan_tau_table(i64 N) {
  if (N < 1 || N > kMaxTauTable)
    throw Error(ErrorKind::InvalidArgument,
                "ramanujan_tau_table: N must lie in [1, " + std::to_string(kMaxTauTable) + "]");
  const i64 deg = N - 1;  // coefficient of q^d in the eta power is tau(d + 1)
  std::vector<std::pair<i64, int>> pentagonal;
  pentagonal.push_back({0, 1});
  for (i64 j = 1;; ++j) {
    i64 e1 = j * (3 * j - 1) / 2, e2 = j * (3 * j + 1) / 2;
    if (e1 > deg) break;
    int sign = (j % 2 == 0) ? 1 : -1;
    pentagonal.push_back({e1, sign});
    if (e2 <= deg) pentagonal.push_back({e2, sign});
  }
  std::vector<i128> f(static_cast<std::size_t>(deg) + 1, 0), g(f.size());
  f[0] = 1;
  for (int power = 0; power < 24; ++power) {
    std::fill(g.begin(), g.end(), i128{0});
    for (auto [e, sign] : pentagonal) {
      if (sign > 0)
        for (i64 d = e; d <= deg; ++d) g[d] += f[d - e];
      else
        for (i64 d = e; d <= deg; ++d) g[d] -= f[d - e];
    }
    f.swap(g);
  }
  std::vector<i128> tau(static_cast<std::size_t>(N) + 1, 0);
  for (i64 n = 1; n <= N; ++n) tau[n] = f[n - 1];
  return tau;
}

struct TrivialKind {};

struct CharacterKind {
  std::shared_ptr<const CharacterTable> table;
  i64 index;
};

struct HeckeKind {
  std::map<i64, Complex> lambda_p;
};

struct TauKind {
  std::shared_ptr<const std::vector<i128>> tau;
};

struct TableKind {
  std::map<std::pair<i64, int>, Complex> values;  // (p, e) -> lambda(p^e)
};

class CoefficientFamily {
 public:
  using Kind = std::variant<TrivialKind, CharacterKind, HeckeKind, TauKind, TableKind>;

  static CoefficientFamily trivial() { return CoefficientFamily(TrivialKind{}); }

  static CoefficientFamily character(i64 q, i64 k) {
    return character(std::make_shared<const CharacterTable>(q), k);
  }
  static CoefficientFamily character(std::shared_ptr<const CharacterTable> table, i64 k) {
    k = floor_mod(k, table->order());
    return CoefficientFamily(CharacterKind{std::move(table), k});
  }

  static CoefficientFamily hecke_gl2(std::map<i64, Complex> lambda_p) {
    for (const auto& [p, _] : lambda_p)
      if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "hecke_gl2: key " + std::to_string(p) + " is not prime");
    return CoefficientFamily(HeckeKind{std::move(lambda_p)});
  }

  /// Normalized tau(n) / n^{11/2}; the table covers n <= cap and primes beyond
  /// it are missing.
  static CoefficientFamily tau(i64 cap) {
    return tau(std::make_shared<const std::vector<i128>>(ramanujan_tau_table(cap)));
  }
  static CoefficientFamily tau(std::shared_ptr<const std::vector<i128>> table) {
    return CoefficientFamily(TauKind{std::move(table)});
  }

  static CoefficientFamily table(std::map<std::pair<i64, int>, Complex> values) {
    for (const auto& [key, _] : values) {
      if (!is_prime(key.first) || key.second < 1)
        throw Error(ErrorKind::InvalidArgument, "table family: keys must be prime powers p^e with e >= 1");
    }
    return CoefficientFamily(TableKind{std::move(values)});
  }

  const Kind& kind() const { return kind_; }
  bool is_trivial() const { return std::holds_alternative<TrivialKind>(kind_); }

  /// True when every value is a nonnegative real (trivial kind only).
  bool nonnegative() const { return is_trivial(); }

  Complex prime_power(i64 p, int e) const {
    if (e == 0 || is_trivial()) return 1.0;
    const u64 key = (static_cast<u64>(p) << 8) | static_cast<u64>(e);
    {
      std::lock_guard lock(memo_->mutex);
      if (auto it = memo_->values.find(key); it != memo_->values.end()) return it->second;
    }
    Complex v = compute(p, e);
    std::lock_guard lock(memo_->mutex);
    memo_->values.emplace(key, v);
    return v;
  }

  Complex operator()(const Factorization& f) const {
    if (is_trivial()) return 1.0;
    std::complex<long double> r = 1.0L;
    for (const auto& pe : f) {
      Complex v = prime_power(pe.prime, pe.exponent);
      r *= std::complex<long double>(v.real(), v.imag());
    }
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
  }

  Complex operator()(i64 n) const {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "coefficient family evaluated at n < 1");
    if (is_trivial()) return 1.0;
    if (const auto* c = std::get_if<CharacterKind>(&kind_)) return (*c->table)(c->index, n);
    return (*this)(factorize(n));
  }

 private:
  struct Memo {
    std::mutex mutex;
    std::unordered_map<u64, Complex> values;
  };

  explicit CoefficientFamily(Kind kind) : kind_(std::move(kind)), memo_(std::make_shared<Memo>()) {}

  Complex compute(i64 p, int e) const {
    return std::visit(
        [&](const auto& k) -> Complex {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, TrivialKind>) {
            return 1.0;
          } else if constexpr (std::is_same_v<K, CharacterKind>) {
            auto idx = k.table->root_index(k.index, p);
            if (!idx) return 0.0;
            return k.table->root(*idx * e);
          } else if constexpr (std::is_same_v<K, HeckeKind>) {
            auto it = k.lambda_p.find(p);
            if (it == k.lambda_p.end())
              throw Error(ErrorKind::MissingCoefficient, "hecke_gl2: no lambda(p) given for p = " + std::to_string(p));
            return hecke_prime_power(it->second, e);
          } else if constexpr (std::is_same_v<K, TauKind>) {
            const auto& t = *k.tau;
            const i64 cap = static_cast<i64>(t.size()) - 1;
            if (p > cap)
              throw Error(ErrorKind::MissingCoefficient,
                          "tau: prime " + std::to_string(p) + " beyond the table cap " + std::to_string(cap));
            i64 pe = saturating_pow(p, e, cap);
            if (pe <= cap)
              return static_cast<double>(static_cast<long double>(t[pe]) /
                                         std::pow(static_cast<long double>(p), 5.5L * e));
            long double lp = static_cast<long double>(t[p]) / std::pow(static_cast<long double>(p), 5.5L);
            return hecke_prime_power(static_cast<double>(lp), e);
          } else {
            auto it = k.values.find({p, e});
            if (it == k.values.end())
              throw Error(ErrorKind::MissingCoefficient,
                          "table: missing value for " + std::to_string(p) + "^" + std::to_string(e));
            return it->second;
          }
        },
        kind_);
  }

  Kind kind_;
  std::shared_ptr<Memo> memo_;
};

using CoefficientTuple = std::vector<CoefficientFamily>;

inline Complex eval_family(const CoefficientFamily& f, i64 n) { return f(n); }

inline CoefficientTuple trivial_tuple(std::size_t t) { return CoefficientTuple(t, CoefficientFamily::trivial()); }

/// prod_j lambda_j(n_j).
inline Complex eval_product_coefficient(const CoefficientTuple& c, std::span<const i64> n) {
  if (c.size() != n.size())
    throw Error(ErrorKind::InvalidArgument, "eval_product_coefficient: tuple length " + std::to_string(c.size()) +
                                                " does not match point length " + std::to_string(n.size()));
  std::complex<long double> r = 1.0L;
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (c[j].is_trivial()) continue;
    Complex v = c[j](n[j]);
    r *= std::complex<long double>(v.real(), v.imag());
  }
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

}  // namespace mds
