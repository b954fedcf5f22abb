#pragma once

/**
 * @file arith.hpp
 * @brief Exact integer foundations: primes, factorization, p-adic valuations,
 * and Dirichlet characters modulo an odd prime.
 *
 * Characters mod q are stored as discrete logarithms with respect to a
 * primitive root g, so that chi_k(g^a) = exp(2 pi i k a / (q-1)). Products of
 * characters and character values then reduce to integer index arithmetic
 * mod q-1; complex numbers only appear when a value is finally requested.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "mds/core.hpp"

namespace mds {

struct PrimePower {
  i64 prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Ascending by prime, exponents >= 1. The factorization of 1 is empty.
using Factorization = std::vector<PrimePower>;

inline constexpr std::uint32_t kDefaultSieveBound = 10'000'000;
inline constexpr i64 kDefaultFactorCap = 1'000'000'000'000;

inline std::vector<i64> primes_up_to(i64 bound) {
  std::vector<i64> out;
  if (bound < 2) return out;
  std::vector<char> composite(static_cast<std::size_t>(bound) + 1, 0);
  for (i64 p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    if (p <= bound / p)
      for (i64 k = p * p; k <= bound; k += p) composite[k] = 1;
  }
  return out;
}

/// Least-prime-factor sieve up to a bound, trial division above it.
class Factorizer {
 public:
  explicit Factorizer(std::uint32_t sieve_bound = kDefaultSieveBound, i64 input_cap = kDefaultFactorCap)
      : bound_(std::max<std::uint32_t>(sieve_bound, 2)), cap_(input_cap), lpf_(bound_ + 1, 0) {
    for (std::uint32_t i = 2; i <= bound_; ++i) {
      if (lpf_[i] == 0) {
        lpf_[i] = i;
        primes_.push_back(i);
      }
      for (std::uint32_t p : primes_) {
        if (p > lpf_[i] || static_cast<u64>(p) * i > bound_) break;
        lpf_[static_cast<std::size_t>(p) * i] = p;
      }
    }
  }

  i64 sieve_bound() const { return bound_; }
  i64 input_cap() const { return cap_; }

  Factorization operator()(i64 n) const {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "factorize: argument must be >= 1, got " + std::to_string(n));
    if (n > cap_)
      throw Error(ErrorKind::InvalidArgument,
                  "factorize: " + std::to_string(n) + " exceeds the factorization cap " + std::to_string(cap_));
    Factorization f;
    auto push = [&f](i64 p) {
      if (!f.empty() && f.back().prime == p)
        ++f.back().exponent;
      else
        f.push_back({p, 1});
    };
    if (n > bound_) {
      for (std::uint32_t p : primes_) {
        if (static_cast<i64>(p) * p > n) break;
        while (n % p == 0) {
          push(p);
          n /= p;
        }
        if (n <= bound_) break;
      }
      if (n > bound_) {
        // n has no prime factor below sqrt(n) left, or sqrt(n) exceeds the sieve
        i64 d = primes_.empty() ? 2 : static_cast<i64>(primes_.back()) + 1;
        for (; d <= n / d; ++d) {
          while (n % d == 0) {
            push(d);
            n /= d;
          }
        }
        if (n > bound_) {
          push(n);
          n = 1;
        }
      }
    }
    while (n > 1) {
      i64 p = lpf_[n];
      push(p);
      n /= p;
    }
    return f;
  }

  bool is_prime(i64 n) const {
    if (n < 2) return false;
    if (n <= bound_) return lpf_[n] == n;
    for (std::uint32_t p : primes_) {
      if (static_cast<i64>(p) * p > n) return true;
      if (n % p == 0) return false;
    }
    for (i64 d = static_cast<i64>(primes_.back()) + 1; d <= n / d; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  std::uint32_t bound_;
  i64 cap_;
  std::vector<std::uint32_t> lpf_;
  std::vector<std::uint32_t> primes_;
};

inline const Factorizer& default_factorizer() {
  static const Factorizer instance;
  return instance;
}

inline Factorization factorize(i64 n) { return default_factorizer()(n); }

inline bool is_prime(i64 n) { return default_factorizer().is_prime(n); }

/// Largest k with p^k | x.
inline int valuation(i64 p, i64 x) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "valuation: " + std::to_string(p) + " is not prime");
  if (x < 1) throw Error(ErrorKind::InvalidArgument, "valuation: argument must be >= 1");
  int k = 0;
  while (x % p == 0) {
    x /= p;
    ++k;
  }
  return k;
}

/// Valuation without the primality check, for callers iterating over known primes.
inline int valuation_unchecked(i64 p, i64 x) {
  int k = 0;
  while (x % p == 0) {
    x /= p;
    ++k;
  }
  return k;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<i128>(a) * b % m); }

inline i64 pow_mod(i64 base, i64 e, i64 m) {
  i64 r = 1 % m;
  base %= m;
  if (base < 0) base += m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

inline i64 floor_mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline constexpr i64 kMaxCharacterModulus = 1'000'000;

/**
 * Dirichlet characters modulo an odd prime q.
 *
 * chi_k is the character sending the primitive root g to the (q-1)-th root
 * of unity zeta^k, zeta = exp(2 pi i / (q-1)). Values are exposed both as
 * root indices (exact, mod q-1) and as complex numbers.
 */
class CharacterTable {
 public:
  explicit CharacterTable(i64 q) : q_(q) {
    if (q < 3 || q % 2 == 0 || !is_prime(q))
      throw Error(ErrorKind::InvalidArgument, "character_table: modulus must be an odd prime, got " + std::to_string(q));
    if (q > kMaxCharacterModulus)
      throw Error(ErrorKind::InvalidArgument, "character_table: modulus exceeds " + std::to_string(kMaxCharacterModulus));
    const i64 order = q - 1;
    const Factorization f = factorize(order);
    for (i64 g = 2; g < q; ++g) {
      bool primitive = std::all_of(f.begin(), f.end(), [&](const PrimePower& r) {
        return pow_mod(g, order / r.prime, q) != 1;
      });
      if (primitive) {
        g_ = g;
        break;
      }
    }
    log_.assign(static_cast<std::size_t>(q), -1);
    i64 x = 1;
    for (i64 a = 0; a < order; ++a) {
      log_[x] = a;
      x = mul_mod(x, g_, q);
    }
    roots_.resize(static_cast<std::size_t>(order));
    for (i64 e = 0; e < order; ++e) roots_[e] = unit_root(e, order);
  }

  i64 modulus() const { return q_; }
  i64 generator() const { return g_; }
  i64 order() const { return q_ - 1; }

  /// Discrete log of n base g; n must be coprime to q.
  i64 log(i64 n) const {
    i64 r = floor_mod(n, q_);
    if (r == 0) throw Error(ErrorKind::InvalidArgument, "character log: argument divisible by the modulus");
    return log_[r];
  }

  /// e with chi_k(n) = zeta^e, or nullopt when q | n. Negative k denotes a conjugate.
  std::optional<i64> root_index(i64 k, i64 n) const {
    i64 r = floor_mod(n, q_);
    if (r == 0) return std::nullopt;
    return mul_mod(floor_mod(k, order()), log_[r], order());
  }

  /// zeta^e for any integer e.
  Complex root(i64 e) const { return roots_[floor_mod(e, order())]; }

  Complex operator()(i64 k, i64 n) const {
    auto e = root_index(k, n);
    return e ? root(*e) : Complex{0.0, 0.0};
  }

 private:
  static Complex unit_root(i64 e, i64 order) {
    // exact values at the quarter turns keep real characters real
    if ((4 * e) % order == 0) {
      switch ((4 * e) / order) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        case 3: return {0.0, -1.0};
      }
    }
    long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(e) / order;
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }

  i64 q_;
  i64 g_ = 0;
  std::vector<i64> log_;
  std::vector<Complex> roots_;
};

inline CharacterTable character_table(i64 q) { return CharacterTable(q); }

inline Complex char_eval(const CharacterTable& table, i64 k, i64 n) { return table(k, n); }

}  // namespace mds
