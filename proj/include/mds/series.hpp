#pragma once

/**
 * @file series.hpp
 * @brief The restricted multiple Dirichlet series
 *
 *     D(s) = sum_{n on S} a(n) / prod_j n_j^{s_j},   a(n) = prod_j lambda_j(n_j),
 *
 * evaluated two independent ways: as a direct sum over the box [1,N]^t, and as
 * a product over primes p <= P of local factors summed over exponent columns
 * bounded by B. The two truncations differ, so agreement is judged against the
 * reported tail estimates.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

#include "mds/coefficients.hpp"
#include "mds/system.hpp"
#include "mds/variety.hpp"

namespace mds {

using SeriesPoint = std::vector<Complex>;

struct EvalOptions {
  bool override_convergence = false;
  unsigned threads = 1;
  i64 cap = work_cap();
};

struct EvalParams {
  i64 N = 1000;
  i64 P = 1000;
  int B = 0;  // 0: choose from s
  bool tail_estimates = true;
};

struct EvalReport {
  Complex direct;
  Complex euler;
  double abs_diff = 0;
  double direct_tail = 0;  // |direct(N) - direct(N/2)|
  double euler_tail = 0;   // |euler(P) - euler(P/2)|
  double wall_seconds = 0;
  EvalParams params;
  bool formal = false;  // some Re s_j <= 1: values are formal truncations, not limits
};

inline double min_real_part(const SeriesPoint& s) {
  double m = INFINITY;
  for (const auto& z : s) m = std::min(m, z.real());
  return m;
}

/// Smallest B with 2^{-B min Re s} < 1e-15, capped at 64.
inline int default_exponent_bound(const SeriesPoint& s) {
  double sigma = min_real_part(s);
  if (!(sigma > 0) || s.empty()) return kMaxLocalExponent;
  int B = static_cast<int>(std::floor(15.0 * std::log2(10.0) / sigma)) + 1;
  return std::clamp(B, 1, kMaxLocalExponent);
}

namespace detail {

inline void check_shapes(const LaurentMonomialSystem& S, const CoefficientTuple& c, const SeriesPoint& s) {
  if (c.size() != S.t())
    throw Error(ErrorKind::InvalidArgument, "coefficient tuple has " + std::to_string(c.size()) +
                                                " families, system has t = " + std::to_string(S.t()));
  if (s.size() != S.t())
    throw Error(ErrorKind::InvalidArgument,
                "series point has " + std::to_string(s.size()) + " entries, system has t = " + std::to_string(S.t()));
}

inline void check_convergence(const SeriesPoint& s, const EvalOptions& opt) {
  if (!s.empty() && !(min_real_part(s) > 1.0) && !opt.override_convergence)
    throw Error(ErrorKind::NonConvergent,
                "min Re s_j must exceed 1 for a convergent evaluation (use the convergence override for a formal "
                "truncation)");
}

/// n^{-s} in extended precision.
inline std::complex<long double> power_minus(i64 n, Complex s) {
  long double ln = std::log(static_cast<long double>(n));
  long double mag = std::exp(-static_cast<long double>(s.real()) * ln);
  long double arg = -static_cast<long double>(s.imag()) * ln;
  if (arg == 0) return {mag, 0.0L};
  return {mag * std::cos(arg), mag * std::sin(arg)};
}

inline std::complex<long double> widen(Complex z) { return {z.real(), z.imag()}; }

}  // namespace detail

/// Sum over box solutions in lexicographic order.
inline Complex direct_sum(const LaurentMonomialSystem& S, const CoefficientTuple& c, const SeriesPoint& s, i64 N,
                          const EvalOptions& opt = {}) {
  detail::check_shapes(S, c, s);
  detail::check_convergence(s, opt);
  const auto points = enumerate_box(S, N, opt.cap);
  ComplexAccumulator acc;
  for (const auto& n : points) {
    std::complex<long double> term = 1.0L;
    for (std::size_t j = 0; j < n.size(); ++j) {
      if (n[j] != 1) term *= detail::power_minus(n[j], s[j]);
      if (!c[j].is_trivial()) term *= detail::widen(c[j](n[j]));
    }
    acc.add(term);
  }
  return acc.result();
}

namespace detail {

inline Complex local_factor_from(const std::vector<Exponents>& alphas, const CoefficientTuple& c, i64 p,
                                 const SeriesPoint& s) {
  const std::size_t t = s.size();
  int maxe = 0;
  for (const auto& a : alphas)
    for (int e : a) maxe = std::max(maxe, e);
  // weight[j][e] = lambda_j(p^e) p^{-e s_j}
  std::vector<std::vector<std::complex<long double>>> weight(t, std::vector<std::complex<long double>>(maxe + 1));
  for (std::size_t j = 0; j < t; ++j) {
    const auto base = power_minus(p, s[j]);
    std::complex<long double> pw = 1.0L;
    for (int e = 0; e <= maxe; ++e) {
      weight[j][e] = c[j].is_trivial() ? pw : pw * widen(c[j].prime_power(p, e));
      pw *= base;
    }
  }
  ComplexAccumulator acc;
  for (const auto& a : alphas) {
    std::complex<long double> term = 1.0L;
    for (std::size_t j = 0; j < t; ++j)
      if (a[j]) term *= weight[j][a[j]];
    acc.add(term);
  }
  return acc.result();
}

}  // namespace detail

inline Complex local_factor(const LaurentMonomialSystem& S, const CoefficientTuple& c, i64 p, const SeriesPoint& s,
                            int B, const EvalOptions& opt = {}) {
  detail::check_shapes(S, c, s);
  detail::check_convergence(s, opt);
  return detail::local_factor_from(local_solutions(S, p, B).exponents, c, p, s);
}

/// Product over primes p <= P of local factors, multiplied in ascending order.
inline Complex euler_product(const LaurentMonomialSystem& S, const CoefficientTuple& c, const SeriesPoint& s, i64 P,
                             int B, const EvalOptions& opt = {}) {
  detail::check_shapes(S, c, s);
  detail::check_convergence(s, opt);
  if (P < 2) throw Error(ErrorKind::InvalidArgument, "euler_product: P must be >= 2");
  if (B < 1 || B > kMaxLocalExponent) throw Error(ErrorKind::InvalidArgument, "euler_product: B must lie in [1, 64]");
  if (S.empty_variety()) return 0.0;
  const auto primes = primes_up_to(P);
  const auto tp = twist_profile(S, primes);
  require_twists_within(S, tp, P);

  const auto generic = solve_local(S.A(), S.t(), std::vector<i64>(S.m(), 0), B);
  std::vector<std::vector<Exponents>> special(tp.special.size());
  for (std::size_t k = 0; k < tp.special.size(); ++k)
    special[k] = solve_local(S.A(), S.t(), tp.special[k].second, B);

  std::vector<Complex> factors(primes.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const i64 p = primes[idx];
      const std::vector<Exponents>* set = &generic;
      for (std::size_t k = 0; k < tp.special.size(); ++k)
        if (tp.special[k].first == p) set = &special[k];
      factors[idx] = detail::local_factor_from(*set, c, p, s);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(primes.size())));
  if (threads == 1) {
    work(0, primes.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (primes.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      std::size_t b = w * chunk, e = std::min(primes.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }
  std::complex<long double> prod = 1.0L;
  for (const auto& f : factors) prod *= detail::widen(f);
  return {static_cast<double>(prod.real()), static_cast<double>(prod.imag())};
}

/// Both evaluations with doubling-based tail estimates.
inline EvalReport compare(const LaurentMonomialSystem& S, const CoefficientTuple& c, const SeriesPoint& s,
                          EvalParams params, const EvalOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  if (params.B == 0) params.B = default_exponent_bound(s);
  EvalReport r;
  r.params = params;
  r.formal = !s.empty() && !(min_real_part(s) > 1.0);
  r.direct = direct_sum(S, c, s, params.N, opt);
  r.euler = euler_product(S, c, s, params.P, params.B, opt);
  r.abs_diff = std::abs(r.direct - r.euler);
  if (params.tail_estimates) {
    r.direct_tail = params.N >= 2 ? std::abs(r.direct - direct_sum(S, c, s, params.N / 2, opt)) : 0.0;
    i64 half = params.P / 2;
    for (const auto& [p, _] : twist_profile(S, primes_up_to(params.P)).special) half = std::max(half, p);
    r.euler_tail = half >= 2 && half < params.P ? std::abs(r.euler - euler_product(S, c, s, half, params.B, opt)) : 0.0;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace mds
