#pragma once

/**
 * @file momentlab.hpp
 * @brief The restricted series as an average over Dirichlet characters mod q:
 *
 *   (q-1)^{-m} sum_{chi_1..chi_m} prod_j L_N(s_j, lambda_j x prod_i chi_i^{a_ij})
 *                                 prod_i chi_i(omega_i) conj(chi_i)(omega'_i),
 *
 * with every L-series truncated at n <= N. By orthogonality this equals, exactly,
 * the sum of a(n) n^{-s} over n in [1,N]^t with all n_j coprime to q and
 * omega_i prod_j n_j^{a_ij} == omega'_i (mod q). Its distance to the true series
 * is what the decay experiment measures as q grows.
 */

#include <cmath>
#include <string>
#include <vector>

#include "mds/arith.hpp"
#include "mds/coefficients.hpp"
#include "mds/series.hpp"
#include "mds/system.hpp"

namespace mds {

/// sum_{n <= N} lambda(n) chi_k(n) n^{-s}.
inline Complex truncated_twisted_L(const CoefficientFamily& f, const CharacterTable& table, i64 k, Complex s, i64 N) {
  if (!(s.real() > 1.0)) throw Error(ErrorKind::NonConvergent, "truncated_twisted_L: Re s must exceed 1");
  ComplexAccumulator acc;
  for (i64 n = 1; n <= N; ++n) {
    auto e = table.root_index(k, n);
    if (!e) continue;
    std::complex<long double> term = detail::power_minus(n, s) * detail::widen(table.root(*e));
    if (!f.is_trivial()) term *= detail::widen(f(n));
    acc.add(term);
  }
  return acc.result();
}

/// Character tuple budget: (q-1)^m may not exceed what m = 2, q = 80 needs, and m = 1 allows q <= 2000.
inline bool moment_within_caps(std::size_t m, i64 q) {
  if (m == 0) return true;
  if (m == 1) return q <= 2000;
  i64 tuples = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (tuples > 79 * 79 / (q - 1)) return false;
    tuples *= q - 1;
  }
  return true;
}

inline Complex moment_rhs(const LaurentMonomialSystem& S, const CoefficientTuple& pi, const SeriesPoint& s, i64 q,
                          i64 N) {
  detail::check_shapes(S, pi, s);
  for (const auto& z : s)
    if (!(z.real() > 1.0)) throw Error(ErrorKind::NonConvergent, "moment_rhs: every Re s_j must exceed 1");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "moment_rhs: N must be >= 1");
  const std::size_t t = S.t(), m = S.m();

  if (m == 0) {
    std::complex<long double> prod = 1.0L;
    for (std::size_t j = 0; j < t; ++j) {
      ComplexAccumulator acc;
      for (i64 n = 1; n <= N; ++n) {
        auto term = detail::power_minus(n, s[j]);
        if (!pi[j].is_trivial()) term *= detail::widen(pi[j](n));
        acc.add(term);
      }
      prod *= acc.value();
    }
    return {static_cast<double>(prod.real()), static_cast<double>(prod.imag())};
  }

  const CharacterTable table(q);
  const i64 order = table.order();
  for (std::size_t i = 0; i < m; ++i)
    if (S.omega()[i] % q == 0 || S.omega_prime()[i] % q == 0)
      throw Error(ErrorKind::InvalidArgument, "moment_rhs: q = " + std::to_string(q) + " divides a twist");
  if (!moment_within_caps(m, q))
    throw Error(ErrorKind::WorkCapExceeded, "moment_rhs: (q-1)^m character tuples exceed the work cap");

  // bucket[j][a] = sum over n <= N with log_g n = a of lambda_j(n) n^{-s_j}
  std::vector<std::vector<std::complex<long double>>> bucket(t);
  for (std::size_t j = 0; j < t; ++j) {
    std::vector<ComplexAccumulator> acc(static_cast<std::size_t>(order));
    for (i64 n = 1; n <= N; ++n) {
      if (n % q == 0) continue;
      auto term = detail::power_minus(n, s[j]);
      if (!pi[j].is_trivial()) term *= detail::widen(pi[j](n));
      acc[table.log(n)].add(term);
    }
    for (const auto& a : acc) bucket[j].push_back(a.value());
  }
  // Lval[j][K] = L_N(s_j, lambda_j x chi_K)
  std::vector<std::vector<std::complex<long double>>> Lval(t, std::vector<std::complex<long double>>(order));
  for (std::size_t j = 0; j < t; ++j)
    for (i64 K = 0; K < order; ++K) {
      ComplexAccumulator acc;
      for (i64 a = 0; a < order; ++a) acc.add(bucket[j][a] * detail::widen(table.root(mul_mod(K, a, order))));
      Lval[j][K] = acc.value();
    }
  // chi_k(omega_i) conj(chi_k)(omega'_i) = zeta^{k (log omega_i - log omega'_i)}
  std::vector<i64> twist_log(m);
  for (std::size_t i = 0; i < m; ++i)
    twist_log[i] = floor_mod(table.log(S.omega()[i]) - table.log(S.omega_prime()[i]), order);

  std::vector<i64> k(m, 0);
  i64 tuples = 1;
  for (std::size_t i = 0; i < m; ++i) tuples *= order;
  ComplexAccumulator total;
  for (i64 n = 0; n < tuples; ++n) {
    std::complex<long double> term = 1.0L;
    for (std::size_t j = 0; j < t; ++j) {
      i64 K = 0;
      for (std::size_t i = 0; i < m; ++i) K = floor_mod(K + floor_mod(k[i] * S.a(i, j), order), order);
      term *= Lval[j][K];
    }
    i64 tw = 0;
    for (std::size_t i = 0; i < m; ++i) tw = floor_mod(tw + mul_mod(k[i], twist_log[i], order), order);
    term *= detail::widen(table.root(tw));
    total.add(term);
    for (std::size_t i = 0; i < m; ++i) {
      if (++k[i] < order) break;
      k[i] = 0;
    }
  }
  auto v = total.value() / static_cast<long double>(tuples);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

struct MomentExperiment {
  std::vector<i64> moduli;
  std::vector<Complex> rhs;
  std::vector<double> errors;  // e(q) = |rhs(q) - lhs|
  Complex lhs;
  double lhs_truncation = 0;  // |direct - euler| of the reference evaluation
  bool fitted = false;
  double eta = NAN;        // slope of -log e(q) against log q
  double intercept = NAN;  // C in log e(q) ~ C - eta log q
  double eta_stderr = NAN;
  std::vector<double> residuals;
  std::vector<std::string> warnings;
};

/// Least-squares fit of log e = C - eta log q over the points with e > 0.
inline void fit_decay(MomentExperiment& ex) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < ex.moduli.size(); ++k)
    if (ex.errors[k] > 0) {
      xs.push_back(std::log(static_cast<double>(ex.moduli[k])));
      ys.push_back(std::log(ex.errors[k]));
    }
  ex.residuals.clear();
  if (xs.size() < 2) {
    ex.fitted = false;
    return;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) mx += xs[k], my += ys[k];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx == 0) {
    ex.fitted = false;
    return;
  }
  const double slope = sxy / sxx;
  ex.eta = -slope;
  ex.intercept = my - slope * mx;
  double sse = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double r = ys[k] - (ex.intercept + slope * xs[k]);
    ex.residuals.push_back(r);
    sse += r * r;
  }
  ex.eta_stderr = xs.size() > 2 ? std::sqrt(sse / (n - 2) / sxx) : NAN;
  ex.fitted = true;
}

/**
 * e(q) for each modulus against a reference value of the series. The
 * reference is the direct sum at the same box truncation N as the L-series;
 * its Euler-product counterpart is recorded as a truncation diagnostic.
 */
inline MomentExperiment decay_experiment(const LaurentMonomialSystem& S, const CoefficientTuple& pi,
                                         const SeriesPoint& s, const std::vector<i64>& q_list, i64 N,
                                         const EvalOptions& opt = {}) {
  for (std::size_t k = 0; k < q_list.size(); ++k) {
    if (!is_prime(q_list[k])) throw Error(ErrorKind::InvalidArgument, "decay_experiment: modulus list must be primes");
    if (k > 0 && q_list[k] <= q_list[k - 1])
      throw Error(ErrorKind::InvalidArgument, "decay_experiment: modulus list must be ascending");
  }
  MomentExperiment ex;
  ex.moduli = q_list;
  EvalParams params;
  params.N = N;
  params.P = std::max<i64>(N, 2);
  params.tail_estimates = false;
  const EvalReport ref = compare(S, pi, s, params, opt);
  ex.lhs = ref.direct;
  ex.lhs_truncation = ref.abs_diff;
  for (i64 q : q_list) {
    ex.rhs.push_back(moment_rhs(S, pi, s, q, N));
    ex.errors.push_back(std::abs(ex.rhs.back() - ex.lhs));
  }
  fit_decay(ex);
  if (!ex.errors.empty()) {
    double emin = *std::min_element(ex.errors.begin(), ex.errors.end());
    if (emin > 0 && ex.lhs_truncation > emin / 10)
      ex.warnings.push_back("reference truncation error " + std::to_string(ex.lhs_truncation) +
                            " exceeds min e(q)/10");
  }
  return ex;
}

}  // namespace mds
