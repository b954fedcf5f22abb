#pragma once

/**
 * @file system.hpp
 * @brief Laurent monomial systems omega_i * prod_j n_j^{a_ij} = omega'_i and
 * the value-preserving row operations on them.
 *
 * Row operations act on the exponent matrix A and carry the twists along so
 * that the set of positive integer solutions never changes:
 *
 *   Swap(i, j)     exchange rows i and j together with their twists
 *   Negate(i)      row_i <- -row_i, omega_i <-> omega'_i
 *   Add(i, j, b)   row_i <- row_i + b row_j; for b >= 0
 *                    omega_i <- omega_i omega_j^b, omega'_i <- omega'_i omega'_j^b
 *                  and for b < 0 (|b| additions of the negated row j)
 *                    omega_i <- omega_i omega'_j^|b|, omega'_i <- omega'_i omega_j^|b|
 *
 * Twists are 64-bit and every update is overflow checked. Row indices are
 * zero based throughout the C++ interface.
 */

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mds/arith.hpp"

namespace mds {

using Matrix = std::vector<std::vector<i64>>;

class LaurentMonomialSystem {
 public:
  LaurentMonomialSystem() = default;

  LaurentMonomialSystem(std::size_t t, Matrix A, std::vector<i64> omega, std::vector<i64> omega_prime)
      : t_(t), A_(std::move(A)), omega_(std::move(omega)), omega_prime_(std::move(omega_prime)) {
    if (omega_.size() != A_.size() || omega_prime_.size() != A_.size())
      throw Error(ErrorKind::Validation, "system: omega/omega_prime length must equal the row count " +
                                             std::to_string(A_.size()));
    for (std::size_t i = 0; i < A_.size(); ++i) {
      if (A_[i].size() != t_)
        throw Error(ErrorKind::Validation, "system: A[" + std::to_string(i) + "] has " + std::to_string(A_[i].size()) +
                                               " entries, expected t = " + std::to_string(t_));
      if (omega_[i] < 1 || omega_prime_[i] < 1)
        throw Error(ErrorKind::Validation, "system: twists must be positive integers (row " + std::to_string(i) + ")");
    }
  }

  /// The unconstrained system in t variables.
  static LaurentMonomialSystem unconstrained(std::size_t t) { return LaurentMonomialSystem(t, {}, {}, {}); }

  std::size_t t() const { return t_; }
  std::size_t m() const { return A_.size(); }
  const Matrix& A() const { return A_; }
  i64 a(std::size_t i, std::size_t j) const { return A_[i][j]; }
  const std::vector<i64>& omega() const { return omega_; }
  const std::vector<i64>& omega_prime() const { return omega_prime_; }

  bool row_is_zero(std::size_t i) const {
    return std::all_of(A_[i].begin(), A_[i].end(), [](i64 v) { return v == 0; });
  }

  /// A zero row with omega_i != omega'_i: the variety has no points at all.
  bool empty_variety() const {
    for (std::size_t i = 0; i < m(); ++i)
      if (row_is_zero(i) && omega_[i] != omega_prime_[i]) return true;
    return false;
  }

  friend bool operator==(const LaurentMonomialSystem&, const LaurentMonomialSystem&) = default;

 private:
  std::size_t t_ = 0;
  Matrix A_;
  std::vector<i64> omega_, omega_prime_;
};

struct RowOperation {
  enum class Kind { Swap, Negate, Add };
  Kind kind;
  std::size_t i;
  std::size_t j = 0;
  i64 b = 0;

  static RowOperation swap(std::size_t i, std::size_t j) { return {Kind::Swap, i, j, 0}; }
  static RowOperation negate(std::size_t i) { return {Kind::Negate, i, 0, 0}; }
  static RowOperation add(std::size_t i, std::size_t j, i64 b) { return {Kind::Add, i, j, b}; }

  friend bool operator==(const RowOperation&, const RowOperation&) = default;
};

inline std::string to_string(const RowOperation& op) {
  switch (op.kind) {
    case RowOperation::Kind::Swap: return "Swap(" + std::to_string(op.i) + "," + std::to_string(op.j) + ")";
    case RowOperation::Kind::Negate: return "Negate(" + std::to_string(op.i) + ")";
    case RowOperation::Kind::Add:
      return "Add(" + std::to_string(op.i) + "," + std::to_string(op.j) + "," + std::to_string(op.b) + ")";
  }
  return "?";
}

inline LaurentMonomialSystem apply_row_op(const LaurentMonomialSystem& S, const RowOperation& op) {
  const std::size_t m = S.m();
  if (op.i >= m || (op.kind != RowOperation::Kind::Negate && op.j >= m))
    throw Error(ErrorKind::InvalidArgument, "row operation " + to_string(op) + ": index out of range for m = " +
                                                std::to_string(m));
  if (op.kind != RowOperation::Kind::Negate && op.i == op.j)
    throw Error(ErrorKind::InvalidArgument, "row operation " + to_string(op) + ": rows must differ");
  Matrix A = S.A();
  std::vector<i64> w = S.omega(), wp = S.omega_prime();
  switch (op.kind) {
    case RowOperation::Kind::Swap:
      std::swap(A[op.i], A[op.j]);
      std::swap(w[op.i], w[op.j]);
      std::swap(wp[op.i], wp[op.j]);
      break;
    case RowOperation::Kind::Negate:
      for (auto& v : A[op.i]) v = -v;
      std::swap(w[op.i], wp[op.i]);
      break;
    case RowOperation::Kind::Add: {
      for (std::size_t c = 0; c < S.t(); ++c)
        A[op.i][c] = checked_add(A[op.i][c], checked_mul(op.b, A[op.j][c], "row entry"), "row entry");
      const i64 e = op.b >= 0 ? op.b : -op.b;
      const i64 from_w = op.b >= 0 ? w[op.j] : wp[op.j];
      const i64 from_wp = op.b >= 0 ? wp[op.j] : w[op.j];
      w[op.i] = checked_mul(w[op.i], checked_pow(from_w, e, "twist"), "twist");
      wp[op.i] = checked_mul(wp[op.i], checked_pow(from_wp, e, "twist"), "twist");
      break;
    }
  }
  return LaurentMonomialSystem(S.t(), std::move(A), std::move(w), std::move(wp));
}

inline LaurentMonomialSystem apply_row_ops(LaurentMonomialSystem S, const std::vector<RowOperation>& ops) {
  for (const auto& op : ops) S = apply_row_op(S, op);
  return S;
}

/// (A, omega, omega') -> (-A, omega', omega).
inline LaurentMonomialSystem negate_system(const LaurentMonomialSystem& S) {
  Matrix A = S.A();
  for (auto& row : A)
    for (auto& v : row) v = -v;
  return LaurentMonomialSystem(S.t(), std::move(A), S.omega_prime(), S.omega());
}

/// Block-diagonal composition: variables and constraints of S1 first, then S2.
inline LaurentMonomialSystem block_compose(const LaurentMonomialSystem& S1, const LaurentMonomialSystem& S2) {
  const std::size_t t = S1.t() + S2.t();
  Matrix A;
  A.reserve(S1.m() + S2.m());
  for (const auto& row : S1.A()) {
    auto r = row;
    r.resize(t, 0);
    A.push_back(std::move(r));
  }
  for (const auto& row : S2.A()) {
    std::vector<i64> r(S1.t(), 0);
    r.insert(r.end(), row.begin(), row.end());
    A.push_back(std::move(r));
  }
  auto w = S1.omega(), wp = S1.omega_prime();
  w.insert(w.end(), S2.omega().begin(), S2.omega().end());
  wp.insert(wp.end(), S2.omega_prime().begin(), S2.omega_prime().end());
  return LaurentMonomialSystem(t, std::move(A), std::move(w), std::move(wp));
}

/// Reorders variables: new variable k is old variable perm[k]. The series
/// point must be permuted the same way to keep the value.
inline LaurentMonomialSystem permute_columns(const LaurentMonomialSystem& S, const std::vector<std::size_t>& perm) {
  if (perm.size() != S.t()) throw Error(ErrorKind::InvalidArgument, "permute_columns: permutation length mismatch");
  std::vector<char> seen(S.t(), 0);
  for (auto p : perm) {
    if (p >= S.t() || seen[p]) throw Error(ErrorKind::InvalidArgument, "permute_columns: not a permutation");
    seen[p] = 1;
  }
  Matrix A(S.m(), std::vector<i64>(S.t()));
  for (std::size_t i = 0; i < S.m(); ++i)
    for (std::size_t k = 0; k < S.t(); ++k) A[i][k] = S.a(i, perm[k]);
  return LaurentMonomialSystem(S.t(), std::move(A), S.omega(), S.omega_prime());
}

namespace detail {

/// Row-reduces S to Hermite normal form using only the three row operations,
/// reporting every applied operation to `log`. Pivot choice: leftmost column,
/// smallest absolute value (lowest index on ties); pivots made positive;
/// entries above a pivot reduced into [0, pivot).
inline LaurentMonomialSystem hermite_reduce(LaurentMonomialSystem S, std::vector<RowOperation>& log) {
  auto apply = [&](RowOperation op) {
    S = apply_row_op(S, op);
    log.push_back(op);
  };
  const std::size_t m = S.m(), t = S.t();
  std::size_t r = 0;
  for (std::size_t c = 0; c < t && r < m; ++c) {
    while (true) {
      std::optional<std::size_t> best;
      std::size_t nonzero = 0;
      for (std::size_t i = r; i < m; ++i) {
        i64 v = S.a(i, c);
        if (v == 0) continue;
        ++nonzero;
        if (!best || std::abs(v) < std::abs(S.a(*best, c))) best = i;
      }
      if (!best) break;
      if (*best != r) apply(RowOperation::swap(r, *best));
      if (nonzero == 1) break;
      for (std::size_t i = r + 1; i < m; ++i) {
        i64 q = S.a(i, c) / S.a(r, c);
        if (q != 0) apply(RowOperation::add(i, r, -q));
      }
    }
    if (S.a(r, c) == 0) continue;
    if (S.a(r, c) < 0) apply(RowOperation::negate(r));
    const i64 pivot = S.a(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      i64 v = S.a(i, c);
      i64 q = v >= 0 ? v / pivot : -((-v + pivot - 1) / pivot);  // floor division
      if (q != 0) apply(RowOperation::add(i, r, -q));
    }
    ++r;
  }
  return S;
}

}  // namespace detail

struct Normalization {
  LaurentMonomialSystem system;
  std::vector<RowOperation> ops;
  std::size_t dropped_rows = 0;
  bool empty_variety = false;
};

/**
 * Canonical form under row operations: Hermite normal form of A, reached by
 * logged row operations, with zero rows whose twists agree dropped. Zero rows
 * with omega_i != omega'_i are kept and flag the empty variety.
 */
inline Normalization normalize(const LaurentMonomialSystem& S) {
  Normalization out;
  LaurentMonomialSystem H = detail::hermite_reduce(S, out.ops);
  Matrix A;
  std::vector<i64> w, wp;
  for (std::size_t i = 0; i < H.m(); ++i) {
    if (H.row_is_zero(i)) {
      if (H.omega()[i] == H.omega_prime()[i]) {
        ++out.dropped_rows;
        continue;
      }
      out.empty_variety = true;
    }
    A.push_back(H.A()[i]);
    w.push_back(H.omega()[i]);
    wp.push_back(H.omega_prime()[i]);
  }
  out.system = LaurentMonomialSystem(H.t(), std::move(A), std::move(w), std::move(wp));
  return out;
}

/// Nonzero rows of the Hermite normal form; two matrices with the same column
/// count generate the same row lattice iff their forms are equal.
inline Matrix hermite_normal_form(const Matrix& M, std::size_t cols) {
  std::vector<RowOperation> ops;
  auto H = detail::hermite_reduce(
      LaurentMonomialSystem(cols, M, std::vector<i64>(M.size(), 1), std::vector<i64>(M.size(), 1)), ops);
  Matrix out;
  for (std::size_t i = 0; i < H.m(); ++i)
    if (!H.row_is_zero(i)) out.push_back(H.A()[i]);
  return out;
}

/// Membership of v in the lattice spanned by the rows of a Hermite normal form.
inline bool in_row_lattice(const Matrix& hnf, std::vector<i64> v) {
  for (const auto& row : hnf) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    if (v[c] % row[c] != 0) return false;
    i64 q = v[c] / row[c];
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = checked_add(v[k], -checked_mul(q, row[k]));
  }
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

inline std::size_t support_size(const std::vector<i64>& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](i64 x) { return x != 0; }));
}

struct SupportReduction {
  bool reducible = false;
  Matrix basis;  // generators of the row lattice, each with support <= 2 (when reducible)
};

inline constexpr i64 kMaxSupportCoeffBound = 20;

/**
 * Bounded search for generators of the row lattice of A that each have at
 * most two nonzero entries. Candidates are all combinations of the rows with
 * coefficients in [-bound, bound]; a generating subset is chosen greedily by
 * (support, l1 norm). A negative answer only means nothing was found within
 * the bound.
 */
inline SupportReduction support_reducible(const Matrix& A, i64 coeff_bound, i64 cap = work_cap()) {
  if (coeff_bound < 1 || coeff_bound > kMaxSupportCoeffBound)
    throw Error(ErrorKind::InvalidArgument,
                "support_reducible: coeff_bound must lie in [1, " + std::to_string(kMaxSupportCoeffBound) + "]");
  const std::size_t cols = A.empty() ? 0 : A.front().size();
  for (std::size_t i = 0; i < A.size(); ++i)
    if (A[i].size() != cols) throw Error(ErrorKind::Validation, "A[" + std::to_string(i) + "]: ragged row");

  Matrix rows;
  for (const auto& r : A)
    if (support_size(r) > 0) rows.push_back(r);
  SupportReduction out;
  if (std::all_of(rows.begin(), rows.end(), [](const auto& r) { return support_size(r) <= 2; })) {
    out.reducible = true;
    out.basis = rows;
    return out;
  }

  const Matrix target = hermite_normal_form(rows, cols);
  const i64 width = 2 * coeff_bound + 1;
  i64 combos = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (combos > cap / width)
      throw Error(ErrorKind::WorkCapExceeded, "support_reducible: too many row combinations for the work cap");
    combos *= width;
  }

  auto canonical_sign = [](std::vector<i64>& v) {
    for (i64 x : v) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : v) y = -y;
      return;
    }
  };
  std::vector<std::vector<i64>> candidates;
  std::vector<i64> coeff(rows.size(), -coeff_bound);
  for (i64 n = 0; n < combos; ++n) {
    std::vector<i64> v(cols, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t c = 0; c < cols; ++c) v[c] = checked_add(v[c], checked_mul(coeff[i], rows[i][c]));
    std::size_t s = support_size(v);
    if (s >= 1 && s <= 2) {
      canonical_sign(v);
      candidates.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      if (++coeff[i] <= coeff_bound) break;
      coeff[i] = -coeff_bound;
    }
  }
  auto l1 = [](const std::vector<i64>& v) {
    i64 s = 0;
    for (i64 x : v) s += std::abs(x);
    return s;
  };
  std::sort(candidates.begin(), candidates.end(), [&](const auto& x, const auto& y) {
    auto kx = std::make_tuple(support_size(x), l1(x));
    auto ky = std::make_tuple(support_size(y), l1(y));
    if (kx != ky) return kx < ky;
    return x > y;
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  Matrix chosen, current;
  for (const auto& v : candidates) {
    if (current == target) break;
    if (in_row_lattice(current, v)) continue;
    chosen.push_back(v);
    current = hermite_normal_form(chosen, cols);
  }
  if (current != target) return out;
  auto leading = [](const std::vector<i64>& v) {
    return static_cast<std::size_t>(std::find_if(v.begin(), v.end(), [](i64 x) { return x != 0; }) - v.begin());
  };
  std::stable_sort(chosen.begin(), chosen.end(), [&](const auto& x, const auto& y) { return leading(x) < leading(y); });
  out.reducible = true;
  out.basis = std::move(chosen);
  return out;
}

}  // namespace mds
