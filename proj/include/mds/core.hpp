#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace mds {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using Complex = std::complex<double>;

enum class ErrorKind {
  InvalidArgument,
  Overflow,
  WorkCapExceeded,
  Parse,
  Validation,
  MissingCoefficient,
  TwistPrimeBeyondBound,
  NonConvergent,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::WorkCapExceeded: return "work-cap-exceeded";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::MissingCoefficient: return "missing-coefficient";
    case ErrorKind::TwistPrimeBeyondBound: return "twist-prime-beyond-bound";
    case ErrorKind::NonConvergent: return "non-convergent";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr i64 kDefaultWorkCap = 100'000'000;

/// Enumeration budget shared by all box/pair/tuple searches. MDS_WORK_CAP overrides it.
inline i64 work_cap() {
  if (const char* env = std::getenv("MDS_WORK_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<i64>(v);
  }
  return kDefaultWorkCap;
}

inline void charge_work(i64& used, i64 amount, i64 cap, const char* what) {
  if (amount < 0 || used > cap - amount)
    throw Error(ErrorKind::WorkCapExceeded,
                std::string(what) + ": work cap of " + std::to_string(cap) + " exceeded");
  used += amount;
}

inline i64 checked_mul(i64 a, i64 b, const char* what = "integer product") {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorKind::Overflow, std::string(what) + " overflows 64-bit range");
  return r;
}

inline i64 checked_add(i64 a, i64 b, const char* what = "integer sum") {
  i64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorKind::Overflow, std::string(what) + " overflows 64-bit range");
  return r;
}

inline i64 checked_pow(i64 base, i64 e, const char* what = "integer power") {
  i64 r = 1;
  for (i64 k = 0; k < e; ++k) r = checked_mul(r, base, what);
  return r;
}

/// base^e, or limit+1 as soon as the value exceeds limit. base >= 1.
inline i64 saturating_pow(i64 base, i64 e, i64 limit) {
  i64 r = 1;
  for (i64 k = 0; k < e; ++k) {
    if (r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

/// Neumaier-compensated complex accumulator in extended precision.
class ComplexAccumulator {
 public:
  void add(std::complex<long double> x) {
    add_part(re_, re_c_, x.real());
    add_part(im_, im_c_, x.imag());
  }
  std::complex<long double> value() const { return {re_ + re_c_, im_ + im_c_}; }
  Complex result() const {
    auto v = value();
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }

 private:
  static void add_part(long double& sum, long double& comp, long double x) {
    long double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  long double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

}  // namespace mds
