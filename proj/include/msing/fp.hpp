#ifndef MSING_FP_HPP
#define MSING_FP_HPP

// Arithmetic mod a small prime ell, plus binomial coefficients of integers
// (possibly negative upper argument) mod ell.  Two independent evaluation
// strategies are provided and cross-checked in the test suite:
//  - falling-factorial: a(a-1)...(a-b+1)/b! with explicit ell-adic valuation
//    bookkeeping, valid for any integer a;
//  - Lucas' theorem applied to a reduced mod ell^N for the least N with
//    ell^N > b (binom(a,b) mod ell depends only on a mod ell^N in that range).

#include <cassert>
#include <cstdint>
#include <stdexcept>

namespace msing {

inline int fp_norm(long long x, int ell) {
  int r = static_cast<int>(x % ell);
  return r < 0 ? r + ell : r;
}

inline int fp_add(int x, int y, int ell) { return (x + y) % ell; }
inline int fp_sub(int x, int y, int ell) { return fp_norm(x - y, ell); }
inline int fp_mul(int x, int y, int ell) {
  return static_cast<int>((static_cast<long long>(x) * y) % ell);
}

inline int fp_pow(int x, long long e, int ell) {
  assert(e >= 0);
  int r = 1;
  x = fp_norm(x, ell);
  while (e) {
    if (e & 1) r = fp_mul(r, x, ell);
    x = fp_mul(x, x, ell);
    e >>= 1;
  }
  return r;
}

// Inverse mod ell (prime), via Fermat.
inline int fp_inv(int x, int ell) {
  x = fp_norm(x, ell);
  if (x == 0) throw std::domain_error("fp_inv: zero");
  return fp_pow(x, ell - 2, ell);
}

// (-1)^e mod ell
inline int fp_sign(long long e, int ell) {
  return (e % 2 == 0) ? 1 : ell - 1;
}

// ell-adic valuation and unit part (mod ell) of a nonzero integer.
inline void fp_val_unit(long long x, int ell, int& val, int& unit) {
  assert(x != 0);
  val = 0;
  while (x % ell == 0) {
    x /= ell;
    ++val;
  }
  unit = fp_norm(x, ell);
}

// binom(a, b) mod ell for a in Z, b >= 0, via the falling factorial
// a(a-1)...(a-b+1)/b! with ell-adic valuation tracking.
inline int binom_falling(long long a, long long b, int ell) {
  if (b < 0) return 0;
  int val = 0, unit = 1;
  for (long long i = 0; i < b; ++i) {
    long long f = a - i;
    if (f == 0) return 0;
    int v, u;
    fp_val_unit(f, ell, v, u);
    val += v;
    unit = fp_mul(unit, u, ell);
  }
  for (long long i = 1; i <= b; ++i) {
    int v, u;
    fp_val_unit(i, ell, v, u);
    val -= v;
    unit = fp_mul(unit, fp_inv(u, ell), ell);
  }
  if (val > 0) return 0;
  assert(val == 0);
  return unit;
}

// binom(a, b) mod ell via Lucas on a reduced mod ell^N, N least with
// ell^N > b.  Agrees with binom_falling for all integer a (cross-checked).
inline int binom_lucas(long long a, long long b, int ell) {
  if (b < 0) return 0;
  long long pN = 1;
  while (pN <= b) pN *= ell;
  long long ar = ((a % pN) + pN) % pN;
  // plain Lucas on nonnegative ar, b
  int res = 1;
  while (b > 0 || ar > 0) {
    long long ad = ar % ell, bd = b % ell;
    if (bd > ad) return 0;
    // binom(ad, bd) for digits < ell, via falling factorial in F_ell
    int num = 1, den = 1;
    for (long long i = 0; i < bd; ++i) {
      num = fp_mul(num, fp_norm(ad - i, ell), ell);
      den = fp_mul(den, fp_norm(i + 1, ell), ell);
    }
    res = fp_mul(res, fp_mul(num, fp_inv(den, ell), ell), ell);
    ar /= ell;
    b /= ell;
  }
  return res;
}

inline int binom_mod(long long a, long long b, int ell) {
  return binom_falling(a, b, ell);
}

inline long long ipow(long long x, int e) {
  long long r = 1;
  while (e-- > 0) r *= x;
  return r;
}

}  // namespace msing

#endif  // MSING_FP_HPP
