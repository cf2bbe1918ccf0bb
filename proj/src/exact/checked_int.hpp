#pragma once

// int64 wrapper that throws kv::Overflow instead of wrapping. Used as the
// fast instantiation of the integer kernels; mpz_class is the fallback.

#include <cstdint>
#include <cstdlib>

#include "kv/exact.hpp"

namespace kv::detail {

struct I64 {
  std::int64_t v = 0;

  I64() = default;
  I64(std::int64_t x) : v(x) {}  // NOLINT(google-explicit-constructor)

  friend I64 operator+(I64 a, I64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw Overflow();
    return r;
  }
  friend I64 operator-(I64 a, I64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw Overflow();
    return r;
  }
  friend I64 operator*(I64 a, I64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw Overflow();
    return r;
  }
  friend I64 operator/(I64 a, I64 b) {
    if (a.v == INT64_MIN && b.v == -1) throw Overflow();
    return a.v / b.v;
  }
  friend I64 operator%(I64 a, I64 b) {
    if (b.v == -1) return 0;
    return a.v % b.v;
  }
  I64 operator-() const {
    if (v == INT64_MIN) throw Overflow();
    return -v;
  }
  I64& operator+=(I64 o) { return *this = *this + o; }
  I64& operator-=(I64 o) { return *this = *this - o; }
  I64& operator*=(I64 o) { return *this = *this * o; }
  I64& operator/=(I64 o) { return *this = *this / o; }

  friend bool operator==(I64 a, I64 b) { return a.v == b.v; }
  friend bool operator!=(I64 a, I64 b) { return a.v != b.v; }
  friend bool operator<(I64 a, I64 b) { return a.v < b.v; }
  friend bool operator>(I64 a, I64 b) { return a.v > b.v; }
  friend bool operator<=(I64 a, I64 b) { return a.v <= b.v; }
  friend bool operator>=(I64 a, I64 b) { return a.v >= b.v; }
};

inline I64 abs_of(I64 a) { return a.v < 0 ? -a : a; }
inline Int abs_of(const Int& a) { return abs(a); }
inline int sign_of(I64 a) { return (a.v > 0) - (a.v < 0); }
inline int sign_of(const Int& a) { return sgn(a); }

inline I64 gcd_of2(I64 a, I64 b) {
  a = abs_of(a);
  b = abs_of(b);
  while (b.v != 0) {
    I64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
inline Int gcd_of2(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int to_mpz(I64 a) { return Int(static_cast<long>(a.v)); }
inline Int to_mpz(const Int& a) { return a; }

template <class T>
T from_mpz(const Int& a);
template <>
inline I64 from_mpz<I64>(const Int& a) {
  if (!a.fits_slong_p()) throw Overflow();
  return I64(a.get_si());
}
template <>
inline Int from_mpz<Int>(const Int& a) {
  return a;
}

/// floor(a / b) for b > 0.
inline I64 floor_div(I64 a, I64 b) {
  I64 q = a / b;
  if ((a % b).v != 0 && ((a.v < 0) != (b.v < 0))) q = q - 1;
  return q;
}
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline I64 ceil_div(I64 a, I64 b) { return -floor_div(-a, b); }
inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace kv::detail
