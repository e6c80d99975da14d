#pragma once

// Exact rational arithmetic on 64-bit words.  All products/sums run through
// __int128 and anything that does not fit back into 64 bits throws
// resource_limit instead of wrapping: wrong numbers are worse than no numbers.

#include <cstdint>
#include <numeric>
#include <string>

#include "bbatlas/errors.hpp"

namespace bbatlas {

inline long long narrow128(__int128 v, const char* ctx) {
  if (v > (__int128)INT64_MAX || v < (__int128)INT64_MIN)
    fail(errc::resource_limit, std::string("64-bit overflow in ") + ctx);
  return (long long)v;
}

inline long long checked_mul(long long a, long long b, const char* ctx = "mul") {
  return narrow128((__int128)a * b, ctx);
}

inline long long checked_add(long long a, long long b, const char* ctx = "add") {
  return narrow128((__int128)a + b, ctx);
}

struct Rat {
  long long num = 0;
  long long den = 1;  // always > 0, gcd(num, den) == 1

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    require(den != 0, errc::invalid_parameters, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  bool is_zero() const { return num == 0; }
  bool is_integer() const { return den == 1; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return reduce128(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return reduce128(n, d);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return reduce128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    require(b.num != 0, errc::invalid_parameters, "rational division by zero");
    return reduce128((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static Rat reduce128(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g > 1) { n /= g; d /= g; }
    Rat r;
    r.num = narrow128(n, "rational");
    r.den = narrow128(d, "rational");
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
  }
};

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(errc::schema_violation, "cannot parse rational '" + s + "'");
  }
}

// JSON form: integers stay integers, everything else is the "p/q" string.
inline json rat_to_json(const Rat& r) {
  if (r.den == 1) return json(r.num);
  return json(r.str());
}

inline Rat rat_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) return parse_rat(j.get<std::string>());
  fail(errc::schema_violation, "expected rational (int or \"p/q\") at " + path);
}

}  // namespace bbatlas
