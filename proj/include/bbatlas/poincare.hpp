#pragma once

// Poincare polynomials of the spaces in this library.  All cohomology sits in
// even degree, so we store the coefficient of t^{2i} at index i.  Coefficients
// are checked 64-bit integers: an overflow is reported, never wrapped.

#include <string>
#include <vector>

#include "bbatlas/errors.hpp"
#include "bbatlas/rational.hpp"  // checked_add / checked_mul

namespace bbatlas {

struct PoincarePoly {
  std::vector<long long> c;  // c[i] = coefficient of t^{2i}; trimmed

  PoincarePoly() = default;
  explicit PoincarePoly(std::vector<long long> cc) : c(std::move(cc)) { trim(); }
  static PoincarePoly one() { return PoincarePoly({1}); }
  static PoincarePoly zero() { return PoincarePoly(); }

  // 1 + t^2 + ... + t^{2*dim}, the Poincare polynomial of P^dim
  static PoincarePoly projective(int dim) {
    require(dim >= 0, errc::invalid_parameters, "projective(dim) needs dim >= 0");
    return PoincarePoly(std::vector<long long>(dim + 1, 1));
  }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int half_degree() const { return (int)c.size() - 1; }  // -1 for zero
  long long coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : 0; }

  friend PoincarePoly operator+(const PoincarePoly& a, const PoincarePoly& b) {
    std::vector<long long> r(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i)
      r[i] = checked_add(a.coeff((int)i), b.coeff((int)i), "poincare add");
    return PoincarePoly(std::move(r));
  }
  friend PoincarePoly operator*(const PoincarePoly& a, const PoincarePoly& b) {
    if (a.is_zero() || b.is_zero()) return PoincarePoly();
    std::vector<long long> r(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j)
        r[i + j] = checked_add(r[i + j], checked_mul(a.c[i], b.c[j], "poincare mul"),
                               "poincare mul acc");
    return PoincarePoly(std::move(r));
  }
  PoincarePoly& operator+=(const PoincarePoly& o) { return *this = *this + o; }
  PoincarePoly& operator*=(const PoincarePoly& o) { return *this = *this * o; }
  friend bool operator==(const PoincarePoly& a, const PoincarePoly& b) { return a.c == b.c; }
  friend bool operator!=(const PoincarePoly& a, const PoincarePoly& b) { return !(a == b); }

  // substitute t -> t^k (k >= 1): spreads coefficients to indices k*i
  PoincarePoly compose_power(int k) const {
    require(k >= 1, errc::invalid_parameters, "compose_power needs k >= 1");
    if (is_zero() || k == 1) return *this;
    std::vector<long long> r((c.size() - 1) * k + 1, 0);
    for (size_t i = 0; i < c.size(); ++i) r[i * k] = c[i];
    return PoincarePoly(std::move(r));
  }

  // shift by t^{2k}
  PoincarePoly shifted(int k) const {
    require(k >= 0, errc::invalid_parameters, "shifted needs k >= 0");
    if (is_zero()) return *this;
    std::vector<long long> r(c.size() + k, 0);
    for (size_t i = 0; i < c.size(); ++i) r[i + k] = c[i];
    return PoincarePoly(std::move(r));
  }

  long long eval_at_one() const {
    long long s = 0;
    for (long long v : c) s = checked_add(s, v, "eval at 1");
    return s;
  }

  bool palindromic() const {
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i] != c[c.size() - 1 - i]) return false;
    return true;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (c[i] != 1 || i == 0) s += std::to_string(c[i]);
      if (i > 0) {
        if (c[i] != 1) s += "*";
        s += "t^" + std::to_string(2 * i);
      }
    }
    return s;
  }
};

}  // namespace bbatlas
