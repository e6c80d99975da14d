#pragma once

// Univariate polynomials over Q, plus the small amount of integer-polynomial
// machinery the flow module needs: Yun squarefree decomposition, rational
// root extraction, and Kronecker factorization into irreducibles.  Degrees
// here are tiny (bounded by the map degree), so the classical algorithms are
// the right tool.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bbatlas/rational.hpp"

namespace bbatlas {

struct QPoly {
  std::vector<Rat> c;  // c[i] * z^i, trimmed so c.back() != 0 unless empty

  QPoly() = default;
  explicit QPoly(std::vector<Rat> cc) : c(std::move(cc)) { trim(); }
  static QPoly constant(Rat r) { return QPoly(std::vector<Rat>{r}); }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  int deg() const { return (int)c.size() - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c.empty(); }
  Rat lead() const { return c.empty() ? Rat(0) : c.back(); }
  Rat coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : Rat(0); }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (int i = deg(); i >= 0; --i) acc = acc * x + c[i];
    return acc;
  }

  friend QPoly operator+(const QPoly& a, const QPoly& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff((int)i) + b.coeff((int)i);
    return QPoly(std::move(r));
  }
  friend QPoly operator-(const QPoly& a, const QPoly& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff((int)i) - b.coeff((int)i);
    return QPoly(std::move(r));
  }
  friend QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly();
    std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
    return QPoly(std::move(r));
  }
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }
  friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

  QPoly scaled(const Rat& s) const {
    QPoly r = *this;
    for (auto& x : r.c) x = x * s;
    r.trim();
    return r;
  }

  QPoly derivative() const {
    if (deg() < 1) return QPoly();
    std::vector<Rat> r(c.size() - 1, Rat(0));
    for (size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * Rat((long long)i);
    return QPoly(std::move(r));
  }

  // quotient/remainder; divisor must be nonzero
  friend std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    require(!b.is_zero(), errc::invalid_parameters, "polynomial division by zero");
    QPoly rem = a;
    std::vector<Rat> q(std::max(0, a.deg() - b.deg() + 1), Rat(0));
    while (!rem.is_zero() && rem.deg() >= b.deg()) {
      Rat f = rem.lead() / b.lead();
      int shift = rem.deg() - b.deg();
      q[shift] = f;
      for (int i = 0; i <= b.deg(); ++i)
        rem.c[i + shift] = rem.c[i + shift] - f * b.c[i];
      rem.trim();
    }
    return {QPoly(std::move(q)), rem};
  }

  bool divides(const QPoly& a) const { return divmod(a, *this).second.is_zero(); }

  QPoly monic() const {
    if (is_zero()) return *this;
    return scaled(Rat(1) / lead());
  }

  std::string str(const std::string& var = "z") const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
      if (coeff(i).is_zero()) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || coeff(i) != Rat(1)) s += coeff(i).str();
      if (i > 0) {
        if (coeff(i) != Rat(1)) s += "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }
};

inline QPoly poly_gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = divmod(a, b).second;
    a = b;
    b = r;
  }
  return a.monic();
}

// integer polynomial with content 1 (used only by the factorizer)
using ZPoly = std::vector<long long>;

inline ZPoly to_primitive_z(const QPoly& p) {
  long long den_lcm = 1;
  for (const auto& r : p.c) den_lcm = checked_mul(den_lcm / std::gcd(den_lcm, r.den), r.den, "lcm");
  ZPoly z(p.c.size());
  for (size_t i = 0; i < p.c.size(); ++i) z[i] = checked_mul(p.c[i].num, den_lcm / p.c[i].den, "primitive");
  long long content = 0;
  for (long long v : z) content = std::gcd(content, v < 0 ? -v : v);
  if (content > 1)
    for (auto& v : z) v /= content;
  if (!z.empty() && z.back() < 0)
    for (auto& v : z) v = -v;
  return z;
}

inline QPoly from_z(const ZPoly& z) {
  std::vector<Rat> c(z.size());
  for (size_t i = 0; i < z.size(); ++i) c[i] = Rat(z[i]);
  return QPoly(std::move(c));
}

// Yun's algorithm: f = prod g_i^i with the g_i squarefree and coprime.
// Returns the (g_i, i) with g_i nonconstant.
inline std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& f) {
  require(!f.is_zero(), errc::invalid_parameters, "squarefree decomposition of zero");
  std::vector<std::pair<QPoly, int>> out;
  QPoly fm = f.monic();
  if (fm.deg() < 1) return out;
  QPoly df = fm.derivative();
  QPoly a = poly_gcd(fm, df);
  QPoly b = divmod(fm, a).first;
  QPoly c = divmod(df, a).first;
  QPoly d = c - b.derivative();
  int i = 1;
  while (b.deg() >= 1) {
    QPoly g = poly_gcd(b, d);
    if (g.deg() >= 1) out.push_back({g, i});
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

inline std::vector<long long> signed_divisors(long long v, size_t limit = 200000) {
  if (v < 0) v = -v;
  require(v != 0, errc::internal, "divisors of zero");
  std::vector<long long> ds;
  for (long long i = 1; i * i <= v; ++i) {
    if (v % i == 0) {
      ds.push_back(i);
      if (i != v / i) ds.push_back(v / i);
      require(ds.size() < limit, errc::resource_limit, "divisor set too large in factorization");
    }
  }
  std::vector<long long> out;
  out.reserve(ds.size() * 2);
  for (long long d : ds) { out.push_back(d); out.push_back(-d); }
  std::sort(out.begin(), out.end());
  return out;
}

// distinct rational roots of a nonzero polynomial
inline std::vector<Rat> rational_roots(const QPoly& f) {
  std::vector<Rat> roots;
  QPoly g = f;
  require(!g.is_zero(), errc::invalid_parameters, "roots of the zero polynomial");
  // strip z^k
  int k = 0;
  while (k < (int)g.c.size() && g.c[k].is_zero()) ++k;
  if (k > 0) {
    roots.push_back(Rat(0));
    g = QPoly(std::vector<Rat>(g.c.begin() + k, g.c.end()));
  }
  if (g.deg() < 1) return roots;
  ZPoly z = to_primitive_z(g);
  long long a0 = z.front(), an = z.back();
  for (long long p : signed_divisors(a0))
    for (long long q : signed_divisors(an)) {
      if (q <= 0) continue;
      if (std::gcd(p < 0 ? -p : p, q) != 1) continue;
      Rat cand(p, q);
      if (g.eval(cand).is_zero()) {
        if (std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
      }
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline QPoly lagrange_interpolate(const std::vector<std::pair<Rat, Rat>>& pts) {
  QPoly acc;
  for (size_t i = 0; i < pts.size(); ++i) {
    QPoly basis = QPoly::constant(Rat(1));
    Rat denom(1);
    for (size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      basis = basis * QPoly({-pts[j].first, Rat(1)});
      denom = denom * (pts[i].first - pts[j].first);
    }
    acc = acc + basis.scaled(pts[i].second / denom);
  }
  acc.trim();
  return acc;
}

// Kronecker factorization of a primitive squarefree integer polynomial with
// no rational roots.  Interpolates candidate factors through divisor tuples
// of sampled values; exact and exhaustive for the small degrees we meet.
inline void kronecker_split(const QPoly& p, std::vector<QPoly>& out, size_t budget = 2000000) {
  if (p.deg() <= 2) {  // no rational roots => quadratics are irreducible
    out.push_back(p.monic());
    return;
  }
  int n = p.deg();
  for (int f = 2; f <= n / 2; ++f) {
    std::vector<Rat> xs;
    for (int t = 0; (int)xs.size() < f + 1; ++t) {
      long long x = (t % 2 == 0) ? t / 2 : -(t / 2 + 1);  // 0, -1, 1, -2, 2, ...
      xs.push_back(Rat(x));
    }
    std::vector<std::vector<long long>> value_divisors;
    bool bad_point = false;
    for (const auto& x : xs) {
      Rat v = p.eval(x);
      if (v.is_zero() || !v.is_integer()) { bad_point = true; break; }
      value_divisors.push_back(signed_divisors(v.num));
    }
    if (bad_point) continue;  // rational root slipped through; caller strips them
    size_t total = 1;
    for (auto& ds : value_divisors) {
      total *= ds.size();
      require(total < budget, errc::resource_limit, "Kronecker candidate space too large");
    }
    std::vector<size_t> idx(xs.size(), 0);
    while (true) {
      std::vector<std::pair<Rat, Rat>> pts;
      for (size_t i = 0; i < xs.size(); ++i)
        pts.push_back({xs[i], Rat(value_divisors[i][idx[i]])});
      QPoly cand = lagrange_interpolate(pts);
      if (cand.deg() == f) {
        bool integral = true;
        for (const auto& r : cand.c)
          if (!r.is_integer()) { integral = false; break; }
        if (integral && cand.divides(p)) {
          kronecker_split(cand, out, budget);
          kronecker_split(divmod(p, cand).first, out, budget);
          return;
        }
      }
      size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == value_divisors[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }
  out.push_back(p.monic());  // no factor of any admissible degree: irreducible
}

// monic irreducible factors of a squarefree polynomial (with multiplicity-free input)
inline std::vector<QPoly> irreducible_factors_squarefree(const QPoly& g) {
  std::vector<QPoly> out;
  QPoly rest = g.monic();
  for (const Rat& r : rational_roots(rest)) {
    QPoly lin({-r, Rat(1)});
    rest = divmod(rest, lin).first;
    out.push_back(lin);
  }
  if (rest.deg() >= 1) kronecker_split(from_z(to_primitive_z(rest)), out);
  std::sort(out.begin(), out.end(), [](const QPoly& a, const QPoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    for (int i = a.deg(); i >= 0; --i)
      if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
    return false;
  });
  return out;
}

}  // namespace bbatlas
