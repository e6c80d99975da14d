#pragma once

// Point-counting oracle for moduli of stable genus-0 marked curves.
//
// |M_{0,m}(F_q)| has a closed form (fix three points at 0, 1, infinity); the
// compactified count follows by summing over the boundary stratification,
// which we enumerate as anchored trees.  Since the counting function is a
// polynomial in q with coefficients the even Betti numbers, interpolation at
// a handful of primes recovers the full cohomology table.  This route never
// touches the graph pipeline, so it serves as an independent oracle for it.

#include <map>
#include <utility>
#include <vector>

#include "bbatlas/poincare.hpp"
#include "bbatlas/upoly.hpp"

namespace bbatlas {

inline constexpr int kMaxOracleMarks = 12;  // tree sum is exponential in m

inline long long count_open(long long q, int m) {
  require(m >= 3, errc::invalid_parameters, "count_open needs m >= 3");
  long long acc = 1;
  for (int i = 2; i <= m - 2; ++i) acc = checked_mul(acc, q - i, "open point count");
  return acc;
}

namespace detail {

// Counts points of the compactification for one fixed q, memoized by the
// number of marks.  A stable tree is built by choosing the legs S sharing the
// anchor's vertex and partitioning the rest into branches of >= 2 legs; each
// branch contributes the count for its legs plus the attaching node.
class ClosedCounter {
 public:
  explicit ClosedCounter(long long q) : q_(q) {}

  long long count(int s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    long long total = 0;
    const unsigned rest_all = (1u << (s - 1)) - 1;  // labels 1..s-1 as bits 0..s-2
    for (unsigned t = 0; t <= rest_all; ++t) {
      int anchor_legs = 1 + __builtin_popcount(t);
      partition_sum(rest_all & ~t, s, anchor_legs, 0, 1, total);
    }
    memo_[s] = total;
    return total;
  }

 private:
  void partition_sum(unsigned mask, int s, int anchor_legs, int branches,
                     long long prod, long long& total) {
    if (mask == 0) {
      int valency = anchor_legs + branches;
      if (valency >= 3)
        total = checked_add(total, checked_mul(prod, count_open(q_, valency), "stratum"),
                            "closed point count");
      return;
    }
    unsigned low = mask & (~mask + 1);
    unsigned others = mask & ~low;
    // block = low | sub, needs >= 2 elements; a block of s-1 legs only arises
    // in the valency-2 configuration, which the leaf check would reject anyway
    for (unsigned sub = others; sub != 0; sub = (sub - 1) & others) {
      int b = 1 + __builtin_popcount(sub);
      if (b + 1 >= s) continue;
      partition_sum(mask & ~(low | sub), s, anchor_legs, branches + 1,
                    checked_mul(prod, count(b + 1), "branch product"), total);
    }
  }

  long long q_;
  std::map<int, long long> memo_;
};

}  // namespace detail

inline long long count_closed(long long q, int m) {
  require(m >= 3, errc::invalid_parameters, "count_closed needs m >= 3");
  require(m <= kMaxOracleMarks, errc::resource_limit, "count_closed supports m <= 12");
  return detail::ClosedCounter(q).count(m);
}

inline bool is_prime_ll(long long n) {
  if (n < 2) return false;
  for (long long i = 2; i * i <= n; ++i)
    if (n % i == 0) return false;
  return true;
}

inline long long next_prime_ge(long long n) {
  while (!is_prime_ll(n)) ++n;
  return n;
}

// Betti numbers of the compactified space via interpolation: sample the count
// at m-2 primes (the counting polynomial has degree m-3), then verify at one
// more prime and demand nonnegative integer coefficients.
inline PoincarePoly betti_from_counts(int m) {
  require(m >= 3, errc::invalid_parameters, "betti_from_counts needs m >= 3");
  require(m <= kMaxOracleMarks, errc::resource_limit, "betti_from_counts supports m <= 12");
  std::vector<std::pair<Rat, Rat>> pts;
  long long p = next_prime_ge(std::max<long long>(5, m));
  for (int i = 0; i < m - 2; ++i) {
    pts.push_back({Rat(p), Rat(count_closed(p, m))});
    p = next_prime_ge(p + 1);
  }
  QPoly f = lagrange_interpolate(pts);
  require(f.eval(Rat(p)) == Rat(count_closed(p, m)), errc::interpolation_mismatch,
          "point counts are not explained by a degree " + std::to_string(m - 3) +
              " polynomial");
  std::vector<long long> betti(f.deg() + 1, 0);
  for (int i = 0; i <= f.deg(); ++i) {
    require(f.coeff(i).is_integer() && f.coeff(i).num >= 0, errc::interpolation_mismatch,
            "interpolated coefficient of q^" + std::to_string(i) +
                " is not a nonnegative integer");
    betti[i] = f.coeff(i).num;
  }
  return PoincarePoly(std::move(betti));
}

}  // namespace bbatlas
