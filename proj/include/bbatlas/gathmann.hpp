#pragma once
// Tangency-space combinatorics: the codimension ledger and the exhaustive
// enumeration of boundary correction terms of the raising recursion
//
//   (alpha_j psi_j + ev_j^* H) . [Mbar_alpha] = [Mbar_{alpha+e_j}] + corrections,
//
// where a correction is an internal component inside H = P^{r-1} carrying the
// distinguished marking, with k >= 1 groups of full-target degree attached at
// nodes of prescribed contact multiplicities.  Everything here is counting
// and bookkeeping; psi and ev^*H stay opaque symbols.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "bbatlas/errors.hpp"
#include "bbatlas/fixed_locus.hpp"
#include "bbatlas/rational.hpp"

namespace bbatlas {

// alpha_i = prescribed contact order of marking i with the hyperplane H.
struct TangencyVector {
  std::vector<long long> entries;  // one per marking, >= 0
  int r = 1;                       // ambient target P^r
  long long d = 1;                 // curve degree

  long long total() const {
    long long s = 0;
    for (long long a : entries) s += a;
    return s;
  }
  int length() const { return static_cast<int>(entries.size()); }
};

inline void validate_tangency(const TangencyVector& tv) {
  require(tv.r >= 1 && tv.d >= 1, errc::invalid_parameters,
          "tangency vector needs r >= 1, d >= 1", json{{"r", tv.r}, {"d", tv.d}});
  for (long long a : tv.entries)
    require(a >= 0, errc::invalid_parameters, "tangency entries must be nonnegative",
            json{{"entry", a}});
  require(tv.total() <= tv.d, errc::invalid_parameters,
          "total tangency exceeds the degree", json{{"total", tv.total()}, {"d", tv.d}});
}

// expected codimension of the tangency locus inside the full moduli space
inline long long gathmann_codim(const TangencyVector& tv) {
  validate_tangency(tv);
  return tv.total();
}

// One summand of the correction divisor: the internal component maps into H
// with degree d0 and keeps the markings in `internal_markings`; group i joins
// it at a node of contact multiplicity mult_i and carries its own markings.
struct GathmannBoundaryTerm {
  struct Group {
    long long degree = 1;        // d_i >= 1, into the full target
    long long mult = 1;          // m_i >= 1, contact order at the node
    std::vector<int> markings;   // sorted, possibly empty
  };

  long long d0 = 0;                  // internal degree, into H
  std::vector<int> internal_markings;  // sorted; contains the raised index j
  std::vector<Group> groups;           // k >= 1
  Rat coefficient;                     // (prod mult_i) / k!

  int k() const { return static_cast<int>(groups.size()); }
};

namespace detail {

inline long long sub_total(const TangencyVector& tv, const std::vector<int>& markings) {
  long long s = 0;
  for (int m : markings) s += tv.entries[static_cast<size_t>(m - 1)];
  return s;
}

inline bool group_less(const GathmannBoundaryTerm::Group& a,
                       const GathmannBoundaryTerm::Group& b) {
  return std::tie(a.degree, a.mult, a.markings) < std::tie(b.degree, b.mult, b.markings);
}

inline std::string term_key(const GathmannBoundaryTerm& t) {
  std::string s = "d0=" + std::to_string(t.d0) + ";";
  for (const auto& g : t.groups) {
    s += "(" + std::to_string(g.degree) + "," + std::to_string(g.mult);
    for (int m : g.markings) s += "," + std::to_string(m);
    s += ")";
  }
  return s;
}

inline long long factorial(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

// Dimension of the term's fibered product: internal factor in H, one tangency
// factor per group, glued along k evaluation conditions in H.
inline long long term_dimension(const GathmannBoundaryTerm& t, const TangencyVector& tv) {
  long long dim = moduli_dim(tv.r - 1, static_cast<int>(t.d0),
                             static_cast<int>(t.internal_markings.size()) + t.k());
  for (const auto& g : t.groups)
    dim += moduli_dim(tv.r, static_cast<int>(g.degree),
                      static_cast<int>(g.markings.size()) + 1) -
           (detail::sub_total(tv, g.markings) + g.mult);
  return dim - static_cast<long long>(t.k()) * (tv.r - 1);
}

// All correction terms for raising entry j.  Unordered mode (the default)
// lists each multiset of groups once with the k! kept in the coefficient;
// ordered mode lists every distinct ordering instead, for count cross-checks.
inline std::vector<GathmannBoundaryTerm> enumerate_boundary_terms(const TangencyVector& tv,
                                                                  int j,
                                                                  bool ordered = false) {
  validate_tangency(tv);
  require(j >= 1 && j <= tv.length(), errc::invalid_parameters,
          "raised index out of range", json{{"j", j}, {"n", tv.length()}});

  const int n = tv.length();
  const long long d = tv.d;
  std::vector<GathmannBoundaryTerm> out;
  std::set<std::string> seen;

  for (int k = 1; k <= d; ++k) {
    // block of each marking: 0 = internal component, 1..k = groups; j stays internal
    std::vector<int> block(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<int> internal;
      std::vector<std::vector<int>> members(static_cast<size_t>(k));
      for (int m = 1; m <= n; ++m) {
        int b = block[static_cast<size_t>(m - 1)];
        if (b == 0)
          internal.push_back(m);
        else
          members[static_cast<size_t>(b - 1)].push_back(m);
      }
      const long long a0 = detail::sub_total(tv, internal);

      const long long d0_max = tv.r == 1 ? 0 : std::min(d - k, a0 - k);
      for (long long d0 = 0; d0 <= d0_max; ++d0) {
        // internal stability: positive degree or at least three special points
        if (d0 == 0 && static_cast<int>(internal.size()) + k < 3) continue;

        // compositions of d - d0 into k parts d_i >= 1 and of a0 - d0 into
        // k contact orders m_i >= 1 with m_i + |alpha^i| <= d_i
        if (d - d0 - (k - 1) < 1 || a0 - d0 - (k - 1) < 1) continue;

        auto emit = [&](const std::vector<long long>& dg, const std::vector<long long>& mu) {
          GathmannBoundaryTerm t;
          t.d0 = d0;
          t.internal_markings = internal;
          long long mprod = 1;
          for (int i = 0; i < k; ++i) {
            if (detail::sub_total(tv, members[static_cast<size_t>(i)]) + mu[static_cast<size_t>(i)] >
                dg[static_cast<size_t>(i)])
              return;  // group tangency budget exceeded
            t.groups.push_back({dg[static_cast<size_t>(i)], mu[static_cast<size_t>(i)],
                                members[static_cast<size_t>(i)]});
            mprod *= mu[static_cast<size_t>(i)];
          }
          t.coefficient = Rat(mprod, detail::factorial(k));
          if (!ordered) {
            std::sort(t.groups.begin(), t.groups.end(), detail::group_less);
            if (!seen.insert(detail::term_key(t)).second) return;
          }
          out.push_back(std::move(t));
        };

        // odometer over the two compositions
        std::vector<long long> dg(static_cast<size_t>(k), 1);
        dg.back() = d - d0 - (k - 1);
        while (true) {
          std::vector<long long> mu(static_cast<size_t>(k), 1);
          mu.back() = a0 - d0 - (k - 1);
          while (true) {
            emit(dg, mu);
            int i = 0;
            for (; i < k - 1; ++i) {
              if (mu.back() > 1) {
                ++mu[static_cast<size_t>(i)];
                --mu.back();
                break;
              }
              mu.back() += mu[static_cast<size_t>(i)] - 1;
              mu[static_cast<size_t>(i)] = 1;
            }
            if (i == k - 1) break;
          }
          int i = 0;
          for (; i < k - 1; ++i) {
            if (dg.back() > 1) {
              ++dg[static_cast<size_t>(i)];
              --dg.back();
              break;
            }
            dg.back() += dg[static_cast<size_t>(i)] - 1;
            dg[static_cast<size_t>(i)] = 1;
          }
          if (i == k - 1) break;
        }
      }

      // advance the block assignment, skipping index j - 1
      int m = 0;
      for (; m < n; ++m) {
        if (m == j - 1) continue;
        if (block[static_cast<size_t>(m)] < k) {
          ++block[static_cast<size_t>(m)];
          std::fill(block.begin(), block.begin() + m, 0);
          block[static_cast<size_t>(j - 1)] = 0;
          break;
        }
      }
      if (m == n) break;
    }
  }
  return out;
}

// The raising identity as data: lead class and its boundary corrections.
struct RecursionExpression {
  TangencyVector alpha;
  int j = 1;
  long long psi_coefficient = 0;  // alpha_j, entering as -(alpha_j psi_j + ev_j^* H)
  std::vector<GathmannBoundaryTerm> corrections;

  long long codimension() const { return alpha.total() + 1; }  // of every term
};

inline RecursionExpression recursion_expression(const TangencyVector& tv, int j) {
  validate_tangency(tv);
  require(j >= 1 && j <= tv.length(), errc::invalid_parameters,
          "raised index out of range", json{{"j", j}, {"n", tv.length()}});
  RecursionExpression ex;
  ex.alpha = tv;
  ex.j = j;
  ex.psi_coefficient = tv.entries[static_cast<size_t>(j - 1)];
  ex.corrections = enumerate_boundary_terms(tv, j);
  return ex;
}

// --- JSON views (consumed by the CLI) ---

inline json to_json(const GathmannBoundaryTerm& t, const TangencyVector& tv) {
  json groups = json::array();
  for (const auto& g : t.groups) {
    json alpha_i = json::array();
    for (int m : g.markings) alpha_i.push_back(tv.entries[static_cast<size_t>(m - 1)]);
    groups.push_back({{"degree", g.degree},
                      {"mult", g.mult},
                      {"markings", g.markings},
                      {"alpha", alpha_i}});
  }
  json alpha0 = json::array();
  for (int m : t.internal_markings) alpha0.push_back(tv.entries[static_cast<size_t>(m - 1)]);
  return json{{"d0", t.d0},
              {"internal", {{"markings", t.internal_markings}, {"alpha", alpha0}}},
              {"groups", groups},
              {"coefficient", t.coefficient.str()},
              {"dimension", term_dimension(t, tv)}};
}

inline json to_json(const RecursionExpression& ex) {
  json corr = json::array();
  for (const auto& t : ex.corrections) corr.push_back(to_json(t, ex.alpha));
  return json{{"alpha", ex.alpha.entries},
              {"r", ex.alpha.r},
              {"d", ex.alpha.d},
              {"j", ex.j},
              {"lead",
               {{"psi_coefficient", -ex.psi_coefficient},
                {"ev_hyperplane", -1},
                {"base", "Mbar_alpha"}}},
              {"codimension", ex.codimension()},
              {"corrections", corr}};
}

}  // namespace bbatlas
