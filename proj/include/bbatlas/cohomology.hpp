#pragma once
// Poincaré polynomials: of the curve moduli factors (through the point-count
// oracle), of each fixed locus (graded Burnside invariants under Aut_Gamma),
// and of the full moduli space by the homology basis theorem, recursing on r
// through H = P^{r-1}.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "bbatlas/canonical.hpp"
#include "bbatlas/enumeration.hpp"
#include "bbatlas/fixed_locus.hpp"
#include "bbatlas/oracles.hpp"
#include "bbatlas/poincare.hpp"

namespace bbatlas {

struct CohomologyOptions {
    long long graph_ceiling = 1000000;
    int width = 1;              // worker count for the per-graph sum
    std::string cache_dir;      // empty: $BBATLAS_CACHE_DIR, else .bbatlas-cache/
    bool use_disk_cache = true;
};

// Bump when a change invalidates previously written cache files.
inline constexpr const char* kQPolyCacheVersion = "bbatlas-q/1";

inline PoincarePoly poincare_moduli(int r, int d, int n, const CohomologyOptions& opts = {});

// Betti generating function of the moduli of m-marked genus-0 curves,
// populated by the point-count oracle (not hardcoded) and memoized.
inline const PoincarePoly& poincare_mbar(int m) {
    require(m >= 3, errc::invalid_parameters, "stable curves need at least three markings",
            json{{"m", m}});
    static std::map<int, PoincarePoly> memo;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(m);
    if (it == memo.end())
        it = memo.emplace(m, m == 3 ? PoincarePoly::one() : betti_from_counts(m)).first;
    return it->second;
}

// Graded trace of one cyclic block of an automorphism: the element permutes
// an orbit of k isomorphic factors and its k-th power returns to the chosen
// representative, inducing return_action on the factor's marked points.
// Only return actions that provably act trivially on cohomology are
// supported; anything else fails loudly.
inline PoincarePoly orbit_trace(const Factor& factor, int k, bool trivial_return_action, int r,
                                const CohomologyOptions& opts = {}) {
    require(k >= 1 && r >= 1, errc::invalid_parameters, "orbit_trace needs k >= 1, r >= 1",
            json{{"k", k}, {"r", r}});
    switch (factor.kind) {
        case Factor::Kind::point:
            return PoincarePoly::one();
        case Factor::Kind::target:
            return PoincarePoly::projective(r - 1).compose_power(k);
        case Factor::Kind::curve:
            if (!trivial_return_action && factor.m >= 5)
                fail(errc::equivariant_data_required,
                     "nontrivial marking action on a curve factor with m >= 5",
                     json{{"m", factor.m}});
            return poincare_mbar(factor.m).compose_power(k);
        case Factor::Kind::map:
            if (factor.d_w == 0) {
                // Degree-zero maps contract to a torus-fixed target point, so the
                // factor splits as mbar(m) x P^{r-1} with the projective part
                // action-independent (same reasoning as a target factor).  The
                // mbar part tolerates the same actions as a curve factor: m = 3
                // is a point and every m = 4 action lives in connected PGL_2.
                if (!trivial_return_action && factor.m >= 5)
                    fail(errc::equivariant_data_required,
                         "nontrivial marking action on a degree-zero map factor with m >= 5",
                         json{{"m", factor.m}, {"d_w", factor.d_w}});
                return (poincare_mbar(factor.m) * PoincarePoly::projective(r - 1)).compose_power(k);
            }
            if (!trivial_return_action)
                fail(errc::equivariant_data_required,
                     "nontrivial marking action on a map factor",
                     json{{"m", factor.m}, {"d_w", factor.d_w}});
            return poincare_moduli(r - 1, factor.d_w, factor.m, opts).compose_power(k);
    }
    fail(errc::internal, "unknown factor kind");
}

namespace detail {

// g^k fixes the orbit representative v; the return action permutes the flags
// (edges; legs are fixed by every automorphism) at v.
inline bool return_action_trivial(const Graph& g, const std::vector<int>& pow_perm, int v) {
    std::vector<int> eperm = edge_permutation(g, pow_perm);
    for (size_t e = 0; e < g.edges.size(); ++e)
        if ((g.edges[e].p == v || g.edges[e].h == v) && eperm[e] != static_cast<int>(e))
            return false;
    return true;
}

}  // namespace detail

// Graded dimension of the Aut_Gamma-invariant part of the fixed-locus
// cohomology: (1/|Aut|) sum over elements of the product of orbit traces.
// The cyclic deck groups of the edge covers act trivially and do not enter.
inline PoincarePoly poincare_fixed_locus(const Graph& g, int r,
                                         const CohomologyOptions& opts = {}) {
    FixedLocusSpec spec = fixed_locus_spec(g);
    AutGroup aut = automorphisms(g, opts.graph_ceiling);
    const int V = static_cast<int>(g.vertices.size());

    PoincarePoly sum = PoincarePoly::zero();
    for (const std::vector<int>& perm : aut.elements) {
        PoincarePoly term = PoincarePoly::one();
        std::vector<char> done(static_cast<size_t>(V), 0);
        for (int v = 0; v < V; ++v) {
            if (done[static_cast<size_t>(v)]) continue;
            int k = 0, w = v;
            do {
                done[static_cast<size_t>(w)] = 1;
                w = perm[static_cast<size_t>(w)];
                ++k;
            } while (w != v);
            std::vector<int> pow(static_cast<size_t>(V));
            std::iota(pow.begin(), pow.end(), 0);
            for (int i = 0; i < k; ++i) pow = detail::compose(perm, pow);
            bool trivial = detail::return_action_trivial(g, pow, v);
            try {
                term *= orbit_trace(spec.factors[static_cast<size_t>(v)], k, trivial, r, opts);
            } catch (const error& e) {
                if (e.code != errc::equivariant_data_required) throw;
                json det = e.details;
                det["graph"] = canonical_form(g).key;
                det["element"] = perm;
                fail(errc::equivariant_data_required, e.what(), det);
            }
        }
        sum += term;
    }

    PoincarePoly out = sum;
    for (long long& c : out.c) {
        require(c % aut.order == 0, errc::internal,
                "Burnside sum not divisible by the group order",
                json{{"order", aut.order}});
        c /= aut.order;
    }
    return out;
}

namespace detail {

inline std::string qpoly_cache_dir(const CohomologyOptions& opts) {
    if (!opts.cache_dir.empty()) return opts.cache_dir;
    if (const char* env = std::getenv("BBATLAS_CACHE_DIR")) return env;
    return ".bbatlas-cache";
}

inline std::string qpoly_cache_file(int r, int d, int n) {
    std::ostringstream name;
    name << "Q_r" << r << "_d" << d << "_n" << n << ".json";
    return name.str();
}

// nullopt: no usable entry (missing file or stale version -> recompute)
inline std::optional<PoincarePoly> qpoly_cache_load(const std::string& path,
                                                    long long* graphs_out = nullptr) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(errc::cache_corruption, "unreadable cache file", json{{"path", path}, {"error", e.what()}});
    }
    if (!doc.is_object() || !doc.contains("code_version") || !doc.contains("poly") ||
        !doc["poly"].is_array())
        fail(errc::cache_corruption, "malformed cache file", json{{"path", path}});
    if (doc["code_version"] != kQPolyCacheVersion) return std::nullopt;
    if (graphs_out && doc.contains("graphs") && doc["graphs"].is_number_integer())
        *graphs_out = doc["graphs"].get<long long>();
    PoincarePoly p;
    for (const json& c : doc["poly"]) {
        if (!c.is_number_integer() || c.get<long long>() < 0)
            fail(errc::cache_corruption, "cache polynomial has bad coefficients",
                 json{{"path", path}});
        p.c.push_back(c.get<long long>());
    }
    p.trim();
    return p;
}

inline void qpoly_cache_store(const std::string& dir, const std::string& name, int r, int d,
                              int n, const PoincarePoly& poly, long long graphs) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return;  // caching is best-effort
    json doc{{"code_version", kQPolyCacheVersion},
             {"r", r},
             {"d", d},
             {"n", n},
             {"poly", poly.c},
             {"graphs", graphs}};
    std::ofstream out(dir + "/" + name);
    out << doc.dump(2) << "\n";
}

}  // namespace detail

// Poincaré polynomial of the moduli of n-pointed degree-d maps to P^r, by
// the homology basis theorem: each fixed locus contributes its own Betti
// numbers shifted by twice the codimension of its negative-weight directions.
inline PoincarePoly poincare_moduli(int r, int d, int n, const CohomologyOptions& opts) {
    require(r >= 1 && d >= 0 && n >= 0, errc::invalid_parameters,
            "poincare_moduli needs r >= 1, d >= 0, n >= 0",
            json{{"r", r}, {"d", d}, {"n", n}});
    require(d >= 1 || n >= 3, errc::invalid_parameters,
            "d = 0 needs at least three markings", json{{"d", d}, {"n", n}});

    // The memoized value carries the fixed-locus count so a repeat call can
    // still materialize the record under a cache directory the original
    // computation never touched.
    static std::map<std::tuple<int, int, int>, std::pair<PoincarePoly, long long>> memo;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find({r, d, n});
        if (it != memo.end()) {
            if (d >= 1 && opts.use_disk_cache) {
                const std::string dir = detail::qpoly_cache_dir(opts);
                const std::string name = detail::qpoly_cache_file(r, d, n);
                if (!std::filesystem::exists(dir + "/" + name))
                    detail::qpoly_cache_store(dir, name, r, d, n, it->second.first,
                                              it->second.second);
            }
            return it->second.first;
        }
    }

    if (d == 0) {
        PoincarePoly out = poincare_mbar(n) * PoincarePoly::projective(r);
        std::lock_guard<std::mutex> lock(mu);
        return memo.emplace(std::make_tuple(r, d, n), std::make_pair(std::move(out), -1LL))
            .first->second.first;
    }

    const std::string dir = detail::qpoly_cache_dir(opts);
    const std::string name = detail::qpoly_cache_file(r, d, n);
    if (opts.use_disk_cache) {
        long long cached_graphs = -1;
        if (auto cached = detail::qpoly_cache_load(dir + "/" + name, &cached_graphs)) {
            std::lock_guard<std::mutex> lock(mu);
            return memo
                .emplace(std::make_tuple(r, d, n),
                         std::make_pair(std::move(*cached), cached_graphs))
                .first->second.first;
        }
    }

    EnumerateOptions eopts;
    eopts.ceiling = opts.graph_ceiling;
    std::vector<Graph> graphs = enumerate_graphs(n, r, d, eopts);

    // Every unsupported graph is reported; partial sums are never returned.
    std::vector<PoincarePoly> parts(graphs.size());
    std::vector<std::optional<json>> failures(graphs.size());
    auto work = [&](size_t begin, size_t step) {
        for (size_t i = begin; i < graphs.size(); i += step) {
            try {
                parts[i] = poincare_fixed_locus(graphs[i], r, opts)
                               .shifted(codimension(graphs[i]));
            } catch (const error& e) {
                if (e.code != errc::equivariant_data_required) throw;
                failures[i] = e.details;
            }
        }
    };
    const int width = std::max(1, opts.width);
    if (width == 1 || graphs.size() <= 1) {
        work(0, 1);
    } else {
        std::vector<std::future<void>> pool;
        for (int w = 0; w < width; ++w)
            pool.push_back(std::async(std::launch::async, work, static_cast<size_t>(w),
                                      static_cast<size_t>(width)));
        for (auto& f : pool) f.get();
    }

    json unsupported = json::array();
    for (const auto& f : failures)
        if (f) unsupported.push_back(*f);
    if (!unsupported.empty())
        fail(errc::equivariant_data_required,
             "equivariant trace data required for some fixed loci",
             json{{"r", r}, {"d", d}, {"n", n}, {"unsupported", unsupported}});

    PoincarePoly out = PoincarePoly::zero();
    for (const PoincarePoly& p : parts) out += p;

    const long long graph_count = static_cast<long long>(graphs.size());
    if (opts.use_disk_cache) detail::qpoly_cache_store(dir, name, r, d, n, out, graph_count);
    std::lock_guard<std::mutex> lock(mu);
    return memo.emplace(std::make_tuple(r, d, n), std::make_pair(std::move(out), graph_count))
        .first->second.first;
}

// Single Betti number; odd cohomology vanishes identically.
inline long long betti(int r, int d, int n, int m, const CohomologyOptions& opts = {}) {
    require(m >= 0, errc::invalid_parameters, "betti needs m >= 0", json{{"m", m}});
    if (m % 2 != 0) return 0;
    const PoincarePoly p = poincare_moduli(r, d, n, opts);
    const size_t i = static_cast<size_t>(m / 2);
    return i < p.c.size() ? p.c[i] : 0;
}

}  // namespace bbatlas
