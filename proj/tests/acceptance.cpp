// Acceptance gate.  Each numbered criterion prints exactly one PASS/FAIL
// line with its wall time; the process exits nonzero if any criterion fails
// or overruns its time budget.  No test framework: the lines themselves are
// the report.

#include <bbatlas/canonical.hpp>
#include <bbatlas/cohomology.hpp>
#include <bbatlas/enumeration.hpp>
#include <bbatlas/fixed_locus.hpp>
#include <bbatlas/flow.hpp>
#include <bbatlas/gathmann.hpp>
#include <bbatlas/graph.hpp>
#include <bbatlas/oracles.hpp>
#include <bbatlas/poset.hpp>
#include <bbatlas/selftest.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace bbatlas;
namespace fs = std::filesystem;

int failures = 0;

void expect(bool cond, const std::string& why) {
    if (!cond) throw std::runtime_error(why);
}

void criterion(int number, const char* name, double budget_s,
               const std::function<std::string()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        detail = body();
    } catch (const error& e) {
        ok = false;
        detail = std::string(e.what()) + " " + e.details.dump();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && dt > budget_s) {
        ok = false;
        detail = "exceeded the " + std::to_string((int)budget_s) + " s budget (" + detail + ")";
    }
    std::printf("%s  %d. %-28s %7.2fs  %s\n", ok ? "PASS" : "FAIL", number, name, dt,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::vector<std::tuple<int, int, int>> box(int max_n, int max_r, int max_d) {
    std::vector<std::tuple<int, int, int>> out;
    for (int n = 0; n <= max_n; ++n)
        for (int r = 1; r <= max_r; ++r)
            for (int d = 1; d <= max_d; ++d) out.push_back({n, r, d});
    return out;
}

// 1. Both codimension counts agree with d + s - u on every graph.
std::string codimension_agreement() {
    long long graphs = 0;
    for (auto [n, r, d] : box(2, 3, 3))
        for (const auto& g : enumerate_graphs(n, r, d)) {
            Taxonomy t = classify(g);
            int expected = g.d + t.stable_count - t.very_unstable_count;
            expect(codimension(g) == expected, "codimension formula off");
            expect(negative_weight_count(g).total() == expected,
                   "weight count disagrees with the codimension");
            ++graphs;
        }
    return std::to_string(graphs) + " graphs across 27 spaces";
}

// 2. Exactly one codimension-0 graph per space, and it is the open stratum's.
std::string open_cell_uniqueness() {
    long long spaces = 0;
    for (auto [n, r, d] : box(2, 3, 3)) {
        std::vector<std::string> open_keys;
        for (const auto& g : enumerate_graphs(n, r, d))
            if (codimension(g) == 0) open_keys.push_back(canonical_form(g).key);
        expect(open_keys.size() == 1, "open cell is not unique");
        expect(open_keys[0] == canonical_form(maximal_graph(n, r, d)).key,
               "codimension-0 graph differs from the open stratum's");
        ++spaces;
    }
    return std::to_string(spaces) + " spaces, one open cell each";
}

// 3. Exact length increments per move, order axioms, finite levels.
std::string move_monotonicity_and_order() {
    long long moves = 0, levels = 0;
    for (auto [n, r, d] : box(2, 3, 3)) {
        std::vector<Graph> all = enumerate_graphs(n, r, d);
        for (const auto& g : all) {
            int l0 = length(g), p0 = potential(g);
            for (const auto& [step, h] : successor_moves(g, r)) {
                int want = step.type == "split" ? (int)step.parts.size() - 1 + step.d0 : 1;
                expect(length(h) - l0 == want, "length increment off for a " + step.type);
                expect(potential(h) > p0, "potential did not strictly increase");
                ++moves;
            }
            expect(leq(g, g, r), "leq is not reflexive");
        }
        LevelFunction lf = level_function(n, r, d);
        for (const auto& g : all) {
            expect(lf.level_of(g) >= 0, "negative level");
            ++levels;
        }
    }
    // antisymmetry and transitivity, exhaustively on small spaces
    for (auto [n, r, d] : std::vector<std::tuple<int, int, int>>{{0, 2, 2}, {1, 2, 2}}) {
        std::vector<Graph> all = enumerate_graphs(n, r, d);
        for (const auto& a : all)
            for (const auto& b : all) {
                if (leq(a, b, r) && leq(b, a, r))
                    expect(canonical_form(a).key == canonical_form(b).key,
                           "leq is not antisymmetric");
                for (const auto& c : all)
                    if (leq(a, b, r) && leq(b, c, r))
                        expect(leq(a, c, r), "leq is not transitive");
            }
    }
    return std::to_string(moves) + " moves checked, " + std::to_string(levels) +
           " graphs levelled";
}

// 4. Classical identifications, computed into a fresh cache directory.
std::string poincare_reproductions() {
    CohomologyOptions opts;
    opts.cache_dir = (fs::temp_directory_path() / "bbatlas-acceptance-q").string();
    fs::remove_all(opts.cache_dir);
    auto pp = [](std::vector<long long> c) { return PoincarePoly(std::move(c)); };
    expect(poincare_moduli(2, 1, 0, opts) == pp({1, 1, 1}), "Q(2,1,0) != 1+t^2+t^4");
    expect(poincare_moduli(3, 1, 0, opts) == pp({1, 1, 2, 1, 1}),
           "Q(3,1,0) != 1+t^2+2t^4+t^6+t^8");
    expect(poincare_moduli(1, 2, 0, opts) == pp({1, 1, 1}), "Q(1,2,0) != 1+t^2+t^4");
    expect(poincare_moduli(1, 1, 1, opts) == pp({1, 1}), "Q(1,1,1) != 1+t^2");
    // the universal line over the dual plane: (1+t^2)(1+t^2+t^4)
    expect(poincare_moduli(2, 1, 1, opts) == pp({1, 2, 2, 1}),
           "Q(2,1,1) != 1+2t^2+2t^4+t^6");
    return "five classical spaces reproduced into a cold cache";
}

// 5. Every supported polynomial is palindromic of degree 2 dim.
std::string palindromicity() {
    CohomologyOptions opts;
    opts.cache_dir = (fs::temp_directory_path() / "bbatlas-acceptance-q").string();
    long long computed = 0, unsupported = 0;
    for (int r = 1; r <= 3; ++r)
        for (int d = 1; d <= 2; ++d)
            for (int n = 0; n <= 1; ++n) {
                PoincarePoly q;
                try {
                    q = poincare_moduli(r, d, n, opts);
                } catch (const error& e) {
                    if (e.code != errc::equivariant_data_required) throw;
                    ++unsupported;
                    continue;
                }
                expect(q.palindromic(), "not palindromic");
                expect(q.half_degree() == moduli_dim(r, d, n),
                       "degree differs from 2 dim");
                ++computed;
            }
    return std::to_string(computed) + " spaces computed, " + std::to_string(unsupported) +
           " outside the equivariant envelope";
}

// 6. Point-count interpolation matches the memoized table, plus one more prime.
std::string oracle_concordance() {
    for (int m = 4; m <= 6; ++m) {
        PoincarePoly p = betti_from_counts(m);
        expect(p == poincare_mbar(m), "interpolation disagrees with the table");
        long long extra = next_prime_ge(200 + m);
        expect(detail::poly_eval_ll(p, extra) == count_closed(extra, m),
               "extra verification prime disagrees");
    }
    return "m = 4, 5, 6 with one extra prime each";
}

// 7. Sampled limits land in the enumeration; both flow routes agree.
std::string flow_membership() {
    long long sampled = 0, maps = 0;
    for (auto [n, r, d] : box(2, 2, 3)) {
        std::set<std::string> keys;
        for (const auto& g : enumerate_graphs(n, r, d)) keys.insert(canonical_form(g).key);
        std::mt19937_64 rng(20260814ull ^ ((unsigned long long)n << 20) ^
                            ((unsigned long long)r << 10) ^ (unsigned long long)d);
        for (int s = 0; s < 1000; ++s) {
            TransversalConfig cfg = random_transversal_config(n, r, d, rng);
            expect(keys.count(canonical_form(limit_graph(cfg, r)).key) == 1,
                   "limit graph escapes the enumeration");
            ++sampled;
        }
        for (int s = 0; s < 200; ++s) {
            ParamMap pm = random_param_map_rational(n, r, d, rng);
            Graph via_poly = limit_from_polynomials(pm).graph;
            Graph via_cfg = limit_graph(config_of_param_map(pm), r);
            expect(canonical_form(via_poly).key == canonical_form(via_cfg).key,
                   "polynomial and configuration routes disagree");
            ++maps;
        }
    }
    return std::to_string(sampled) + " configurations in range, " + std::to_string(maps) +
           " rational maps on both routes";
}

// 8. Every boundary configuration flows to a certified specialization.
std::string boundary_witnesses() {
    const int r = 2;
    long long configs = 0;
    for (long long d = 1; d <= 3; ++d)
        for (const auto& alpha : detail::compositions_of(d)) {
            Graph gamma = gamma_star(alpha, d);
            for (const auto& cfg : enumerate_boundary_configs(alpha, d, 2)) {
                BoundaryFlowResult res = boundary_flow(cfg, gamma, r);
                expect(leq(res.gamma_f, gamma, r), "certified pair fails leq");
                Graph cur = canonical_form(gamma).graph;
                for (const auto& step : res.witness)
                    cur = canonical_form(apply_move(cur, step, r)).graph;
                expect(isomorphic(cur, res.gamma_f), "witness does not replay");
                ++configs;
            }
        }
    return std::to_string(configs) + " boundary configurations at r = 2";
}

// 9. Partition, degree conservation, and dimension homogeneity per term.
std::string gathmann_conservation() {
    long long terms = 0;
    for (int r = 1; r <= 3; ++r)
        for (long long d = 1; d <= 3; ++d)
            for (int len = 1; len <= 3; ++len)
                for (const auto& entries : detail::selftest_alphas(len, d))
                    for (int j = 1; j <= len; ++j) {
                        TangencyVector tv{entries, r, d};
                        long long want = moduli_dim(r, (int)d, len) - tv.total() - 1;
                        for (const auto& term : enumerate_boundary_terms(tv, j)) {
                            std::set<int> seen(term.internal_markings.begin(),
                                               term.internal_markings.end());
                            for (const auto& grp : term.groups)
                                seen.insert(grp.markings.begin(), grp.markings.end());
                            expect((int)seen.size() == len, "markings are not partitioned");
                            expect(std::count(term.internal_markings.begin(),
                                              term.internal_markings.end(), j) == 1,
                                   "marking j left the internal part");
                            long long dsum = term.d0;
                            for (const auto& grp : term.groups) dsum += grp.degree;
                            expect(dsum == d, "degrees do not sum to d");
                            expect(term_dimension(term, tv) == want,
                                   "term dimension off the expected codimension");
                            ++terms;
                        }
                    }
    return std::to_string(terms) + " terms across r <= 3, d <= 3, n <= 3";
}

}  // namespace

int main() {
    criterion(1, "codimension agreement", 10, codimension_agreement);
    criterion(2, "open-cell uniqueness", 10, open_cell_uniqueness);
    criterion(3, "move monotonicity, order", 120, move_monotonicity_and_order);
    criterion(4, "Poincare reproductions", 60, poincare_reproductions);
    criterion(5, "palindromicity", 300, palindromicity);
    criterion(6, "oracle concordance", 30, oracle_concordance);
    criterion(7, "flow membership", 120, flow_membership);
    criterion(8, "boundary-flow witnesses", 120, boundary_witnesses);
    criterion(9, "Gathmann conservation", 30, gathmann_conservation);
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
