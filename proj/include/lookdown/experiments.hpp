#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lookdown/coupling.hpp"
#include "lookdown/enumerate.hpp"
#include "lookdown/stat_tests.hpp"
#include "lookdown/stats.hpp"

namespace lookdown {

template <class Fn>
void for_each_scramble(const ModelSpec& spec, Fn&& fn) {
    GenerationPermutation sigma = identity_permutation(spec);
    std::function<void(int, const Rational&)> rec = [&](int n, const Rational& acc) {
        if (n == spec.generations()) {
            fn(sigma, acc);
            return;
        }
        detail::for_each_permutation(spec.sizes[static_cast<std::size_t>(n)],
                                     [&](const std::vector<int>& p, const Rational& pp) {
                                         sigma.perm[static_cast<std::size_t>(n)] = p;
                                         rec(n + 1, acc * pp);
                                     });
    };
    rec(0, Rational(1));
}

// Optimal probability of recovering the lookdown rank of vertex v from the
// relabelled graph alone: enumerate every (lookdown draw, relabelling) pair,
// group by observed labelled graph, and sum the maximal posterior mass.
inline Rational exact_identification_probability(const ModelSpec& spec, const VertexRef& v,
                                                 long long budget = default_enum_budget()) {
    require(v.generation >= 0 && v.generation < spec.generations(), errc::out_of_range, "bad generation");
    require(v.index >= 0 && v.index < spec.sizes[static_cast<std::size_t>(v.generation)],
            errc::out_of_range, "bad vertex index");
    check_budget(spec, SamplerKind::completely_neutral, budget);

    std::map<std::string, std::map<int, Rational>> joint;  // observed graph -> sigma(v) -> mass
    for_each_genealogy(
        spec, SamplerKind::lookdown,
        [&](const Genealogy& g, const Rational& pg) {
            for_each_scramble(spec, [&](const GenerationPermutation& sigma, const Rational& ps) {
                Genealogy observed = scramble(g, sigma);
                int w = sigma.apply(v.generation, v.index);
                joint[observed.key()][w] += pg * ps;
            });
        },
        budget);

    Rational rho = 0;
    for (auto& [key, posterior] : joint) {
        Rational best = 0;
        for (auto& [w, mass] : posterior) best = std::max(best, mass);
        rho += best;
    }
    return rho;
}

// E[max_v x_m(v)] over generation-n vertices, by exact lookdown enumeration.
inline Rational exact_expected_max_frequency(const ModelSpec& spec, int n, int m,
                                             long long budget = default_enum_budget()) {
    require(0 <= n && n <= m && m < spec.generations(), errc::out_of_range, "bad window");
    Rational mean = 0;
    for_each_genealogy(
        spec, SamplerKind::lookdown,
        [&](const Genealogy& g, const Rational& p) {
            DescendantTable t = descendant_table(g, n, m);
            long long best = 0;
            for (int i = 0; i < g.size(n); ++i) best = std::max(best, t.count(m, i));
            mean += p * Rational(best, spec.sizes[static_cast<std::size_t>(m)]);
        },
        budget);
    return mean;
}

// E[x_m((n, i))] by exact lookdown enumeration.
inline Rational exact_mean_frequency(const ModelSpec& spec, int n, int i, int m,
                                     long long budget = default_enum_budget()) {
    Rational mean = 0;
    for_each_genealogy(
        spec, SamplerKind::lookdown,
        [&](const Genealogy& g, const Rational& p) {
            DescendantTable t = descendant_table(g, n, m);
            mean += p * Rational(t.count(m, i), spec.sizes[static_cast<std::size_t>(m)]);
        },
        budget);
    return mean;
}

// Monte Carlo estimate of E[max_v x_M(v)] under the lookdown, the finite
// horizon stand-in for the base-path identification probability.
inline EstimateWithCI estimate_base_identification(const ModelSpec& spec, int n, int horizon,
                                                   long long reps, const SeedSpec& seed) {
    require(reps >= 100, errc::insufficient_reps, "need at least 100 replicates");
    require(0 <= n && n <= horizon && horizon < spec.generations(), errc::out_of_range, "bad horizon");
    double sum = 0.0, sum_sq = 0.0;
    for (long long rep = 0; rep < reps; ++rep) {
        SeedSpec rep_seed = derive_seed(seed, "identify/replicate", static_cast<std::uint64_t>(rep));
        Genealogy g = build_lookdown(spec, rep_seed);
        DescendantTable t = descendant_table(g, n, horizon);
        long long best = 0;
        for (int i = 0; i < g.size(n); ++i) best = std::max(best, t.count(horizon, i));
        double x = static_cast<double>(best) / static_cast<double>(spec.sizes[static_cast<std::size_t>(horizon)]);
        sum += x;
        sum_sq += x * x;
    }
    EstimateWithCI est;
    est.estimate = sum / static_cast<double>(reps);
    double var = std::max(0.0, sum_sq / static_cast<double>(reps) - est.estimate * est.estimate);
    est.se = std::sqrt(var / static_cast<double>(reps));
    est.reps = reps;
    est.horizon = horizon;
    est.seed = seed.root;
    return est;
}

struct DichotomyRow {
    int n = 0;
    Rational t;
    Rational t_trunc;
    double rho_hat = 0.0;
    double se = 0.0;
};

// Per-generation contrast between elapsed coalescent time and the estimated
// base-path identification probability.
inline std::vector<DichotomyRow> dichotomy_experiment(const ModelSpec& spec,
                                                      const CoalescentScale& scale,
                                                      const std::vector<int>& n_grid, int horizon,
                                                      long long reps, const SeedSpec& seed) {
    std::vector<DichotomyRow> rows;
    for (int n : n_grid) {
        DichotomyRow row;
        row.n = n;
        row.t = scale.t[static_cast<std::size_t>(n)];
        row.t_trunc = scale.t_trunc[static_cast<std::size_t>(n)];
        EstimateWithCI est = estimate_base_identification(
            spec, n, horizon, reps, derive_seed(seed, "dichotomy/n", static_cast<std::uint64_t>(n)));
        row.rho_hat = est.estimate;
        row.se = est.se;
        rows.push_back(row);
    }
    return rows;
}

// Least m such that all but one generation-n line is extinct by m. A genealogy
// that truly died out counts as fixed at the generation the population
// vanished; a capped run with two or more surviving lines reports nothing.
inline std::optional<int> detect_fixation(const Genealogy& g, int n) {
    require(0 <= n && n < g.generations(), errc::out_of_range, "bad generation");
    int width = g.size(n);
    std::vector<int> current(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) current[static_cast<std::size_t>(i)] = i;
    for (int m = n;; ++m) {
        std::vector<char> alive(static_cast<std::size_t>(width), 0);
        int distinct = 0;
        for (int a : current)
            if (!alive[static_cast<std::size_t>(a)]) {
                alive[static_cast<std::size_t>(a)] = 1;
                ++distinct;
            }
        if (distinct <= 1) return m;
        if (m == g.generations() - 1) break;
        std::vector<int> next(static_cast<std::size_t>(g.size(m + 1)));
        const auto& par = g.parents[static_cast<std::size_t>(m) + 1];
        for (int j = 0; j < g.size(m + 1); ++j)
            next[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(par[static_cast<std::size_t>(j)])];
        current = std::move(next);
    }
    if (!g.reached_cap) return g.generations();
    return std::nullopt;
}

struct RankRecoveryRow {
    int generation = 0;
    int total = 0;
    int resolvable = 0;
    int matched = 0;
};

struct RankRecoveryReport {
    std::vector<RankRecoveryRow> rows;
    bool tau_monotone = true;  // lookdown extinction times non-increasing in rank
};

// Infer lookdown ranks of the relabelled (forward) vertices by sorting on
// extinction time, latest first. Censored lines share the time +infinity, so
// they are resolvable only when unique.
inline RankRecoveryReport rank_recovery_by_extinction(const CoupledPair& pair, int max_generation) {
    const long long INF = std::numeric_limits<long long>::max();
    RankRecoveryReport report;
    int last = pair.forward.generations() - 1;
    max_generation = std::min(max_generation, last);
    for (int n = 0; n <= max_generation; ++n) {
        DescendantTable fwd = descendant_table(pair.forward, n, last);
        DescendantTable lkd = descendant_table(pair.lookdown, n, last);
        int width = pair.forward.size(n);

        auto tau_of = [&](const DescendantTable& t, int i) {
            return t.censored(i) ? INF : static_cast<long long>(t.extinction[static_cast<std::size_t>(i)]);
        };
        for (int i = 0; i + 1 < width; ++i)
            if (tau_of(lkd, i) < tau_of(lkd, i + 1)) report.tau_monotone = false;

        RankRecoveryRow row;
        row.generation = n;
        row.total = width;
        std::map<long long, int> multiplicity;
        for (int i = 0; i < width; ++i) ++multiplicity[tau_of(fwd, i)];
        for (int i = 0; i < width; ++i) {
            long long tau = tau_of(fwd, i);
            if (multiplicity[tau] != 1) continue;  // tied, unresolved
            ++row.resolvable;
            int inferred = 0;
            for (int j = 0; j < width; ++j)
                if (tau_of(fwd, j) > tau) ++inferred;
            if (inferred == pair.sigma.apply(n, i)) ++row.matched;
        }
        report.rows.push_back(row);
    }
    return report;
}

// Exact comparison of two rational distributions.
template <class Key>
TestReport distribution_equality_test(const std::string& name, const std::map<Key, Rational>& a,
                                      const std::map<Key, Rational>& b) {
    require(!a.empty() && !b.empty(), errc::unmatched_support, "empty distribution");
    TestReport rep;
    rep.test = name;
    rep.kind = "exact";
    rep.exact_equal = a == b;
    rep.reject = !rep.exact_equal;
    rep.p_value = rep.exact_equal ? 1.0 : 0.0;
    return rep;
}

// Two-sample chi-square over the union support of two empirical counts.
template <class Key>
TestReport distribution_equality_test(const std::string& name, const std::map<Key, long long>& a,
                                      const std::map<Key, long long>& b, double alpha = 0.01) {
    require(!a.empty() && !b.empty(), errc::unmatched_support, "empty sample");
    std::vector<long long> ca, cb;
    std::map<Key, std::pair<long long, long long>> cells;
    for (auto& [k, c] : a) cells[k].first += c;
    for (auto& [k, c] : b) cells[k].second += c;
    for (auto& [k, c] : cells) {
        ca.push_back(c.first);
        cb.push_back(c.second);
    }
    return chi_square_two_sample(name, ca, cb, alpha);
}

}  // namespace lookdown
