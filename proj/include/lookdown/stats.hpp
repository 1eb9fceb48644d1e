#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "lookdown/genealogy.hpp"
#include "lookdown/model.hpp"
#include "lookdown/partition.hpp"
#include "lookdown/random.hpp"
#include "lookdown/rational.hpp"
#include "lookdown/report.hpp"
#include "lookdown/samplers.hpp"

namespace lookdown {

// Descendant bookkeeping for the vertices of one source generation: counts and
// frequencies per later generation, min descendant index, and extinction time.
// Extinction is censored (-1) for lines still alive at the last generation of
// a capped genealogy.
struct DescendantTable {
    int source_generation = 0;
    int horizon = 0;
    std::vector<std::vector<long long>> counts;  // counts[m - n][i]
    std::vector<std::vector<int>> min_descendant;  // -1 when the line is empty
    std::vector<int> extinction;                   // generation of first empty D_m, or -1

    long long count(int m, int i) const {
        return counts[static_cast<std::size_t>(m - source_generation)][static_cast<std::size_t>(i)];
    }
    Rational frequency(int m, int i, const ModelSpec& spec) const {
        return Rational(count(m, i), spec.sizes[static_cast<std::size_t>(m)]);
    }
    bool censored(int i) const { return extinction[static_cast<std::size_t>(i)] < 0; }
};

inline DescendantTable descendant_table(const Genealogy& g, int n, int m_max) {
    require(0 <= n && n <= m_max && m_max < g.generations(), errc::out_of_range,
            "generation window out of range");
    DescendantTable t;
    t.source_generation = n;
    t.horizon = m_max;
    int width = g.size(n);
    std::vector<int> ancestor(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) ancestor[static_cast<std::size_t>(i)] = i;

    t.counts.reserve(static_cast<std::size_t>(m_max - n + 1));
    t.min_descendant.reserve(static_cast<std::size_t>(m_max - n + 1));
    t.extinction.assign(static_cast<std::size_t>(width), -1);

    std::vector<int> current = ancestor;
    for (int m = n; m <= m_max; ++m) {
        std::vector<long long> cnt(static_cast<std::size_t>(width), 0);
        std::vector<int> mins(static_cast<std::size_t>(width), -1);
        for (int j = 0; j < g.size(m); ++j) {
            int a = current[static_cast<std::size_t>(j)];
            ++cnt[static_cast<std::size_t>(a)];
            if (mins[static_cast<std::size_t>(a)] < 0) mins[static_cast<std::size_t>(a)] = j;
        }
        for (int i = 0; i < width; ++i)
            if (cnt[static_cast<std::size_t>(i)] == 0 && t.extinction[static_cast<std::size_t>(i)] < 0)
                t.extinction[static_cast<std::size_t>(i)] = m;
        t.counts.push_back(std::move(cnt));
        t.min_descendant.push_back(std::move(mins));
        if (m < m_max) {
            std::vector<int> next(static_cast<std::size_t>(g.size(m + 1)));
            const auto& par = g.parents[static_cast<std::size_t>(m) + 1];
            for (int j = 0; j < g.size(m + 1); ++j)
                next[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(par[static_cast<std::size_t>(j)])];
            current = std::move(next);
        }
    }
    // A genealogy that truly died out kills every surviving line one step
    // after its last recorded generation.
    if (!g.reached_cap && m_max == g.generations() - 1)
        for (int i = 0; i < width; ++i)
            if (t.extinction[static_cast<std::size_t>(i)] < 0)
                t.extinction[static_cast<std::size_t>(i)] = g.generations();
    return t;
}

// Partition of generation m by common ancestor in generation n.
inline GenerationPartition ancestral_partition(const Genealogy& g, int n, int m) {
    require(0 <= n && n < m && m < g.generations(), errc::out_of_range, "need n < m within the cap");
    std::vector<int> ancestor(static_cast<std::size_t>(g.size(n)));
    for (int i = 0; i < g.size(n); ++i) ancestor[static_cast<std::size_t>(i)] = i;
    std::vector<int> current = ancestor;
    for (int j = n; j < m; ++j) {
        std::vector<int> next(static_cast<std::size_t>(g.size(j + 1)));
        const auto& par = g.parents[static_cast<std::size_t>(j) + 1];
        for (int c = 0; c < g.size(j + 1); ++c)
            next[static_cast<std::size_t>(c)] = current[static_cast<std::size_t>(par[static_cast<std::size_t>(c)])];
        current = std::move(next);
    }
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(g.size(n)));
    for (int c = 0; c < g.size(m); ++c)
        buckets[static_cast<std::size_t>(current[static_cast<std::size_t>(c)])].push_back(c);
    std::vector<std::vector<int>> blocks;
    for (auto& b : buckets)
        if (!b.empty()) blocks.push_back(std::move(b));
    return make_partition(std::move(blocks), g.size(m));
}

struct ConcentrationReport {
    Rational c;                  // probability a uniform pair shares a block
    Rational expected_sb_block;  // mean size of a size-biased block
    Rational lower_bound;        // (1/#blocks - 1/|A|) / (1 - 1/|A|)
    int ground_size = 0;
    int block_count = 0;
};

inline ConcentrationReport concentration(const GenerationPartition& p) {
    require(p.ground_size >= 2, errc::too_small, "need at least two elements");
    ConcentrationReport rep;
    rep.ground_size = p.ground_size;
    rep.block_count = p.block_count();
    BigInt same = 0;
    for (const auto& b : p.blocks) {
        BigInt s = static_cast<long long>(b.size());
        same += s * (s - 1);
    }
    BigInt all = BigInt(p.ground_size) * (p.ground_size - 1);
    rep.c = Rational(same, all);
    rep.expected_sb_block = 1 + Rational(p.ground_size - 1) * rep.c;
    rep.lower_bound = (Rational(1, rep.block_count) - Rational(1, p.ground_size)) /
                      (Rational(1) - Rational(1, p.ground_size));
    return rep;
}

// Per-generation pair-coalescence increments and their partial sums, plus the
// truncated variant that counts only multi-child litters.
struct CoalescentScale {
    std::vector<Rational> s;
    std::vector<Rational> t;        // t[n] = sum of s_0..s_{n-1}; length = s.size() + 1
    std::vector<Rational> s_trunc;
    std::vector<Rational> t_trunc;
    std::vector<int> multi_litters;  // L_n
};

namespace detail {

inline void finish_scale(CoalescentScale& scale) {
    scale.t.assign(1, Rational(0));
    scale.t_trunc.assign(1, Rational(0));
    for (std::size_t n = 0; n < scale.s.size(); ++n) {
        scale.t.push_back(scale.t.back() + scale.s[n]);
        scale.t_trunc.push_back(scale.t_trunc.back() + scale.s_trunc[n]);
    }
}

}  // namespace detail

inline CoalescentScale coalescent_scale(const ModelSpec& spec) {
    CoalescentScale scale;
    for (std::size_t n = 0; n < spec.litters.size(); ++n) {
        long long x1 = spec.sizes[n + 1];
        BigInt num = 0;
        int multi = 0;
        for (int k : spec.litters[n]) {
            num += BigInt(k) * (k - 1);
            if (k >= 2) ++multi;
        }
        BigInt pairs = BigInt(x1) * (x1 - 1);
        scale.s.push_back(x1 < 2 ? Rational(0) : Rational(num, pairs));
        scale.s_trunc.push_back(x1 < 2 ? Rational(0) : Rational(2 * multi, pairs));
        scale.multi_litters.push_back(multi);
    }
    detail::finish_scale(scale);
    return scale;
}

// Closed form for one-birth-per-generation families, evaluated on the stated
// (X_n, b_n) parameters.
inline CoalescentScale asynchronous_scale(const AsynchronousFamily& family) {
    CoalescentScale scale;
    for (int n = 0; n < family.cap(); ++n) {
        long long b = family.births[static_cast<std::size_t>(n)];
        long long x1 = family.sizes[static_cast<std::size_t>(n) + 1];
        BigInt pairs = BigInt(x1) * (x1 - 1);
        scale.s.push_back(x1 < 2 ? Rational(0) : Rational(BigInt(b) * (b - 1), pairs));
        scale.s_trunc.push_back(x1 < 2 || b < 2 ? Rational(0) : Rational(2, pairs));
        scale.multi_litters.push_back(b >= 2 ? 1 : 0);
    }
    detail::finish_scale(scale);
    return scale;
}

inline Rational coalescence_from_increments(const std::vector<Rational>& s, int n, int m) {
    require(0 <= n && n < m && m <= static_cast<int>(s.size()), errc::out_of_range, "need n < m <= cap");
    Rational no_merge = 1;
    for (int j = n; j < m; ++j) no_merge *= Rational(1) - s[static_cast<std::size_t>(j)];
    return Rational(1) - no_merge;
}

// Probability that a uniform pair of distinct generation-m vertices shares an
// ancestor in generation n.
inline Rational pairwise_coalescence_probability(const ModelSpec& spec, int n, int m) {
    return coalescence_from_increments(coalescent_scale(spec).s, n, m);
}

inline EstimateWithCI monte_carlo_coalescence(const ModelSpec& spec, int n, int m, long long reps,
                                              const SeedSpec& seed) {
    require(reps >= 100, errc::insufficient_reps, "need at least 100 replicates");
    require(0 <= n && n < m && m < spec.generations(), errc::out_of_range, "need n < m within the cap");
    require(spec.sizes[static_cast<std::size_t>(m)] >= 2, errc::too_small, "need two vertices to draw a pair");
    long long hits = 0;
    for (long long rep = 0; rep < reps; ++rep) {
        SeedSpec rep_seed = derive_seed(seed, "coalescence/replicate", static_cast<std::uint64_t>(rep));
        Genealogy g = sample_completely_neutral(spec, rep_seed);
        Stream pick = substream(rep_seed, "coalescence/pair");
        int xm = g.size(m);
        int v = pick.uniform_int(xm);
        int w = pick.uniform_int(xm - 1);
        if (w >= v) ++w;
        auto trace = [&](int child) {
            for (int j = m; j > n; --j) child = g.parent_of(j, child);
            return child;
        };
        if (trace(v) == trace(w)) ++hits;
    }
    EstimateWithCI est;
    est.estimate = static_cast<double>(hits) / static_cast<double>(reps);
    est.se = std::sqrt(std::max(est.estimate * (1.0 - est.estimate), 1e-300) / static_cast<double>(reps));
    est.reps = reps;
    est.horizon = m;
    est.seed = seed.root;
    return est;
}

}  // namespace lookdown
