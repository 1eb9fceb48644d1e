#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lookdown/canonical.hpp"
#include "lookdown/genealogy.hpp"
#include "lookdown/model.hpp"
#include "lookdown/rational.hpp"
#include "lookdown/samplers.hpp"

namespace lookdown {

enum class SamplerKind { forward, lookdown, completely_neutral };

inline const char* sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::forward: return "forward";
        case SamplerKind::lookdown: return "lookdown";
        case SamplerKind::completely_neutral: return "completely-neutral";
    }
    return "?";
}

inline SamplerKind sampler_from_name(const std::string& name) {
    if (name == "forward") return SamplerKind::forward;
    if (name == "lookdown") return SamplerKind::lookdown;
    if (name == "completely-neutral") return SamplerKind::completely_neutral;
    fail(errc::validation_error, "unknown sampler '" + name + "'");
}

inline long long default_enum_budget() {
    if (const char* env = std::getenv("LOOKDOWN_ENUM_BUDGET")) {
        long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 10'000'000;
}

// Size of the formal randomness space (a product of factorials), saturating.
inline long double enumeration_cost(const ModelSpec& spec, SamplerKind kind) {
    long double cost = 1.0L;
    auto mul_factorial = [&cost](int n) {
        for (int i = 2; i <= n; ++i) cost = std::min(cost * i, 1e300L);
    };
    int gens = spec.generations();
    for (int n = 0; n + 1 < gens; ++n) {
        if (kind != SamplerKind::lookdown) mul_factorial(spec.sizes[static_cast<std::size_t>(n)]);
        if (kind != SamplerKind::forward) mul_factorial(spec.sizes[static_cast<std::size_t>(n) + 1]);
    }
    if (kind == SamplerKind::completely_neutral)
        mul_factorial(spec.sizes[static_cast<std::size_t>(gens) - 1]);
    return cost;
}

inline void check_budget(const ModelSpec& spec, SamplerKind kind, long long budget) {
    if (enumeration_cost(spec, kind) > static_cast<long double>(budget))
        fail(errc::budget_exceeded, "enumeration space exceeds budget");
}

namespace detail {

// All distinct rearrangements of a multiset, each tagged with its probability
// under a uniform random permutation of the positions.
template <class Fn>
void for_each_distinct_arrangement(std::vector<int> values, Fn&& fn) {
    std::sort(values.begin(), values.end());
    BigInt stabilizer = 1;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        stabilizer *= factorial(static_cast<int>(j - i));
        i = j;
    }
    Rational prob(stabilizer, factorial(static_cast<int>(values.size())));
    do {
        fn(values, prob);
    } while (std::next_permutation(values.begin(), values.end()));
}

template <class Fn>
void for_each_permutation(int n, Fn&& fn) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    Rational prob(1, factorial(n));
    do {
        fn(p, prob);
    } while (std::next_permutation(p.begin(), p.end()));
}

inline BigInt partition_count(int m, const std::vector<int>& sizes) {
    BigInt denom = 1;
    for (int s : sizes) denom *= factorial(s);
    std::vector<int> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        denom *= factorial(static_cast<int>(j - i));
        i = j;
    }
    return factorial(m) / denom;
}

// All set partitions of {0..m-1} with the given block-size multiset (zeros
// ignored). Blocks arrive sorted and listed in order of least element; every
// partition carries equal probability, matching a uniform scramble of a fixed
// reference partition.
template <class Fn>
void for_each_sized_partition(int m, const std::vector<int>& litter_sizes, Fn&& fn) {
    std::vector<int> sizes;
    for (int s : litter_sizes)
        if (s > 0) sizes.push_back(s);
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    Rational prob(1, partition_count(m, sizes));

    std::vector<std::vector<int>> blocks;
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    std::vector<int> remaining = sizes;  // sorted desc

    std::function<void()> rec = [&]() {
        int anchor = -1;
        for (int x = 0; x < m; ++x)
            if (!used[static_cast<std::size_t>(x)]) {
                anchor = x;
                break;
            }
        if (anchor < 0) {
            fn(blocks, prob);
            return;
        }
        std::vector<int> pool;
        for (int x = anchor + 1; x < m; ++x)
            if (!used[static_cast<std::size_t>(x)]) pool.push_back(x);

        int last_size = -1;
        for (std::size_t si = 0; si < remaining.size(); ++si) {
            int s = remaining[si];
            if (s == last_size) continue;  // identical size: same partitions
            last_size = s;
            remaining.erase(remaining.begin() + static_cast<long>(si));

            // choose s-1 pool members to join the anchor
            std::vector<int> pick(static_cast<std::size_t>(std::max(0, s - 1)));
            std::function<void(int, int)> choose = [&](int start, int need) {
                if (need == 0) {
                    std::vector<int> block{anchor};
                    block.insert(block.end(), pick.begin(), pick.end());
                    for (int x : pick) used[static_cast<std::size_t>(x)] = 1;
                    used[static_cast<std::size_t>(anchor)] = 1;
                    blocks.push_back(block);
                    rec();
                    blocks.pop_back();
                    used[static_cast<std::size_t>(anchor)] = 0;
                    for (int x : pick) used[static_cast<std::size_t>(x)] = 0;
                    return;
                }
                for (int idx = start; idx <= static_cast<int>(pool.size()) - need; ++idx) {
                    pick[static_cast<std::size_t>(s - 1 - need)] = pool[static_cast<std::size_t>(idx)];
                    choose(idx + 1, need - 1);
                }
            };
            choose(0, s - 1);

            remaining.insert(remaining.begin() + static_cast<long>(si), s);
        }
    };
    rec();
}

}  // namespace detail

// Enumerate every genealogy the given sampler can produce, with exact
// probabilities (they sum to one).
template <class Fn>
void for_each_genealogy(const ModelSpec& spec, SamplerKind kind, Fn&& fn,
                        long long budget = default_enum_budget()) {
    check_budget(spec, kind, budget);
    int steps = spec.generations() - 1;
    Genealogy g = make_genealogy(spec);

    if (kind == SamplerKind::forward) {
        std::function<void(int, const Rational&)> rec = [&](int n, const Rational& acc) {
            if (n == steps) {
                fn(g, acc);
                return;
            }
            detail::for_each_distinct_arrangement(
                spec.litters[static_cast<std::size_t>(n)], [&](const std::vector<int>& od, const Rational& p) {
                    assign_planar(g, n, od);
                    rec(n + 1, acc * p);
                });
        };
        rec(0, Rational(1));
        return;
    }

    // lookdown edges, optionally followed by a full per-generation scramble
    std::function<void(int, const Rational&)> rec = [&](int n, const Rational& acc) {
        if (n == steps) {
            if (kind == SamplerKind::lookdown) {
                fn(g, acc);
                return;
            }
            std::function<void(int, GenerationPermutation&, const Rational&)> scram =
                [&](int gen, GenerationPermutation& sigma, const Rational& sacc) {
                    if (gen == spec.generations()) {
                        fn(scramble(g, sigma), sacc);
                        return;
                    }
                    detail::for_each_permutation(
                        spec.sizes[static_cast<std::size_t>(gen)],
                        [&](const std::vector<int>& p, const Rational& pp) {
                            sigma.perm[static_cast<std::size_t>(gen)] = p;
                            scram(gen + 1, sigma, sacc * pp);
                        });
                };
            GenerationPermutation sigma = identity_permutation(spec);
            scram(0, sigma, acc);
            return;
        }
        detail::for_each_sized_partition(
            spec.sizes[static_cast<std::size_t>(n) + 1], spec.litters[static_cast<std::size_t>(n)],
            [&](const std::vector<std::vector<int>>& blocks, const Rational& p) {
                auto& par = g.parents[static_cast<std::size_t>(n) + 1];
                for (int r = 0; r < static_cast<int>(blocks.size()); ++r)
                    for (int child : blocks[static_cast<std::size_t>(r)])
                        par[static_cast<std::size_t>(child)] = r;
                rec(n + 1, acc * p);
            });
    };
    rec(0, Rational(1));
}

inline std::map<CanonicalForest, Rational> exact_unlabelled_distribution(
    const ModelSpec& spec, SamplerKind kind, long long budget = default_enum_budget()) {
    // A relabelling never moves the isomorphism class, so the completely
    // neutral law coincides with the lookdown law at the unlabelled level.
    SamplerKind eff = kind == SamplerKind::completely_neutral ? SamplerKind::lookdown : kind;
    check_budget(spec, kind, budget);
    std::map<CanonicalForest, Rational> out;
    for_each_genealogy(
        spec, eff, [&](const Genealogy& g, const Rational& p) { out[canonical_form(g)] += p; }, budget);
    return out;
}

inline std::map<std::string, Rational> exact_labelled_distribution(
    const ModelSpec& spec, SamplerKind kind, long long budget = default_enum_budget()) {
    std::map<std::string, Rational> out;
    for_each_genealogy(
        spec, kind, [&](const Genealogy& g, const Rational& p) { out[g.key()] += p; }, budget);
    return out;
}

// Joint law of the tuple of subtree codes over generation n, coordinate order
// preserved.
inline std::map<std::vector<std::string>, Rational> subtree_tuple_law(
    const ModelSpec& spec, SamplerKind kind, int n, long long budget = default_enum_budget()) {
    std::map<std::vector<std::string>, Rational> out;
    for_each_genealogy(
        spec, kind,
        [&](const Genealogy& g, const Rational& p) { out[subtree_encodings(g, n)] += p; }, budget);
    return out;
}

}  // namespace lookdown
