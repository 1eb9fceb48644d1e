#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "lookdown/enumerate.hpp"
#include "lookdown/genealogy.hpp"
#include "lookdown/samplers.hpp"
#include "lookdown/stat_tests.hpp"

namespace lookdown {

// Forward and lookdown realizations tied together edge-by-edge:
// lookdown = sigma(forward), with each sigma_n marginally uniform and
// independent of the forward edges before generation n. The sigma_n are not
// independent across generations, and no diagnostic here pretends they are.
struct CoupledPair {
    Genealogy forward;
    Genealogy lookdown;
    GenerationPermutation sigma;

    bool consistent() const { return scramble(forward, sigma) == lookdown; }
};

// Relabel a forward-neutral draw into the canonical planar layout, one
// generation at a time. alpha_{n+1} is a function of the source edges up to
// generation n only, so the relabelling is adapted: replaying with altered
// later generations leaves earlier alphas unchanged. The auxiliary seed is
// part of the contract but never consumed: given the litter vector, the planar
// target admits exactly one child assignment, so the conditional draw is
// degenerate.
inline std::pair<GenerationPermutation, Genealogy> arrange_coupling(const Genealogy& source,
                                                                    const SeedSpec& /*aux*/) {
    const ModelSpec& spec = source.spec;
    GenerationPermutation alpha = identity_permutation(spec);
    Genealogy arranged = make_genealogy(spec);
    arranged.reached_cap = source.reached_cap;

    for (int n = 0; n + 1 < spec.generations(); ++n) {
        const auto& a_n = alpha.perm[static_cast<std::size_t>(n)];
        std::vector<int> inv(a_n.size());
        for (std::size_t i = 0; i < a_n.size(); ++i)
            inv[static_cast<std::size_t>(a_n[i])] = static_cast<int>(i);

        auto kids = source.children(n);
        std::vector<int> od(a_n.size());
        for (std::size_t i = 0; i < a_n.size(); ++i)
            od[i] = static_cast<int>(kids[static_cast<std::size_t>(inv[i])].size());
        assign_planar(arranged, n, od);

        // order-preserving match of each family onto its planar block
        auto& a_next = alpha.perm[static_cast<std::size_t>(n) + 1];
        int next_slot = 0;
        for (std::size_t i = 0; i < od.size(); ++i) {
            for (int child : kids[static_cast<std::size_t>(inv[i])])
                a_next[static_cast<std::size_t>(child)] = next_slot++;
        }
    }
    return {alpha, scramble(source, alpha)};
}

// Scramble the lookdown by an independent uniform relabelling, arrange the
// result into the planar forward layout, and read off sigma = (alpha o beta)^-1.
inline CoupledPair lookdown_coupling(const ModelSpec& spec, const SeedSpec& seed) {
    CoupledPair pair;
    pair.lookdown = build_lookdown(spec, derive_seed(seed, "coupling/lookdown"));
    GenerationPermutation beta =
        uniform_permutation(spec, derive_seed(seed, "coupling/beta"), "coupling/beta");
    Genealogy scrambled = scramble(pair.lookdown, beta);
    auto [alpha, arranged] = arrange_coupling(scrambled, derive_seed(seed, "coupling/arrange"));
    pair.forward = std::move(arranged);
    pair.sigma = compose(alpha, beta).inverse();
    return pair;
}

// Exact enumeration of the coupling on small specs. The construction is a
// deterministic function of the block partitions, the generation-0
// relabelling, and one bijection per block; those factors are independent and
// uniform, which keeps the state space far smaller than enumerating the raw
// permutations. for_each_coupling_literal enumerates the raw construction and
// exists so tests can confirm the two routes induce the same law.
template <class Fn>
void for_each_coupling(const ModelSpec& spec, Fn&& fn, long long budget = default_enum_budget()) {
    check_budget(spec, SamplerKind::lookdown, budget);
    int steps = spec.generations() - 1;
    Genealogy lkdn = make_genealogy(spec);
    Genealogy fwd = make_genealogy(spec);
    GenerationPermutation pi = identity_permutation(spec);  // pi_n = (alpha o beta)_n

    std::function<void(int, const Rational&)> by_generation = [&](int n, const Rational& acc) {
        if (n == steps) {
            CoupledPair pair{fwd, lkdn, pi.inverse()};
            fn(pair, acc);
            return;
        }
        detail::for_each_sized_partition(
            spec.sizes[static_cast<std::size_t>(n) + 1], spec.litters[static_cast<std::size_t>(n)],
            [&](const std::vector<std::vector<int>>& blocks, const Rational& part_prob) {
                auto& lk_par = lkdn.parents[static_cast<std::size_t>(n) + 1];
                for (int r = 0; r < static_cast<int>(blocks.size()); ++r)
                    for (int child : blocks[static_cast<std::size_t>(r)])
                        lk_par[static_cast<std::size_t>(child)] = r;

                // planar slots for the forward tree at this generation
                std::vector<int> od(static_cast<std::size_t>(spec.sizes[static_cast<std::size_t>(n)]), 0);
                for (int r = 0; r < static_cast<int>(blocks.size()); ++r)
                    od[static_cast<std::size_t>(pi.apply(n, r))] =
                        static_cast<int>(blocks[static_cast<std::size_t>(r)].size());
                assign_planar(fwd, n, od);
                std::vector<int> slot_base(od.size(), 0);
                for (std::size_t i = 1; i < od.size(); ++i)
                    slot_base[i] = slot_base[i - 1] + od[i - 1];

                // one uniform bijection per block onto its planar slots
                std::function<void(std::size_t, const Rational&)> by_block = [&](std::size_t r,
                                                                                 const Rational& bacc) {
                    if (r == blocks.size()) {
                        by_generation(n + 1, bacc);
                        return;
                    }
                    const auto& block = blocks[r];
                    int base = slot_base[static_cast<std::size_t>(pi.apply(n, static_cast<int>(r)))];
                    detail::for_each_permutation(
                        static_cast<int>(block.size()), [&](const std::vector<int>& bij, const Rational& bp) {
                            auto& pi_next = pi.perm[static_cast<std::size_t>(n) + 1];
                            for (std::size_t t = 0; t < block.size(); ++t)
                                pi_next[static_cast<std::size_t>(block[t])] = base + bij[t];
                            by_block(r + 1, bacc * bp);
                        });
                };
                by_block(0, part_prob * acc);
            });
    };

    detail::for_each_permutation(spec.sizes[0], [&](const std::vector<int>& p0, const Rational& p) {
        pi.perm[0] = p0;
        by_generation(0, p);
    });
}

// Raw enumeration of (lookdown randomness, beta) through the sampler path.
template <class Fn>
void for_each_coupling_literal(const ModelSpec& spec, Fn&& fn,
                               long long budget = default_enum_budget()) {
    check_budget(spec, SamplerKind::completely_neutral, budget);
    int gens = spec.generations();
    Genealogy lkdn = make_genealogy(spec);

    std::function<void(int, const Rational&)> lk_rec = [&](int n, const Rational& acc) {
        if (n == gens - 1) {
            GenerationPermutation beta = identity_permutation(spec);
            std::function<void(int, const Rational&)> beta_rec = [&](int m, const Rational& bacc) {
                if (m == gens) {
                    Genealogy scrambled = scramble(lkdn, beta);
                    auto [alpha, arranged] = arrange_coupling(scrambled, SeedSpec{});
                    CoupledPair pair{arranged, lkdn, compose(alpha, beta).inverse()};
                    fn(pair, bacc);
                    return;
                }
                detail::for_each_permutation(spec.sizes[static_cast<std::size_t>(m)],
                                             [&](const std::vector<int>& p, const Rational& pp) {
                                                 beta.perm[static_cast<std::size_t>(m)] = p;
                                                 beta_rec(m + 1, bacc * pp);
                                             });
            };
            beta_rec(0, acc);
            return;
        }
        detail::for_each_sized_partition(
            spec.sizes[static_cast<std::size_t>(n) + 1], spec.litters[static_cast<std::size_t>(n)],
            [&](const std::vector<std::vector<int>>& blocks, const Rational& p) {
                auto& par = lkdn.parents[static_cast<std::size_t>(n) + 1];
                for (int r = 0; r < static_cast<int>(blocks.size()); ++r)
                    for (int child : blocks[static_cast<std::size_t>(r)])
                        par[static_cast<std::size_t>(child)] = r;
                lk_rec(n + 1, acc * p);
            });
    };
    lk_rec(0, Rational(1));
}

// Lehmer code of a permutation, for binning permutations into chi-square cells.
inline long long permutation_index(const std::vector<int>& perm) {
    long long idx = 0;
    int n = static_cast<int>(perm.size());
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (perm[static_cast<std::size_t>(j)] < perm[static_cast<std::size_t>(i)]) ++smaller;
        idx = idx * (n - i) + smaller;
    }
    return idx;
}

struct UniformityDiagnostic {
    TestReport uniformity;    // sigma_n against the uniform law on permutations
    TestReport independence;  // sigma_n against a discretized early-edge statistic
    bool pass(double) const { return !uniformity.reject && !independence.reject; }
};

// samples: (lehmer index of sigma_n, early-edge statistic category).
inline UniformityDiagnostic uniformity_diagnostic(const std::vector<std::pair<long long, int>>& samples,
                                                  long long perm_cells, int stat_cells,
                                                  double alpha = 0.01) {
    require(samples.size() >= 1000, errc::insufficient_samples, "need at least 1000 samples");
    std::vector<long long> counts(static_cast<std::size_t>(perm_cells), 0);
    std::vector<std::vector<long long>> table(static_cast<std::size_t>(perm_cells),
                                              std::vector<long long>(static_cast<std::size_t>(stat_cells), 0));
    for (auto& [perm, stat] : samples) {
        require(perm >= 0 && perm < perm_cells && stat >= 0 && stat < stat_cells, errc::out_of_range,
                "sample category out of range");
        ++counts[static_cast<std::size_t>(perm)];
        ++table[static_cast<std::size_t>(perm)][static_cast<std::size_t>(stat)];
    }
    UniformityDiagnostic diag;
    std::vector<double> uniform(static_cast<std::size_t>(perm_cells), 1.0 / static_cast<double>(perm_cells));
    diag.uniformity = chi_square_gof("sigma-uniformity", counts, uniform, alpha);
    diag.independence = chi_square_independence("sigma-past-independence", table, alpha);
    return diag;
}

}  // namespace lookdown
