#pragma once

#include <numeric>
#include <vector>

#include "lookdown/genealogy.hpp"
#include "lookdown/model.hpp"
#include "lookdown/partition.hpp"
#include "lookdown/random.hpp"

namespace lookdown {

// Assign children to parents in contiguous index blocks, parents in order.
inline void assign_planar(Genealogy& g, int n, const std::vector<int>& out_degrees) {
    auto& par = g.parents[static_cast<std::size_t>(n) + 1];
    int child = 0;
    for (int i = 0; i < static_cast<int>(out_degrees.size()); ++i)
        for (int c = 0; c < out_degrees[static_cast<std::size_t>(i)]; ++c)
            par[static_cast<std::size_t>(child++)] = i;
}

// Forward neutral sampler: litter sizes are dealt to parents by an independent
// uniform permutation each generation, children laid out planar.
inline Genealogy sample_forward(const ModelSpec& spec, const SeedSpec& seed) {
    Genealogy g = make_genealogy(spec);
    for (int n = 0; n + 1 < spec.generations(); ++n) {
        Stream stream = substream(seed, "forward/sigma", static_cast<std::uint64_t>(n));
        std::vector<int> sigma = stream.permutation(spec.sizes[static_cast<std::size_t>(n)]);
        const auto& k = spec.litters[static_cast<std::size_t>(n)];
        std::vector<int> od(k.size());
        for (std::size_t i = 0; i < k.size(); ++i)
            od[i] = k[static_cast<std::size_t>(sigma[i])];
        assign_planar(g, n, od);
    }
    return g;
}

// Lookdown: scramble the reference sibling partition, order blocks by least
// element, and hand block i to the rank-i parent. Rank 0 always keeps a child.
inline Genealogy build_lookdown(const ModelSpec& spec, const SeedSpec& seed) {
    Genealogy g = make_genealogy(spec);
    for (int n = 0; n + 1 < spec.generations(); ++n) {
        Stream stream = substream(seed, "lookdown/scramble", static_cast<std::uint64_t>(n));
        GenerationPartition xi = consecutive_partition(spec.litters[static_cast<std::size_t>(n)]);
        GenerationPartition blocks = scramble_partition(xi, stream);
        auto& par = g.parents[static_cast<std::size_t>(n) + 1];
        for (int r = 0; r < blocks.block_count(); ++r)
            for (int child : blocks.blocks[static_cast<std::size_t>(r)])
                par[static_cast<std::size_t>(child)] = r;
    }
    return g;
}

inline GenerationPermutation uniform_permutation(const ModelSpec& spec, const SeedSpec& seed,
                                                 std::string_view label) {
    GenerationPermutation out;
    out.perm.resize(spec.sizes.size());
    for (std::size_t n = 0; n < spec.sizes.size(); ++n) {
        Stream stream = Stream(seed.root, label, n);
        out.perm[n] = stream.permutation(spec.sizes[n]);
    }
    return out;
}

// Completely neutral model, realized as a uniform per-generation relabelling
// of the lookdown; the two routes share the same unlabelled law.
inline Genealogy sample_completely_neutral(const ModelSpec& spec, const SeedSpec& seed) {
    Genealogy base = build_lookdown(spec, derive_seed(seed, "cneutral/base"));
    GenerationPermutation sigma =
        uniform_permutation(spec, derive_seed(seed, "cneutral/sigma"), "cneutral/sigma");
    return scramble(base, sigma);
}

}  // namespace lookdown
