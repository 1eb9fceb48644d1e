#pragma once

#include <algorithm>
#include <vector>

#include "lookdown/errors.hpp"
#include "lookdown/random.hpp"

namespace lookdown {

// Partition of {0, ..., ground_size-1} into disjoint non-empty blocks. Each
// block is kept sorted; the block list is kept in order of least element.
struct GenerationPartition {
    std::vector<std::vector<int>> blocks;
    int ground_size = 0;

    int block_count() const noexcept { return static_cast<int>(blocks.size()); }

    std::vector<int> block_sizes() const {
        std::vector<int> out;
        out.reserve(blocks.size());
        for (const auto& b : blocks) out.push_back(static_cast<int>(b.size()));
        return out;
    }

    void normalize() {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
    }

    bool operator==(const GenerationPartition&) const = default;
};

inline GenerationPartition make_partition(std::vector<std::vector<int>> blocks, int ground_size) {
    GenerationPartition p{std::move(blocks), ground_size};
    std::vector<char> seen(static_cast<std::size_t>(ground_size), 0);
    int covered = 0;
    for (auto& b : p.blocks) {
        require(!b.empty(), errc::validation_error, "empty partition block");
        for (int x : b) {
            require(x >= 0 && x < ground_size, errc::out_of_range, "partition element out of range");
            require(!seen[static_cast<std::size_t>(x)], errc::validation_error, "duplicate partition element");
            seen[static_cast<std::size_t>(x)] = 1;
            ++covered;
        }
    }
    require(covered == ground_size, errc::validation_error, "partition does not cover the ground set");
    p.normalize();
    return p;
}

// Reference partition with consecutive blocks matching the given sizes
// (zero entries are skipped).
inline GenerationPartition consecutive_partition(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> blocks;
    int next = 0;
    for (int s : sizes) {
        if (s == 0) continue;
        std::vector<int> b(static_cast<std::size_t>(s));
        for (int j = 0; j < s; ++j) b[static_cast<std::size_t>(j)] = next++;
        blocks.push_back(std::move(b));
    }
    return make_partition(std::move(blocks), next);
}

// Image of a partition under a uniform relabelling of the ground set.
inline GenerationPartition scramble_partition(const GenerationPartition& p, Stream& stream) {
    std::vector<int> relabel = stream.permutation(p.ground_size);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(p.blocks.size());
    for (const auto& b : p.blocks) {
        std::vector<int> nb;
        nb.reserve(b.size());
        for (int x : b) nb.push_back(relabel[static_cast<std::size_t>(x)]);
        blocks.push_back(std::move(nb));
    }
    return make_partition(std::move(blocks), p.ground_size);
}

// Elements assigned to uniform block labels; empty labels dropped, so the
// block count is at most `max_blocks`.
inline GenerationPartition random_partition(int ground_size, int max_blocks, Stream& stream) {
    require(ground_size >= 1 && max_blocks >= 1, errc::validation_error, "bad partition shape");
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(max_blocks));
    for (int x = 0; x < ground_size; ++x)
        buckets[static_cast<std::size_t>(stream.uniform_int(max_blocks))].push_back(x);
    std::vector<std::vector<int>> blocks;
    for (auto& b : buckets)
        if (!b.empty()) blocks.push_back(std::move(b));
    return make_partition(std::move(blocks), ground_size);
}

}  // namespace lookdown
