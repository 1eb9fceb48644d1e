#pragma once

#include <map>
#include <vector>

#include "lookdown/enumerate.hpp"
#include "lookdown/errors.hpp"
#include "lookdown/partition.hpp"
#include "lookdown/random.hpp"
#include "lookdown/rational.hpp"

namespace lookdown {

// Finite multiset of non-negative weights, addressed by position so that ties
// between equal values stay distinguishable in distribution tests.
struct WeightedMultiset {
    std::vector<Rational> values;

    Rational total() const {
        Rational t = 0;
        for (const auto& v : values) t += v;
        return t;
    }
};

inline WeightedMultiset multiset_from_ints(const std::vector<int>& values) {
    WeightedMultiset s;
    s.values.assign(values.begin(), values.end());
    return s;
}

// Position of a size-biased draw; a zero-total multiset degenerates to a
// uniform position (whose value is necessarily zero).
inline int size_biased_index(const WeightedMultiset& s, Stream& stream) {
    if (s.values.empty()) fail(errc::empty_input, "size-biased sample from empty multiset");
    Rational total = s.total();
    if (total == 0) return stream.uniform_int(static_cast<int>(s.values.size()));
    double u = stream.unit();
    double acc = 0.0;
    double tot = to_double(total);
    for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
        acc += to_double(s.values[i]) / tot;
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(s.values.size()) - 1;
}

inline Rational size_biased_sample(const WeightedMultiset& s, Stream& stream) {
    return s.values[static_cast<std::size_t>(size_biased_index(s, stream))];
}

// Block order produced by sampling the ground set uniformly without
// replacement and listing blocks as they are discovered.
inline std::vector<int> sbo_discovery_order(const GenerationPartition& p, Stream& stream) {
    std::vector<int> block_of(static_cast<std::size_t>(p.ground_size), -1);
    for (int b = 0; b < p.block_count(); ++b)
        for (int x : p.blocks[static_cast<std::size_t>(b)]) block_of[static_cast<std::size_t>(x)] = b;
    std::vector<int> draws = stream.permutation(p.ground_size);
    std::vector<char> seen(p.blocks.size(), 0);
    std::vector<int> order;
    order.reserve(p.blocks.size());
    for (int x : draws) {
        int b = block_of[static_cast<std::size_t>(x)];
        if (!seen[static_cast<std::size_t>(b)]) {
            seen[static_cast<std::size_t>(b)] = 1;
            order.push_back(b);
        }
    }
    return order;
}

// Equivalent route: scramble the ground set, then order blocks by the least
// relabelled element.
inline std::vector<int> sbo_scramble_order(const GenerationPartition& p, Stream& stream) {
    std::vector<int> relabel = stream.permutation(p.ground_size);
    std::vector<std::pair<int, int>> keyed;  // (min image, block index)
    keyed.reserve(p.blocks.size());
    for (int b = 0; b < p.block_count(); ++b) {
        int least = p.ground_size;
        for (int x : p.blocks[static_cast<std::size_t>(b)])
            least = std::min(least, relabel[static_cast<std::size_t>(x)]);
        keyed.emplace_back(least, b);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> order;
    order.reserve(keyed.size());
    for (auto& [least, b] : keyed) order.push_back(b);
    return order;
}

// Blocks of p listed in the given order.
inline std::vector<std::vector<int>> ordered_blocks(const GenerationPartition& p,
                                                    const std::vector<int>& order) {
    std::vector<std::vector<int>> out;
    out.reserve(order.size());
    for (int b : order) out.push_back(p.blocks[static_cast<std::size_t>(b)]);
    return out;
}

// Sequential product law of size-biased ordering over positions: at each step
// the next position is drawn with probability weight / remaining-total, and a
// zero remaining total makes the tail uniform.
inline std::map<std::vector<int>, Rational> exact_sbo_distribution(const WeightedMultiset& s) {
    if (s.values.empty()) fail(errc::empty_input, "empty multiset");
    if (s.values.size() > 9) fail(errc::budget_exceeded, "more than 9 elements");
    std::map<std::vector<int>, Rational> out;
    std::vector<int> prefix;
    std::vector<char> used(s.values.size(), 0);

    std::function<void(const Rational&, const Rational&)> rec = [&](const Rational& acc,
                                                                    const Rational& remaining) {
        if (prefix.size() == s.values.size()) {
            out[prefix] += acc;
            return;
        }
        int left = static_cast<int>(s.values.size() - prefix.size());
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (used[i]) continue;
            Rational step = remaining == 0 ? Rational(1, left) : s.values[i] / remaining;
            if (step == 0) continue;
            used[i] = 1;
            prefix.push_back(static_cast<int>(i));
            rec(acc * step, remaining - s.values[i]);
            prefix.pop_back();
            used[i] = 0;
        }
        // zero-weight positions are reachable only once the positive mass is
        // gone, handled by the uniform branch above; nothing else to do
        if (remaining != 0) return;
    };
    rec(Rational(1), s.total());
    return out;
}

// Exact law of a block ordering produced by either sampling algorithm,
// obtained by enumerating the underlying uniform bijection.
template <class OrderFn>
std::map<std::vector<int>, Rational> enumerate_order_law(const GenerationPartition& p, OrderFn&& order_of) {
    require(p.ground_size <= 9, errc::budget_exceeded, "ground set too large to enumerate");
    std::map<std::vector<int>, Rational> out;
    detail::for_each_permutation(p.ground_size, [&](const std::vector<int>& perm, const Rational& prob) {
        out[order_of(perm)] += prob;
    });
    return out;
}

inline std::map<std::vector<int>, Rational> discovery_law_exact(const GenerationPartition& p) {
    std::vector<int> block_of(static_cast<std::size_t>(p.ground_size), -1);
    for (int b = 0; b < p.block_count(); ++b)
        for (int x : p.blocks[static_cast<std::size_t>(b)]) block_of[static_cast<std::size_t>(x)] = b;
    return enumerate_order_law(p, [&](const std::vector<int>& draws) {
        std::vector<char> seen(p.blocks.size(), 0);
        std::vector<int> order;
        for (int x : draws) {
            int b = block_of[static_cast<std::size_t>(x)];
            if (!seen[static_cast<std::size_t>(b)]) {
                seen[static_cast<std::size_t>(b)] = 1;
                order.push_back(b);
            }
        }
        return order;
    });
}

inline std::map<std::vector<int>, Rational> scramble_law_exact(const GenerationPartition& p) {
    return enumerate_order_law(p, [&](const std::vector<int>& relabel) {
        std::vector<std::pair<int, int>> keyed;
        for (int b = 0; b < p.block_count(); ++b) {
            int least = p.ground_size;
            for (int x : p.blocks[static_cast<std::size_t>(b)])
                least = std::min(least, relabel[static_cast<std::size_t>(x)]);
            keyed.emplace_back(least, b);
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> order;
        for (auto& [least, b] : keyed) order.push_back(b);
        return order;
    });
}

}  // namespace lookdown
