#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

namespace lookdown {

// Root seed for a whole run. Substreams are derived by mixing the root with a
// label and an index, so replicates and generations can draw independently and
// reproducibly in any order.
struct SeedSpec {
    std::uint64_t root = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

// xoshiro256++ seeded through splitmix64, with unbiased bounded draws.
class Stream {
public:
    Stream(std::uint64_t root, std::string_view label, std::uint64_t index) {
        std::uint64_t state = root ^ detail::fnv1a(label);
        state ^= detail::splitmix64(index);
        for (auto& word : s_) word = detail::splitmix64(state);
    }

    std::uint64_t next() {
        const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    // Unbiased integer in [0, bound) by masked rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = ~0ull >> __builtin_clzll(bound - 1 | 1);
        std::uint64_t draw;
        do {
            draw = next() & mask;
        } while (draw >= bound);
        return draw;
    }

    int uniform_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(values[i - 1], values[j]);
        }
    }

    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        shuffle(p);
        return p;
    }

private:
    std::array<std::uint64_t, 4> s_{};
};

inline Stream substream(const SeedSpec& seed, std::string_view label, std::uint64_t index = 0) {
    return Stream(seed.root, label, index);
}

// Derived root for handing a component its own seed space.
inline SeedSpec derive_seed(const SeedSpec& seed, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t state = seed.root ^ detail::fnv1a(label);
    state ^= detail::splitmix64(index);
    std::uint64_t mixed = detail::splitmix64(state);
    return SeedSpec{mixed};
}

}  // namespace lookdown
