#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "lookdown/errors.hpp"

namespace lookdown {

// Deterministic skeleton of a genealogy model: population sizes X_n and, for
// every non-terminal generation, the multiset of litter sizes k_n. Litters are
// stored sorted non-increasing; samplers permute them.
struct ModelSpec {
    std::vector<int> sizes;
    std::vector<std::vector<int>> litters;

    int generations() const noexcept { return static_cast<int>(sizes.size()); }

    long long vertex_count() const {
        return std::accumulate(sizes.begin(), sizes.end(), 0ll);
    }

    bool operator==(const ModelSpec&) const = default;
};

struct VertexRef {
    int generation = 0;
    int index = 0;  // 0-based; index 0 is the base path in the lookdown

    bool operator==(const VertexRef&) const = default;
};

inline ModelSpec validate_spec(std::vector<int> sizes, std::vector<std::vector<int>> litters) {
    if (sizes.empty()) fail(errc::empty_generation, "no generations");
    for (std::size_t n = 0; n < sizes.size(); ++n) {
        if (sizes[n] <= 0)
            fail(errc::empty_generation, "X_" + std::to_string(n) + " must be positive");
    }
    if (litters.size() + 1 != sizes.size())
        fail(errc::size_mismatch, "need one litter vector per non-terminal generation");
    for (std::size_t n = 0; n < litters.size(); ++n) {
        auto& k = litters[n];
        if (static_cast<int>(k.size()) != sizes[n])
            fail(errc::size_mismatch, "litter vector length != X_" + std::to_string(n));
        long long total = 0;
        for (int v : k) {
            if (v < 0) fail(errc::validation_error, "negative litter size");
            total += v;
        }
        if (total != sizes[n + 1])
            fail(errc::size_mismatch, "sum k_" + std::to_string(n) + " = " + std::to_string(total) +
                                          " != X_" + std::to_string(n + 1));
        std::sort(k.begin(), k.end(), std::greater<>());
    }
    return ModelSpec{std::move(sizes), std::move(litters)};
}

// Constant-size birth-death chain: one litter of two, one death, per step.
inline ModelSpec moran_spec(int population, int cap) {
    require(population >= 2, errc::validation_error, "moran population must be >= 2");
    require(cap >= 1, errc::validation_error, "cap must be >= 1");
    std::vector<int> sizes(cap + 1, population);
    std::vector<int> litter(population, 1);
    litter.front() = 2;
    litter.back() = 0;
    std::vector<std::vector<int>> litters(cap, litter);
    return validate_spec(std::move(sizes), std::move(litters));
}

// Every individual has exactly `litter` children.
inline ModelSpec synchronous_spec(int x0, int litter, int cap) {
    require(x0 >= 1 && litter >= 1, errc::validation_error, "bad synchronous parameters");
    std::vector<int> sizes(cap + 1);
    std::vector<std::vector<int>> litters(cap);
    long long x = x0;
    for (int n = 0; n <= cap; ++n) {
        require(x <= (1 << 30), errc::budget_exceeded, "population overflow");
        sizes[n] = static_cast<int>(x);
        if (n < cap) litters[n].assign(static_cast<std::size_t>(x), litter);
        x *= litter;
    }
    return validate_spec(std::move(sizes), std::move(litters));
}

// One distinguished birth event per generation, everyone else has one child.
// `idealized` marks families whose (X_n, b_n) are carried as stated parameters
// rather than through the X_{n+1} = X_n + b_n - 1 recursion; their realization
// absorbs the gap into the single large litter.
struct AsynchronousFamily {
    std::vector<long long> sizes;   // X_0 .. X_cap
    std::vector<long long> births;  // b_0 .. b_{cap-1}
    bool idealized = false;

    int cap() const noexcept { return static_cast<int>(births.size()); }

    ModelSpec realize() const {
        std::vector<int> x(sizes.size());
        std::vector<std::vector<int>> litters(births.size());
        for (std::size_t n = 0; n < sizes.size(); ++n) {
            require(sizes[n] >= 1 && sizes[n] <= (1 << 30), errc::validation_error,
                    "population size out of range");
            x[n] = static_cast<int>(sizes[n]);
        }
        for (std::size_t n = 0; n < births.size(); ++n) {
            long long big = sizes[n + 1] - sizes[n] + 1;
            require(big >= 0, errc::validation_error, "population shrinks by more than one");
            auto& k = litters[n];
            k.assign(static_cast<std::size_t>(x[n]), 1);
            if (big == 0) {
                k.back() = 0;  // a lone death
            } else {
                k.front() = static_cast<int>(big);
            }
        }
        return validate_spec(std::move(x), std::move(litters));
    }
};

inline AsynchronousFamily asynchronous_family(long long x0, long long b, int cap) {
    require(b != 1, errc::validation_error, "b = 1 is a no-op generation");
    AsynchronousFamily fam;
    fam.sizes.push_back(x0);
    for (int n = 0; n < cap; ++n) {
        fam.births.push_back(b);
        fam.sizes.push_back(fam.sizes.back() + b - 1);
        require(fam.sizes.back() >= 1, errc::empty_generation, "family dies out before cap");
    }
    return fam;
}

// X_n = 2^n with a single litter of b_n = 2^n: population doubles every step,
// nobody dies, so every line survives forever while no line dominates early.
inline AsynchronousFamily doubling_family(int cap) {
    require(cap >= 1 && cap <= 62, errc::validation_error, "cap out of range");
    AsynchronousFamily fam;
    fam.idealized = true;
    for (int n = 0; n <= cap; ++n) fam.sizes.push_back(1ll << n);
    for (int n = 0; n < cap; ++n) fam.births.push_back(1ll << n);
    return fam;
}

}  // namespace lookdown
