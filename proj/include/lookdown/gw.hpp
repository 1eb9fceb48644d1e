#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lookdown/coupling.hpp"
#include "lookdown/genealogy.hpp"
#include "lookdown/random.hpp"
#include "lookdown/rational.hpp"

namespace lookdown {

// Offspring law with finite support and exact rational masses.
struct OffspringDistribution {
    std::vector<Rational> pmf;  // pmf[k] = P(k children)

    int max_children() const noexcept { return static_cast<int>(pmf.size()) - 1; }

    Rational mean() const {
        Rational mu = 0;
        for (std::size_t k = 1; k < pmf.size(); ++k) mu += Rational(static_cast<long long>(k)) * pmf[k];
        return mu;
    }

    std::vector<Rational> size_biased() const {
        Rational mu = mean();
        if (mu == 0) fail(errc::degenerate_mean, "offspring mean is zero");
        std::vector<Rational> out(pmf.size(), Rational(0));
        for (std::size_t k = 1; k < pmf.size(); ++k)
            out[k] = Rational(static_cast<long long>(k)) * pmf[k] / mu;
        return out;
    }

    // sum of k log+(k) p_k, the classical spine-identifiability gauge
    double k_log_k_sum() const {
        double total = 0.0;
        for (std::size_t k = 2; k < pmf.size(); ++k)
            total += static_cast<double>(k) * std::log(static_cast<double>(k)) * to_double(pmf[k]);
        return total;
    }
};

inline OffspringDistribution make_offspring(std::vector<Rational> pmf) {
    require(!pmf.empty(), errc::validation_error, "empty pmf");
    Rational total = 0;
    for (const auto& p : pmf) {
        require(p >= 0, errc::validation_error, "negative probability");
        total += p;
    }
    require(total == 1, errc::validation_error, "pmf must sum to 1, got " + to_string(total));
    return OffspringDistribution{std::move(pmf)};
}

inline OffspringDistribution binary_offspring(const Rational& p_zero) {
    return make_offspring({p_zero, Rational(0), Rational(1) - p_zero});
}

// p_k proportional to k^-exponent on {1..max_k}; a finite-support stand-in for
// heavy-tailed laws, useful only for truncation-trend experiments.
inline OffspringDistribution truncated_zipf(int exponent, int max_k) {
    require(exponent >= 1 && max_k >= 1, errc::validation_error, "bad zipf parameters");
    std::vector<Rational> pmf(static_cast<std::size_t>(max_k) + 1, Rational(0));
    Rational norm = 0;
    for (int k = 1; k <= max_k; ++k) {
        BigInt den = 1;
        for (int e = 0; e < exponent; ++e) den *= k;
        pmf[static_cast<std::size_t>(k)] = Rational(1, den);
        norm += pmf[static_cast<std::size_t>(k)];
    }
    for (auto& p : pmf) p /= norm;
    return OffspringDistribution{std::move(pmf)};
}

namespace detail {

inline int draw_from_pmf(const std::vector<Rational>& pmf, Stream& stream) {
    double u = stream.unit();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
        acc += to_double(pmf[k]);
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(pmf.size()) - 1;
}

inline Genealogy genealogy_from_layers(const std::vector<std::vector<int>>& litters_in_order,
                                       bool reached_cap) {
    std::vector<int> sizes;
    sizes.push_back(litters_in_order.empty() ? 1 : static_cast<int>(litters_in_order.front().size()));
    std::vector<std::vector<int>> sorted;
    for (const auto& k : litters_in_order) {
        long long next = 0;
        for (int v : k) next += v;
        sizes.push_back(static_cast<int>(next));
        auto s = k;
        std::sort(s.begin(), s.end(), std::greater<>());
        sorted.push_back(std::move(s));
    }
    Genealogy g = make_genealogy(validate_spec(std::move(sizes), std::move(sorted)));
    g.reached_cap = reached_cap;
    for (std::size_t n = 0; n < litters_in_order.size(); ++n)
        assign_planar(g, static_cast<int>(n), litters_in_order[n]);
    return g;
}

}  // namespace detail

// Galton-Watson tree to the given cap: i.i.d. out-degrees, children laid out
// in contiguous blocks. Stops early when the population dies.
inline Genealogy sample_gw(const OffspringDistribution& d, const SeedSpec& seed, int cap) {
    require(cap >= 1, errc::validation_error, "cap must be >= 1");
    std::vector<std::vector<int>> layers;
    int x = 1;
    bool alive = true;
    for (int n = 0; n < cap && alive; ++n) {
        Stream stream = substream(seed, "gw/litters", static_cast<std::uint64_t>(n));
        std::vector<int> k(static_cast<std::size_t>(x));
        long long next = 0;
        for (auto& v : k) {
            v = detail::draw_from_pmf(d.pmf, stream);
            next += v;
        }
        if (next == 0) {
            alive = false;
            break;
        }
        layers.push_back(std::move(k));
        x = static_cast<int>(next);
    }
    return detail::genealogy_from_layers(layers, alive);
}

// Galton-Watson tree with a distinguished never-dying path whose litters are
// size-biased; everyone off the path reproduces by the plain law.
struct SpinalTree {
    Genealogy genealogy;
    std::vector<int> spine;  // one vertex index per generation

    std::string key() const {
        std::string out = genealogy.key();
        out += '#';
        for (int v : spine) {
            out += std::to_string(v);
            out += ' ';
        }
        return out;
    }
};

inline SpinalTree sample_spinal(const OffspringDistribution& d, const SeedSpec& seed, int cap) {
    require(cap >= 1, errc::validation_error, "cap must be >= 1");
    std::vector<Rational> biased = d.size_biased();
    std::vector<std::vector<int>> layers;
    std::vector<int> spine{0};
    int x = 1;
    for (int n = 0; n < cap; ++n) {
        Stream stream = substream(seed, "spinal/litters", static_cast<std::uint64_t>(n));
        std::vector<int> k(static_cast<std::size_t>(x));
        int spine_at = spine.back();
        for (int i = 0; i < x; ++i)
            k[static_cast<std::size_t>(i)] =
                detail::draw_from_pmf(i == spine_at ? biased : d.pmf, stream);
        int before = 0;
        for (int i = 0; i < spine_at; ++i) before += k[static_cast<std::size_t>(i)];
        int litter = k[static_cast<std::size_t>(spine_at)];
        Stream pick = substream(seed, "spinal/next", static_cast<std::uint64_t>(n));
        spine.push_back(before + pick.uniform_int(litter));
        long long next = 0;
        for (int v : k) next += v;
        layers.push_back(std::move(k));
        x = static_cast<int>(next);
    }
    return SpinalTree{detail::genealogy_from_layers(layers, true), std::move(spine)};
}

// Profiles of population sizes and sorted litter multisets, with exact GW
// probabilities. Extinct branches are reported with alive=false.
template <class Fn>
void for_each_gw_profile(const OffspringDistribution& d, int cap, Fn&& fn,
                         long long budget = default_enum_budget()) {
    std::vector<std::vector<int>> litters;
    std::vector<int> sizes{1};
    long long visited = 0;

    std::function<void(int, const Rational&)> rec = [&](int n, const Rational& acc) {
        if (++visited > budget) fail(errc::budget_exceeded, "profile enumeration exceeds budget");
        if (n == cap) {
            fn(sizes, litters, true, acc);
            return;
        }
        int x = sizes.back();
        // counts per offspring value, highest value first so litters come out sorted
        std::vector<int> counts(d.pmf.size(), 0);
        std::function<void(int, int, const Rational&)> choose = [&](int k, int left, const Rational& p) {
            if (p == 0) return;
            if (k < 0) {
                if (left != 0) return;
                std::vector<int> litter;
                long long next = 0;
                for (int v = static_cast<int>(d.pmf.size()) - 1; v >= 0; --v)
                    for (int c = 0; c < counts[static_cast<std::size_t>(v)]; ++c) {
                        litter.push_back(v);
                        next += v;
                    }
                // multinomial weight for this multiset
                BigInt arrangements = factorial(x);
                for (int c : counts) arrangements /= factorial(c);
                Rational weight = p * Rational(arrangements);
                litters.push_back(std::move(litter));
                sizes.push_back(static_cast<int>(next));
                if (next == 0)
                    fn(sizes, litters, false, acc * weight);
                else
                    rec(n + 1, acc * weight);
                sizes.pop_back();
                litters.pop_back();
                return;
            }
            Rational pk = 1;
            for (int c = 0; c <= left; ++c) {
                counts[static_cast<std::size_t>(k)] = c;
                choose(k - 1, left - c, p * pk);
                pk *= d.pmf[static_cast<std::size_t>(k)];
            }
            counts[static_cast<std::size_t>(k)] = 0;
        };
        choose(static_cast<int>(d.pmf.size()) - 1, x, Rational(1));
    };
    rec(0, Rational(1));
}

// Spine sampled through the lookdown: draw a tree from the size-biased law by
// exact weighting at the cap, couple it to its lookdown, and follow the
// preimage of rank 0.
inline SpinalTree spine_via_lookdown(const OffspringDistribution& d, const SeedSpec& seed, int cap,
                                     long long budget = default_enum_budget()) {
    require(cap >= 1 && cap <= 6, errc::budget_exceeded, "exact weighting route needs a small cap");
    Rational mu = d.mean();
    if (mu == 0) fail(errc::degenerate_mean, "offspring mean is zero");
    Rational mu_pow = 1;
    for (int n = 0; n < cap; ++n) mu_pow *= mu;

    std::vector<ModelSpec> specs;
    std::vector<Rational> weights;
    Rational total = 0;
    for_each_gw_profile(
        d, cap,
        [&](const std::vector<int>& sizes, const std::vector<std::vector<int>>& litters, bool alive,
            const Rational& prob) {
            if (!alive) return;
            Rational w = prob * Rational(sizes.back()) / mu_pow;
            specs.push_back(validate_spec(sizes, litters));
            weights.push_back(w);
            total += w;
        },
        budget);
    // E[X_cap / mu^cap] = 1, so the weights normalize exactly.
    require(total == 1, errc::validation_error, "size-biased weights do not normalize");

    Stream pick = substream(seed, "spine-lookdown/profile");
    double u = pick.unit();
    std::size_t chosen = weights.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += to_double(weights[i]);
        if (u < acc) {
            chosen = i;
            break;
        }
    }
    CoupledPair pair = lookdown_coupling(specs[chosen], derive_seed(seed, "spine-lookdown/coupling"));
    GenerationPermutation inv = pair.sigma.inverse();
    std::vector<int> spine;
    spine.reserve(inv.perm.size());
    for (auto& p : inv.perm) spine.push_back(p.front());
    return SpinalTree{pair.forward, std::move(spine)};
}

// Exact restricted law of (tree, spine) for the direct spinal construction.
inline std::map<std::string, Rational> spinal_law_exact(const OffspringDistribution& d, int cap,
                                                        long long budget = default_enum_budget()) {
    std::vector<Rational> biased = d.size_biased();
    std::map<std::string, Rational> law;
    std::vector<std::vector<int>> layers;
    std::vector<int> spine{0};
    long long visited = 0;

    std::function<void(int, int, const Rational&)> rec = [&](int n, int x, const Rational& acc) {
        if (++visited > budget) fail(errc::budget_exceeded, "spinal enumeration exceeds budget");
        if (n == cap) {
            law[SpinalTree{detail::genealogy_from_layers(layers, true), spine}.key()] += acc;
            return;
        }
        int spine_at = spine.back();
        std::vector<int> k(static_cast<std::size_t>(x), 0);
        std::function<void(int, const Rational&)> assign = [&](int i, const Rational& p) {
            if (p == 0) return;
            if (i == x) {
                int before = 0;
                for (int j = 0; j < spine_at; ++j) before += k[static_cast<std::size_t>(j)];
                int litter = k[static_cast<std::size_t>(spine_at)];
                long long next = 0;
                for (int v : k) next += v;
                layers.push_back(k);
                for (int c = 0; c < litter; ++c) {
                    spine.push_back(before + c);
                    rec(n + 1, static_cast<int>(next), p / litter);
                    spine.pop_back();
                }
                layers.pop_back();
                return;
            }
            const auto& pmf = i == spine_at ? biased : d.pmf;
            for (int v = 0; v < static_cast<int>(pmf.size()); ++v) {
                if (pmf[static_cast<std::size_t>(v)] == 0) continue;
                k[static_cast<std::size_t>(i)] = v;
                assign(i + 1, p * pmf[static_cast<std::size_t>(v)]);
            }
            k[static_cast<std::size_t>(i)] = 0;
        };
        assign(0, acc);
    };
    rec(0, 1, Rational(1));
    return law;
}

// Exact restricted law of (tree, spine) through the size-biased lookdown route.
inline std::map<std::string, Rational> lookdown_spine_law_exact(const OffspringDistribution& d, int cap,
                                                                long long budget = default_enum_budget()) {
    Rational mu = d.mean();
    if (mu == 0) fail(errc::degenerate_mean, "offspring mean is zero");
    Rational mu_pow = 1;
    for (int n = 0; n < cap; ++n) mu_pow *= mu;
    std::map<std::string, Rational> law;
    for_each_gw_profile(
        d, cap,
        [&](const std::vector<int>& sizes, const std::vector<std::vector<int>>& litters, bool alive,
            const Rational& prob) {
            if (!alive) return;
            Rational weight = prob * Rational(sizes.back()) / mu_pow;
            ModelSpec spec = validate_spec(sizes, litters);
            for_each_coupling(
                spec,
                [&](const CoupledPair& pair, const Rational& p) {
                    GenerationPermutation inv = pair.sigma.inverse();
                    std::vector<int> spine;
                    spine.reserve(inv.perm.size());
                    for (auto& q : inv.perm) spine.push_back(q.front());
                    law[SpinalTree{pair.forward, std::move(spine)}.key()] += weight * p;
                },
                budget);
        },
        budget);
    return law;
}

struct SpineDiagnostics {
    Rational mu;
    double k_log_k = 0.0;
    std::string regime;  // "fixation", "non-identifiable", or "dominant-spine"
    bool heavy_tail_unreachable = true;
};

// Regime prediction for the spine: subcritical or critical growth fixes;
// supercritical growth with a light tail hides the spine. A genuinely heavy
// tail (infinite k log k sum) cannot occur at finite support, so the
// dominant-spine regime is only ever flagged as unreachable here.
inline SpineDiagnostics spine_diagnostics(const OffspringDistribution& d) {
    SpineDiagnostics out;
    out.mu = d.mean();
    out.k_log_k = d.k_log_k_sum();
    out.regime = out.mu <= 1 ? "fixation" : "non-identifiable";
    out.heavy_tail_unreachable = true;
    return out;
}

}  // namespace lookdown
