#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lookdown/errors.hpp"
#include "lookdown/model.hpp"

namespace lookdown {

// Layered forest stored as per-generation parent maps. parents[n][i] is the
// parent index of vertex (n, i); parents[0] is empty. Out-edge lists are
// derived views.
struct Genealogy {
    ModelSpec spec;
    std::vector<std::vector<int>> parents;
    bool reached_cap = true;  // false when the population genuinely died out

    int generations() const noexcept { return spec.generations(); }
    int size(int n) const { return spec.sizes[static_cast<std::size_t>(n)]; }

    int parent_of(int n, int i) const { return parents[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]; }

    std::vector<int> out_degrees(int n) const {
        std::vector<int> od(static_cast<std::size_t>(size(n)), 0);
        if (n + 1 < generations())
            for (int p : parents[static_cast<std::size_t>(n) + 1]) ++od[static_cast<std::size_t>(p)];
        return od;
    }

    // Children of each generation-n vertex, in increasing child index.
    std::vector<std::vector<int>> children(int n) const {
        std::vector<std::vector<int>> out(static_cast<std::size_t>(size(n)));
        if (n + 1 < generations()) {
            const auto& par = parents[static_cast<std::size_t>(n) + 1];
            for (int j = 0; j < static_cast<int>(par.size()); ++j)
                out[static_cast<std::size_t>(par[static_cast<std::size_t>(j)])].push_back(j);
        }
        return out;
    }

    bool operator==(const Genealogy& other) const {
        return spec.sizes == other.spec.sizes && parents == other.parents;
    }

    // Compact key for use in enumeration maps.
    std::string key() const {
        std::string out;
        for (int x : spec.sizes) {
            out += std::to_string(x);
            out += ' ';
        }
        out += '|';
        for (std::size_t n = 1; n < parents.size(); ++n) {
            for (int p : parents[n]) {
                out += std::to_string(p);
                out += ' ';
            }
            out += ';';
        }
        return out;
    }
};

inline Genealogy make_genealogy(const ModelSpec& spec) {
    Genealogy g;
    g.spec = spec;
    g.parents.resize(spec.sizes.size());
    for (std::size_t n = 1; n < spec.sizes.size(); ++n)
        g.parents[n].assign(static_cast<std::size_t>(spec.sizes[n]), 0);
    return g;
}

// Per-generation bijection of vertex labels.
struct GenerationPermutation {
    std::vector<std::vector<int>> perm;

    int generations() const noexcept { return static_cast<int>(perm.size()); }
    int apply(int n, int i) const { return perm[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]; }

    GenerationPermutation inverse() const {
        GenerationPermutation out;
        out.perm.resize(perm.size());
        for (std::size_t n = 0; n < perm.size(); ++n) {
            out.perm[n].resize(perm[n].size());
            for (std::size_t i = 0; i < perm[n].size(); ++i)
                out.perm[n][static_cast<std::size_t>(perm[n][i])] = static_cast<int>(i);
        }
        return out;
    }

    bool operator==(const GenerationPermutation&) const = default;
};

inline GenerationPermutation identity_permutation(const ModelSpec& spec) {
    GenerationPermutation out;
    out.perm.resize(spec.sizes.size());
    for (std::size_t n = 0; n < spec.sizes.size(); ++n) {
        out.perm[n].resize(static_cast<std::size_t>(spec.sizes[n]));
        for (int i = 0; i < spec.sizes[n]; ++i) out.perm[n][static_cast<std::size_t>(i)] = i;
    }
    return out;
}

// (a o b): apply b first, then a.
inline GenerationPermutation compose(const GenerationPermutation& a, const GenerationPermutation& b) {
    require(a.perm.size() == b.perm.size(), errc::dimension_mismatch, "permutation generation counts differ");
    GenerationPermutation out;
    out.perm.resize(a.perm.size());
    for (std::size_t n = 0; n < a.perm.size(); ++n) {
        require(a.perm[n].size() == b.perm[n].size(), errc::dimension_mismatch, "permutation sizes differ");
        out.perm[n].resize(a.perm[n].size());
        for (std::size_t i = 0; i < a.perm[n].size(); ++i)
            out.perm[n][i] = a.perm[n][static_cast<std::size_t>(b.perm[n][i])];
    }
    return out;
}

// Relabel every generation: edge (v, w) becomes (sigma(v), sigma(w)).
inline Genealogy scramble(const Genealogy& g, const GenerationPermutation& sigma) {
    require(sigma.generations() == g.generations(), errc::dimension_mismatch,
            "permutation does not cover every generation");
    for (int n = 0; n < g.generations(); ++n)
        require(static_cast<int>(sigma.perm[static_cast<std::size_t>(n)].size()) == g.size(n),
                errc::dimension_mismatch, "permutation size mismatch at generation " + std::to_string(n));
    Genealogy out = make_genealogy(g.spec);
    out.reached_cap = g.reached_cap;
    for (int n = 1; n < g.generations(); ++n) {
        for (int i = 0; i < g.size(n); ++i) {
            int j = sigma.apply(n, i);
            out.parents[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] =
                sigma.apply(n - 1, g.parent_of(n, i));
        }
    }
    return out;
}

inline void write_genealogy(std::ostream& os, const Genealogy& g, const std::vector<int>* spine = nullptr) {
    os << "lookdown-genealogy/v1\n";
    os << "generations " << g.generations() << "\n";
    os << "sizes";
    for (int x : g.spec.sizes) os << ' ' << x;
    os << "\n";
    for (std::size_t n = 0; n < g.spec.litters.size(); ++n) {
        os << "litters " << n;
        for (int k : g.spec.litters[n]) os << ' ' << k;
        os << "\n";
    }
    for (std::size_t n = 1; n < g.parents.size(); ++n) {
        os << "parents " << n;
        for (int p : g.parents[n]) os << ' ' << p;
        os << "\n";
    }
    os << "censored " << (g.reached_cap ? 1 : 0) << "\n";
    if (spine) {
        os << "spine";
        for (int v : *spine) os << ' ' << v;
        os << "\n";
    }
}

inline Genealogy read_genealogy(std::istream& is, std::vector<int>* spine = nullptr) {
    std::string line;
    if (!std::getline(is, line) || line != "lookdown-genealogy/v1")
        fail(errc::parse_error, "missing genealogy version header");
    int gens = 0;
    std::vector<int> sizes;
    std::vector<std::vector<int>> litters;
    std::vector<std::vector<int>> parents;
    bool censored_flag = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "generations") {
            ls >> gens;
            litters.resize(static_cast<std::size_t>(std::max(0, gens - 1)));
            parents.resize(static_cast<std::size_t>(gens));
        } else if (tag == "sizes") {
            int x;
            while (ls >> x) sizes.push_back(x);
        } else if (tag == "litters") {
            std::size_t n;
            ls >> n;
            int k;
            while (ls >> k) litters.at(n).push_back(k);
        } else if (tag == "parents") {
            std::size_t n;
            ls >> n;
            int p;
            while (ls >> p) parents.at(n).push_back(p);
        } else if (tag == "censored") {
            int c;
            ls >> c;
            censored_flag = c != 0;
        } else if (tag == "spine") {
            int v;
            while (ls >> v)
                if (spine) spine->push_back(v);
        } else {
            fail(errc::parse_error, "unknown genealogy line '" + tag + "'");
        }
    }
    Genealogy g;
    g.spec = validate_spec(std::move(sizes), std::move(litters));
    g.parents = std::move(parents);
    g.reached_cap = censored_flag;
    require(static_cast<int>(g.parents.size()) == g.generations(), errc::parse_error,
            "parent rows do not match generation count");
    return g;
}

}  // namespace lookdown
