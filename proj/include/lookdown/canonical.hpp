#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "lookdown/genealogy.hpp"

namespace lookdown {

// Isomorphism-class encoding of a genealogy under per-generation relabelling:
// each vertex gets the classic nested-parenthesis tree code with children
// sorted lexicographically, and the forest is the sorted multiset of root
// codes. Equal encodings <=> the forests differ only by relabelling.
struct CanonicalForest {
    std::string encoding;

    auto operator<=>(const CanonicalForest&) const = default;
};

// Codes for every vertex of generation n (subtree truncated at the last
// recorded generation).
inline std::vector<std::string> subtree_encodings(const Genealogy& g, int n) {
    int last = g.generations() - 1;
    std::vector<std::vector<std::string>> enc(static_cast<std::size_t>(last + 1));
    enc[static_cast<std::size_t>(last)].assign(static_cast<std::size_t>(g.size(last)), "()");
    for (int m = last - 1; m >= n; --m) {
        auto kids = g.children(m);
        auto& row = enc[static_cast<std::size_t>(m)];
        row.resize(static_cast<std::size_t>(g.size(m)));
        const auto& below = enc[static_cast<std::size_t>(m) + 1];
        for (int i = 0; i < g.size(m); ++i) {
            std::vector<std::string> parts;
            parts.reserve(kids[static_cast<std::size_t>(i)].size());
            for (int c : kids[static_cast<std::size_t>(i)]) parts.push_back(below[static_cast<std::size_t>(c)]);
            std::sort(parts.begin(), parts.end());
            std::string code = "(";
            for (const auto& p : parts) code += p;
            code += ")";
            row[static_cast<std::size_t>(i)] = std::move(code);
        }
    }
    return enc[static_cast<std::size_t>(n)];
}

inline CanonicalForest canonical_form(const Genealogy& g) {
    std::vector<std::string> roots = subtree_encodings(g, 0);
    std::sort(roots.begin(), roots.end());
    std::string out;
    for (const auto& r : roots) out += r;
    return CanonicalForest{std::move(out)};
}

}  // namespace lookdown
