#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "reparam/forest.hpp"

namespace reparam {

/// A node is its own sibling at distance 0 and its own ancestor; otherwise
/// two siblings share a parent and their distance is the absolute index gap.
inline bool siblings_within(const Forest& f, std::uint32_t a, std::uint32_t b,
                            std::size_t distance) {
    if (a == b)
        return true;
    const Forest::Node& na = f.nodes[a];
    const Forest::Node& nb = f.nodes[b];
    if (na.parent < 0 || na.parent != nb.parent)
        return false;
    std::size_t da = na.sibling_index, db = nb.sibling_index;
    return (da > db ? da - db : db - da) <= distance;
}

/// m observes n when n is a sibling at distance at most |M| of an ancestor
/// of m (both relations taken reflexively).
inline bool observes(const Forest& f, std::uint32_t m, std::uint32_t n, std::size_t monoid_size) {
    std::int32_t at = static_cast<std::int32_t>(m);
    while (at >= 0) {
        if (siblings_within(f, static_cast<std::uint32_t>(at), n, monoid_size))
            return true;
        at = f.nodes[static_cast<std::uint32_t>(at)].parent;
    }
    return false;
}

/// At least |M| siblings on each side, itself not counted.
inline bool iterable(const Forest& f, std::uint32_t n, std::size_t monoid_size) {
    const Forest::Node& node = f.nodes[n];
    if (node.parent < 0)
        return false;
    std::size_t sibling_count = f.nodes[static_cast<std::uint32_t>(node.parent)].children.size();
    std::size_t left = node.sibling_index;
    std::size_t right = sibling_count - 1 - node.sibling_index;
    return left >= monoid_size && right >= monoid_size;
}

/// Lowest iterable ancestor (the leaf itself counts), or the root.
inline std::uint32_t anchor(const Forest& f, std::uint32_t leaf, std::size_t monoid_size) {
    if (!f.nodes[leaf].is_leaf())
        throw std::invalid_argument("anchor is defined on leaves");
    std::int32_t at = static_cast<std::int32_t>(leaf);
    while (at >= 0) {
        if (iterable(f, static_cast<std::uint32_t>(at), monoid_size))
            return static_cast<std::uint32_t>(at);
        at = f.nodes[static_cast<std::uint32_t>(at)].parent;
    }
    return f.root;
}

/// Leaf i points to leaf j when the anchor of i observes the anchor of j.
inline bool points_to(const Forest& f, std::uint32_t leaf_i, std::uint32_t leaf_j,
                      std::size_t monoid_size) {
    return observes(f, anchor(f, leaf_i, monoid_size), anchor(f, leaf_j, monoid_size),
                    monoid_size);
}

/// All leaves pointed to by a given leaf, as 1-based word positions.
inline std::vector<std::size_t> pointed_leaves(const Forest& f, std::uint32_t leaf,
                                               std::size_t monoid_size) {
    std::vector<std::size_t> out;
    std::uint32_t a = anchor(f, leaf, monoid_size);
    for (std::size_t p = 1; p <= f.word_length(); ++p) {
        std::uint32_t other = f.leaf_at(p);
        if (observes(f, a, anchor(f, other, monoid_size), monoid_size))
            out.push_back(p);
    }
    return out;
}

/// Graphviz rendering of the points-to relation restricted to a leaf set
/// (1-based positions).
inline std::string points_to_dot(const Forest& f, const std::vector<std::size_t>& positions,
                                 std::size_t monoid_size) {
    std::string out = "digraph points_to {\n";
    for (std::size_t p : positions)
        out += "  p" + std::to_string(p) + " [label=\"" + std::to_string(p) + ":" +
               f.nodes[f.leaf_at(p)].letter + "\"];\n";
    for (std::size_t p : positions)
        for (std::size_t q : positions)
            if (points_to(f, f.leaf_at(p), f.leaf_at(q), monoid_size))
                out += "  p" + std::to_string(p) + " -> p" + std::to_string(q) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace reparam
