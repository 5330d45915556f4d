#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reparam/monoid.hpp"

namespace reparam {

inline constexpr std::string_view kOpenBracket = "\xE2\x9F\xA8";   // U+27E8 ⟨
inline constexpr std::string_view kCloseBracket = "\xE2\x9F\xA9";  // U+27E9 ⟩

/// Factorization tree over a word: leaves carry single letters, inner nodes
/// have at least two children, and nodes with three or more children must
/// have children of one shared image satisfying the power condition. The
/// arena caches parent/sibling/depth links and 1-based yield intervals;
/// images are attached when a morphism is known.
class Forest {
public:
    struct Node {
        std::int32_t parent = -1;
        std::uint32_t sibling_index = 0;
        std::uint32_t depth = 0;
        std::uint32_t lo = 0, hi = 0;  // yield interval, 1-based inclusive
        char letter = 0;               // leaves only
        std::vector<std::uint32_t> children;

        bool is_leaf() const { return children.empty(); }
    };

    std::vector<Node> nodes;
    std::uint32_t root = 0;
    std::vector<std::uint32_t> leaf_by_position;  // index p-1 -> leaf node id
    std::vector<Element> images;                  // per node; empty when unannotated

    std::size_t word_length() const { return leaf_by_position.size(); }

    std::string word() const {
        std::string w;
        w.reserve(leaf_by_position.size());
        for (std::uint32_t leaf : leaf_by_position)
            w.push_back(nodes[leaf].letter);
        return w;
    }

    std::uint32_t leaf_at(std::size_t position) const {  // 1-based
        if (position < 1 || position > leaf_by_position.size())
            throw std::invalid_argument("position " + std::to_string(position) + " out of range");
        return leaf_by_position[position - 1];
    }

    bool has_images() const { return !images.empty(); }

    /// Child-index path from the root, e.g. "root.2.0".
    std::string path(std::uint32_t node) const {
        std::vector<std::uint32_t> rev;
        for (std::uint32_t at = node; nodes[at].parent >= 0;
             at = static_cast<std::uint32_t>(nodes[at].parent))
            rev.push_back(nodes[at].sibling_index);
        std::string out = "root";
        for (auto it = rev.rbegin(); it != rev.rend(); ++it)
            out += "." + std::to_string(*it);
        return out;
    }

    /// Recompute parent/sibling/depth links, yield intervals and the
    /// per-position leaf table from the children structure alone.
    void finalize() {
        nodes[root].parent = -1;
        nodes[root].sibling_index = 0;
        nodes[root].depth = 0;
        leaf_by_position.clear();
        // iterative DFS; children left to right
        std::vector<std::uint32_t> stack = {root};
        std::vector<std::uint32_t> post;
        while (!stack.empty()) {
            std::uint32_t at = stack.back();
            stack.pop_back();
            post.push_back(at);
            Node& n = nodes[at];
            if (n.is_leaf()) {
                leaf_by_position.push_back(at);
                std::uint32_t pos = static_cast<std::uint32_t>(leaf_by_position.size());
                n.lo = n.hi = pos;
            }
            for (std::size_t c = n.children.size(); c-- > 0;) {
                std::uint32_t child = n.children[c];
                nodes[child].parent = static_cast<std::int32_t>(at);
                nodes[child].sibling_index = static_cast<std::uint32_t>(c);
                nodes[child].depth = n.depth + 1;
                stack.push_back(child);
            }
        }
        // leaf positions were assigned in DFS (= left-to-right) order; fill
        // inner intervals bottom-up over the reversed preorder
        for (auto it = post.rbegin(); it != post.rend(); ++it) {
            Node& n = nodes[*it];
            if (!n.is_leaf()) {
                n.lo = nodes[n.children.front()].lo;
                n.hi = nodes[n.children.back()].hi;
            }
        }
    }
};

/// Maximum bracket nesting: a bare leaf has height 0.
inline std::size_t height(const Forest& f) {
    std::size_t h = 0;
    for (std::uint32_t leaf : f.leaf_by_position)
        h = std::max<std::size_t>(h, f.nodes[leaf].depth);
    return h;
}

namespace detail {

inline void serialize_rec(const Forest& f, std::uint32_t at, std::string_view open,
                          std::string_view close, std::string& out) {
    const Forest::Node& n = f.nodes[at];
    if (n.is_leaf()) {
        out.push_back(n.letter);
        return;
    }
    for (std::uint32_t child : n.children) {
        out += open;
        serialize_rec(f, child, open, close, out);
        out += close;
    }
}

}  // namespace detail

inline std::string serialize(const Forest& f, bool ascii = false) {
    std::string out;
    detail::serialize_rec(f, f.root, ascii ? "<" : kOpenBracket, ascii ? ">" : kCloseBracket, out);
    return out;
}

/// Parse the bracket representation (U+27E8/U+27E9 or the ASCII aliases
/// '<'/'>'). Grammar: Forest := letter | Child Child Child* with
/// Child := '⟨' Forest '⟩'; single-child nodes are rejected.
inline Forest parse_forest(std::string_view text) {
    Forest f;
    std::size_t at = 0;

    auto peek_bracket = [&](bool open) -> bool {
        std::string_view want = open ? kOpenBracket : kCloseBracket;
        if (text.substr(at, want.size()) == want)
            return true;
        return at < text.size() && text[at] == (open ? '<' : '>');
    };
    auto eat_bracket = [&](bool open) {
        std::string_view want = open ? kOpenBracket : kCloseBracket;
        if (text.substr(at, want.size()) == want) {
            at += want.size();
            return;
        }
        if (at < text.size() && text[at] == (open ? '<' : '>')) {
            ++at;
            return;
        }
        throw std::invalid_argument("expected '" + std::string(want) + "' at byte " +
                                    std::to_string(at));
    };

    // returns node id of a Forest parsed at the current position
    auto parse_rec = [&](auto&& self) -> std::uint32_t {
        if (at >= text.size())
            throw std::invalid_argument("unexpected end of forest string");
        if (!peek_bracket(true)) {
            char c = text[at];
            if (peek_bracket(false))
                throw std::invalid_argument("unexpected closing bracket at byte " +
                                            std::to_string(at));
            if (!std::isgraph(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad letter at byte " + std::to_string(at));
            ++at;
            Forest::Node leaf;
            leaf.letter = c;
            f.nodes.push_back(std::move(leaf));
            return static_cast<std::uint32_t>(f.nodes.size() - 1);
        }
        std::vector<std::uint32_t> children;
        while (at < text.size() && peek_bracket(true)) {
            eat_bracket(true);
            children.push_back(self(self));
            eat_bracket(false);
        }
        if (children.size() < 2)
            throw std::invalid_argument("a node must have at least 2 children");
        Forest::Node node;
        node.children = std::move(children);
        f.nodes.push_back(std::move(node));
        return static_cast<std::uint32_t>(f.nodes.size() - 1);
    };

    f.root = parse_rec(parse_rec);
    if (at != text.size())
        throw std::invalid_argument("trailing input after forest at byte " + std::to_string(at));
    f.finalize();
    return f;
}

/// Per-node images computed from the word alone (independently of any cached
/// annotation): leaves map through the morphism, inner nodes fold children.
inline std::vector<Element> annotate(const Morphism& mu, const Forest& f) {
    std::vector<Element> images(f.nodes.size(), mu.monoid->identity());
    // children have larger ids than... not guaranteed; do post-order
    std::vector<std::uint32_t> stack = {f.root};
    std::vector<std::uint32_t> post;
    while (!stack.empty()) {
        std::uint32_t at = stack.back();
        stack.pop_back();
        post.push_back(at);
        for (std::uint32_t child : f.nodes[at].children)
            stack.push_back(child);
    }
    for (auto it = post.rbegin(); it != post.rend(); ++it) {
        const Forest::Node& n = f.nodes[*it];
        if (n.is_leaf()) {
            images[*it] = mu.image_of(n.letter, n.lo);
        } else {
            Element acc = mu.monoid->identity();
            for (std::uint32_t child : n.children)
                acc = mu.monoid->mul(acc, images[child]);
            images[*it] = acc;
        }
    }
    return images;
}

struct ForestViolation {
    std::uint32_t node;
    std::string path;
    std::string what;
};

/// Check every forest invariant against the word: leaves spell w, intervals
/// tile, every inner node has >= 2 children, and wide nodes have equal child
/// images satisfying the power condition. Violations are returned, not
/// thrown; an empty result means the forest is a valid mu-forest for w.
inline std::vector<ForestViolation> validate(const Morphism& mu, const Forest& f,
                                             std::string_view w) {
    std::vector<ForestViolation> out;
    auto report = [&](std::uint32_t node, std::string what) {
        out.push_back({node, f.path(node), std::move(what)});
    };

    if (f.word_length() != w.size()) {
        report(f.root, "yield has length " + std::to_string(f.word_length()) +
                           " but the word has length " + std::to_string(w.size()));
        return out;
    }
    for (std::size_t p = 0; p < w.size(); ++p) {
        const Forest::Node& leaf = f.nodes[f.leaf_by_position[p]];
        if (leaf.letter != w[p])
            report(f.leaf_by_position[p],
                   std::string("leaf reads '") + leaf.letter + "' but the word has '" + w[p] +
                       "' at position " + std::to_string(p + 1));
    }
    if (!out.empty())
        return out;

    std::vector<Element> computed = annotate(mu, f);
    bool aperiodic = is_aperiodic(*mu.monoid);

    for (std::uint32_t at = 0; at < f.nodes.size(); ++at) {
        const Forest::Node& n = f.nodes[at];
        if (n.is_leaf()) {
            if (n.lo != n.hi)
                report(at, "leaf interval is not a single position");
            continue;
        }
        if (n.children.size() < 2)
            report(at, "node has " + std::to_string(n.children.size()) + " child(ren), needs >= 2");
        // contiguity of children intervals
        for (std::size_t c = 0; c + 1 < n.children.size(); ++c)
            if (f.nodes[n.children[c]].hi + 1 != f.nodes[n.children[c + 1]].lo)
                report(at, "child yields do not tile contiguously");
        if (n.lo != f.nodes[n.children.front()].lo || n.hi != f.nodes[n.children.back()].hi)
            report(at, "cached interval differs from the children's span");
        if (n.children.size() >= 3) {
            Element first = computed[n.children.front()];
            bool equal = true;
            for (std::uint32_t child : n.children)
                if (computed[child] != first) {
                    equal = false;
                    break;
                }
            if (!equal) {
                report(at, "unequal child images under a node with >= 3 children");
            } else if (!power_condition(*mu.monoid, first)) {
                if (aperiodic)
                    throw std::logic_error(
                        "aperiodic monoid violates the power condition at element " +
                        mu.monoid->label(first));
                report(at, "child image " + mu.monoid->label(first) +
                               " fails the power condition m^|M| = m^|M|+1");
            }
        }
        if (f.has_images() && f.images[at] != computed[at])
            report(at, "cached image " + mu.monoid->label(f.images[at]) +
                           " differs from recomputed " + mu.monoid->label(computed[at]));
    }
    return out;
}

/// Graphviz rendering; node labels show the yield interval and, when a
/// morphism is given, the mu-image.
inline std::string to_dot(const Forest& f, const Morphism* mu = nullptr) {
    std::vector<Element> images;
    if (mu)
        images = annotate(*mu, f);
    std::ostringstream os;
    os << "digraph forest {\n  node [shape=box];\n";
    for (std::uint32_t at = 0; at < f.nodes.size(); ++at) {
        const Forest::Node& n = f.nodes[at];
        os << "  n" << at << " [label=\"";
        if (n.is_leaf())
            os << n.letter << " @" << n.lo;
        else
            os << "[" << n.lo << "," << n.hi << "]";
        if (mu)
            os << "\\nimage " << mu->monoid->label(images[at]);
        os << "\"];\n";
    }
    for (std::uint32_t at = 0; at < f.nodes.size(); ++at)
        for (std::uint32_t child : f.nodes[at].children)
            os << "  n" << at << " -> n" << child << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace reparam
