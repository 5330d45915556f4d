#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reparam/forest.hpp"
#include "reparam/monoid.hpp"

namespace reparam {
namespace detail {

/// Subsemigroup of the morphism's codomain, closed under multiplication,
/// with its Green J-structure. Everything here is scoped to the elements of
/// `elems`; products of members stay inside by construction.
struct SubSemigroup {
    std::vector<Element> elems;              // sorted
    std::vector<int> class_of_elem;          // parallel to elems
    std::vector<std::vector<bool>> class_leq;  // class_leq[i][j]: class i <=_J class j
    bool group = false;

    int index_of(Element m) const {
        auto it = std::lower_bound(elems.begin(), elems.end(), m);
        if (it == elems.end() || *it != m)
            throw std::logic_error("element escaped its subsemigroup");
        return static_cast<int>(it - elems.begin());
    }
    int jclass(Element m) const { return class_of_elem[static_cast<std::size_t>(index_of(m))]; }
};

inline std::shared_ptr<SubSemigroup> analyze_subsemigroup(const FiniteMonoid& M,
                                                          std::vector<Element> generators) {
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

    // closure under multiplication
    std::vector<bool> member(M.size(), false);
    std::vector<Element> elems = generators;
    for (Element g : elems)
        member[g] = true;
    for (std::size_t at = 0; at < elems.size(); ++at)
        for (std::size_t b = 0; b < elems.size(); ++b) {
            for (Element p : {M.mul(elems[at], elems[b]), M.mul(elems[b], elems[at])})
                if (!member[p]) {
                    member[p] = true;
                    elems.push_back(p);
                }
        }
    std::sort(elems.begin(), elems.end());

    auto info = std::make_shared<SubSemigroup>();
    info->elems = elems;
    std::size_t n = elems.size();

    // two-sided ideal membership: ideal(y) = {y} ∪ Ty ∪ yT ∪ TyT
    std::vector<std::vector<bool>> in_ideal(n, std::vector<bool>(M.size(), false));
    for (std::size_t y = 0; y < n; ++y) {
        std::vector<Element> left = {elems[y]};
        in_ideal[y][elems[y]] = true;
        for (Element t : elems) {
            Element p = M.mul(t, elems[y]);
            if (!in_ideal[y][p]) {
                in_ideal[y][p] = true;
                left.push_back(p);
            }
        }
        for (Element l : left)
            for (Element t : elems) {
                Element p = M.mul(l, t);
                in_ideal[y][p] = true;
            }
    }
    auto leq = [&](std::size_t x, std::size_t y) { return in_ideal[y][elems[x]]; };

    info->class_of_elem.assign(n, -1);
    std::vector<std::size_t> reps;
    for (std::size_t x = 0; x < n; ++x) {
        if (info->class_of_elem[x] >= 0)
            continue;
        int id = static_cast<int>(reps.size());
        reps.push_back(x);
        info->class_of_elem[x] = id;
        for (std::size_t y = x + 1; y < n; ++y)
            if (info->class_of_elem[y] < 0 && leq(x, y) && leq(y, x))
                info->class_of_elem[y] = id;
    }
    info->class_leq.assign(reps.size(), std::vector<bool>(reps.size(), false));
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j)
            info->class_leq[i][j] = leq(reps[i], reps[j]);

    // finite semigroup is a group iff xT = T = Tx for every x
    info->group = true;
    for (std::size_t x = 0; x < n && info->group; ++x) {
        std::vector<bool> right(M.size(), false), leftm(M.size(), false);
        std::size_t rc = 0, lc = 0;
        for (Element t : elems) {
            Element r = M.mul(elems[x], t);
            Element l = M.mul(t, elems[x]);
            if (!right[r]) {
                right[r] = true;
                ++rc;
            }
            if (!leftm[l]) {
                leftm[l] = true;
                ++lc;
            }
        }
        if (rc != n || lc != n)
            info->group = false;
    }
    return info;
}

/// Deterministic factorization-forest builder. Wide nodes are only created
/// for runs of equal images whose element satisfies the power condition
/// (idempotents, in every case this construction produces), which is checked
/// again at emission; a failed check is an internal error, never an invalid
/// forest.
class ForestBuilder {
public:
    ForestBuilder(const Morphism& mu, std::string_view w) : mu_(mu), word_(w) {}

    Forest build() {
        if (word_.empty())
            throw std::invalid_argument("forests are defined for nonempty words");
        std::vector<Item> items;
        items.reserve(word_.size());
        for (std::size_t p = 0; p < word_.size(); ++p) {
            Forest::Node leaf;
            leaf.letter = word_[p];
            forest_.nodes.push_back(std::move(leaf));
            std::uint32_t id = static_cast<std::uint32_t>(forest_.nodes.size() - 1);
            images_.push_back(mu_.image_of(word_[p], p + 1));
            items.push_back({id, images_.back()});
        }
        forest_.root = seq(items);
        forest_.finalize();
        forest_.images = std::move(images_);
        return std::move(forest_);
    }

private:
    struct Item {
        std::uint32_t node;
        Element img;
    };

    const Morphism& mu_;
    std::string_view word_;
    Forest forest_;
    std::vector<Element> images_;
    std::map<std::vector<Element>, std::shared_ptr<SubSemigroup>> memo_;

    const FiniteMonoid& M() const { return *mu_.monoid; }

    std::shared_ptr<SubSemigroup> semigroup_of(const std::vector<Item>& items) {
        std::vector<Element> gens;
        gens.reserve(items.size());
        for (const Item& it : items)
            gens.push_back(it.img);
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        auto found = memo_.find(gens);
        if (found != memo_.end())
            return found->second;
        auto info = analyze_subsemigroup(M(), gens);
        memo_.emplace(std::move(gens), info);
        return info;
    }

    Item make_node(std::span<const Item> children) {
        if (children.size() < 2)
            throw std::logic_error("builder tried to make a node with < 2 children");
        Element img = children[0].img;
        bool equal = true;
        Forest::Node node;
        for (const Item& c : children) {
            node.children.push_back(c.node);
            if (c.img != children[0].img)
                equal = false;
        }
        if (children.size() >= 3 && (!equal || !power_condition(M(), img)))
            throw std::logic_error("builder produced an illegal wide node");
        Element folded = M().identity();
        for (const Item& c : children)
            folded = M().mul(folded, c.img);
        forest_.nodes.push_back(std::move(node));
        std::uint32_t id = static_cast<std::uint32_t>(forest_.nodes.size() - 1);
        images_.push_back(folded);
        return {id, folded};
    }

    Item binary(Item a, Item b) {
        Item children[2] = {a, b};
        return make_node(children);
    }

    /// Left fold of >= 1 items into one tree with binary nodes.
    Item comb(std::span<const Item> items) {
        Item acc = items[0];
        for (std::size_t i = 1; i < items.size(); ++i)
            acc = binary(acc, items[i]);
        return acc;
    }

    std::uint32_t seq(const std::vector<Item>& items) { return seq_items(items).node; }

    Item seq_items(const std::vector<Item>& items) {
        if (items.size() == 1)
            return items[0];
        if (items.size() == 2)
            return binary(items[0], items[1]);
        bool all_equal = true;
        for (const Item& it : items)
            if (it.img != items[0].img) {
                all_equal = false;
                break;
            }
        if (all_equal && M().is_idempotent(items[0].img))
            return make_node(items);  // one flat wide node
        auto T = semigroup_of(items);
        if (T->group)
            return grp(items);
        if (all_equal)
            return cyclic_chunk(items);
        return jsplit(items, *T);
    }

    /// Group case: split at the positions where the prefix product returns to
    /// the value of the whole product; the infixes between consecutive
    /// returns multiply to the group identity and feed one wide node.
    Item grp(const std::vector<Item>& items) {
        std::size_t n = items.size();
        if (n == 1)
            return items[0];
        if (n == 2)
            return binary(items[0], items[1]);
        std::vector<Element> prefix(n);
        Element acc = M().identity();
        for (std::size_t t = 0; t < n; ++t) {
            acc = M().mul(acc, items[t].img);
            prefix[t] = acc;
        }
        Element total = prefix[n - 1];
        std::vector<std::size_t> returns;
        for (std::size_t t = 0; t < n; ++t)
            if (prefix[t] == total)
                returns.push_back(t);
        if (returns.size() == 1) {
            std::vector<Item> head(items.begin(), items.end() - 1);
            return binary(grp(head), items[n - 1]);
        }
        std::vector<Item> head(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(returns[0] + 1));
        std::vector<Item> block_trees;
        for (std::size_t s = 0; s + 1 < returns.size(); ++s) {
            std::vector<Item> block(items.begin() + static_cast<std::ptrdiff_t>(returns[s] + 1),
                                    items.begin() + static_cast<std::ptrdiff_t>(returns[s + 1] + 1));
            block_trees.push_back(grp(block));
        }
        Item blocks = block_trees.size() >= 3 ? make_node(block_trees) : comb(block_trees);
        return binary(grp(head), blocks);
    }

    /// Equal non-idempotent images g outside any group: chunk into blocks of
    /// q letters where g^q is the idempotent power of g.
    Item cyclic_chunk(const std::vector<Item>& items) {
        Element g = items[0].img;
        std::size_t q = 1;
        Element p = g;
        while (!M().is_idempotent(p)) {
            p = M().mul(p, g);
            ++q;
            if (q > M().size() + 1)
                throw std::logic_error("no idempotent power found");
        }
        std::size_t n = items.size();
        if (n < 2 * q)
            return comb(items);
        std::size_t full = n / q;
        std::vector<Item> blocks;
        for (std::size_t b = 0; b < full; ++b) {
            std::span<const Item> chunk(items.data() + b * q, q);
            blocks.push_back(comb(chunk));
        }
        Item accum = blocks.size() >= 3 ? make_node(blocks) : comb(blocks);
        for (std::size_t i = full * q; i < n; ++i)
            accum = binary(accum, items[i]);
        return accum;
    }

    /// General case: split along a maximal J-class J0 of the item images.
    /// Runs of J0-items are handled by top_run; every low item is glued onto
    /// the run before it, which pushes all glued images strictly below J0,
    /// and the glued sequence recurses into a strictly smaller subsemigroup.
    Item jsplit(const std::vector<Item>& items, const SubSemigroup& T) {
        std::vector<int> item_class;
        item_class.reserve(items.size());
        for (const Item& it : items)
            item_class.push_back(T.jclass(it.img));
        int j0 = -1;
        for (std::size_t i = 0; i < items.size(); ++i) {
            int c = item_class[i];
            bool maximal = true;
            for (int d : item_class)
                if (d != c && T.class_leq[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)]) {
                    maximal = false;
                    break;
                }
            if (maximal) {
                j0 = c;
                break;
            }
        }
        if (j0 < 0)
            throw std::logic_error("no maximal J-class among item images");

        std::vector<Item> glued;
        std::vector<Item> run;
        bool any_low = false;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (item_class[i] == j0) {
                run.push_back(items[i]);
                continue;
            }
            any_low = true;
            if (run.empty()) {
                glued.push_back(items[i]);
            } else {
                Item run_tree = seq_items(run);
                run.clear();
                glued.push_back(binary(run_tree, items[i]));
            }
        }
        if (!any_low)
            return top_run(run, T, j0);
        Item rest = seq_items(glued);
        if (!run.empty())
            rest = binary(rest, seq_items(run));
        return rest;
    }

    /// All items lie in the J-class j0 of T. Cut into maximal segments whose
    /// running product stays in j0 (each segment is then smooth for j0);
    /// adjacent segments multiply strictly below j0, so gluing neighbours
    /// pairwise recurses into a smaller subsemigroup.
    Item top_run(const std::vector<Item>& items, const SubSemigroup& T, int j0) {
        std::vector<std::vector<Item>> segments;
        std::size_t i = 0;
        while (i < items.size()) {
            std::size_t j = i;
            Element acc = items[i].img;
            while (j + 1 < items.size()) {
                Element next = M().mul(acc, items[j + 1].img);
                if (T.jclass(next) != j0)
                    break;
                acc = next;
                ++j;
            }
            segments.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(i),
                                  items.begin() + static_cast<std::ptrdiff_t>(j + 1));
            i = j + 1;
        }
        std::vector<Item> seg_trees;
        seg_trees.reserve(segments.size());
        for (const std::vector<Item>& seg : segments)
            seg_trees.push_back(smooth_top(seg));
        if (seg_trees.size() == 1)
            return seg_trees[0];
        std::vector<Item> pairs;
        for (std::size_t s = 0; s + 1 < seg_trees.size(); s += 2)
            pairs.push_back(binary(seg_trees[s], seg_trees[s + 1]));
        if (seg_trees.size() % 2 == 1)
            pairs.back() = binary(pairs.back(), seg_trees.back());
        return seq_items(pairs);
    }

    /// Smooth segment: every infix product stays inside one J-class. Split at
    /// the positions where the segment-global prefix product returns to its
    /// value at the segment head; the infixes between consecutive returns are
    /// idempotent and multiply as a left-zero family.
    Item smooth_top(const std::vector<Item>& items) {
        std::vector<Element> prefix(items.size());
        Element acc = M().identity();
        for (std::size_t t = 0; t < items.size(); ++t) {
            acc = M().mul(acc, items[t].img);
            prefix[t] = acc;
        }
        return smooth_rec(items, prefix, 0, items.size() - 1);
    }

    Item smooth_rec(const std::vector<Item>& items, const std::vector<Element>& prefix,
                    std::size_t lo, std::size_t hi) {
        if (lo == hi)
            return items[lo];
        Element w = prefix[lo];
        std::vector<std::size_t> returns;
        for (std::size_t t = lo; t <= hi; ++t)
            if (prefix[t] == w)
                returns.push_back(t);

        Item result = items[lo];
        if (returns.size() >= 2) {
            struct Block {
                Item tree;
                Element img;
            };
            std::vector<Block> blocks;
            for (std::size_t s = 0; s + 1 < returns.size(); ++s) {
                std::size_t b_lo = returns[s] + 1, b_hi = returns[s + 1];
                Element img = items[b_lo].img;
                for (std::size_t t = b_lo + 1; t <= b_hi; ++t)
                    img = M().mul(img, items[t].img);
                blocks.push_back({smooth_rec(items, prefix, b_lo, b_hi), img});
            }
            // wide nodes over runs of equal block images
            std::vector<Item> run_trees;
            std::size_t b = 0;
            while (b < blocks.size()) {
                std::size_t e = b;
                while (e + 1 < blocks.size() && blocks[e + 1].img == blocks[b].img)
                    ++e;
                std::vector<Item> run;
                for (std::size_t t = b; t <= e; ++t)
                    run.push_back(blocks[t].tree);
                run_trees.push_back(run.size() >= 3 ? make_node(run)
                                                    : (run.size() == 2 ? binary(run[0], run[1])
                                                                       : run[0]));
                b = e + 1;
            }
            result = binary(result, left_zero_combine(run_trees));
        }
        if (returns.back() < hi)
            result = binary(result, smooth_rec(items, prefix, returns.back() + 1, hi));
        return result;
    }

    /// Combine trees whose images form a left-zero family (xy = x, adjacent
    /// values distinct after run grouping): chunk at each occurrence of the
    /// first value; chunk products all equal that value.
    Item left_zero_combine(const std::vector<Item>& runs) {
        if (runs.size() == 1)
            return runs[0];
        Element c = runs[0].img;
        std::vector<Item> chunks;
        std::size_t i = 0;
        while (i < runs.size()) {
            std::size_t j = i + 1;
            while (j < runs.size() && runs[j].img != c)
                ++j;
            if (j == i + 1)
                chunks.push_back(runs[i]);
            else {
                std::vector<Item> rest(runs.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                       runs.begin() + static_cast<std::ptrdiff_t>(j));
                chunks.push_back(binary(runs[i], left_zero_combine(rest)));
            }
            if (chunks.back().img != c)
                throw std::logic_error("left-zero chunk image drifted");
            i = j;
        }
        return chunks.size() >= 3 ? make_node(chunks)
                                  : (chunks.size() == 2 ? binary(chunks[0], chunks[1]) : chunks[0]);
    }
};

}  // namespace detail

/// Deterministic mu-forest of a nonempty word; validate() accepts the result
/// and the height stays bounded in terms of the codomain monoid alone.
inline Forest build_forest(const Morphism& mu, std::string_view w) {
    detail::ForestBuilder builder(mu, w);
    return builder.build();
}

}  // namespace reparam
