#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reparam {

using Element = std::uint32_t;

/// Finite monoid over the dense element set {0, ..., size-1}, given by an
/// explicit multiplication table. Construction checks the identity laws and
/// associativity exhaustively and rejects invalid tables, so everything
/// downstream can rely on the algebra silently.
class FiniteMonoid {
public:
    FiniteMonoid(std::size_t size, Element identity, std::vector<Element> table,
                 std::vector<std::string> labels = {})
        : size_(size), identity_(identity), table_(std::move(table)), labels_(std::move(labels)) {
        if (size_ == 0)
            throw std::invalid_argument("monoid must have at least one element");
        if (table_.size() != size_ * size_)
            throw std::invalid_argument("multiplication table has wrong shape");
        for (Element x : table_)
            if (x >= size_)
                throw std::invalid_argument("multiplication table entry out of range");
        if (identity_ >= size_)
            throw std::invalid_argument("identity index out of range");
        for (Element a = 0; a < size_; ++a)
            if (mul(identity_, a) != a || mul(a, identity_) != a)
                throw std::invalid_argument("identity law fails at element " + std::to_string(a));
        for (Element a = 0; a < size_; ++a)
            for (Element b = 0; b < size_; ++b)
                for (Element c = 0; c < size_; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw std::invalid_argument(
                            "associativity fails at (" + std::to_string(a) + ", " +
                            std::to_string(b) + ", " + std::to_string(c) + ")");
        if (labels_.empty()) {
            labels_.reserve(size_);
            for (Element m = 0; m < size_; ++m)
                labels_.push_back("m" + std::to_string(m));
        }
        if (labels_.size() != size_)
            throw std::invalid_argument("label list has wrong length");
    }

    std::size_t size() const { return size_; }
    Element identity() const { return identity_; }

    Element mul(Element a, Element b) const { return table_[a * size_ + b]; }

    /// m^e by iterated multiplication; pow(m, 0) is the identity.
    Element pow(Element m, std::uint64_t e) const {
        Element acc = identity_;
        for (std::uint64_t i = 0; i < e; ++i)
            acc = mul(acc, m);
        return acc;
    }

    bool is_idempotent(Element m) const { return mul(m, m) == m; }

    const std::string& label(Element m) const { return labels_[m]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Element>& table() const { return table_; }

private:
    std::size_t size_;
    Element identity_;
    std::vector<Element> table_;
    std::vector<std::string> labels_;
};

using MonoidPtr = std::shared_ptr<const FiniteMonoid>;

/// m^|M| == m^|M|+1, the power condition wide forest nodes must satisfy.
inline bool power_condition(const FiniteMonoid& monoid, Element m) {
    Element p = monoid.pow(m, monoid.size());
    return p == monoid.mul(p, m);
}

inline bool is_aperiodic(const FiniteMonoid& monoid) {
    for (Element m = 0; m < monoid.size(); ++m)
        if (!power_condition(monoid, m))
            return false;
    return true;
}

/// Morphism from the free monoid over a finite letter alphabet.
struct Morphism {
    MonoidPtr monoid;
    std::string alphabet;          // sorted, distinct letters
    std::vector<Element> images;   // images[i] = image of alphabet[i]

    const FiniteMonoid& codomain() const { return *monoid; }

    bool knows(char letter) const {
        return std::binary_search(alphabet.begin(), alphabet.end(), letter);
    }

    /// Image of one letter; `position` (1-based) is only used in error messages.
    Element image_of(char letter, std::size_t position = 0) const {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), letter);
        if (it == alphabet.end() || *it != letter) {
            std::string msg = "unknown letter '";
            msg += letter;
            msg += "'";
            if (position > 0)
                msg += " at position " + std::to_string(position);
            throw std::invalid_argument(msg);
        }
        return images[static_cast<std::size_t>(it - alphabet.begin())];
    }
};

inline Morphism make_morphism(MonoidPtr monoid,
                              const std::vector<std::pair<char, Element>>& letter_images) {
    Morphism mu;
    mu.monoid = std::move(monoid);
    std::vector<std::pair<char, Element>> sorted = letter_images;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].first == sorted[i + 1].first)
            throw std::invalid_argument(std::string("duplicate letter '") + sorted[i].first + "'");
    for (auto& [letter, image] : sorted) {
        if (image >= mu.monoid->size())
            throw std::invalid_argument("letter image out of range");
        mu.alphabet.push_back(letter);
        mu.images.push_back(image);
    }
    return mu;
}

/// mu(w), folding letter images left to right; mu("") is the identity.
inline Element mul_word(const Morphism& mu, std::string_view word) {
    Element acc = mu.monoid->identity();
    for (std::size_t i = 0; i < word.size(); ++i)
        acc = mu.monoid->mul(acc, mu.image_of(word[i], i + 1));
    return acc;
}

/// Product of morphisms over a shared alphabet, pruned to the submonoid
/// generated by the letter-image tuples. `projections[f]` maps each product
/// element back to its component in factor f.
struct ProductMorphism {
    Morphism morphism;
    std::vector<std::vector<Element>> projections;
};

inline ProductMorphism product_morphism(std::span<const Morphism> factors) {
    if (factors.empty())
        throw std::invalid_argument("product of zero morphisms");
    const std::string& alphabet = factors[0].alphabet;
    for (const Morphism& f : factors)
        if (f.alphabet != alphabet)
            throw std::invalid_argument("morphisms in a product must share one alphabet");

    using Tuple = std::vector<Element>;
    Tuple ident;
    for (const Morphism& f : factors)
        ident.push_back(f.monoid->identity());

    std::map<Tuple, Element> index;
    std::vector<Tuple> elems;
    std::vector<std::string> labels;
    auto intern = [&](const Tuple& t, const std::string& label) {
        auto [it, fresh] = index.emplace(t, static_cast<Element>(elems.size()));
        if (fresh) {
            elems.push_back(t);
            labels.push_back(label);
        }
        return it->second;
    };

    intern(ident, "\xCE\xB5");  // ε
    std::vector<Element> letter_images;
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        Tuple t;
        for (const Morphism& f : factors)
            t.push_back(f.images[a]);
        letter_images.push_back(intern(t, std::string(1, alphabet[a])));
    }
    // breadth-first closure under right multiplication by letters
    for (Element at = 0; at < elems.size(); ++at) {
        for (std::size_t a = 0; a < alphabet.size(); ++a) {
            Tuple t(factors.size());
            for (std::size_t f = 0; f < factors.size(); ++f)
                t[f] = factors[f].monoid->mul(elems[at][f], factors[f].images[a]);
            std::string label = at == 0 ? std::string(1, alphabet[a]) : labels[at] + alphabet[a];
            intern(t, label);
        }
    }

    std::size_t n = elems.size();
    std::vector<Element> table(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            Tuple t(factors.size());
            for (std::size_t f = 0; f < factors.size(); ++f)
                t[f] = factors[f].monoid->mul(elems[x][f], elems[y][f]);
            auto it = index.find(t);
            if (it == index.end())
                throw std::logic_error("product closure is not closed under multiplication");
            table[x * n + y] = it->second;
        }

    ProductMorphism out;
    auto monoid = std::make_shared<FiniteMonoid>(n, 0, std::move(table), std::move(labels));
    std::vector<std::pair<char, Element>> li;
    for (std::size_t a = 0; a < alphabet.size(); ++a)
        li.emplace_back(alphabet[a], letter_images[a]);
    out.morphism = make_morphism(monoid, li);
    out.projections.resize(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
        out.projections[f].resize(n);
        for (std::size_t x = 0; x < n; ++x)
            out.projections[f][x] = elems[x][f];
    }
    return out;
}

}  // namespace reparam
