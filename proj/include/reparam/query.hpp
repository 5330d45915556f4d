#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reparam/marked.hpp"
#include "reparam/monoid.hpp"

namespace reparam {

/// w cut along distinguished positions: w = u_0 a_1 u_1 ... a_k u_k.
struct Decomposition {
    std::vector<std::string> infixes;  // k+1 maximal undistinguished infixes
    std::string letters;               // k distinguished letters
};

/// Cut w at a strictly increasing tuple of 1-based positions.
inline Decomposition decompose(std::string_view w, std::span<const std::size_t> positions) {
    for (std::size_t t = 0; t < positions.size(); ++t) {
        if (positions[t] < 1 || positions[t] > w.size())
            throw std::invalid_argument("position " + std::to_string(positions[t]) +
                                        " out of range 1.." + std::to_string(w.size()));
        if (t > 0 && positions[t] <= positions[t - 1])
            throw std::invalid_argument("positions must be strictly increasing");
    }
    Decomposition d;
    std::size_t from = 0;  // 0-based start of the current infix
    for (std::size_t pos : positions) {
        d.infixes.emplace_back(w.substr(from, pos - 1 - from));
        d.letters.push_back(w[pos - 1]);
        from = pos;
    }
    d.infixes.emplace_back(w.substr(from));
    return d;
}

/// A k-ary query given by a recognizing morphism: satisfaction on (w, i⃗)
/// only depends on the images of the maximal undistinguished infixes and on
/// the distinguished letters, which is exactly what `accept` consumes.
struct RecognizedQuery {
    std::size_t arity = 0;
    Morphism mu;
    // accept(images of u_0..u_k, letters a_1..a_k)
    std::function<bool(std::span<const Element>, std::string_view)> accept;
};

inline bool holds(const RecognizedQuery& q, std::string_view w,
                  std::span<const std::size_t> positions) {
    if (positions.size() != q.arity)
        throw std::invalid_argument("tuple arity mismatch");
    Decomposition d = decompose(w, positions);
    std::vector<Element> images;
    images.reserve(d.infixes.size());
    for (const std::string& u : d.infixes)
        images.push_back(mul_word(q.mu, u));
    return q.accept(images, d.letters);
}

/// Recognizing query of a marked automaton: the morphism is the transition
/// monoid of the unmarked restriction, and acceptance replays the automaton
/// from its start state, alternating infix transformations with the concrete
/// marked-letter transitions.
inline RecognizedQuery from_marked_automaton(const MarkedAutomaton& a) {
    auto shared = std::make_shared<MarkedAutomaton>(a);
    CharTransitionMonoid tm = char_transition_monoid(shared->unmarked());
    auto transforms = std::make_shared<std::vector<std::vector<State>>>(std::move(tm.transformations));
    RecognizedQuery q;
    q.arity = a.arity;
    q.mu = std::move(tm.morphism);
    q.accept = [shared, transforms](std::span<const Element> images, std::string_view letters) {
        State s = shared->dfa.start;
        for (std::size_t t = 0; t < letters.size(); ++t) {
            s = (*transforms)[images[t]][s];
            std::size_t marked = shared->sigma.pack(shared->sigma.base_index(letters[t]),
                                                    std::size_t{1} << t);
            s = shared->dfa.step(s, marked);
        }
        s = (*transforms)[images.back()][s];
        return shared->dfa.accepting[s];
    };
    return q;
}

/// Re-express a query over a product morphism that refines its own: images
/// are projected back to the original codomain before acceptance.
inline RecognizedQuery rebase(const RecognizedQuery& q, const Morphism& product_mu,
                              std::vector<Element> projection) {
    auto proj = std::make_shared<std::vector<Element>>(std::move(projection));
    auto inner = q.accept;
    RecognizedQuery out;
    out.arity = q.arity;
    out.mu = product_mu;
    out.accept = [proj, inner](std::span<const Element> images, std::string_view letters) {
        std::vector<Element> projected;
        projected.reserve(images.size());
        for (Element m : images)
            projected.push_back((*proj)[m]);
        return inner(projected, letters);
    };
    return out;
}

namespace detail {

template <typename Fn>
inline void for_each_increasing_tuple(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> tuple(k);
    for (std::size_t t = 0; t < k; ++t)
        tuple[t] = t + 1;
    if (k == 0) {
        fn(std::span<const std::size_t>(tuple));
        return;
    }
    if (n < k)
        return;
    while (true) {
        fn(std::span<const std::size_t>(tuple));
        std::size_t t = k;
        while (t > 0 && tuple[t - 1] == n - (k - t))
            --t;
        if (t == 0)
            return;
        ++tuple[t - 1];
        for (std::size_t u = t; u < k; ++u)
            tuple[u] = tuple[u - 1] + 1;
    }
}

}  // namespace detail

/// Number of strictly increasing tuples satisfying the query, by plain
/// enumeration. This is the independent oracle the DP engine is checked
/// against.
inline std::uint64_t count_bruteforce(const RecognizedQuery& q, std::string_view w) {
    std::uint64_t count = 0;
    detail::for_each_increasing_tuple(w.size(), q.arity, [&](std::span<const std::size_t> tuple) {
        if (holds(q, w, tuple))
            ++count;
    });
    return count;
}

}  // namespace reparam
