#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reparam/monoid.hpp"

namespace reparam {

using State = std::uint32_t;

/// Complete deterministic automaton over letter indices 0..letters-1.
struct Dfa {
    std::size_t letters = 0;
    State start = 0;
    std::vector<State> delta;      // states * letters, row-major
    std::vector<bool> accepting;

    std::size_t states() const { return accepting.size(); }

    State step(State s, std::size_t letter) const { return delta[s * letters + letter]; }

    State run(std::span<const std::uint32_t> word) const {
        State s = start;
        for (std::uint32_t a : word)
            s = step(s, a);
        return s;
    }

    bool accepts(std::span<const std::uint32_t> word) const { return accepting[run(word)]; }

    void check() const {
        if (letters == 0 || states() == 0)
            throw std::invalid_argument("automaton needs at least one state and one letter");
        if (delta.size() != states() * letters)
            throw std::invalid_argument("transition table has wrong shape");
        for (State t : delta)
            if (t >= states())
                throw std::invalid_argument("transition target out of range");
        if (start >= states())
            throw std::invalid_argument("start state out of range");
    }
};

inline Dfa complement(Dfa a) {
    for (std::size_t s = 0; s < a.accepting.size(); ++s)
        a.accepting[s] = !a.accepting[s];
    return a;
}

/// Synchronous product with canonical (breadth-first, letters ascending)
/// state numbering; only reachable pairs are kept.
inline Dfa product(const Dfa& a, const Dfa& b, const std::function<bool(bool, bool)>& combine) {
    if (a.letters != b.letters)
        throw std::invalid_argument("product of automata over different alphabets");
    Dfa out;
    out.letters = a.letters;
    std::map<std::pair<State, State>, State> index;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto [it, fresh] = index.emplace(std::make_pair(x, y), static_cast<State>(pairs.size()));
        if (fresh)
            pairs.emplace_back(x, y);
        return it->second;
    };
    out.start = intern(a.start, b.start);
    for (State at = 0; at < pairs.size(); ++at) {
        auto [x, y] = pairs[at];
        for (std::size_t l = 0; l < out.letters; ++l)
            out.delta.push_back(intern(a.step(x, l), b.step(y, l)));
    }
    out.accepting.resize(pairs.size());
    for (State s = 0; s < pairs.size(); ++s)
        out.accepting[s] = combine(a.accepting[pairs[s].first], b.accepting[pairs[s].second]);
    return out;
}

inline Dfa intersect(const Dfa& a, const Dfa& b) {
    return product(a, b, [](bool x, bool y) { return x && y; });
}

inline Dfa unite(const Dfa& a, const Dfa& b) {
    return product(a, b, [](bool x, bool y) { return x || y; });
}

/// Drops unreachable states (renumbering breadth-first); completeness is kept.
inline Dfa trim_reachable(const Dfa& a) {
    std::vector<State> to_new(a.states(), UINT32_MAX);
    std::vector<State> order;
    to_new[a.start] = 0;
    order.push_back(a.start);
    for (std::size_t at = 0; at < order.size(); ++at)
        for (std::size_t l = 0; l < a.letters; ++l) {
            State t = a.step(order[at], l);
            if (to_new[t] == UINT32_MAX) {
                to_new[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    Dfa out;
    out.letters = a.letters;
    out.start = 0;
    out.accepting.resize(order.size());
    out.delta.reserve(order.size() * a.letters);
    for (State s : order) {
        out.accepting[to_new[s]] = a.accepting[s];
        for (std::size_t l = 0; l < a.letters; ++l)
            out.delta.push_back(to_new[a.step(s, l)]);
    }
    return out;
}

/// Subset construction over letter-indexed nondeterministic transitions,
/// with sorted subsets discovered breadth-first so the numbering is
/// reproducible. `moves(s, l)` must return an ascending state list.
inline Dfa determinize(std::size_t letters, std::span<const State> initial,
                       const std::function<std::vector<State>(State, std::size_t)>& moves,
                       const std::function<bool(State)>& accepting) {
    using Subset = std::vector<State>;
    std::map<Subset, State> index;
    std::vector<Subset> subsets;
    auto intern = [&](Subset s) {
        auto [it, fresh] = index.emplace(std::move(s), static_cast<State>(subsets.size()));
        if (fresh)
            subsets.push_back(it->first);
        return it->second;
    };
    Dfa out;
    out.letters = letters;
    out.start = intern(Subset(initial.begin(), initial.end()));
    for (State at = 0; at < subsets.size(); ++at) {
        Subset current = subsets[at];  // copy: subsets grows below
        for (std::size_t l = 0; l < letters; ++l) {
            Subset next;
            for (State s : current)
                for (State t : moves(s, l))
                    next.push_back(t);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            out.delta.push_back(intern(std::move(next)));
        }
    }
    out.accepting.resize(subsets.size());
    for (State s = 0; s < subsets.size(); ++s)
        for (State q : subsets[s])
            if (accepting(q)) {
                out.accepting[s] = true;
                break;
            }
    return out;
}

inline bool language_empty(const Dfa& a) {
    std::vector<bool> seen(a.states(), false);
    std::queue<State> queue;
    seen[a.start] = true;
    queue.push(a.start);
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop();
        if (a.accepting[s])
            return false;
        for (std::size_t l = 0; l < a.letters; ++l)
            if (State t = a.step(s, l); !seen[t]) {
                seen[t] = true;
                queue.push(t);
            }
    }
    return true;
}

/// State transformations of a DFA, closed under composition. Element 0 is the
/// identity transformation (the image of the empty word); elements are
/// numbered in breadth-first discovery order, letters ascending.
struct TransitionMonoid {
    MonoidPtr monoid;
    std::vector<Element> letter_images;                        // per letter index
    std::vector<std::vector<State>> transformations;           // per element: state -> state
};

inline TransitionMonoid transition_monoid(const Dfa& a) {
    using Transform = std::vector<State>;
    std::map<Transform, Element> index;
    std::vector<Transform> elems;
    std::vector<std::string> labels;
    auto intern = [&](Transform t, const std::string& label) {
        auto [it, fresh] = index.emplace(std::move(t), static_cast<Element>(elems.size()));
        if (fresh) {
            elems.push_back(it->first);
            labels.push_back(label);
        }
        return it->second;
    };

    Transform ident(a.states());
    for (State q = 0; q < a.states(); ++q)
        ident[q] = q;
    intern(std::move(ident), "\xCE\xB5");

    std::vector<Transform> letter_transform(a.letters);
    std::vector<Element> letter_images(a.letters);
    for (std::size_t l = 0; l < a.letters; ++l) {
        Transform t(a.states());
        for (State q = 0; q < a.states(); ++q)
            t[q] = a.step(q, l);
        letter_transform[l] = t;
        letter_images[l] = intern(std::move(t), "g" + std::to_string(l));
    }
    for (Element at = 0; at < elems.size(); ++at) {
        for (std::size_t l = 0; l < a.letters; ++l) {
            Transform t(a.states());
            for (State q = 0; q < a.states(); ++q)
                t[q] = letter_transform[l][elems[at][q]];
            std::string label = at == 0 ? "g" + std::to_string(l) : labels[at] + "g" + std::to_string(l);
            intern(std::move(t), label);
        }
    }

    std::size_t n = elems.size();
    std::vector<Element> table(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            Transform t(a.states());
            for (State q = 0; q < a.states(); ++q)
                t[q] = elems[y][elems[x][q]];  // x first, then y
            auto it = index.find(t);
            if (it == index.end())
                throw std::logic_error("transition monoid closure is not closed");
            table[x * n + y] = it->second;
        }

    TransitionMonoid out;
    out.monoid = std::make_shared<FiniteMonoid>(n, 0, std::move(table), std::move(labels));
    out.letter_images = std::move(letter_images);
    out.transformations = std::move(elems);
    return out;
}

/// Automaton whose letters are characters of a concrete alphabet.
struct CharDfa {
    std::string alphabet;  // sorted, distinct
    Dfa dfa;

    std::size_t letter_index(char c, std::size_t position = 0) const {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), c);
        if (it == alphabet.end() || *it != c) {
            std::string msg = "unknown letter '";
            msg += c;
            msg += "'";
            if (position > 0)
                msg += " at position " + std::to_string(position);
            throw std::invalid_argument(msg);
        }
        return static_cast<std::size_t>(it - alphabet.begin());
    }

    bool accepts(std::string_view word) const {
        State s = dfa.start;
        for (std::size_t i = 0; i < word.size(); ++i)
            s = dfa.step(s, letter_index(word[i], i + 1));
        return dfa.accepting[s];
    }
};

/// Transition monoid of a char automaton, packaged as a morphism. The
/// transformations of the result stay aligned with the morphism's codomain.
struct CharTransitionMonoid {
    Morphism morphism;
    std::vector<std::vector<State>> transformations;
};

inline CharTransitionMonoid char_transition_monoid(const CharDfa& a) {
    TransitionMonoid tm = transition_monoid(a.dfa);
    // relabel generator names with actual letters
    std::vector<std::string> labels = tm.monoid->labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::string fixed;
        std::string_view in = labels[i];
        while (!in.empty()) {
            if (in.size() >= 2 && in[0] == 'g' && std::isdigit(static_cast<unsigned char>(in[1]))) {
                std::size_t j = 1;
                while (j < in.size() && std::isdigit(static_cast<unsigned char>(in[j])))
                    ++j;
                fixed += a.alphabet[std::stoul(std::string(in.substr(1, j - 1)))];
                in.remove_prefix(j);
            } else {
                fixed += in.substr(0, 1);
                in.remove_prefix(1);
            }
        }
        labels[i] = fixed;
    }
    auto monoid = std::make_shared<FiniteMonoid>(tm.monoid->size(), tm.monoid->identity(),
                                                 tm.monoid->table(), std::move(labels));
    std::vector<std::pair<char, Element>> li;
    for (std::size_t l = 0; l < a.alphabet.size(); ++l)
        li.emplace_back(a.alphabet[l], tm.letter_images[l]);
    CharTransitionMonoid out;
    out.morphism = make_morphism(std::move(monoid), li);
    out.transformations = std::move(tm.transformations);
    return out;
}

}  // namespace reparam
