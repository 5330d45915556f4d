#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reparam/dfa.hpp"

namespace reparam {

/// Marked alphabet for k-ary queries: pairs (letter, mask) where bit t-1 of
/// the mask marks track t. Letter index layout: base_index << k | mask.
struct MarkedAlphabet {
    std::string base;   // sorted, distinct
    std::size_t arity = 0;

    std::size_t masks() const { return std::size_t{1} << arity; }
    std::size_t size() const { return base.size() << arity; }

    std::size_t base_index(char c, std::size_t position = 0) const {
        auto it = std::lower_bound(base.begin(), base.end(), c);
        if (it == base.end() || *it != c) {
            std::string msg = "unknown letter '";
            msg += c;
            msg += "'";
            if (position > 0)
                msg += " at position " + std::to_string(position);
            throw std::invalid_argument(msg);
        }
        return static_cast<std::size_t>(it - base.begin());
    }

    std::size_t pack(std::size_t base_idx, std::size_t mask) const {
        return (base_idx << arity) | mask;
    }
    char letter_of(std::size_t marked) const { return base[marked >> arity]; }
    std::size_t mask_of(std::size_t marked) const { return marked & (masks() - 1); }

    /// Text form used in automaton files, e.g. "a|01" (track 1 bit first).
    std::string show(std::size_t marked) const {
        std::string s(1, letter_of(marked));
        s += '|';
        std::size_t m = mask_of(marked);
        for (std::size_t t = 0; t < arity; ++t)
            s += (m >> t) & 1 ? '1' : '0';
        return s;
    }

    std::size_t parse(std::string_view text) const {
        auto bar = text.find('|');
        if (bar != 1 || text.size() != 2 + arity)
            throw std::invalid_argument("bad marked letter '" + std::string(text) + "'");
        std::size_t mask = 0;
        for (std::size_t t = 0; t < arity; ++t) {
            char bit = text[2 + t];
            if (bit != '0' && bit != '1')
                throw std::invalid_argument("bad marked letter '" + std::string(text) + "'");
            if (bit == '1')
                mask |= std::size_t{1} << t;
        }
        return pack(base_index(text[0]), mask);
    }
};

namespace detail {

/// Tracks which mark tracks have fired so far; accepts when every track
/// fired exactly once. States: subsets of tracks, plus a dead state.
inline Dfa exactly_one_per_track(const MarkedAlphabet& sigma) {
    std::size_t subsets = sigma.masks();
    std::size_t dead = subsets;
    Dfa a;
    a.letters = sigma.size();
    a.start = 0;
    a.accepting.assign(subsets + 1, false);
    a.accepting[subsets - 1] = true;  // all tracks seen
    a.delta.resize((subsets + 1) * a.letters);
    for (std::size_t s = 0; s <= subsets; ++s)
        for (std::size_t l = 0; l < a.letters; ++l) {
            std::size_t mask = sigma.mask_of(l);
            State target;
            if (s == dead || (s & mask) != 0)
                target = static_cast<State>(dead);
            else
                target = static_cast<State>(s | mask);
            a.delta[s * a.letters + l] = target;
        }
    return a;
}

/// Accepts markings listing track positions in strictly increasing order:
/// each letter marks either nothing or exactly the next track.
inline Dfa strict_order(const MarkedAlphabet& sigma) {
    std::size_t k = sigma.arity;
    std::size_t dead = k + 1;
    Dfa a;
    a.letters = sigma.size();
    a.start = 0;
    a.accepting.assign(k + 2, false);
    a.accepting[k] = true;
    a.delta.resize((k + 2) * a.letters);
    for (std::size_t s = 0; s <= k + 1; ++s)
        for (std::size_t l = 0; l < a.letters; ++l) {
            std::size_t mask = sigma.mask_of(l);
            State target;
            if (s == dead)
                target = static_cast<State>(dead);
            else if (mask == 0)
                target = static_cast<State>(s);
            else if (s < k && mask == std::size_t{1} << s)
                target = static_cast<State>(s + 1);
            else
                target = static_cast<State>(dead);
            a.delta[s * a.letters + l] = target;
        }
    return a;
}

}  // namespace detail

/// Deterministic automaton over a marked alphabet whose language is cut down,
/// at construction, to words carrying exactly one mark per track.
struct MarkedAutomaton {
    std::size_t arity = 0;
    MarkedAlphabet sigma;
    Dfa dfa;

    static MarkedAutomaton make(std::size_t arity, std::string base_alphabet, const Dfa& raw) {
        MarkedAutomaton a;
        a.arity = arity;
        std::sort(base_alphabet.begin(), base_alphabet.end());
        base_alphabet.erase(std::unique(base_alphabet.begin(), base_alphabet.end()),
                            base_alphabet.end());
        a.sigma.base = std::move(base_alphabet);
        a.sigma.arity = arity;
        if (raw.letters != a.sigma.size())
            throw std::invalid_argument("automaton alphabet does not match arity and base alphabet");
        raw.check();
        a.dfa = trim_reachable(intersect(raw, detail::exactly_one_per_track(a.sigma)));
        return a;
    }

    /// Marked word encoding (w, tuple); tuple positions are 1-based and may
    /// repeat or appear in any order.
    std::vector<std::uint32_t> encode(std::string_view w, std::span<const std::size_t> tuple) const {
        if (tuple.size() != arity)
            throw std::invalid_argument("tuple arity mismatch");
        std::vector<std::uint32_t> out(w.size());
        std::vector<std::size_t> mask(w.size(), 0);
        for (std::size_t t = 0; t < tuple.size(); ++t) {
            if (tuple[t] < 1 || tuple[t] > w.size())
                throw std::invalid_argument("position " + std::to_string(tuple[t]) +
                                            " out of range for track " + std::to_string(t + 1));
            mask[tuple[t] - 1] |= std::size_t{1} << t;
        }
        for (std::size_t i = 0; i < w.size(); ++i)
            out[i] = static_cast<std::uint32_t>(sigma.pack(sigma.base_index(w[i], i + 1), mask[i]));
        return out;
    }

    bool accepts_tuple(std::string_view w, std::span<const std::size_t> tuple) const {
        auto word = encode(w, tuple);
        return dfa.accepts(word);
    }

    /// Restriction to unmarked letters (mask 0) as a plain char automaton.
    CharDfa unmarked() const {
        CharDfa out;
        out.alphabet = sigma.base;
        out.dfa.letters = out.alphabet.size();
        out.dfa.start = dfa.start;
        out.dfa.accepting = dfa.accepting;
        out.dfa.delta.resize(dfa.states() * out.dfa.letters);
        for (std::size_t s = 0; s < dfa.states(); ++s)
            for (std::size_t l = 0; l < out.dfa.letters; ++l)
                out.dfa.delta[s * out.dfa.letters + l] =
                    dfa.step(static_cast<State>(s), sigma.pack(l, 0));
        return out;
    }
};

enum class Counting { strict, unordered };

/// Number of accepted markings of w. `strict` restricts to markings whose
/// track positions strictly increase; `unordered` counts every tuple in
/// {1..|w|}^k. Dynamic programming over (state, tracks already marked).
inline std::uint64_t count_dp(const MarkedAutomaton& a, std::string_view w,
                              Counting mode = Counting::strict) {
    std::size_t k = a.arity;
    if (mode == Counting::strict) {
        // track index t = number of tracks placed; next mark must be track t+1
        std::size_t q = a.dfa.states();
        std::vector<std::uint64_t> cnt(q * (k + 1), 0);
        cnt[a.dfa.start * (k + 1)] = 1;
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::size_t base = a.sigma.base_index(w[i], i + 1);
            std::vector<std::uint64_t> next(q * (k + 1), 0);
            for (std::size_t s = 0; s < q; ++s)
                for (std::size_t t = 0; t <= k; ++t) {
                    std::uint64_t c = cnt[s * (k + 1) + t];
                    if (c == 0)
                        continue;
                    State plain = a.dfa.step(static_cast<State>(s), a.sigma.pack(base, 0));
                    next[plain * (k + 1) + t] += c;
                    if (t < k) {
                        State marked = a.dfa.step(static_cast<State>(s),
                                                  a.sigma.pack(base, std::size_t{1} << t));
                        next[marked * (k + 1) + t + 1] += c;
                    }
                }
            cnt.swap(next);
        }
        std::uint64_t total = 0;
        for (std::size_t s = 0; s < q; ++s)
            if (a.dfa.accepting[s])
                total += cnt[s * (k + 1) + k];
        return total;
    }
    std::vector<std::uint64_t> cnt(a.dfa.states(), 0);
    cnt[a.dfa.start] = 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::size_t base = a.sigma.base_index(w[i], i + 1);
        std::vector<std::uint64_t> next(a.dfa.states(), 0);
        for (std::size_t s = 0; s < a.dfa.states(); ++s) {
            if (cnt[s] == 0)
                continue;
            for (std::size_t mask = 0; mask < a.sigma.masks(); ++mask)
                next[a.dfa.step(static_cast<State>(s), a.sigma.pack(base, mask))] += cnt[s];
        }
        cnt.swap(next);
    }
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < a.dfa.states(); ++s)
        if (a.dfa.accepting[s])
            total += cnt[s];
    return total;
}

/// Does every accepted marking list its tracks in strictly increasing
/// position order? Queries entering the reparameterisation pipeline must.
inline bool order_enforcing(const MarkedAutomaton& a) {
    return language_empty(intersect(a.dfa, complement(detail::strict_order(a.sigma))));
}

/// Conjoin the strict-order requirement onto a query.
inline MarkedAutomaton order_restrict(const MarkedAutomaton& a) {
    MarkedAutomaton out = a;
    out.dfa = trim_reachable(intersect(a.dfa, detail::strict_order(a.sigma)));
    return out;
}

/// Relabel tracks: new track t carries old track perm[t].
inline MarkedAutomaton permute_tracks(const MarkedAutomaton& a,
                                      std::span<const std::size_t> perm) {
    if (perm.size() != a.arity)
        throw std::invalid_argument("permutation arity mismatch");
    MarkedAutomaton out = a;
    for (std::size_t s = 0; s < a.dfa.states(); ++s)
        for (std::size_t l = 0; l < a.sigma.size(); ++l) {
            std::size_t mask = a.sigma.mask_of(l);
            std::size_t old_mask = 0;
            for (std::size_t t = 0; t < a.arity; ++t)
                if ((mask >> t) & 1)
                    old_mask |= std::size_t{1} << perm[t];
            std::size_t old_letter = a.sigma.pack(l >> a.arity, old_mask);
            out.dfa.delta[s * a.sigma.size() + l] = a.dfa.delta[s * a.sigma.size() + old_letter];
        }
    return out;
}

/// All-orderings decomposition of a query: one strict-order query per track
/// permutation. Tuples with repeated positions are not covered.
inline std::vector<MarkedAutomaton> symmetrize(const MarkedAutomaton& a) {
    std::vector<std::size_t> perm(a.arity);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<MarkedAutomaton> out;
    do {
        out.push_back(order_restrict(permute_tracks(a, perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace reparam
