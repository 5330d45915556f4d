#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "reparam/formula.hpp"
#include "reparam/marked.hpp"

namespace reparam {

namespace detail {

/// Intermediate automaton during compilation: a DFA over the base alphabet
/// extended with one mark track per variable currently in scope. The track
/// order follows the (name-sorted) `vars` list.
struct VarAutomaton {
    std::vector<std::string> vars;
    Dfa dfa;
};

inline MarkedAlphabet var_sigma(const std::string& alphabet, std::size_t tracks) {
    MarkedAlphabet s;
    s.base = alphabet;
    s.arity = tracks;
    return s;
}

inline std::size_t track_of(const std::vector<std::string>& vars, const std::string& name) {
    auto it = std::lower_bound(vars.begin(), vars.end(), name);
    if (it == vars.end() || *it != name)
        throw std::logic_error("variable '" + name + "' missing from compile context");
    return static_cast<std::size_t>(it - vars.begin());
}

/// Extend the variable context; new tracks are read but ignored.
inline VarAutomaton cylindrify(const std::string& alphabet, const VarAutomaton& a,
                               const std::vector<std::string>& new_vars) {
    if (a.vars == new_vars)
        return a;
    MarkedAlphabet old_sigma = var_sigma(alphabet, a.vars.size());
    MarkedAlphabet new_sigma = var_sigma(alphabet, new_vars.size());
    std::vector<std::size_t> old_track_bit(a.vars.size());
    for (std::size_t i = 0; i < a.vars.size(); ++i)
        old_track_bit[i] = track_of(new_vars, a.vars[i]);
    VarAutomaton out;
    out.vars = new_vars;
    out.dfa.letters = new_sigma.size();
    out.dfa.start = a.dfa.start;
    out.dfa.accepting = a.dfa.accepting;
    out.dfa.delta.resize(a.dfa.states() * out.dfa.letters);
    for (std::size_t s = 0; s < a.dfa.states(); ++s)
        for (std::size_t l = 0; l < out.dfa.letters; ++l) {
            std::size_t mask = new_sigma.mask_of(l);
            std::size_t old_mask = 0;
            for (std::size_t i = 0; i < a.vars.size(); ++i)
                if ((mask >> old_track_bit[i]) & 1)
                    old_mask |= std::size_t{1} << i;
            out.dfa.delta[s * out.dfa.letters + l] =
                a.dfa.step(static_cast<State>(s), old_sigma.pack(l >> new_sigma.arity, old_mask));
        }
    return out;
}

inline std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// One mark on track `t`, nothing else constrained.
inline Dfa exactly_one_track(const MarkedAlphabet& sigma, std::size_t t) {
    Dfa a;
    a.letters = sigma.size();
    a.start = 0;
    a.accepting = {false, true, false};
    a.delta.resize(3 * a.letters);
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t l = 0; l < a.letters; ++l) {
            bool bit = (sigma.mask_of(l) >> t) & 1;
            State target;
            if (s == 0)
                target = bit ? 1 : 0;
            else if (s == 1)
                target = bit ? 2 : 1;
            else
                target = 2;
            a.delta[s * a.letters + l] = target;
        }
    return a;
}

/// Remove track `t`, reading both values of the dropped bit; the result is
/// determinized with canonical subset numbering.
inline VarAutomaton project_track(const std::string& alphabet, const VarAutomaton& a,
                                  std::size_t t) {
    MarkedAlphabet old_sigma = var_sigma(alphabet, a.vars.size());
    MarkedAlphabet new_sigma = var_sigma(alphabet, a.vars.size() - 1);
    std::size_t low = (std::size_t{1} << t) - 1;
    auto insert_bit = [&](std::size_t mask, bool bit) {
        std::size_t high = mask & ~low;
        return (high << 1) | (bit ? std::size_t{1} << t : 0) | (mask & low);
    };
    const Dfa& dfa = a.dfa;
    std::vector<State> initial = {dfa.start};
    Dfa projected = determinize(
        new_sigma.size(), initial,
        [&](State s, std::size_t l) {
            std::size_t base = l >> new_sigma.arity;
            std::size_t mask = new_sigma.mask_of(l);
            std::vector<State> moves = {
                dfa.step(s, old_sigma.pack(base, insert_bit(mask, false))),
                dfa.step(s, old_sigma.pack(base, insert_bit(mask, true)))};
            std::sort(moves.begin(), moves.end());
            moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
            return moves;
        },
        [&](State s) { return dfa.accepting[s]; });
    VarAutomaton out;
    out.vars = a.vars;
    out.vars.erase(out.vars.begin() + static_cast<std::ptrdiff_t>(t));
    out.dfa = std::move(projected);
    return out;
}

struct FormulaCompiler {
    const std::string& alphabet;

    VarAutomaton compile(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::Letter:
                return letter_atom(f->letter, f->var1);
            case Formula::Kind::Less:
                return order_atom(f->var1, f->var2, /*strict_less=*/true);
            case Formula::Kind::Equal:
                return order_atom(f->var1, f->var2, /*strict_less=*/false);
            case Formula::Kind::In:
                return in_atom(f->var1, f->var2);
            case Formula::Kind::Not: {
                VarAutomaton sub = compile(f->lhs);
                sub.dfa = complement(std::move(sub.dfa));
                return sub;
            }
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                VarAutomaton left = compile(f->lhs);
                VarAutomaton right = compile(f->rhs);
                std::vector<std::string> vars = merge_vars(left.vars, right.vars);
                left = cylindrify(alphabet, left, vars);
                right = cylindrify(alphabet, right, vars);
                VarAutomaton out;
                out.vars = std::move(vars);
                out.dfa = f->kind == Formula::Kind::And ? intersect(left.dfa, right.dfa)
                                                        : unite(left.dfa, right.dfa);
                return out;
            }
            case Formula::Kind::ExistsFo:
            case Formula::Kind::ExistsSet: {
                VarAutomaton body = compile(f->lhs);
                if (!std::binary_search(body.vars.begin(), body.vars.end(), f->var1))
                    body = cylindrify(alphabet, body, merge_vars(body.vars, {f->var1}));
                std::size_t t = track_of(body.vars, f->var1);
                if (f->kind == Formula::Kind::ExistsFo) {
                    MarkedAlphabet sigma = var_sigma(alphabet, body.vars.size());
                    body.dfa = trim_reachable(intersect(body.dfa, exactly_one_track(sigma, t)));
                }
                return project_track(alphabet, body, t);
            }
        }
        throw std::logic_error("unreachable formula kind");
    }

    VarAutomaton letter_atom(char letter, const std::string& var) {
        if (alphabet.find(letter) == std::string::npos)
            throw std::invalid_argument(std::string("letter '") + letter +
                                        "' is not in the alphabet");
        VarAutomaton out;
        out.vars = {var};
        MarkedAlphabet sigma = var_sigma(alphabet, 1);
        out.dfa.letters = sigma.size();
        out.dfa.start = 0;
        out.dfa.accepting = {false, true, false};
        out.dfa.delta.resize(3 * out.dfa.letters);
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t l = 0; l < out.dfa.letters; ++l) {
                bool bit = sigma.mask_of(l) & 1;
                bool good = sigma.letter_of(l) == letter;
                State target;
                if (s == 2)
                    target = 2;
                else if (!bit)
                    target = static_cast<State>(s);
                else
                    target = good && s == 0 ? 1 : 2;
                out.dfa.delta[s * out.dfa.letters + l] = target;
            }
        return out;
    }

    // x<y (strict_less) or x=y; correct on words marking each variable once
    VarAutomaton order_atom(const std::string& x, const std::string& y, bool strict_less) {
        if (x == y)
            throw std::invalid_argument("order atom needs two distinct variables");
        VarAutomaton out;
        out.vars = {x, y};
        std::sort(out.vars.begin(), out.vars.end());
        std::size_t tx = track_of(out.vars, x);
        std::size_t ty = track_of(out.vars, y);
        MarkedAlphabet sigma = var_sigma(alphabet, 2);
        // states: 0 nothing seen, 1 x seen, 2 satisfied, 3 dead
        out.dfa.letters = sigma.size();
        out.dfa.start = 0;
        out.dfa.accepting = {false, false, true, false};
        out.dfa.delta.resize(4 * out.dfa.letters);
        for (std::size_t s = 0; s < 4; ++s)
            for (std::size_t l = 0; l < out.dfa.letters; ++l) {
                bool bx = (sigma.mask_of(l) >> tx) & 1;
                bool by = (sigma.mask_of(l) >> ty) & 1;
                State target = 3;
                if (s == 3)
                    target = 3;
                else if (!bx && !by)
                    target = static_cast<State>(s);
                else if (strict_less) {
                    if (s == 0 && bx && !by)
                        target = 1;
                    else if (s == 1 && !bx && by)
                        target = 2;
                } else {
                    if (s == 0 && bx && by)
                        target = 2;
                }
                out.dfa.delta[s * out.dfa.letters + l] = target;
            }
        return out;
    }

    VarAutomaton in_atom(const std::string& x, const std::string& set) {
        VarAutomaton out;
        out.vars = {x, set};
        std::sort(out.vars.begin(), out.vars.end());
        std::size_t tx = track_of(out.vars, x);
        std::size_t ts = track_of(out.vars, set);
        MarkedAlphabet sigma = var_sigma(alphabet, 2);
        // state 0: every x mark so far sat inside the set; state 1: some did not
        out.dfa.letters = sigma.size();
        out.dfa.start = 0;
        out.dfa.accepting = {true, false};
        out.dfa.delta.resize(2 * out.dfa.letters);
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t l = 0; l < out.dfa.letters; ++l) {
                bool bx = (sigma.mask_of(l) >> tx) & 1;
                bool bs = (sigma.mask_of(l) >> ts) & 1;
                State target = s == 1 || (bx && !bs) ? 1 : static_cast<State>(s);
                out.dfa.delta[s * out.dfa.letters + l] = target;
            }
        return out;
    }
};

}  // namespace detail

/// Compile a formula into a marked automaton over the given base alphabet.
/// Track t carries the t-th free variable in name order. The construction is
/// the classical inductive one — products for connectives, complement for
/// negation, projection plus subset determinization for quantifiers — with
/// canonical state numbering throughout, so equal inputs give identical
/// automata.
inline MarkedAutomaton compile(const FormulaPtr& f, std::string alphabet) {
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    if (alphabet.empty())
        throw std::invalid_argument("empty alphabet");
    std::vector<std::string> free = free_variables(f);
    detail::FormulaCompiler compiler{alphabet};
    detail::VarAutomaton va = compiler.compile(f);
    va = detail::cylindrify(alphabet, va, free);
    return MarkedAutomaton::make(free.size(), alphabet, va.dfa);
}

inline MarkedAutomaton compile(std::string_view formula_text, const std::string& alphabet) {
    return compile(parse_formula(formula_text), alphabet);
}

}  // namespace reparam
