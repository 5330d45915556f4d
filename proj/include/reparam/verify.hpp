#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reparam/compile.hpp"
#include "reparam/family.hpp"
#include "reparam/forest_build.hpp"
#include "reparam/navigate.hpp"
#include "reparam/query.hpp"
#include "reparam/reparam.hpp"

namespace reparam {

/// The default query suite and word corpora driving `verify`.
struct CorpusSpec {
    std::string alphabet = "ab";
    std::size_t exhaustive_max_len = 10;   // counting + claim corpora
    std::size_t forest_max_len = 12;       // forest validity corpus
    std::size_t random_words = 1000;
    std::size_t random_max_len = 2000;
    std::uint64_t random_seed = 0x5eed5eedULL;

    std::vector<std::pair<std::string, std::string>> formulas;   // name, text
    std::vector<std::string> nonaperiodic;                       // names expected non-aperiodic

    struct Instance {
        std::string name;
        std::string phi;
        std::vector<std::string> etas;
    };
    std::vector<Instance> instances;

    std::string plateau_phi;
    std::vector<std::string> plateau_etas;
    std::string plateau_family;

    std::string violation_phi;
    std::vector<std::string> violation_etas;
    std::string violation_word;

    std::string pointing_family;
};

inline CorpusSpec default_corpus() {
    CorpusSpec c;
    const std::string even_a =
        "exists X ("
        " (forall y (y in X -> a(y)))"
        " & (forall y ((a(y) & !(exists z (a(z) & z < y))) -> y in X))"
        " & (forall y (forall z ((a(y) & a(z) & y < z & !(exists u (a(u) & y < u & u < z)))"
        "   -> ((y in X & !(z in X)) | (!(y in X) & z in X)))))"
        " & (forall y ((a(y) & !(exists z (a(z) & y < z))) -> !(y in X)))"
        ")";
    const std::string even_a_before_x =
        "a(x) & (exists X ("
        " (forall y (y in X -> (a(y) & y < x)))"
        " & (forall y ((a(y) & y < x & !(exists z (a(z) & z < y))) -> y in X))"
        " & (forall y (forall z ((a(y) & a(z) & y < z & z < x"
        "   & !(exists u (a(u) & y < u & u < z)))"
        "   -> ((y in X & !(z in X)) | (!(y in X) & z in X)))))"
        " & (forall y ((a(y) & y < x & !(exists z (a(z) & y < z & z < x))) -> !(y in X)))"
        "))";
    c.formulas = {
        {"one_a", "a(x)"},
        {"a_before_b", "a(x) & b(y) & x < y"},
        {"a_before_b_no_b_prefix", "a(x) & b(y) & x < y & !(exists z (b(z) & z < x))"},
        {"a_pair_with_b_between", "a(x) & a(y) & x < y & (exists z (x < z & z < y & b(z)))"},
        {"a_pair", "a(x) & a(y) & x < y"},
        {"even_a", even_a},
        {"even_a_before_x", even_a_before_x},
    };
    c.nonaperiodic = {"even_a", "even_a_before_x"};
    c.instances = {
        {"ab_pair_full", "a(x) & b(y) & x < y", {"a(x)", "b(x)"}},
        {"ab_pair_a_only", "a(x) & b(y) & x < y", {"a(x)"}},
        {"no_b_prefix", "a(x) & b(y) & x < y & !(exists z (b(z) & z < x))", {"a(x)", "b(x)"}},
        {"aa_pair", "a(x) & a(y) & x < y", {"a(x)", "a(x)"}},
        {"even_prefix", even_a_before_x, {"a(x)"}},
        {"b_between", "a(x) & a(y) & x < y & (exists z (x < z & z < y & b(z)))",
         {"a(x)", "b(x)"}},
        {"unsatisfiable", "a(x) & b(x)", {"a(x)"}},
    };
    c.plateau_phi = "a(x) & b(y) & x < y";
    c.plateau_etas = {"a(x)", "b(x)"};
    c.plateau_family = "a^n b^n : n in 5,10,20,30";
    c.violation_phi = "a(x) & b(y) & x < y";
    c.violation_etas = {"a(x)"};
    c.violation_word = "aaaaabbbbb";
    c.pointing_family = "a^n : n in 10,50,100,200";
    return c;
}

struct CheckResult {
    std::string name;
    bool pass = true;
    std::uint64_t checked = 0;
    std::string detail;
    double millis = 0.0;
    std::vector<Diagnostic> dumps;

    void fail(std::string what) {
        if (pass) {
            pass = false;
            detail = std::move(what);
        }
    }
};

struct VerifyOutcome {
    std::vector<CheckResult> rows;
    bool hypothesis_violation_expected_missing = false;

    bool all_pass() const {
        for (const CheckResult& r : rows)
            if (!r.pass)
                return false;
        return true;
    }
};

namespace detail {

struct Xorshift64 {
    std::uint64_t state;
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
};

inline void for_each_word(const std::string& alphabet, std::size_t min_len, std::size_t max_len,
                          const std::function<void(const std::string&)>& fn) {
    for (std::size_t len = min_len; len <= max_len; ++len) {
        std::string w(len, alphabet[0]);
        std::vector<std::size_t> digits(len, 0);
        while (true) {
            fn(w);
            std::size_t i = len;
            while (i > 0 && digits[i - 1] == alphabet.size() - 1)
                --i;
            if (i == 0)
                break;
            ++digits[i - 1];
            w[i - 1] = alphabet[digits[i - 1]];
            for (std::size_t j = i; j < len; ++j) {
                digits[j] = 0;
                w[j] = alphabet[0];
            }
        }
    }
}

inline Morphism trivial_morphism(const std::string& alphabet) {
    auto monoid = std::make_shared<FiniteMonoid>(1, 0, std::vector<Element>{0},
                                                 std::vector<std::string>{"1"});
    std::vector<std::pair<char, Element>> images;
    for (char c : alphabet)
        images.emplace_back(c, 0);
    return make_morphism(std::move(monoid), images);
}

/// U1 = {1, 0} with absorbing 0; a maps to 1, every other letter to 0.
inline Morphism u1_morphism(const std::string& alphabet) {
    auto monoid = std::make_shared<FiniteMonoid>(2, 0, std::vector<Element>{0, 1, 1, 1},
                                                 std::vector<std::string>{"1", "0"});
    std::vector<std::pair<char, Element>> images;
    for (char c : alphabet)
        images.emplace_back(c, c == 'a' ? 0 : 1);
    return make_morphism(std::move(monoid), images);
}

/// Two-state parity automaton for "even number of a's" over the alphabet.
inline CharDfa even_a_dfa(const std::string& alphabet) {
    CharDfa a;
    a.alphabet = alphabet;
    std::sort(a.alphabet.begin(), a.alphabet.end());
    a.dfa.letters = a.alphabet.size();
    a.dfa.start = 0;
    a.dfa.accepting = {true, false};
    a.dfa.delta.resize(2 * a.dfa.letters);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t l = 0; l < a.dfa.letters; ++l)
            a.dfa.delta[s * a.dfa.letters + l] =
                a.alphabet[l] == 'a' ? static_cast<State>(1 - s) : static_cast<State>(s);
    return a;
}

/// Z2-based morphism derived as the transition monoid of the parity automaton.
inline Morphism z2_morphism(const std::string& alphabet) {
    return char_transition_monoid(even_a_dfa(alphabet)).morphism;
}

class Stopwatch {
public:
    Stopwatch() : begin_(std::chrono::steady_clock::now()) {}
    double millis() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         begin_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point begin_;
};

}  // namespace detail

/// 1. The worked decomposition example.
inline CheckResult check_decompose_example() {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "decompose_example";
    Decomposition d = decompose("aaabbabba", std::vector<std::size_t>{3, 5, 9});
    std::vector<std::string> want_infixes = {"aa", "b", "abb", ""};
    if (d.infixes != want_infixes || d.letters != "aba")
        r.fail("decompose(\"aaabbabba\", (3,5,9)) gave an unexpected cut");
    r.checked = 1;
    r.millis = watch.millis();
    return r;
}

/// 2. Forest validity, height bound and determinism over the three reference
/// morphisms. `inject_bug` corrupts one forest to prove the check bites.
inline CheckResult check_forest_contract(const CorpusSpec& corpus, bool inject_bug = false) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "forest_validity_height";
    std::vector<std::pair<std::string, Morphism>> morphisms = {
        {"trivial", detail::trivial_morphism(corpus.alphabet)},
        {"u1", detail::u1_morphism(corpus.alphabet)},
        {"z2", detail::z2_morphism(corpus.alphabet)},
    };
    bool corrupted = false;
    auto run_one = [&](const Morphism& mu, const std::string& name, const std::string& w) {
        Forest f = build_forest(mu, w);
        if (inject_bug && !corrupted && w.size() >= 3 &&
            w.find('a') != std::string::npos && w.find('b') != std::string::npos) {
            // negative control: flatten into one wide node with mixed images
            Forest flat;
            for (std::size_t p = 0; p < w.size(); ++p) {
                Forest::Node leaf;
                leaf.letter = w[p];
                flat.nodes.push_back(leaf);
            }
            Forest::Node root;
            for (std::uint32_t i = 0; i < w.size(); ++i)
                root.children.push_back(i);
            flat.nodes.push_back(root);
            flat.root = static_cast<std::uint32_t>(w.size());
            flat.finalize();
            f = flat;
            corrupted = true;
        }
        auto violations = validate(mu, f, w);
        if (!violations.empty()) {
            r.fail("morphism " + name + ", word \"" + w + "\": " + violations[0].what + " at " +
                   violations[0].path);
            return;
        }
        std::size_t bound = 3 * mu.monoid->size();
        if (height(f) > bound)
            r.fail("morphism " + name + ", word \"" + w + "\": height " +
                   std::to_string(height(f)) + " > " + std::to_string(bound));
        ++r.checked;
    };
    for (auto& [name, mu] : morphisms) {
        detail::for_each_word(corpus.alphabet, 1, corpus.forest_max_len,
                              [&](const std::string& w) {
                                  if (r.pass)
                                      run_one(mu, name, w);
                              });
        if (!r.pass)
            break;
        // determinism on a subfamily
        detail::for_each_word(corpus.alphabet, 1, std::min<std::size_t>(8, corpus.forest_max_len),
                              [&](const std::string& w) {
                                  if (!r.pass)
                                      return;
                                  if (serialize(build_forest(mu, w)) !=
                                      serialize(build_forest(mu, w)))
                                      r.fail("nondeterministic forest for \"" + w + "\"");
                              });
        if (!r.pass)
            break;
        detail::Xorshift64 rng{corpus.random_seed};
        for (std::size_t i = 0; i < corpus.random_words && r.pass; ++i) {
            std::size_t len = 1 + rng.next() % corpus.random_max_len;
            std::string w(len, 'a');
            for (char& c : w)
                c = corpus.alphabet[rng.next() % corpus.alphabet.size()];
            run_one(mu, name, w);
        }
        if (!r.pass)
            break;
    }
    r.millis = watch.millis();
    return r;
}

/// 3. count_dp == count_bruteforce for every suite formula on every word up
/// to the exhaustive bound.
inline CheckResult check_counting_equivalence(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "counting_oracle_equivalence";
    for (const auto& [name, text] : corpus.formulas) {
        MarkedAutomaton aut = compile(text, corpus.alphabet);
        RecognizedQuery rq = from_marked_automaton(aut);
        detail::for_each_word(corpus.alphabet, 0, corpus.exhaustive_max_len,
                              [&](const std::string& w) {
                                  if (!r.pass)
                                      return;
                                  std::uint64_t dp = count_dp(aut, w, Counting::strict);
                                  std::uint64_t brute = count_bruteforce(rq, w);
                                  if (dp != brute)
                                      r.fail("formula " + name + ", word \"" + w + "\": dp " +
                                             std::to_string(dp) + " != brute " +
                                             std::to_string(brute));
                                  ++r.checked;
                              });
        if (!r.pass)
            break;
    }
    r.millis = watch.millis();
    return r;
}

/// 4. Claims 1-3 and the path audit on every satisfying tuple of every suite
/// instance.
inline CheckResult check_claims(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "claims_as_assertions";
    const std::vector<std::size_t> pump_ns = {1, 2, 3};
    for (const CorpusSpec::Instance& inst : corpus.instances) {
        std::vector<MarkedAutomaton> etas;
        for (const std::string& eta : inst.etas)
            etas.push_back(compile(eta, corpus.alphabet));
        QuerySet qs = make_query_set(compile(inst.phi, corpus.alphabet), std::move(etas));
        try {
            detail::for_each_word(corpus.alphabet, 1, corpus.exhaustive_max_len,
                                  [&](const std::string& w) {
                if (!r.pass)
                    return;
                WordContext ctx = make_word_context(qs, w);
                ReparamReport report;
                report.word = w;
                detail::for_each_increasing_tuple(w.size(), qs.arity(),
                                                  [&](std::span<const std::size_t> tuple) {
                    if (!qs.phi.accepts_tuple(w, tuple))
                        return;
                    TupleOutcome outcome = reparam_tuple(qs, ctx, tuple);  // claims 1 and 2
                    ++r.checked;
                    if (!outcome.record)
                        return;  // a Hall violation is a finding, not a claim failure
                    const std::vector<Component>& comps = outcome.record->components;
                    // claim 3 over every nonempty subset of the minimal SCCs
                    for (std::size_t subset = 1; subset < (std::size_t{1} << comps.size());
                         ++subset) {
                        std::vector<Interval> blocks;
                        for (std::size_t c = 0; c < comps.size(); ++c)
                            if ((subset >> c) & 1)
                                blocks.push_back(comps[c].block);
                        check_pump_growth(qs, ctx, tuple, blocks, pump_ns);
                    }
                    report.records.push_back(std::move(*outcome.record));
                });
                preimage_path_audit(report, ctx.forest, qs.monoid_size(), qs.arity());
            });
        } catch (const ClaimViolationError& e) {
            r.fail("instance " + inst.name + ": " + e.what());
            r.dumps.push_back(e.diagnostic);
        }
        if (!r.pass)
            break;
    }
    r.millis = watch.millis();
    return r;
}

/// 5. Totality, codomain and the multiplicity plateau on the plateau family.
inline CheckResult check_multiplicity_plateau(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "multiplicity_plateau";
    std::vector<MarkedAutomaton> etas;
    for (const std::string& eta : corpus.plateau_etas)
        etas.push_back(compile(eta, corpus.alphabet));
    QuerySet qs = make_query_set(compile(corpus.plateau_phi, corpus.alphabet), std::move(etas));
    WordFamily family = parse_family(corpus.plateau_family);
    std::optional<std::uint64_t> plateau;
    for (const std::string& w : family.words()) {
        WordContext ctx = make_word_context(qs, w);
        ReparamReport report = reparam_relation(qs, ctx);
        if (report.violation) {
            r.fail("unexpected violation on \"" + w + "\"");
            break;
        }
        std::uint64_t satisfying = count_dp(qs.phi, w, Counting::strict);
        if (report.records.size() != satisfying) {
            r.fail("relation not total on \"" + w + "\": " +
                   std::to_string(report.records.size()) + " of " + std::to_string(satisfying));
            break;
        }
        bool codomain_ok = true;
        for (const TupleRecord& record : report.records)
            for (std::size_t p = 0; p < record.output.size(); ++p)
                codomain_ok &= ctx.eta_at[p][record.output[p] - 1];
        if (!codomain_ok) {
            r.fail("an output tuple leaves the eta codomain on \"" + w + "\"");
            break;
        }
        if (!plateau)
            plateau = report.max_multiplicity;
        else if (*plateau != report.max_multiplicity) {
            r.fail("max multiplicity moved from " + std::to_string(*plateau) + " to " +
                   std::to_string(report.max_multiplicity) + " on \"" + w + "\"");
            break;
        }
        ++r.checked;
    }
    r.millis = watch.millis();
    return r;
}

/// 6. The violation witness and its pump table on the violation instance.
inline CheckResult check_violation_witness(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "violation_witness";
    std::vector<MarkedAutomaton> etas;
    for (const std::string& eta : corpus.violation_etas)
        etas.push_back(compile(eta, corpus.alphabet));
    QuerySet qs = make_query_set(compile(corpus.violation_phi, corpus.alphabet), std::move(etas));
    WordContext ctx = make_word_context(qs, corpus.violation_word);
    const std::vector<std::size_t> pump_ns = {1, 2, 3, 4};
    ReparamReport report = reparam_relation(qs, ctx, pump_ns);
    if (!report.violation) {
        r.fail("expected a hypothesis violation on \"" + corpus.violation_word + "\"");
    } else {
        const ViolationWitness& v = *report.violation;
        if (v.component_ids.size() <= v.support.size())
            r.fail("witness family is not larger than its support");
        else if (v.table.size() != pump_ns.size())
            r.fail("pump table incomplete");
        else {
            // #phi grows at least like n^|S| (asserted when the table was
            // built); the eta product must stay within its n=1 value times
            // n^|P(S)|
            std::uint64_t c0 = v.table[0].eta_product;
            for (const PumpRow& row : v.table) {
                std::uint64_t allowance = c0;
                for (std::size_t i = 0; i < v.support.size(); ++i)
                    allowance *= row.n;
                if (row.eta_product > allowance)
                    r.fail("eta product " + std::to_string(row.eta_product) + " exceeds " +
                           std::to_string(allowance) + " at n=" + std::to_string(row.n));
                ++r.checked;
            }
        }
    }
    r.millis = watch.millis();
    return r;
}

/// 7. The unordered-count arithmetic of the two-letter remark.
inline CheckResult check_remark_instance(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "remark_instance";
    const std::string w = "aabbb";
    MarkedAutomaton ab = compile("a(x) & b(y)", corpus.alphabet);
    MarkedAutomaton a1 = compile("a(x)", corpus.alphabet);
    MarkedAutomaton b1 = compile("b(x)", corpus.alphabet);
    MarkedAutomaton squares = compile("(a(x) & a(y)) | (b(x) & b(y))", corpus.alphabet);
    std::uint64_t lhs = count_dp(ab, w, Counting::unordered);
    std::uint64_t ca = count_dp(a1, w, Counting::unordered);
    std::uint64_t cb = count_dp(b1, w, Counting::unordered);
    std::uint64_t rhs = count_dp(squares, w, Counting::unordered);
    if (lhs != 6)
        r.fail("#(a(x) & b(y)) = " + std::to_string(lhs) + ", expected 6");
    if (ca * ca + cb * cb != 13 || rhs != 13)
        r.fail("#a^2 + #b^2 = " + std::to_string(ca * ca + cb * cb) + ", direct " +
               std::to_string(rhs) + ", expected 13");
    if (lhs > rhs)
        r.fail("remark inequality fails");
    r.checked = 3;
    r.millis = watch.millis();
    return r;
}

/// 8. FO suite formulas compile to aperiodic transition monoids; the listed
/// MSO parity queries do not.
inline CheckResult check_fo_mso_separation(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "fo_mso_separation";
    for (const auto& [name, text] : corpus.formulas) {
        FormulaPtr f = parse_formula(text);
        MarkedAutomaton aut = compile(f, corpus.alphabet);
        bool aperiodic = is_aperiodic(*transition_monoid(aut.dfa).monoid);
        bool expected_nonaperiodic =
            std::find(corpus.nonaperiodic.begin(), corpus.nonaperiodic.end(), name) !=
            corpus.nonaperiodic.end();
        if (is_fo(f) && !aperiodic)
            r.fail("FO formula " + name + " compiled to a non-aperiodic monoid");
        if (expected_nonaperiodic && aperiodic)
            r.fail("formula " + name + " was expected to be non-aperiodic");
        ++r.checked;
    }
    r.millis = watch.millis();
    return r;
}

/// 9. max |pointed_leaves| stays constant across the pointing family.
inline CheckResult check_bounded_pointing(const CorpusSpec& corpus) {
    detail::Stopwatch watch;
    CheckResult r;
    r.name = "bounded_pointing";
    Morphism mu = detail::u1_morphism(corpus.alphabet);
    std::size_t msize = mu.monoid->size();
    WordFamily family = parse_family(corpus.pointing_family);
    std::optional<std::size_t> constant;
    for (const std::string& w : family.words()) {
        Forest f = build_forest(mu, w);
        std::size_t best = 0;
        for (std::size_t p = 1; p <= w.size(); ++p)
            best = std::max(best, pointed_leaves(f, f.leaf_at(p), msize).size());
        if (!constant)
            constant = best;
        else if (*constant != best) {
            r.fail("max |pointed_leaves| moved from " + std::to_string(*constant) + " to " +
                   std::to_string(best) + " at |w| = " + std::to_string(w.size()));
            break;
        }
        ++r.checked;
    }
    r.millis = watch.millis();
    return r;
}

inline VerifyOutcome run_verify(const CorpusSpec& corpus, bool inject_bug = false) {
    VerifyOutcome out;
    out.rows.push_back(check_decompose_example());
    out.rows.push_back(check_forest_contract(corpus, inject_bug));
    out.rows.push_back(check_counting_equivalence(corpus));
    out.rows.push_back(check_claims(corpus));
    out.rows.push_back(check_multiplicity_plateau(corpus));
    out.rows.push_back(check_violation_witness(corpus));
    out.rows.push_back(check_remark_instance(corpus));
    out.rows.push_back(check_fo_mso_separation(corpus));
    out.rows.push_back(check_bounded_pointing(corpus));
    return out;
}

}  // namespace reparam
