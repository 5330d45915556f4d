#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reparam/forest.hpp"
#include "reparam/forest_build.hpp"
#include "reparam/marked.hpp"
#include "reparam/navigate.hpp"
#include "reparam/query.hpp"

namespace reparam {

/// Diagnostic bundle attached to a failed theorem assertion: everything
/// needed to replay the instance.
struct Diagnostic {
    std::string assertion;
    std::string word;
    std::string forest;
    std::vector<std::size_t> tuple;
    std::string detail;
};

/// Claims 1-3 and the path audit are theorems; a failure is an internal bug,
/// reported with a replayable dump, never a user error.
class ClaimViolationError : public std::logic_error {
public:
    explicit ClaimViolationError(Diagnostic d)
        : std::logic_error(d.assertion + ": " + d.detail), diagnostic(std::move(d)) {}

    Diagnostic diagnostic;
};

struct Interval {
    std::size_t lo = 0, hi = 0;  // 1-based, inclusive

    std::size_t length() const { return hi - lo + 1; }
    bool operator==(const Interval&) const = default;
};

/// Directed graph on the tuple coordinates {1..k}: edge p -> q when the
/// distinguished position i_p points to i_q in the forest.
struct TupleGraph {
    std::size_t k = 0;
    std::vector<std::vector<bool>> edge;  // edge[p][q], 0-based

    bool has(std::size_t p, std::size_t q) const { return edge[p][q]; }
};

inline TupleGraph tuple_graph(const Forest& f, std::span<const std::size_t> tuple,
                              std::size_t monoid_size) {
    TupleGraph g;
    g.k = tuple.size();
    g.edge.assign(g.k, std::vector<bool>(g.k, false));
    std::vector<std::uint32_t> anchors(g.k);
    for (std::size_t p = 0; p < g.k; ++p)
        anchors[p] = anchor(f, f.leaf_at(tuple[p]), monoid_size);
    for (std::size_t p = 0; p < g.k; ++p)
        for (std::size_t q = 0; q < g.k; ++q)
            g.edge[p][q] = observes(f, anchors[p], anchors[q], monoid_size);
    return g;
}

/// Strongly connected components with no incoming edge, as sorted 0-based
/// vertex sets, ordered by smallest vertex.
inline std::vector<std::vector<std::size_t>> minimal_sccs(const TupleGraph& g) {
    std::size_t k = g.k;
    std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
    for (std::size_t p = 0; p < k; ++p) {
        reach[p][p] = true;
        for (std::size_t q = 0; q < k; ++q)
            if (g.edge[p][q])
                reach[p][q] = true;
    }
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t p = 0; p < k; ++p)
            if (reach[p][m])
                for (std::size_t q = 0; q < k; ++q)
                    if (reach[m][q])
                        reach[p][q] = true;
    std::vector<bool> placed(k, false);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t p = 0; p < k; ++p) {
        if (placed[p])
            continue;
        std::vector<std::size_t> scc;
        for (std::size_t q = 0; q < k; ++q)
            if (reach[p][q] && reach[q][p]) {
                scc.push_back(q);
                placed[q] = true;
            }
        bool minimal = true;
        for (std::size_t outside = 0; outside < k && minimal; ++outside) {
            if (reach[p][outside] && reach[outside][p])
                continue;
            for (std::size_t inside : scc)
                if (g.edge[outside][inside]) {
                    minimal = false;
                    break;
                }
        }
        if (minimal)
            out.push_back(std::move(scc));
    }
    return out;
}

/// A minimal SCC together with its anchor set, the left-to-right closure of
/// that set, and the block: the interval of word positions descending from
/// the closure.
struct Component {
    std::vector<std::size_t> members;      // 0-based tuple coordinates
    std::vector<std::uint32_t> anchors;    // distinct anchor nodes, left to right
    std::vector<std::uint32_t> closure;    // anchors plus the siblings between them
    Interval block;
};

namespace detail {

[[noreturn]] inline void claim_fail(const std::string& assertion, const Forest& f,
                                    std::span<const std::size_t> tuple, std::string detail) {
    Diagnostic d;
    d.assertion = assertion;
    d.word = f.word();
    d.forest = serialize(f);
    d.tuple.assign(tuple.begin(), tuple.end());
    d.detail = std::move(detail);
    throw ClaimViolationError(std::move(d));
}

}  // namespace detail

/// Close one minimal SCC. Claim 1 — the anchors are siblings (or the root
/// alone) with consecutive gaps at most |M| — is asserted here, as is the
/// iterability of the in-between siblings.
inline Component component_closure(const Forest& f, std::vector<std::size_t> members,
                                   std::span<const std::size_t> tuple, std::size_t monoid_size) {
    Component comp;
    comp.members = std::move(members);
    std::set<std::uint32_t> anchor_set;
    for (std::size_t p : comp.members)
        anchor_set.insert(anchor(f, f.leaf_at(tuple[p]), monoid_size));

    if (anchor_set.size() == 1 && *anchor_set.begin() == f.root) {
        comp.anchors = {f.root};
        comp.closure = {f.root};
        comp.block = {1, f.word_length()};
        return comp;
    }
    std::int32_t parent = -1;
    for (std::uint32_t a : anchor_set) {
        if (f.nodes[a].parent < 0)
            detail::claim_fail("claim1_anchor_siblings", f, tuple,
                               "anchor set mixes the root with other nodes");
        if (parent < 0)
            parent = f.nodes[a].parent;
        else if (parent != f.nodes[a].parent)
            detail::claim_fail("claim1_anchor_siblings", f, tuple,
                               "anchors of one component are not siblings");
    }
    comp.anchors.assign(anchor_set.begin(), anchor_set.end());
    std::sort(comp.anchors.begin(), comp.anchors.end(), [&](std::uint32_t a, std::uint32_t b) {
        return f.nodes[a].sibling_index < f.nodes[b].sibling_index;
    });
    for (std::size_t i = 0; i + 1 < comp.anchors.size(); ++i) {
        std::size_t gap = f.nodes[comp.anchors[i + 1]].sibling_index -
                          f.nodes[comp.anchors[i]].sibling_index;
        if (gap > monoid_size)
            detail::claim_fail("claim1_anchor_distance", f, tuple,
                               "consecutive anchors at sibling distance " + std::to_string(gap) +
                                   " > " + std::to_string(monoid_size));
    }
    const auto& siblings = f.nodes[static_cast<std::uint32_t>(parent)].children;
    std::size_t first = f.nodes[comp.anchors.front()].sibling_index;
    std::size_t last = f.nodes[comp.anchors.back()].sibling_index;
    for (std::size_t c = first; c <= last; ++c) {
        comp.closure.push_back(siblings[c]);
        if (!iterable(f, siblings[c], monoid_size))
            detail::claim_fail("claim1_closure_iterable", f, tuple,
                               "closed anchor set contains a non-iterable node at " +
                                   f.path(siblings[c]));
    }
    comp.block = {f.nodes[comp.closure.front()].lo, f.nodes[comp.closure.back()].hi};
    return comp;
}

/// Claim 2: blocks of distinct minimal SCCs never overlap.
inline void check_disjoint(const Forest& f, std::span<const std::size_t> tuple,
                           std::span<const Component> components) {
    for (std::size_t a = 0; a < components.size(); ++a)
        for (std::size_t b = a + 1; b < components.size(); ++b) {
            const Interval& x = components[a].block;
            const Interval& y = components[b].block;
            if (x.lo <= y.hi && y.lo <= x.hi)
                detail::claim_fail("claim2_disjoint_blocks", f, tuple,
                                   "blocks [" + std::to_string(x.lo) + "," + std::to_string(x.hi) +
                                       "] and [" + std::to_string(y.lo) + "," +
                                       std::to_string(y.hi) + "] overlap");
        }
}

/// w with every given infix repeated n times in place; n = 1 is the identity.
inline std::string pump(std::string_view w, std::vector<Interval> blocks, std::size_t n) {
    if (n < 1)
        throw std::invalid_argument("pump count must be at least 1");
    std::sort(blocks.begin(), blocks.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].lo < 1 || blocks[i].hi > w.size() || blocks[i].lo > blocks[i].hi)
            throw std::invalid_argument("pump block out of range");
        if (i > 0 && blocks[i - 1].hi >= blocks[i].lo)
            throw std::invalid_argument("pump blocks overlap");
    }
    std::string out(w);
    for (std::size_t i = blocks.size(); i-- > 0;) {
        std::string infix = out.substr(blocks[i].lo - 1, blocks[i].length());
        std::string repeated;
        for (std::size_t c = 0; c < n; ++c)
            repeated += infix;
        out.replace(blocks[i].lo - 1, infix.size(), repeated);
    }
    return out;
}

/// Hall certificate: a sub-family of minimal SCCs collectively supported by
/// fewer queries than its size, plus the pump table demonstrating the growth
/// gap. `component_ids` index into the minimal-SCC list of the instance.
struct PumpRow {
    std::size_t n = 0;
    std::uint64_t phi_count = 0;
    std::vector<std::uint64_t> eta_counts;
    std::uint64_t eta_product = 0;
    std::uint64_t lower_bound = 0;  // n^|S|
};

struct ViolationWitness {
    std::string reason;                      // "hall" or "eta_unsatisfied"
    std::vector<std::size_t> component_ids;  // the violating family S
    std::vector<std::size_t> support;        // P(S), 0-based eta indices
    std::vector<Interval> blocks;            // blocks of S, to pump
    std::vector<std::size_t> witness_tuple;  // the satisfying tuple that exposed it
    std::vector<PumpRow> table;
};

namespace detail {

inline bool try_match(std::size_t left, const std::vector<std::vector<std::size_t>>& adj,
                      std::vector<int>& match_right, std::vector<bool>& visited) {
    for (std::size_t r : adj[left]) {
        if (visited[r])
            continue;
        visited[r] = true;
        if (match_right[r] < 0 ||
            try_match(static_cast<std::size_t>(match_right[r]), adj, match_right, visited)) {
            match_right[r] = static_cast<int>(left);
            return true;
        }
    }
    return false;
}

inline std::size_t max_matching(const std::vector<std::vector<std::size_t>>& adj,
                                std::size_t rights, std::vector<int>& match_right) {
    match_right.assign(rights, -1);
    std::size_t matched = 0;
    for (std::size_t l = 0; l < adj.size(); ++l) {
        std::vector<bool> visited(rights, false);
        if (try_match(l, adj, match_right, visited))
            ++matched;
    }
    return matched;
}

}  // namespace detail

/// Either an injection component -> eta index (components in input order) or
/// the violating sub-family extracted from the matching's deficiency.
struct HallOutcome {
    bool ok = false;
    std::vector<std::size_t> assignment;     // per component, 0-based eta index
    std::vector<std::size_t> violating_set;  // component indices
    std::vector<std::size_t> violating_support;
};

/// Hall matching over the supports; when total, the lexicographically
/// smallest system of distinct representatives (components in the given
/// order, eta indices ascending) is returned.
inline HallOutcome hall_match(const std::vector<std::vector<std::size_t>>& supports,
                              std::size_t eta_count) {
    HallOutcome out;
    std::vector<int> match_right;
    std::size_t best = detail::max_matching(supports, eta_count, match_right);
    if (best < supports.size()) {
        // alternating reachability from the unmatched components gives the
        // deficient family
        std::vector<bool> left_matched(supports.size(), false);
        for (std::size_t r = 0; r < eta_count; ++r)
            if (match_right[r] >= 0)
                left_matched[static_cast<std::size_t>(match_right[r])] = true;
        std::vector<bool> left_seen(supports.size(), false), right_seen(eta_count, false);
        std::vector<std::size_t> stack;
        for (std::size_t l = 0; l < supports.size(); ++l)
            if (!left_matched[l]) {
                left_seen[l] = true;
                stack.push_back(l);
            }
        while (!stack.empty()) {
            std::size_t l = stack.back();
            stack.pop_back();
            for (std::size_t r : supports[l]) {
                if (right_seen[r])
                    continue;
                right_seen[r] = true;
                if (match_right[r] >= 0 && !left_seen[static_cast<std::size_t>(match_right[r])]) {
                    left_seen[static_cast<std::size_t>(match_right[r])] = true;
                    stack.push_back(static_cast<std::size_t>(match_right[r]));
                }
            }
        }
        for (std::size_t l = 0; l < supports.size(); ++l)
            if (left_seen[l])
                out.violating_set.push_back(l);
        std::set<std::size_t> support_union;
        for (std::size_t l : out.violating_set)
            for (std::size_t r : supports[l])
                support_union.insert(r);
        out.violating_support.assign(support_union.begin(), support_union.end());
        return out;
    }
    // lexicographically smallest assignment, greedily fixing each component
    // to its least feasible representative
    out.ok = true;
    std::vector<bool> used(eta_count, false);
    for (std::size_t l = 0; l < supports.size(); ++l) {
        bool fixed = false;
        for (std::size_t candidate : supports[l]) {
            if (used[candidate])
                continue;
            // feasibility: the remaining components must still match
            std::vector<std::vector<std::size_t>> rest;
            for (std::size_t m = l + 1; m < supports.size(); ++m) {
                std::vector<std::size_t> options;
                for (std::size_t r : supports[m])
                    if (!used[r] && r != candidate)
                        options.push_back(r);
                rest.push_back(std::move(options));
            }
            std::vector<int> scratch;
            if (detail::max_matching(rest, eta_count, scratch) == rest.size()) {
                out.assignment.push_back(candidate);
                used[candidate] = true;
                fixed = true;
                break;
            }
        }
        if (!fixed)
            throw std::logic_error("matching feasibility lost during lexicographic selection");
    }
    return out;
}

/// Compiled query family sharing one recognizing morphism: the product of
/// the individual transition-monoid morphisms, pruned to its letter-generated
/// submonoid. One forest per word is built from this shared morphism.
struct QuerySet {
    std::string alphabet;
    MarkedAutomaton phi;
    std::vector<MarkedAutomaton> etas;
    Morphism mu;
    RecognizedQuery phi_rq;
    std::vector<RecognizedQuery> eta_rq;

    std::size_t arity() const { return phi.arity; }
    std::size_t monoid_size() const { return mu.monoid->size(); }
};

inline QuerySet make_query_set(MarkedAutomaton phi, std::vector<MarkedAutomaton> etas) {
    QuerySet qs;
    qs.alphabet = phi.sigma.base;
    for (const MarkedAutomaton& eta : etas) {
        if (eta.arity != 1)
            throw std::invalid_argument("eta queries must be unary");
        if (eta.sigma.base != qs.alphabet)
            throw std::invalid_argument("all queries must share one base alphabet");
    }
    if (phi.arity > 0 && !order_enforcing(phi))
        throw std::invalid_argument(
            "phi must be order-enforcing (satisfying tuples strictly increasing); "
            "conjoin x1 < x2 < ... or symmetrize first");
    qs.phi = std::move(phi);
    qs.etas = std::move(etas);

    std::vector<RecognizedQuery> raw;
    raw.push_back(from_marked_automaton(qs.phi));
    for (const MarkedAutomaton& eta : qs.etas)
        raw.push_back(from_marked_automaton(eta));
    std::vector<Morphism> factors;
    for (const RecognizedQuery& q : raw)
        factors.push_back(q.mu);
    ProductMorphism prod = product_morphism(factors);
    qs.mu = prod.morphism;
    qs.phi_rq = rebase(raw[0], qs.mu, prod.projections[0]);
    for (std::size_t p = 0; p < qs.etas.size(); ++p)
        qs.eta_rq.push_back(rebase(raw[p + 1], qs.mu, prod.projections[p + 1]));
    return qs;
}

/// Per-word pipeline state: the shared forest and the positions satisfying
/// each eta.
struct WordContext {
    std::string word;
    Forest forest;
    std::vector<std::vector<bool>> eta_at;  // [p][pos-1]

    std::vector<std::size_t> eta_positions(std::size_t p) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < eta_at[p].size(); ++i)
            if (eta_at[p][i])
                out.push_back(i + 1);
        return out;
    }
};

inline WordContext make_word_context(const QuerySet& qs, std::string word) {
    WordContext ctx;
    ctx.forest = build_forest(qs.mu, word);
    ctx.word = std::move(word);
    ctx.eta_at.resize(qs.etas.size());
    for (std::size_t p = 0; p < qs.etas.size(); ++p) {
        ctx.eta_at[p].resize(ctx.word.size());
        for (std::size_t i = 1; i <= ctx.word.size(); ++i) {
            std::size_t tuple[1] = {i};
            ctx.eta_at[p][i - 1] = qs.etas[p].accepts_tuple(ctx.word, tuple);
        }
    }
    return ctx;
}

/// One reparameterised tuple: i⃗ with its output j⃗, the matched injection
/// and the blocks it drew from.
struct TupleRecord {
    std::vector<std::size_t> input;               // i⃗
    std::vector<std::size_t> output;              // j⃗
    std::vector<Component> components;            // minimal SCCs, closure order
    std::vector<std::size_t> assignment;          // per component: eta index p_S
};

struct TupleOutcome {
    std::optional<TupleRecord> record;
    std::optional<ViolationWitness> violation;
};

/// The j⃗ recipe for one satisfying tuple. For a matched component S,
/// j_{p_S} is the leftmost position of block(S) satisfying eta_{p_S}; for an
/// unmatched p, j_p is the leftmost position of w satisfying eta_p (the
/// codomain-preserving default).
inline TupleOutcome reparam_tuple(const QuerySet& qs, const WordContext& ctx,
                                  std::span<const std::size_t> tuple) {
    if (!qs.phi.accepts_tuple(ctx.word, tuple))
        throw std::invalid_argument("tuple does not satisfy phi; the construction is only "
                                    "defined on satisfying tuples");
    std::size_t msize = qs.monoid_size();
    TupleGraph graph = tuple_graph(ctx.forest, tuple, msize);
    std::vector<std::vector<std::size_t>> sccs = minimal_sccs(graph);

    std::vector<Component> components;
    for (std::vector<std::size_t>& scc : sccs)
        components.push_back(component_closure(ctx.forest, std::move(scc), tuple, msize));
    std::sort(components.begin(), components.end(),
              [](const Component& a, const Component& b) { return a.block.lo < b.block.lo; });
    check_disjoint(ctx.forest, tuple, components);

    std::vector<std::vector<std::size_t>> supports;
    for (const Component& c : components) {
        std::vector<std::size_t> sup;
        for (std::size_t p = 0; p < qs.etas.size(); ++p) {
            bool hit = false;
            for (std::size_t pos = c.block.lo; pos <= c.block.hi && !hit; ++pos)
                hit = ctx.eta_at[p][pos - 1];
            if (hit)
                sup.push_back(p);
        }
        supports.push_back(std::move(sup));
    }

    TupleOutcome out;
    HallOutcome hall = hall_match(supports, qs.etas.size());
    if (!hall.ok) {
        ViolationWitness witness;
        witness.reason = "hall";
        witness.component_ids = hall.violating_set;
        witness.support = hall.violating_support;
        for (std::size_t c : hall.violating_set)
            witness.blocks.push_back(components[c].block);
        witness.witness_tuple.assign(tuple.begin(), tuple.end());
        out.violation = std::move(witness);
        return out;
    }

    TupleRecord record;
    record.input.assign(tuple.begin(), tuple.end());
    record.components = std::move(components);
    record.assignment = hall.assignment;
    record.output.assign(qs.etas.size(), 0);
    std::vector<bool> assigned(qs.etas.size(), false);
    for (std::size_t c = 0; c < record.components.size(); ++c) {
        std::size_t p = record.assignment[c];
        const Interval& block = record.components[c].block;
        for (std::size_t pos = block.lo; pos <= block.hi; ++pos)
            if (ctx.eta_at[p][pos - 1]) {
                record.output[p] = pos;
                break;
            }
        assigned[p] = true;
    }
    for (std::size_t p = 0; p < qs.etas.size(); ++p) {
        if (assigned[p])
            continue;
        std::size_t leftmost = 0;
        for (std::size_t pos = 1; pos <= ctx.word.size(); ++pos)
            if (ctx.eta_at[p][pos - 1]) {
                leftmost = pos;
                break;
            }
        if (leftmost == 0) {
            // eta_p holds nowhere while phi has a result: the product of the
            // eta counts is 0 < #phi, itself a hypothesis violation
            ViolationWitness witness;
            witness.reason = "eta_unsatisfied";
            witness.support = {};
            witness.witness_tuple.assign(tuple.begin(), tuple.end());
            out.violation = std::move(witness);
            return out;
        }
        record.output[p] = leftmost;
    }
    out.record = std::move(record);
    return out;
}

/// Claim 3 instance: pump the blocks of a sub-family S of the minimal SCCs
/// and tabulate the counts; #phi(w_n) >= n^|S| is asserted.
inline std::vector<PumpRow> check_pump_growth(const QuerySet& qs, const WordContext& ctx,
                                              std::span<const std::size_t> tuple,
                                              std::span<const Interval> family_blocks,
                                              std::span<const std::size_t> n_values) {
    std::vector<PumpRow> table;
    for (std::size_t n : n_values) {
        std::string pumped = pump(ctx.word, {family_blocks.begin(), family_blocks.end()}, n);
        PumpRow row;
        row.n = n;
        row.phi_count = count_dp(qs.phi, pumped, Counting::strict);
        row.eta_product = 1;
        for (const MarkedAutomaton& eta : qs.etas) {
            row.eta_counts.push_back(count_dp(eta, pumped, Counting::strict));
            row.eta_product *= row.eta_counts.back();
        }
        row.lower_bound = 1;
        for (std::size_t s = 0; s < family_blocks.size(); ++s)
            row.lower_bound *= n;
        if (row.phi_count < row.lower_bound)
            detail::claim_fail("claim3_pump_growth", ctx.forest, tuple,
                               "pumping n=" + std::to_string(n) + " gives #phi = " +
                                   std::to_string(row.phi_count) + " < " +
                                   std::to_string(row.lower_bound));
        table.push_back(std::move(row));
    }
    return table;
}

/// Per-word reparameterisation report: the total map i⃗ -> j⃗ with preimage
/// statistics, or the first hypothesis-violation witness found.
struct ReparamReport {
    std::string word;
    std::vector<TupleRecord> records;
    std::map<std::uint64_t, std::uint64_t> histogram;  // multiplicity -> #values of j
    std::uint64_t max_multiplicity = 0;
    std::optional<ViolationWitness> violation;
};

inline ReparamReport reparam_relation(const QuerySet& qs, const WordContext& ctx,
                                      std::span<const std::size_t> pump_values = {}) {
    ReparamReport report;
    report.word = ctx.word;
    std::map<std::vector<std::size_t>, std::uint64_t> preimages;
    bool violated = false;
    detail::for_each_increasing_tuple(ctx.word.size(), qs.arity(),
                                      [&](std::span<const std::size_t> tuple) {
        if (violated || !qs.phi.accepts_tuple(ctx.word, tuple))
            return;
        TupleOutcome outcome = reparam_tuple(qs, ctx, tuple);
        if (outcome.violation) {
            report.violation = std::move(outcome.violation);
            violated = true;
            return;
        }
        preimages[outcome.record->output] += 1;
        report.records.push_back(std::move(*outcome.record));
    });
    for (const auto& [j, count] : preimages) {
        report.histogram[count] += 1;
        report.max_multiplicity = std::max(report.max_multiplicity, count);
    }
    if (report.violation && !report.violation->blocks.empty() && !pump_values.empty()) {
        const ViolationWitness& w = *report.violation;
        WordContext base = ctx;  // the witness pumps the original word
        report.violation->table =
            check_pump_growth(qs, base, w.witness_tuple, w.blocks, pump_values);
    }
    return report;
}

/// Audit of the preimage-bound argument: in the leaf-level points-to graph,
/// every input position i_r must be reachable from some matched output
/// position j_{p_S} by a path of at most k points-to steps.
inline void preimage_path_audit(const ReparamReport& report, const Forest& f,
                                std::size_t monoid_size, std::size_t k) {
    std::size_t n = f.word_length();
    // leaf-level points-to adjacency
    std::vector<std::vector<std::size_t>> adj(n + 1);
    for (std::size_t p = 1; p <= n; ++p)
        adj[p] = pointed_leaves(f, f.leaf_at(p), monoid_size);
    for (const TupleRecord& record : report.records) {
        std::vector<std::size_t> frontier;
        std::vector<bool> reached(n + 1, false);
        for (std::size_t c = 0; c < record.components.size(); ++c) {
            std::size_t j = record.output[record.assignment[c]];
            if (!reached[j]) {
                reached[j] = true;
                frontier.push_back(j);
            }
        }
        for (std::size_t step = 0; step < k && !frontier.empty(); ++step) {
            std::vector<std::size_t> next;
            for (std::size_t p : frontier)
                for (std::size_t q : adj[p])
                    if (!reached[q]) {
                        reached[q] = true;
                        next.push_back(q);
                    }
            frontier = std::move(next);
        }
        for (std::size_t r = 0; r < record.input.size(); ++r)
            if (!reached[record.input[r]])
                detail::claim_fail(
                    "path_audit", f, record.input,
                    "position i_" + std::to_string(r + 1) + " = " +
                        std::to_string(record.input[r]) +
                        " is not reachable from any matched output position within " +
                        std::to_string(k) + " points-to steps");
    }
}

}  // namespace reparam
