#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "reparam/marked.hpp"
#include "reparam/monoid.hpp"
#include "reparam/reparam.hpp"

namespace reparam {

using Json = nlohmann::ordered_json;

inline Json monoid_to_json(const FiniteMonoid& m) {
    Json j;
    j["size"] = m.size();
    j["identity"] = m.identity();
    Json table = Json::array();
    for (Element a = 0; a < m.size(); ++a) {
        Json row = Json::array();
        for (Element b = 0; b < m.size(); ++b)
            row.push_back(m.mul(a, b));
        table.push_back(std::move(row));
    }
    j["table"] = std::move(table);
    j["labels"] = m.labels();
    return j;
}

inline MonoidPtr monoid_from_json(const Json& j) {
    std::size_t size = j.at("size").get<std::size_t>();
    Element identity = j.at("identity").get<Element>();
    std::vector<Element> table;
    for (const Json& row : j.at("table"))
        for (const Json& cell : row)
            table.push_back(cell.get<Element>());
    std::vector<std::string> labels;
    if (j.contains("labels"))
        labels = j.at("labels").get<std::vector<std::string>>();
    return std::make_shared<FiniteMonoid>(size, identity, std::move(table), std::move(labels));
}

inline Json morphism_to_json(const Morphism& mu) {
    Json j;
    Json alphabet = Json::array();
    for (char c : mu.alphabet)
        alphabet.push_back(std::string(1, c));
    j["alphabet"] = std::move(alphabet);
    Json images = Json::object();
    for (std::size_t i = 0; i < mu.alphabet.size(); ++i)
        images[std::string(1, mu.alphabet[i])] = mu.images[i];
    j["images"] = std::move(images);
    j["monoid"] = monoid_to_json(*mu.monoid);
    return j;
}

/// `monoid` may be inline or a path relative to `base_dir`.
inline Morphism morphism_from_json(const Json& j, const std::filesystem::path& base_dir = ".") {
    MonoidPtr monoid;
    const Json& mj = j.at("monoid");
    if (mj.is_string()) {
        std::ifstream in(base_dir / mj.get<std::string>());
        if (!in)
            throw std::invalid_argument("cannot open monoid file " + mj.get<std::string>());
        Json loaded;
        in >> loaded;
        monoid = monoid_from_json(loaded);
    } else {
        monoid = monoid_from_json(mj);
    }
    std::vector<std::pair<char, Element>> images;
    for (const Json& letter : j.at("alphabet")) {
        std::string s = letter.get<std::string>();
        if (s.size() != 1)
            throw std::invalid_argument("alphabet letters must be single characters");
        images.emplace_back(s[0], j.at("images").at(s).get<Element>());
    }
    return make_morphism(std::move(monoid), images);
}

inline Json marked_automaton_to_json(const MarkedAutomaton& a) {
    Json j;
    j["arity"] = a.arity;
    Json alphabet = Json::array();
    for (char c : a.sigma.base)
        alphabet.push_back(std::string(1, c));
    j["alphabet"] = std::move(alphabet);
    j["states"] = a.dfa.states();
    j["start"] = a.dfa.start;
    Json accepting = Json::array();
    for (std::size_t s = 0; s < a.dfa.states(); ++s)
        if (a.dfa.accepting[s])
            accepting.push_back(s);
    j["accepting"] = std::move(accepting);
    Json transitions = Json::array();
    for (std::size_t s = 0; s < a.dfa.states(); ++s) {
        Json row = Json::object();
        for (std::size_t l = 0; l < a.sigma.size(); ++l)
            row[a.sigma.show(l)] = a.dfa.step(static_cast<State>(s), l);
        transitions.push_back(std::move(row));
    }
    j["transitions"] = std::move(transitions);
    return j;
}

inline MarkedAutomaton marked_automaton_from_json(const Json& j) {
    std::size_t arity = j.at("arity").get<std::size_t>();
    std::string base;
    for (const Json& letter : j.at("alphabet")) {
        std::string s = letter.get<std::string>();
        if (s.size() != 1)
            throw std::invalid_argument("alphabet letters must be single characters");
        base += s[0];
    }
    MarkedAlphabet sigma;
    sigma.base = base;
    std::sort(sigma.base.begin(), sigma.base.end());
    sigma.arity = arity;
    Dfa dfa;
    dfa.letters = sigma.size();
    dfa.start = j.at("start").get<State>();
    std::size_t states = j.at("states").get<std::size_t>();
    dfa.accepting.assign(states, false);
    for (const Json& s : j.at("accepting"))
        dfa.accepting.at(s.get<std::size_t>()) = true;
    dfa.delta.assign(states * sigma.size(), 0);
    const Json& transitions = j.at("transitions");
    if (transitions.size() != states)
        throw std::invalid_argument("transition table must list every state");
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t l = 0; l < sigma.size(); ++l) {
            const std::string key = sigma.show(l);
            dfa.delta[s * sigma.size() + l] = transitions.at(s).at(key).get<State>();
        }
    return MarkedAutomaton::make(arity, sigma.base, dfa);
}

inline Json interval_to_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

inline Json violation_to_json(const ViolationWitness& v) {
    Json j;
    j["reason"] = v.reason;
    j["components"] = v.component_ids;
    Json support = Json::array();
    for (std::size_t p : v.support)
        support.push_back(p + 1);  // eta indices are 1-based outside
    j["support"] = std::move(support);
    Json blocks = Json::array();
    for (const Interval& b : v.blocks)
        blocks.push_back(interval_to_json(b));
    j["blocks"] = std::move(blocks);
    j["witness_tuple"] = v.witness_tuple;
    Json table = Json::array();
    for (const PumpRow& row : v.table) {
        Json r;
        r["n"] = row.n;
        r["phi"] = row.phi_count;
        r["etas"] = row.eta_counts;
        r["eta_product"] = row.eta_product;
        r["bound"] = row.lower_bound;
        table.push_back(std::move(r));
    }
    j["pump_table"] = std::move(table);
    return j;
}

inline Json report_to_json(const ReparamReport& report) {
    Json j;
    j["word"] = report.word;
    Json tuples = Json::array();
    for (const TupleRecord& r : report.records) {
        Json t;
        t["i"] = r.input;
        t["j"] = r.output;
        Json matching = Json::object();
        for (std::size_t c = 0; c < r.components.size(); ++c)
            matching["S" + std::to_string(c)] = r.assignment[c] + 1;
        t["matching"] = std::move(matching);
        Json blocks = Json::array();
        for (const Component& comp : r.components)
            blocks.push_back(interval_to_json(comp.block));
        t["blocks"] = std::move(blocks);
        tuples.push_back(std::move(t));
    }
    j["tuples"] = std::move(tuples);
    j["max_multiplicity"] = report.max_multiplicity;
    Json histogram = Json::object();
    for (const auto& [multiplicity, values] : report.histogram)
        histogram[std::to_string(multiplicity)] = values;
    j["histogram"] = std::move(histogram);
    j["violation"] = report.violation ? violation_to_json(*report.violation) : Json(nullptr);
    return j;
}

inline std::string report_to_tsv(const ReparamReport& report) {
    std::ostringstream os;
    std::uint64_t distinct = 0;
    for (const auto& [multiplicity, values] : report.histogram)
        distinct += values;
    os << report.word << '\t' << report.records.size() << '\t' << distinct << '\t'
       << report.max_multiplicity << '\t' << (report.violation ? report.violation->reason : "-")
       << '\n';
    return os.str();
}

inline constexpr std::string_view kReportTsvHeader =
    "word\ttuples\tdistinct_j\tmax_multiplicity\tviolation\n";

inline Json diagnostic_to_json(const Diagnostic& d) {
    Json j;
    j["assertion"] = d.assertion;
    j["word"] = d.word;
    j["forest"] = d.forest;
    j["tuple"] = d.tuple;
    j["detail"] = d.detail;
    return j;
}

inline Diagnostic diagnostic_from_json(const Json& j) {
    Diagnostic d;
    d.assertion = j.at("assertion").get<std::string>();
    d.word = j.at("word").get<std::string>();
    d.forest = j.at("forest").get<std::string>();
    d.tuple = j.at("tuple").get<std::vector<std::size_t>>();
    d.detail = j.value("detail", "");
    return d;
}

}  // namespace reparam
