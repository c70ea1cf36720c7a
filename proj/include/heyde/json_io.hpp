#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heyde/distribution.hpp"
#include "heyde/funceq.hpp"
#include "heyde/group.hpp"
#include "heyde/predicates.hpp"
#include "heyde/rational.hpp"
#include "heyde/search.hpp"

namespace heyde::io {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where + ": missing field \"" + key + "\"");
    return *it;
}

inline std::int64_t integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return j.get<std::int64_t>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline json parse_text(const std::string& text, const std::string& source = "input") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(source + ": " + e.what());
    }
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

/// {"cyclic_orders": [9, 3]}
inline FiniteAbelianGroup parse_group(const json& j) {
    const json& orders = detail::field(j, "cyclic_orders", "group");
    if (!orders.is_array() || orders.empty()) throw SchemaError("group: cyclic_orders must be a nonempty array");
    std::vector<std::int64_t> n;
    for (const auto& x : orders) n.push_back(detail::integer(x, "group.cyclic_orders"));
    try {
        return FiniteAbelianGroup(std::move(n));
    } catch (const GroupError& e) {
        throw SchemaError(std::string("group: ") + e.what());
    }
}

/// "0,3" with every coordinate already reduced.
inline GroupElement parse_element(const FiniteAbelianGroup& g, const std::string& text) {
    GroupElement x;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = text.find(',', start);
        const std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(part, &used);
        } catch (const std::exception&) {
            throw SchemaError("malformed element \"" + text + "\"");
        }
        if (used != part.size() || part.empty()) throw SchemaError("malformed element \"" + text + "\"");
        x.coords.push_back(v);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (!g.contains(x)) throw SchemaError("element \"" + text + "\" is not in " + g.to_string());
    return x;
}

/// {"matrix": [[5, 0], [0, 2]]}
inline Endomorphism parse_endomorphism(const FiniteAbelianGroup& g, const json& j, const std::string& where = "alpha") {
    const json& m = detail::field(j, "matrix", where);
    if (!m.is_array()) throw SchemaError(where + ": matrix must be an array of rows");
    IntMatrix rows;
    for (const auto& row : m) {
        if (!row.is_array()) throw SchemaError(where + ": matrix must be an array of rows");
        std::vector<std::int64_t> r;
        for (const auto& x : row) r.push_back(detail::integer(x, where + ".matrix"));
        rows.push_back(std::move(r));
    }
    try {
        return Endomorphism(g, std::move(rows));
    } catch (const IncompatibleMatrix& e) {
        throw SchemaError(where + ": " + e.what());
    } catch (const GroupError& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

/// {"probs": {"0,3": "1/6", "1,0": "5/6"}}
inline Distribution parse_distribution(const FiniteAbelianGroup& g, const json& j, const std::string& where = "mu") {
    const json& probs = detail::field(j, "probs", where);
    if (!probs.is_object()) throw SchemaError(where + ": probs must be an object");
    std::map<GroupElement, Rational> masses;
    for (const auto& [key, value] : probs.items()) {
        if (!value.is_string()) throw SchemaError(where + ": probability of \"" + key + "\" must be a fraction string");
        const GroupElement x = parse_element(g, key);
        if (masses.contains(x)) throw SchemaError(where + ": duplicate element \"" + key + "\"");
        masses.emplace(x, parse_fraction(value.get<std::string>()));
    }
    try {
        return Distribution(g, std::move(masses));
    } catch (const InvalidDistribution& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

/// Canonical {"group", "alpha", "mu1", "mu2"} or general forms with
/// "alpha1", "alpha2", "beta1", "beta2" in place of "alpha".
inline FormsInstance parse_instance(const json& j) {
    if (!j.is_object()) throw SchemaError("instance: expected an object");
    const FiniteAbelianGroup g = parse_group(detail::field(j, "group", "instance"));
    Distribution mu1 = parse_distribution(g, detail::field(j, "mu1", "instance"), "mu1");
    Distribution mu2 = parse_distribution(g, detail::field(j, "mu2", "instance"), "mu2");
    const bool general = j.contains("alpha1") || j.contains("alpha2") || j.contains("beta1") || j.contains("beta2");
    if (general) {
        if (j.contains("alpha")) throw SchemaError("instance: give either alpha or alpha1/alpha2/beta1/beta2");
        auto endo = [&](const char* key) { return parse_endomorphism(g, detail::field(j, key, "instance"), key); };
        return FormsInstance(endo("alpha1"), endo("alpha2"), endo("beta1"), endo("beta2"), std::move(mu1),
                             std::move(mu2));
    }
    return FormsInstance::canonical(parse_endomorphism(g, detail::field(j, "alpha", "instance")), std::move(mu1),
                                    std::move(mu2));
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json to_json(const FiniteAbelianGroup& g) { return json{{"cyclic_orders", g.cyclic_orders()}}; }

inline json to_json(const GroupElement& x) { return to_string(x); }

inline json to_json(const Endomorphism& a) { return json{{"matrix", a.matrix()}}; }

inline json to_json(const Distribution& mu) {
    json probs = json::object();
    for (const auto& [x, p] : mu.probs()) probs[to_string(x)] = format_fraction(p);
    return json{{"probs", probs}};
}

inline json to_json(const Subgroup& k) {
    json elements = json::array();
    for (const auto& x : k.elements()) elements.push_back(to_string(x));
    json gens = json::array();
    for (const auto& x : k.generators()) gens.push_back(to_string(x));
    return json{{"size", k.size()}, {"elements", elements}, {"generators", gens}};
}

inline json to_json(const FormsInstance& inst) {
    json j{{"group", to_json(inst.group())}};
    if (inst.is_canonical()) {
        j["alpha"] = to_json(inst.alpha());
    } else {
        j["alpha1"] = to_json(inst.alpha1);
        j["alpha2"] = to_json(inst.alpha2);
        j["beta1"] = to_json(inst.beta1);
        j["beta2"] = to_json(inst.beta2);
    }
    j["mu1"] = to_json(inst.mu1);
    j["mu2"] = to_json(inst.mu2);
    return j;
}

inline json witness_json(const std::optional<ElementPair>& w) {
    if (!w) return nullptr;
    return json{{"s", to_string(w->first)}, {"t", to_string(w->second)}};
}

inline json to_json(const EquationCheck& c) {
    return json{{"holds", c.holds}, {"max_deviation", c.max_deviation}, {"witness", witness_json(c.witness)}};
}

/// {"symmetric", "eq42", "witness"}
inline json to_json(const SymmetryVerdict& v) {
    return json{{"symmetric", v.symmetric}, {"eq42", v.eq42.holds}, {"witness", witness_json(v.witness)}};
}

inline json to_json(const Classification& c) {
    json j{{"class", to_string(c.kind)}};
    if (c.witness) {
        j["subgroup"] = to_json(c.witness->subgroup);
        j["shift"] = to_string(c.witness->shift);
    }
    return j;
}

/// {"max_residual", "worst_increments", "quadratic"}
inline json to_json(const ChainReport& r) {
    json inc = json::array();
    for (const auto& x : r.worst_increments) inc.push_back(to_string(x));
    json j{{"max_residual", r.max_residual}, {"worst_increments", inc}};
    j["quadratic"] = r.quadratic ? json(*r.quadratic) : json(nullptr);
    j["increments_checked"] = r.increments_checked;
    j["exhaustive"] = r.exhaustive;
    return j;
}

inline json to_json(const SymmetryReport& r) {
    json j{{"source", r.source}, {"instance", to_json(r.instance)}, {"symmetric", r.symmetric}};
    if (r.symmetric) {
        j["classification"] = json{{"mu1", to_json(*r.class1)}, {"mu2", to_json(*r.class2)}};
    }
    j["kernel"] = to_json(r.kernel);
    j["tags"] = r.tags;
    return j;
}

inline json to_json(const ScanSummary& s) {
    return json{{"evaluated", s.evaluated}, {"symmetric", s.symmetric}, {"idempotent", s.idempotent},
                {"degenerate", s.degenerate}, {"other", s.other}};
}

inline json to_json(const SearchConfig& c) {
    return json{{"seed", c.seed}, {"support_size_cap", c.support_size_cap}, {"denominator_cap", c.denominator_cap},
                {"random_trials", c.random_trials}, {"max_candidates", c.max_candidates}};
}

/// Everything except the hits, which are streamed separately.
inline json padic_summary_json(const PadicReport& r) {
    json j{{"p", r.p}, {"k", r.k}, {"c", r.c}, {"modulus", r.modulus}, {"c0", r.c0}, {"c1", r.c1}};
    j["kernel"] = to_json(r.kernel);
    j["one_plus_alpha_is_automorphism"] = r.one_plus_alpha_is_auto;
    j["effective_support_cap"] = r.effective_support_cap;
    j["summary"] = to_json(r.scan.summary);
    j["kernel_witness"] = r.kernel_witness ? to_json(*r.kernel_witness) : json(nullptr);
    j["tag"] = r.tag;
    j["exploratory"] = r.exploratory;
    j["consistent"] = r.consistent;
    j["note"] = "finite-level analogue on Z_" + std::to_string(r.modulus) + "; no claim about the p-adic integers";
    return j;
}

}  // namespace heyde::io
