#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "heyde/json_io.hpp"
#include "heyde/verify.hpp"

namespace heyde::cli {

using io::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kVerdictTrue = 0,
    kVerdictFalse = 1,
    kUsageError = 2,
    kDisagreement = 3,
};

/// A finished command: the report goes to --out or stdout, the message to stderr.
struct Outcome {
    int code = kVerdictTrue;
    std::string report;
    std::string message;
};

struct Options {
    SearchConfig search;
    double tolerance = 1e-9;
    /// Fixed timestamp for reproducible reports; current UTC time otherwise.
    std::optional<std::string> timestamp;
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Worker count: hardware concurrency, capped by HEYDE_LAB_THREADS.
inline unsigned thread_limit() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("HEYDE_LAB_THREADS");
    if (env == nullptr || *env == '\0') return hw;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw SchemaError(std::string("HEYDE_LAB_THREADS must be a positive integer, got \"") + env + "\"");
    return std::min(hw, static_cast<unsigned>(v));
}

inline json manifest(const std::string& command, const std::vector<std::string>& inputs, const json& config,
                     const Options& opts) {
    return json{{"command", command},
                {"inputs", inputs},
                {"config", config},
                {"version", kVersion},
                {"timestamp", opts.timestamp ? *opts.timestamp : utc_timestamp()}};
}

inline json search_config_json(const Options& opts) {
    json c = io::to_json(opts.search);
    c["tolerance"] = opts.tolerance;
    return c;
}

/// Maps input and precondition errors to exit 2 and predicate disagreements
/// to exit 3; no report is produced in either case.
template <typename Body>
Outcome guarded(Body&& body) {
    try {
        return body();
    } catch (const PredicateDisagreement& e) {
        return {kDisagreement, "", std::string("predicate disagreement: ") + e.what()};
    } catch (const Error& e) {
        return {kUsageError, "", std::string("error: ") + e.what()};
    } catch (const nlohmann::json::exception& e) {
        return {kUsageError, "", std::string("schema error: ") + e.what()};
    }
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

inline Outcome check_instance(const FormsInstance& inst, const json& manifest_json, double tolerance) {
    json rep{{"manifest", manifest_json}, {"instance", io::to_json(inst)}};
    const bool canonical = inst.is_canonical();
    rep["canonical"] = canonical;

    const bool symmetric = is_conditionally_symmetric(inst);
    std::optional<CanonicalForm> cf;
    if (!canonical) {
        cf = canonicalize(inst);
        rep["alpha_prime"] = io::to_json(cf->alpha_prime);
    }
    const FormsInstance& canon = canonical ? inst : cf->instance;

    const JointDistribution joint = joint_of_forms(inst);
    const auto witness = find_asymmetry(joint);
    const EquationCheck eq42 = heyde_equation_check(canon, tolerance);
    const FormsInstance mforms = m_forms_instance(canon);
    const bool independent = are_forms_independent(mforms);
    const EquationCheck eq4 = independence_equation_check(mforms, tolerance);

    rep["symmetric"] = symmetric;
    rep["eq42"] = eq42.holds;
    rep["witness"] = io::witness_json(witness);
    rep["eq42_max_deviation"] = eq42.max_deviation;
    rep["m_forms_independent"] = independent;
    rep["eq4"] = eq4.holds;
    rep["eq4_max_deviation"] = eq4.max_deviation;

    const SymmetryReport sr = make_report(canon, "check");
    const bool symmetry_agrees = eq42.holds == symmetric && sr.symmetric == symmetric;
    const bool independence_agrees = eq4.holds == independent;
    const bool implication_holds = !symmetric || independent;
    rep["agreement"] = json{{"symmetry", symmetry_agrees},
                            {"independence", independence_agrees},
                            {"symmetric_implies_independent", implication_holds}};
    if (sr.symmetric) {
        rep["classifications"] = json{{"mu1", io::to_json(*sr.class1)}, {"mu2", io::to_json(*sr.class2)}};
    } else {
        rep["classifications"] = nullptr;
    }
    rep["kernel"] = io::to_json(sr.kernel);
    rep["tags"] = sr.tags;

    rep["chain"] = nullptr;
    if (symmetric) {
        if (auto phi = verify::chain_potentials(canon)) {
            const Endomorphism adj = adjoint(canon.alpha());
            ChainReport chain = heyde_chain_scan(phi->first, phi->second, adj);
            const auto pq = m_forms_potentials(phi->first, phi->second, adj);
            chain.quadratic = quadratic_check(pq.p, 1e-8);
            rep["chain"] = io::to_json(chain);
        }
    }

    std::string message = std::string("symmetric: ") + (symmetric ? "true" : "false");
    if (sr.symmetric) message += " (" + to_string(sr.class1->kind) + ", " + to_string(sr.class2->kind) + ")";
    message += "; kernel(I+alpha) has " + std::to_string(sr.kernel.size()) + " element(s)";
    int code = symmetric ? kVerdictTrue : kVerdictFalse;
    if (!symmetry_agrees || !independence_agrees || !implication_holds) {
        code = kDisagreement;
        message += "; predicates disagree";
    }
    return {code, rep.dump(2) + "\n", message};
}

inline Outcome cmd_check(const std::string& instance_path, const Options& opts) {
    return guarded([&] {
        const FormsInstance inst = io::parse_instance(io::read_file(instance_path));
        json config{{"tolerance", opts.tolerance}};
        return check_instance(inst, manifest("check", {instance_path}, config, opts), opts.tolerance);
    });
}

// ---------------------------------------------------------------------------
// search, padic
// ---------------------------------------------------------------------------

/// JSON lines: manifest, one report per symmetric hit, summary.
inline std::string scan_lines(const json& manifest_json, const ScanResult& scan, const json& tail) {
    std::string out = json{{"manifest", manifest_json}}.dump() + "\n";
    for (const auto& h : scan.hits) out += io::to_json(h).dump() + "\n";
    return out + tail.dump() + "\n";
}

inline Outcome cmd_search(const std::string& group_path, const std::string& alpha_path, Options opts) {
    return guarded([&] {
        const FiniteAbelianGroup g = io::parse_group(io::read_file(group_path));
        const Endomorphism alpha = io::parse_endomorphism(g, io::read_file(alpha_path));
        opts.search.threads = thread_limit();
        const ScanResult scan = grid_scan(alpha, opts.search);
        std::int64_t violations = 0;
        for (const auto& h : scan.hits)
            for (const auto& t : h.tags) violations += t == "theoremB-violation";
        json tail{{"summary", io::to_json(scan.summary)},
                  {"grid_candidates", scan.grid_candidates},
                  {"kernel", io::to_json(kernel(add(Endomorphism::identity(g), alpha)))},
                  {"violations", violations}};
        const json m = manifest("search", {group_path, alpha_path}, search_config_json(opts), opts);
        std::ostringstream msg;
        msg << g.to_string() << ": " << scan.summary.symmetric << " symmetric hits (" << scan.summary.idempotent
            << " idempotent, " << scan.summary.degenerate << " degenerate, " << scan.summary.other << " other)";
        if (violations) msg << "; " << violations << " symmetric non-idempotent pairs with trivial kernel";
        return Outcome{violations ? kVerdictFalse : kVerdictTrue, scan_lines(m, scan, tail), msg.str()};
    });
}

inline Outcome cmd_padic(std::int64_t p, std::int64_t k, std::int64_t c, Options opts) {
    return guarded([&] {
        opts.search.threads = thread_limit();
        const PadicReport rep = padic_scan(p, k, c, opts.search);
        json config = search_config_json(opts);
        config["p"] = p;
        config["k"] = k;
        config["c"] = c;
        const json m = manifest("padic", {}, config, opts);
        std::string out = scan_lines(m, rep.scan, json{{"padic", io::padic_summary_json(rep)}});
        std::ostringstream msg;
        msg << "Z_" << rep.modulus << ", c = " << rep.c << " (c0 = " << rep.c0 << ", c1 = " << rep.c1 << "): " << rep.tag
            << "; " << rep.scan.summary.symmetric << " symmetric hits, " << rep.scan.summary.other << " other"
            << (rep.consistent ? "" : "; INCONSISTENT with the expected case");
        return Outcome{rep.consistent ? kVerdictTrue : kVerdictFalse, std::move(out), msg.str()};
    });
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& [n, fn] : verify::suites()) out.push_back(n);
    return out;
}

/// Runs the named suites ("all" selects every suite).
inline Outcome cmd_verify(std::vector<std::string> names, const Options& opts) {
    return guarded([&] {
        if (names.empty() || (names.size() == 1 && names[0] == "all")) names = suite_names();
        for (const auto& n : names) {
            if (verify::find_suite(n) == nullptr) {
                std::string known;
                for (const auto& k : suite_names()) known += " " + k;
                return Outcome{kUsageError, "", "unknown suite \"" + n + "\"; known:" + known};
            }
        }
        verify::VerifyOptions vopts;
        vopts.seed = opts.search.seed;
        vopts.tolerance = opts.tolerance;
        vopts.search = opts.search;
        vopts.search.threads = thread_limit();
        json suites = json::array();
        bool all = true;
        std::ostringstream msg;
        for (const auto& n : names) {
            const auto r = verify::run_suite(n, *verify::find_suite(n), vopts);
            all = all && r.passed;
            suites.push_back(json{{"name", r.name},
                                  {"passed", r.passed},
                                  {"checks", r.checks},
                                  {"summary", r.summary},
                                  {"failures", r.failures}});
            char line[64];
            std::snprintf(line, sizeof line, "%-16s %s  %8.2fs  ", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.seconds);
            msg << line << r.summary << "\n";
            for (const auto& f : r.failures) msg << "    " << f << "\n";
        }
        json config = search_config_json(opts);
        config["suites"] = names;
        const json rep{{"manifest", manifest("verify", {}, config, opts)}, {"suites", suites}, {"passed", all}};
        std::string m = msg.str();
        if (!m.empty() && m.back() == '\n') m.pop_back();
        return Outcome{all ? kVerdictTrue : kVerdictFalse, rep.dump(2) + "\n", m};
    });
}

}  // namespace heyde::cli
