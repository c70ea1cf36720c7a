#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/funceq.hpp"
#include "heyde/group.hpp"
#include "heyde/predicates.hpp"
#include "heyde/random.hpp"
#include "heyde/search.hpp"

namespace heyde::verify {

struct VerifyOptions {
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    double residual_tolerance = 1e-8;
    /// Randomized canonical instances per group in the lemma1 family.
    std::int64_t instances_per_group = 170;
    SearchConfig search;
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::int64_t checks = 0;
    std::vector<std::string> failures;
    /// Short counters, e.g. "1020 instances, 418 symmetric".
    std::string summary;
    double seconds = 0.0;

    SuiteResult() = default;
    explicit SuiteResult(std::string n) : name(std::move(n)) {}

    void fail(std::string what) {
        passed = false;
        if (failures.size() < 20) failures.push_back(std::move(what));
    }
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) fail(what);
    }
};

inline std::string describe(const FormsInstance& inst) {
    std::string s = inst.group().to_string() + " alpha=[";
    for (std::size_t i = 0; i < inst.beta2.matrix().size(); ++i) {
        if (i) s += ";";
        for (std::size_t j = 0; j < inst.beta2.matrix()[i].size(); ++j) {
            if (j) s += " ";
            s += std::to_string(inst.beta2.matrix()[i][j]);
        }
    }
    s += "] mu1={";
    for (const auto& [x, p] : inst.mu1.probs()) s += "(" + to_string(x) + "):" + format_fraction(p) + " ";
    s += "} mu2={";
    for (const auto& [x, p] : inst.mu2.probs()) s += "(" + to_string(x) + "):" + format_fraction(p) + " ";
    return s + "}";
}

// ---------------------------------------------------------------------------
// Instance families
// ---------------------------------------------------------------------------

inline std::vector<FiniteAbelianGroup> lemma1_groups() {
    return {FiniteAbelianGroup({3}), FiniteAbelianGroup({5}),    FiniteAbelianGroup({7}),
            FiniteAbelianGroup({9}), FiniteAbelianGroup({3, 3}), FiniteAbelianGroup({15})};
}

/// Random canonical instance. Purely random pairs are almost never symmetric,
/// so the mix includes alpha = -I with mu1 = mu2, laws inside Ker(I + alpha),
/// degenerate pairs with x1 + alpha x2 = 0 and shifted Haar pairs.
inline FormsInstance random_canonical_instance(const FiniteAbelianGroup& g, Rng& rng) {
    const auto id = Endomorphism::identity(g);
    const std::uint64_t mode = uniform_below(rng, 5);
    if (mode == 1) {
        Distribution mu = random_distribution(g, rng, 4, 6);
        return FormsInstance::canonical(Endomorphism::scalar(g, -1), mu, mu);
    }
    const Endomorphism alpha = random_automorphism(g, rng);
    switch (mode) {
        case 0:
            return FormsInstance::canonical(alpha, random_distribution(g, rng, 4, 6), random_distribution(g, rng, 4, 6));
        case 2: {
            const Subgroup k = kernel(add(id, alpha));
            if (!k.is_trivial()) {
                Distribution mu = random_distribution_on(k, rng, 6);
                return FormsInstance::canonical(alpha, mu, mu);
            }
            [[fallthrough]];
        }
        case 3: {
            const GroupElement x2 = g.at(uniform_int(rng, 0, g.order() - 1));
            const GroupElement x1 = uniform_below(rng, 2) == 0 ? g.negate(alpha.apply(x2))
                                                               : g.at(uniform_int(rng, 0, g.order() - 1));
            return FormsInstance::canonical(alpha, point_mass(g, x1), point_mass(g, x2));
        }
        default: {
            const Subgroup k = subgroup_generated(g, {g.at(uniform_int(rng, 0, g.order() - 1))});
            const Distribution haar = haar_on(k);
            return FormsInstance::canonical(alpha, shift(haar, g.at(uniform_int(rng, 0, g.order() - 1))),
                                            shift(haar, g.at(uniform_int(rng, 0, g.order() - 1))));
        }
    }
}

/// The lemma1 family: instances_per_group instances on each lemma1 group.
inline std::vector<FormsInstance> lemma1_instances(const VerifyOptions& opts) {
    std::vector<FormsInstance> out;
    Rng rng(opts.seed);
    for (const auto& g : lemma1_groups())
        for (std::int64_t i = 0; i < opts.instances_per_group; ++i) out.push_back(random_canonical_instance(g, rng));
    return out;
}

inline std::vector<FormsInstance> symmetric_only(const std::vector<FormsInstance>& all) {
    std::vector<FormsInstance> out;
    for (const auto& inst : all)
        if (is_conditionally_symmetric(inst)) out.push_back(inst);
    return out;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Exact symmetry agrees with the characteristic-function equation.
inline SuiteResult lemma1(const VerifyOptions& opts) {
    SuiteResult r("lemma1");
    std::int64_t symmetric = 0;
    const auto instances = lemma1_instances(opts);
    for (const auto& inst : instances) {
        const bool exact = is_conditionally_symmetric(inst);
        const EquationCheck eq = heyde_equation_check(inst, opts.tolerance);
        symmetric += exact;
        r.expect(exact == eq.holds, "exact=" + std::to_string(exact) + " eq42=" + std::to_string(eq.holds) + " on " +
                                        describe(inst));
    }
    r.expect(static_cast<std::int64_t>(instances.size()) >= 1000, "fewer than 1000 instances");
    r.expect(symmetric > 0 && symmetric < static_cast<std::int64_t>(instances.size()),
             "family does not mix symmetric and asymmetric instances");
    r.summary = std::to_string(instances.size()) + " instances, " + std::to_string(symmetric) + " symmetric";
    return r;
}

/// Symmetry forces independence of M1, M2, checked exactly and by the characteristic-function equation.
inline SuiteResult lemma5(const VerifyOptions& opts) {
    SuiteResult r("lemma5");
    const auto sym = symmetric_only(lemma1_instances(opts));
    for (const auto& inst : sym) {
        const FormsInstance m = m_forms_instance(inst);
        const bool exact = are_forms_independent(m);
        const EquationCheck eq = independence_equation_check(m, opts.tolerance);
        r.expect(exact, "M1, M2 not independent on " + describe(inst));
        r.expect(eq.holds == exact, "independence equation disagrees (deviation " + std::to_string(eq.max_deviation) +
                                        ") on " + describe(inst));
    }
    r.summary = std::to_string(sym.size()) + " symmetric instances";
    return r;
}

/// Independence agrees with its characteristic-function equation on general forms.
inline SuiteResult lemma8(const VerifyOptions& opts) {
    SuiteResult r("lemma8");
    Rng rng(opts.seed + 8);
    std::int64_t independent = 0;
    const auto groups = lemma1_groups();
    auto check = [&](const FormsInstance& inst) {
        const bool exact = are_forms_independent(inst);
        const EquationCheck eq = independence_equation_check(inst, opts.tolerance);
        independent += exact;
        r.expect(exact == eq.holds, "independent=" + std::to_string(exact) + " eq4=" + std::to_string(eq.holds));
    };
    for (int i = 0; i < 500; ++i) {
        const auto& g = groups[static_cast<std::size_t>(uniform_below(rng, groups.size()))];
        const auto zero = Endomorphism::scalar(g, 0);
        Distribution m1 = random_distribution(g, rng, 4, 6);
        Distribution m2 = random_distribution(g, rng, 4, 6);
        if (i % 2 == 0) {
            check(FormsInstance(random_endomorphism(g, rng), random_endomorphism(g, rng), random_endomorphism(g, rng),
                                random_endomorphism(g, rng), m1, m2));
        } else {
            // L1 = a1 xi_1, L2 = b2 xi_2: independent by construction.
            check(FormsInstance(random_endomorphism(g, rng), zero, zero, random_endomorphism(g, rng), m1, m2));
        }
    }
    r.summary = std::to_string(r.checks) + " instances, " + std::to_string(independent) + " independent";
    return r;
}

/// alpha = -I: equal laws are symmetric; on odd order symmetric forces equal laws.
inline SuiteResult corollary1(const VerifyOptions& opts) {
    SuiteResult r("corollary1");
    Rng rng(opts.seed + 1);
    const auto groups = lemma1_groups();
    for (int i = 0; i < 100; ++i) {
        const auto& g = groups[static_cast<std::size_t>(i) % groups.size()];
        Distribution mu = random_distribution(g, rng, g.order(), 6);
        const auto inst = FormsInstance::canonical(Endomorphism::scalar(g, -1), mu, mu);
        r.expect(is_conditionally_symmetric(inst), "equal laws not symmetric: " + describe(inst));
    }
    std::int64_t hits = 0;
    for (std::int64_t n : {3, 5, 7, 9}) {
        const FiniteAbelianGroup g({n});
        SearchConfig cfg = opts.search;
        const ScanResult scan = grid_scan(Endomorphism::scalar(g, -1), cfg);
        for (const auto& h : scan.hits) {
            ++hits;
            r.expect(symmetry_forces_equal(h.instance), "symmetric with different laws: " + describe(h.instance));
        }
    }
    r.expect(hits > 0, "grid scans found no symmetric alpha = -I pairs");
    r.summary = "100 equal-law instances, " + std::to_string(hits) + " grid hits with alpha = -I";
    return r;
}

/// Random general forms instance; even draws are built from a symmetric
/// canonical instance so both verdicts occur.
inline FormsInstance random_general_instance(const FiniteAbelianGroup& g, Rng& rng, bool from_symmetric) {
    const Endomorphism a1 = random_automorphism(g, rng);
    const Endomorphism a2 = random_automorphism(g, rng);
    const Endomorphism b1 = random_automorphism(g, rng);
    if (!from_symmetric) {
        return FormsInstance(a1, a2, b1, random_endomorphism(g, rng), random_distribution(g, rng, 4, 6),
                             random_distribution(g, rng, 4, 6));
    }
    FormsInstance canon = random_canonical_instance(g, rng);
    while (!is_conditionally_symmetric(canon)) canon = random_canonical_instance(g, rng);
    // beta2 = b1 a1^-1 alpha' a2 so that a1 b1^-1 b2 a2^-1 = alpha'; mu_j = a_j^-1(eta_j).
    const Endomorphism b2 = compose(compose(b1, invert(a1)), compose(canon.alpha(), a2));
    return FormsInstance(a1, a2, b1, b2, push_forward(canon.mu1, invert(a1)), push_forward(canon.mu2, invert(a2)));
}

/// Canonicalization keeps the verdict; its kernel matches a brute-force kernel.
inline SuiteResult corollary3(const VerifyOptions& opts) {
    SuiteResult r("corollary3");
    Rng rng(opts.seed + 3);
    std::int64_t symmetric = 0;
    for (int i = 0; i < 200; ++i) {
        const FiniteAbelianGroup g({i % 2 == 0 ? 7 : 9});
        const FormsInstance inst = random_general_instance(g, rng, (i / 2) % 2 == 0);
        const CanonicalForm cf = canonicalize(inst);
        const bool before = is_conditionally_symmetric(inst);
        symmetric += before;
        r.expect(before == is_conditionally_symmetric(cf.instance), "canonicalization changed the verdict");
        // x with x + a1 b1^-1 b2 a2^-1 x = 0, inverses found by search.
        auto preimage = [&](const Endomorphism& e, const GroupElement& y) {
            for (const auto& x : g.elements())
                if (e.apply(x) == y) return x;
            throw std::logic_error("not surjective");
        };
        std::vector<GroupElement> brute;
        for (const auto& x : g.elements()) {
            const GroupElement ap = inst.alpha1.apply(preimage(inst.beta1, inst.beta2.apply(preimage(inst.alpha2, x))));
            if (g.add(x, ap) == g.zero()) brute.push_back(x);
        }
        r.expect(brute == cf.kernel.elements(), "kernel mismatch");
    }
    r.expect(symmetric > 0 && symmetric < 200, "family does not mix verdicts");
    r.summary = "200 general instances, " + std::to_string(symmetric) + " symmetric";
    return r;
}

struct ChainStats {
    std::int64_t eligible = 0;
    std::int64_t trivial_kernel = 0;
    double worst_chain = 0.0;
    double worst_eq = 0.0;
    double worst_m_chain = 0.0;
    double worst_m_eq = 0.0;
    double worst_third = 0.0;
    double worst_p = 0.0;
};

/// phi_j = -log of the symmetrized characteristic functions, when strictly positive.
inline std::optional<std::pair<GroupFunction, GroupFunction>> chain_potentials(const FormsInstance& inst) {
    const Distribution nu1 = symmetrize(inst.mu1);
    const Distribution nu2 = symmetrize(inst.mu2);
    if (!has_positive_char(nu1) || !has_positive_char(nu2)) return std::nullopt;
    return std::make_pair(neg_log_char(nu1), neg_log_char(nu2));
}

/// Log-equation chain for every symmetric lemma1 instance with positive
/// symmetrized characteristic functions.
inline SuiteResult chain16(const VerifyOptions& opts) {
    SuiteResult r("chain16");
    ChainStats st;
    for (const auto& inst : symmetric_only(lemma1_instances(opts))) {
        const auto phi = chain_potentials(inst);
        if (!phi) continue;
        ++st.eligible;
        const Endomorphism adj = adjoint(inst.alpha());
        const double eq = log_heyde_equation_residual(phi->first, phi->second, adj);
        const ChainReport rep = heyde_chain_scan(phi->first, phi->second, adj);
        st.worst_eq = std::max(st.worst_eq, eq);
        st.worst_chain = std::max(st.worst_chain, rep.max_residual);
        r.expect(eq < opts.residual_tolerance, "log equation residual " + std::to_string(eq) + " on " + describe(inst));
        r.expect(rep.exhaustive, "chain not exhaustive on " + describe(inst));
        r.expect(rep.max_residual < opts.residual_tolerance,
                 "chain residual " + std::to_string(rep.max_residual) + " on " + describe(inst));
    }
    r.expect(st.eligible > 0, "no eligible instances");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%lld eligible, max log-eq residual %.3g, max chain residual %.3g",
                  static_cast<long long>(st.eligible), st.worst_eq, st.worst_chain);
    r.summary = buf;
    return r;
}

/// M-forms chain; on odd order with Ker(I+alpha) = {0} also the third
/// difference of P, the quadratic equation for P and P = 0.
inline SuiteResult chain10(const VerifyOptions& opts) {
    SuiteResult r("chain10");
    ChainStats st;
    std::map<std::vector<std::int64_t>, bool> vanishing;
    for (const auto& inst : symmetric_only(lemma1_instances(opts))) {
        const auto psi = chain_potentials(inst);
        if (!psi) continue;
        ++st.eligible;
        const auto& g = inst.group();
        const Endomorphism adj = adjoint(inst.alpha());
        const double m_eq = m_forms_equation_residual(psi->first, psi->second, adj);
        const ChainReport rep = m_forms_chain_scan(psi->first, psi->second, adj);
        st.worst_m_eq = std::max(st.worst_m_eq, m_eq);
        st.worst_m_chain = std::max(st.worst_m_chain, rep.max_residual);
        r.expect(m_eq < opts.residual_tolerance, "M-forms equation residual " + std::to_string(m_eq));
        r.expect(rep.exhaustive, "M-forms chain not exhaustive");
        r.expect(rep.max_residual < opts.residual_tolerance,
                 "M-forms chain residual " + std::to_string(rep.max_residual) + " on " + describe(inst));
        const bool trivial = kernel(add(Endomorphism::identity(g), inst.alpha())).is_trivial();
        if (!trivial || g.order() % 2 == 0) continue;
        ++st.trivial_kernel;
        const auto pq = m_forms_potentials(psi->first, psi->second, adj);
        const double d3 = third_difference_residual(pq.p);
        st.worst_third = std::max(st.worst_third, d3);
        st.worst_p = std::max(st.worst_p, pq.p.max_abs());
        r.expect(d3 < opts.residual_tolerance, "third difference of P " + std::to_string(d3));
        r.expect(quadratic_check(pq.p, opts.residual_tolerance), "P fails the quadratic equation");
        auto [it, fresh] = vanishing.try_emplace(g.cyclic_orders(), false);
        if (fresh) it->second = quadratic_vanishing(g).only_zero;
        r.expect(it->second, "quadratic_vanishing fails on " + g.to_string());
        r.expect(pq.p.max_abs() < opts.residual_tolerance, "P is not zero: " + std::to_string(pq.p.max_abs()));
    }
    r.expect(st.eligible > 0, "no eligible instances");
    r.expect(st.trivial_kernel > 0, "no trivial-kernel instances");
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "%lld eligible (%lld with trivial kernel), max M-forms equation %.3g, max M-forms chain %.3g, "
                  "max third difference of P %.3g, max |P| %.3g",
                  static_cast<long long>(st.eligible), static_cast<long long>(st.trivial_kernel), st.worst_m_eq,
                  st.worst_m_chain, st.worst_third, st.worst_p);
    r.summary = buf;
    return r;
}

inline std::vector<FiniteAbelianGroup> quadratic_groups() {
    std::vector<FiniteAbelianGroup> out;
    for (std::int64_t n : {2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 16, 25, 27, 49, 64, 81}) out.emplace_back(std::vector{n});
    for (auto v : std::vector<std::vector<std::int64_t>>{{2, 2}, {2, 4}, {3, 3}, {4, 4}, {5, 5}, {3, 9}, {9, 9},
                                                         {2, 2, 2}, {3, 3, 3}, {3, 3, 3, 3}, {2, 3, 5}}) {
        out.emplace_back(v);
    }
    return out;
}

/// Quadratic functions vanish on finite groups; Gaussian means degenerate.
inline SuiteResult quadratic(const VerifyOptions& opts) {
    SuiteResult r("quadratic");
    for (const auto& g : quadratic_groups()) {
        const auto rec = quadratic_vanishing(g);
        r.expect(rec.only_zero && rec.rank == g.order(), "quadratic_vanishing fails on " + g.to_string());
    }
    Rng rng(opts.seed + 11);
    const auto groups = lemma1_groups();
    std::int64_t degenerate = 0;
    for (int i = 0; i < 500; ++i) {
        const auto& g = groups[static_cast<std::size_t>(uniform_below(rng, groups.size()))];
        const Distribution mu = uniform_below(rng, 3) == 0 ? point_mass(g, g.at(uniform_int(rng, 0, g.order() - 1)))
                                                           : random_distribution(g, rng, g.order(), 6);
        const bool deg = is_degenerate(mu);
        degenerate += deg;
        r.expect(is_gaussian(mu) == deg, "is_gaussian differs from is_degenerate");
        r.expect(has_gaussian_form(mu, opts.tolerance) == deg, "Gaussian form test differs from is_degenerate");
    }
    r.summary = std::to_string(quadratic_groups().size()) + " groups, 500 distributions (" +
                std::to_string(degenerate) + " degenerate)";
    return r;
}

/// The kernel construction on Z9 with alpha = 5.
inline SuiteResult necessity(const VerifyOptions&) {
    SuiteResult r("necessity");
    const FiniteAbelianGroup g({9});
    const Distribution mu = Distribution::from_weights(g, {{g.element({3}), 1}, {g.element({6}), 1}});
    const FormsInstance inst = kernel_construction(Endomorphism::scalar(g, 5), mu);
    r.expect(is_conditionally_symmetric(inst), "kernel construction not symmetric");
    r.expect(!is_idempotent_shift(inst.mu1).has_value(), "kernel-supported law is idempotent");
    r.summary = "Z9, alpha = 5, mu = 1/2 on {3, 6}";
    return r;
}

/// Haar pair on Z15 is symmetric with witness (K, 0); on Z9 with alpha = 4 it is not.
inline SuiteResult idempotent_witness(const VerifyOptions&) {
    SuiteResult r("idempotent-witness");
    {
        const FiniteAbelianGroup g({15});
        const Subgroup k = subgroup_generated(g, {g.element({3})});
        const SymmetryReport rep =
            make_report(FormsInstance::canonical(Endomorphism::scalar(g, 7), haar_on(k), haar_on(k)), "fixture");
        r.expect(rep.symmetric, "Z15 Haar pair not symmetric");
        for (const auto& c : {rep.class1, rep.class2}) {
            r.expect(c && c->kind == DistributionClass::idempotent_shift && c->witness &&
                         c->witness->subgroup == k && c->witness->shift == g.zero(),
                     "Z15 Haar law not classified as (K, 0)");
        }
    }
    {
        const FiniteAbelianGroup g({9});
        const Subgroup k = subgroup_generated(g, {g.element({3})});
        r.expect(!is_conditionally_symmetric(FormsInstance::canonical(Endomorphism::scalar(g, 4), haar_on(k), haar_on(k))),
                 "Z9 Haar pair with alpha = 4 is symmetric");
    }
    r.summary = "Z15 alpha = 7 and Z9 alpha = 4";
    return r;
}

struct ScanCase {
    std::int64_t n;
    std::int64_t c;
};

inline std::vector<ScanCase> invertible_scan_cases() { return {{5, 2}, {7, 3}, {9, 4}, {15, 7}}; }

/// Grid scans with I + alpha invertible on odd order find only idempotent pairs.
inline SuiteResult theorem_b(const VerifyOptions& opts) {
    SuiteResult r("theoremB");
    std::string summary;
    for (const auto& [n, c] : invertible_scan_cases()) {
        const FiniteAbelianGroup g({n});
        const Endomorphism alpha = Endomorphism::scalar(g, c);
        r.expect(add(Endomorphism::identity(g), alpha).is_auto(), "I + alpha not invertible on Z" + std::to_string(n));
        const ScanResult scan = grid_scan(alpha, opts.search);
        r.expect(scan.summary.other == 0, "Z" + std::to_string(n) + ": " + std::to_string(scan.summary.other) +
                                              " symmetric non-idempotent pairs");
        r.expect(scan.summary.symmetric > 0, "Z" + std::to_string(n) + ": no symmetric hits");
        for (const auto& h : scan.hits)
            for (const auto& t : h.tags)
                if (t == "theoremB-violation") r.fail("violation: " + describe(h.instance));
        if (!summary.empty()) summary += "; ";
        summary += "Z" + std::to_string(n) + " a=" + std::to_string(c) + ": " + std::to_string(scan.summary.symmetric) +
                   " hits, " + std::to_string(scan.summary.other) + " other";
    }
    for (const auto& sub : {necessity(opts), idempotent_witness(opts)}) {
        r.checks += sub.checks;
        for (const auto& f : sub.failures) r.fail(sub.name + ": " + f);
    }
    r.summary = summary;
    return r;
}

/// Finite-level scans on Z_{p^k}.
inline SuiteResult theorem_c_finite(const VerifyOptions& opts) {
    SuiteResult r("theoremC-finite");
    const PadicReport a = padic_scan(3, 3, 4, opts.search);
    r.expect(a.consistent && a.scan.summary.other == 0 && a.one_plus_alpha_is_auto,
             "p=3 c=4: non-idempotent symmetric hits");
    r.expect(a.tag == "finite-level 1(i) analogue: all symmetric hits idempotent", "p=3 c=4: tag " + a.tag);
    const PadicReport b = padic_scan(3, 3, 5, opts.search);
    r.expect(b.consistent && b.scan.summary.other + (b.kernel_witness ? 1 : 0) >= 1,
             "p=3 c=5: no non-idempotent symmetric hit");
    r.expect(b.tag == "finite-level 2(i) analogue: counterexamples found", "p=3 c=5: tag " + b.tag);
    const PadicReport e = padic_scan(2, 3, 3, opts.search);
    r.expect(e.exploratory && e.tag == "exploratory p=2", "p=2 run not tagged exploratory");
    r.summary = "c=4: " + std::to_string(a.scan.summary.symmetric) + " hits, " + std::to_string(a.scan.summary.other) +
                " other; c=5: " + std::to_string(b.scan.summary.other) + " other from the grid plus kernel witness; p=2: " +
                std::to_string(e.scan.summary.other) + " other (not asserted)";
    return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo cross-validation
// ---------------------------------------------------------------------------

/// (1/2) sum |P(s,t) - P(s,-t)| over all (s, t); zero iff symmetric, and
/// 2-Lipschitz in total variation.
inline double asymmetry(const FiniteAbelianGroup& g, const std::map<ElementPair, double>& joint) {
    double total = 0.0;
    for (const auto& [st, p] : joint) {
        auto it = joint.find({st.first, g.negate(st.second)});
        // An absent mirror (s, -t) has its own term |0 - p| in the full sum.
        total += it == joint.end() ? 2.0 * p : std::fabs(p - it->second);
    }
    return 0.5 * total;
}

inline std::map<ElementPair, double> exact_joint_doubles(const FormsInstance& inst) {
    std::map<ElementPair, double> out;
    const JointDistribution joint = joint_of_forms(inst);
    for (const auto& [st, p] : joint.probs()) out[st] = to_double(p);
    return out;
}

struct MonteCarloCheck {
    bool exact_symmetric = false;
    bool empirical_symmetric = false;
    double tv = 0.0;
    double tolerance = 0.0;
    double asym_exact = 0.0;
    double asym_empirical = 0.0;
};

/// tolerance = 4 sqrt(|support| / count); the empirical verdict is
/// "symmetric" iff the empirical asymmetry is within 2 tolerance.
inline MonteCarloCheck monte_carlo_check(const FormsInstance& inst, std::size_t count, std::uint64_t seed) {
    const auto& g = inst.group();
    const auto exact = exact_joint_doubles(inst);
    const auto emp = empirical_joint(inst, count, seed);
    MonteCarloCheck m;
    m.exact_symmetric = is_conditionally_symmetric(inst);
    m.tolerance = 4.0 * std::sqrt(static_cast<double>(exact.size()) / static_cast<double>(count));
    std::set<ElementPair> keys;
    for (const auto& [k, v] : exact) keys.insert(k);
    for (const auto& [k, v] : emp) keys.insert(k);
    for (const auto& k : keys) {
        const auto a = exact.find(k);
        const auto b = emp.find(k);
        m.tv += std::fabs((a == exact.end() ? 0.0 : a->second) - (b == emp.end() ? 0.0 : b->second));
    }
    m.tv *= 0.5;
    m.asym_exact = asymmetry(g, exact);
    m.asym_empirical = asymmetry(g, emp);
    m.empirical_symmetric = m.asym_empirical <= 2.0 * m.tolerance;
    return m;
}

/// 10 symmetric and 10 clearly asymmetric instances (exact asymmetry above
/// 4 tolerance, so sampling noise within tolerance cannot flip the verdict).
inline std::vector<FormsInstance> monte_carlo_instances(std::uint64_t seed, std::size_t count) {
    std::vector<FormsInstance> sym, asym;
    Rng rng(seed);
    const auto groups = lemma1_groups();
    while (sym.size() < 10 || asym.size() < 10) {
        const auto& g = groups[static_cast<std::size_t>(uniform_below(rng, groups.size()))];
        FormsInstance inst = random_canonical_instance(g, rng);
        if (is_conditionally_symmetric(inst)) {
            if (sym.size() < 10) sym.push_back(std::move(inst));
            continue;
        }
        const auto exact = exact_joint_doubles(inst);
        const double tol = 4.0 * std::sqrt(static_cast<double>(exact.size()) / static_cast<double>(count));
        if (asym.size() < 10 && asymmetry(g, exact) > 4.0 * tol) asym.push_back(std::move(inst));
    }
    sym.insert(sym.end(), asym.begin(), asym.end());
    return sym;
}

inline SuiteResult monte_carlo(const VerifyOptions& opts, std::size_t count = 100'000) {
    SuiteResult r("montecarlo");
    const auto instances = monte_carlo_instances(opts.seed + 13, count);
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const MonteCarloCheck m = monte_carlo_check(instances[i], count, opts.seed + 100 + 2 * i);
        worst_ratio = std::max(worst_ratio, m.tv / m.tolerance);
        r.expect(m.tv <= m.tolerance, "TV " + std::to_string(m.tv) + " above " + std::to_string(m.tolerance) + " on " +
                                          describe(instances[i]));
        r.expect(m.empirical_symmetric == m.exact_symmetric,
                 "empirical asymmetry " + std::to_string(m.asym_empirical) + " contradicts exact verdict on " +
                     describe(instances[i]));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "20 instances, count %zu, max TV/tolerance %.3f", count, worst_ratio);
    r.summary = buf;
    return r;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using SuiteFn = std::function<SuiteResult(const VerifyOptions&)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suites() {
    static const std::vector<std::pair<std::string, SuiteFn>> all = {
        {"lemma1", lemma1},
        {"lemma5", lemma5},
        {"lemma8", lemma8},
        {"corollary1", corollary1},
        {"corollary3", corollary3},
        {"chain16", chain16},
        {"chain10", chain10},
        {"quadratic", quadratic},
        {"theoremB", theorem_b},
        {"theoremC-finite", theorem_c_finite},
        {"montecarlo", [](const VerifyOptions& o) { return monte_carlo(o); }},
    };
    return all;
}

inline const SuiteFn* find_suite(const std::string& name) {
    for (const auto& [n, fn] : suites())
        if (n == name) return &fn;
    return nullptr;
}

inline SuiteResult run_suite(const std::string& name, const SuiteFn& fn, const VerifyOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    try {
        r = fn(opts);
    } catch (const std::exception& e) {
        r = SuiteResult(name);
        r.fail(std::string("exception: ") + e.what());
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace heyde::verify
