#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/group.hpp"
#include "heyde/predicates.hpp"
#include "heyde/random.hpp"

namespace heyde {

struct SearchConfig {
    std::int64_t support_size_cap = 3;
    std::int64_t denominator_cap = 6;
    std::int64_t random_trials = 10'000;
    std::uint64_t seed = 0;
    /// Worker threads; 0 means hardware concurrency. Output does not depend on it.
    unsigned threads = 1;
    /// Upper bound on grid pairs plus random trials.
    std::int64_t max_candidates = 100'000'000;

    void validate() const {
        if (support_size_cap < 1) throw PreconditionViolation("support_size_cap must be at least 1");
        if (denominator_cap < 1) throw PreconditionViolation("denominator_cap must be at least 1");
        if (random_trials < 0) throw PreconditionViolation("random_trials must be nonnegative");
    }
};

enum class DistributionClass { degenerate, idempotent_shift, other };

inline std::string to_string(DistributionClass c) {
    switch (c) {
        case DistributionClass::degenerate: return "degenerate";
        case DistributionClass::idempotent_shift: return "idempotent-shift";
        case DistributionClass::other: return "other";
    }
    return "other";
}

struct Classification {
    DistributionClass kind = DistributionClass::other;
    std::optional<IdempotentWitness> witness;
};

inline Classification classify(const Distribution& mu) {
    auto w = is_idempotent_shift(mu);
    if (!w) return {DistributionClass::other, std::nullopt};
    const auto kind = is_degenerate(mu) ? DistributionClass::degenerate : DistributionClass::idempotent_shift;
    return {kind, std::move(w)};
}

/// Outcome for one canonical instance (group, alpha, mu1, mu2).
struct SymmetryReport {
    FormsInstance instance;
    bool symmetric = false;
    /// Present iff symmetric.
    std::optional<Classification> class1;
    std::optional<Classification> class2;
    /// Ker(I + alpha).
    Subgroup kernel;
    std::vector<std::string> tags;
    /// "grid", "random", "kernel-construction" or "order2-construction".
    std::string source;
};

/// symmetric = idempotent + other; degenerate counts hits with both laws
/// degenerate and is included in idempotent.
struct ScanSummary {
    std::int64_t evaluated = 0;
    std::int64_t symmetric = 0;
    std::int64_t idempotent = 0;
    std::int64_t degenerate = 0;
    std::int64_t other = 0;

    void add(const SymmetryReport& r) {
        if (!r.symmetric) return;
        ++symmetric;
        const bool idem1 = r.class1->kind != DistributionClass::other;
        const bool idem2 = r.class2->kind != DistributionClass::other;
        if (idem1 && idem2) {
            ++idempotent;
            if (r.class1->kind == DistributionClass::degenerate && r.class2->kind == DistributionClass::degenerate)
                ++degenerate;
        } else {
            ++other;
        }
    }
};

struct ScanResult {
    /// Symmetric hits in canonical candidate order.
    std::vector<SymmetryReport> hits;
    ScanSummary summary;
    std::int64_t grid_candidates = 0;
};

/// Evaluates one canonical instance exactly and classifies it.
inline SymmetryReport make_report(FormsInstance inst, std::string source) {
    const auto& g = inst.group();
    Subgroup k = kernel(add(Endomorphism::identity(g), inst.alpha()));
    SymmetryReport r{std::move(inst), false, std::nullopt, std::nullopt, std::move(k), {}, std::move(source)};
    r.symmetric = is_conditionally_symmetric(r.instance);
    if (!r.symmetric) return r;
    r.class1 = classify(r.instance.mu1);
    r.class2 = classify(r.instance.mu2);
    const bool idempotent =
        r.class1->kind != DistributionClass::other && r.class2->kind != DistributionClass::other;
    const bool odd = g.order() % 2 == 1;
    if (!odd) r.tags.emplace_back("order2-present");
    if (r.kernel.is_trivial()) {
        if (odd) r.tags.emplace_back(idempotent ? "theoremB-consistent" : "theoremB-violation");
    } else {
        r.tags.emplace_back(idempotent ? "kernel-nontrivial" : "kernel-counterexample");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// xi_1, xi_2 iid with law `weights` inside K = Ker(I + alpha), on which
/// alpha acts as -I. Always conditionally symmetric.
inline FormsInstance kernel_construction(const Endomorphism& alpha, const Distribution& weights) {
    require_same_group(alpha.group(), weights.group());
    const auto& g = alpha.group();
    const Subgroup k = kernel(add(Endomorphism::identity(g), alpha));
    if (k.is_trivial()) throw PreconditionViolation("Ker(I + alpha) is trivial");
    for (const auto& [x, p] : weights.probs()) {
        if (!k.contains(x)) throw PreconditionViolation("support element (" + to_string(x) + ") is outside Ker(I + alpha)");
    }
    FormsInstance inst = FormsInstance::canonical(alpha, weights, weights);
    if (!is_conditionally_symmetric(inst)) throw std::logic_error("kernel construction produced an asymmetric instance");
    return inst;
}

/// Independent laws on the subgroup generated by elements of order 2, where
/// t = -t, so symmetry holds for every alpha.
inline FormsInstance order2_construction(const Endomorphism& alpha, const Distribution& mu1, const Distribution& mu2) {
    const auto& g = alpha.group();
    require_same_group(g, mu1.group());
    require_same_group(g, mu2.group());
    const Subgroup h = order2_subgroup(g);
    if (h.is_trivial()) throw PreconditionViolation("group has no elements of order 2");
    for (const auto* mu : {&mu1, &mu2})
        for (const auto& [x, p] : mu->probs())
            if (!h.contains(x)) throw PreconditionViolation("support element (" + to_string(x) + ") has order above 2");
    FormsInstance inst = FormsInstance::canonical(alpha, mu1, mu2);
    if (!is_conditionally_symmetric(inst)) throw std::logic_error("order-2 construction produced an asymmetric instance");
    return inst;
}

// ---------------------------------------------------------------------------
// Grid and random scans
// ---------------------------------------------------------------------------

namespace detail {

/// Primitive weight vectors (gcd 1) of the given length with sum <= cap, in
/// lexicographic order. Each is the unique integer form of a probability
/// vector with denominator <= cap.
inline std::vector<std::vector<std::int64_t>> weight_vectors(std::int64_t length, std::int64_t cap) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur;
    auto rec = [&](auto&& self, std::int64_t remaining) -> void {
        if (static_cast<std::int64_t>(cur.size()) == length) {
            std::int64_t g = 0;
            for (auto w : cur) g = std::gcd(g, w);
            if (g == 1) out.push_back(cur);
            return;
        }
        const std::int64_t slots_left = length - static_cast<std::int64_t>(cur.size()) - 1;
        for (std::int64_t w = 1; w + slots_left <= remaining; ++w) {
            cur.push_back(w);
            self(self, remaining - w);
            cur.pop_back();
        }
    };
    rec(rec, cap);
    return out;
}

inline long double binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    long double r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

/// Flat candidate storage: candidate c has size[c] atoms at
/// idx[c*stride ...] with integer weights w[c*stride ...].
struct CandidateSet {
    std::int64_t stride = 0;
    std::vector<std::int32_t> size;
    std::vector<std::int32_t> idx;
    std::vector<std::int64_t> w;

    std::int64_t count() const { return static_cast<std::int64_t>(size.size()); }
};

inline CandidateSet grid_candidates(std::int64_t n, std::int64_t support_cap, std::int64_t denominator_cap) {
    CandidateSet cs;
    cs.stride = support_cap;
    for (std::int64_t s = 1; s <= std::min(support_cap, n); ++s) {
        const auto weights = weight_vectors(s, denominator_cap);
        if (weights.empty()) continue;
        std::vector<std::int32_t> subset(static_cast<std::size_t>(s));
        std::iota(subset.begin(), subset.end(), 0);
        for (;;) {
            for (const auto& wv : weights) {
                cs.size.push_back(static_cast<std::int32_t>(s));
                for (std::int64_t j = 0; j < support_cap; ++j) {
                    cs.idx.push_back(j < s ? subset[static_cast<std::size_t>(j)] : 0);
                    cs.w.push_back(j < s ? wv[static_cast<std::size_t>(j)] : 0);
                }
            }
            // Next s-subset of [0, n) in lexicographic order.
            std::int64_t i = s - 1;
            while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - s + i) --i;
            if (i < 0) break;
            ++subset[static_cast<std::size_t>(i)];
            for (std::int64_t j = i + 1; j < s; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return cs;
}

/// Exact symmetry test on integer weights; the common positive scale factor
/// does not affect P(s, t) = P(s, -t).
class FastSymmetry {
public:
    struct Cell {
        std::int64_t s;
        std::int64_t t;
        std::int64_t m;
    };

    FastSymmetry(const FiniteAbelianGroup& g, const Endomorphism& alpha) : n_(g.order()) {
        const IndexArithmetic ix(g);
        neg_ = ix.neg;
        alpha_ = index_table(alpha);
        if (n_ <= 2048) {
            table_.resize(static_cast<std::size_t>(n_ * n_));
            for (std::int64_t a = 0; a < n_; ++a)
                for (std::int64_t b = 0; b < n_; ++b) table_[static_cast<std::size_t>(a * n_ + b)] = static_cast<std::int32_t>(ix.add(a, b));
        } else {
            elements_ = g.elements();
            group_.emplace(g);
        }
    }

    bool symmetric(const std::int32_t* idx1, const std::int64_t* w1, std::int32_t n1, const std::int32_t* idx2,
                   const std::int64_t* w2, std::int32_t n2, std::vector<Cell>& cells) const {
        cells.clear();
        for (std::int32_t i = 0; i < n1; ++i) {
            for (std::int32_t j = 0; j < n2; ++j) {
                const std::int64_t s = add(idx1[i], idx2[j]);
                const std::int64_t t = add(idx1[i], alpha_[static_cast<std::size_t>(idx2[j])]);
                const std::int64_t m = w1[i] * w2[j];
                bool merged = false;
                for (auto& c : cells) {
                    if (c.s == s && c.t == t) {
                        c.m += m;
                        merged = true;
                        break;
                    }
                }
                if (!merged) cells.push_back(Cell{s, t, m});
            }
        }
        for (const auto& c : cells) {
            const std::int64_t mt = neg_[static_cast<std::size_t>(c.t)];
            if (mt == c.t) continue;
            bool matched = false;
            for (const auto& d : cells) {
                if (d.s == c.s && d.t == mt) {
                    matched = d.m == c.m;
                    break;
                }
            }
            if (!matched) return false;
        }
        return true;
    }

private:
    std::int64_t add(std::int64_t a, std::int64_t b) const {
        if (!table_.empty()) return table_[static_cast<std::size_t>(a * n_ + b)];
        return group_->index_of(group_->add(elements_[static_cast<std::size_t>(a)], elements_[static_cast<std::size_t>(b)]));
    }

    std::int64_t n_;
    std::vector<std::int64_t> neg_;
    std::vector<std::int64_t> alpha_;
    std::vector<std::int32_t> table_;
    std::vector<GroupElement> elements_;
    std::optional<FiniteAbelianGroup> group_;
};

using Cell = FastSymmetry::Cell;

inline Distribution candidate_distribution(const FiniteAbelianGroup& g, const CandidateSet& cs, std::int64_t c) {
    std::vector<std::pair<GroupElement, std::int64_t>> weights;
    const auto base = static_cast<std::size_t>(c * cs.stride);
    for (std::int32_t j = 0; j < cs.size[static_cast<std::size_t>(c)]; ++j) {
        weights.emplace_back(g.at(cs.idx[base + static_cast<std::size_t>(j)]), cs.w[base + static_cast<std::size_t>(j)]);
    }
    return Distribution::from_weights(g, weights);
}

/// Runs blocks [0, block_count) on up to `threads` workers; results are
/// stored per block so the merge order is fixed.
template <typename Block>
void run_blocks(std::int64_t block_count, unsigned threads, Block&& block) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(block_count, 1)));
    if (threads <= 1) {
        for (std::int64_t b = 0; b < block_count; ++b) block(b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::int64_t b = next++; b < block_count; b = next++) block(b);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Number of grid candidates (distributions) for the given caps.
inline long double grid_candidate_count(std::int64_t group_order, std::int64_t support_cap, std::int64_t denominator_cap) {
    long double total = 0;
    for (std::int64_t s = 1; s <= std::min(support_cap, group_order); ++s) {
        total += detail::binomial(group_order, s) *
                 static_cast<long double>(detail::weight_vectors(s, denominator_cap).size());
    }
    return total;
}

/// Grid pairs plus random trials.
inline long double search_space_size(std::int64_t group_order, const SearchConfig& config) {
    const long double c = grid_candidate_count(group_order, config.support_size_cap, config.denominator_cap);
    return c * c + static_cast<long double>(config.random_trials);
}

/// All pairs of grid distributions plus config.random_trials random rational
/// pairs, evaluated exactly for conditional symmetry of L2 = xi_1 + alpha xi_2
/// given L1 = xi_1 + xi_2. Every symmetric hit is classified.
inline ScanResult grid_scan(const Endomorphism& alpha, const SearchConfig& config) {
    config.validate();
    const auto& g = alpha.group();
    const long double space = search_space_size(g.order(), config);
    if (space > static_cast<long double>(config.max_candidates)) {
        throw SearchSpaceOverflow("search space of " + std::to_string(static_cast<double>(space)) +
                                  " candidates exceeds " + std::to_string(config.max_candidates));
    }
    const detail::CandidateSet cs = detail::grid_candidates(g.order(), config.support_size_cap, config.denominator_cap);
    const detail::FastSymmetry fast(g, alpha);
    const std::int64_t c = cs.count();

    constexpr std::int64_t kGridBlock = 64;      // first-candidate rows per block
    constexpr std::int64_t kRandomBlock = 1000;  // random trials per block
    const std::int64_t grid_blocks = (c + kGridBlock - 1) / kGridBlock;
    const std::int64_t random_blocks = (config.random_trials + kRandomBlock - 1) / kRandomBlock;

    std::vector<std::vector<SymmetryReport>> block_hits(static_cast<std::size_t>(grid_blocks + random_blocks));
    auto run = [&](std::int64_t b) {
        std::vector<detail::Cell> cells;
        auto& out = block_hits[static_cast<std::size_t>(b)];
        auto accept = [&](Distribution m1, Distribution m2, const char* source) {
            SymmetryReport r = make_report(FormsInstance::canonical(alpha, std::move(m1), std::move(m2)), source);
            if (!r.symmetric) throw PredicateDisagreement("integer and rational symmetry checks disagree");
            out.push_back(std::move(r));
        };
        if (b < grid_blocks) {
            const std::int64_t lo = b * kGridBlock;
            const std::int64_t hi = std::min(c, lo + kGridBlock);
            for (std::int64_t i = lo; i < hi; ++i) {
                const auto bi = static_cast<std::size_t>(i * cs.stride);
                for (std::int64_t j = 0; j < c; ++j) {
                    const auto bj = static_cast<std::size_t>(j * cs.stride);
                    if (fast.symmetric(&cs.idx[bi], &cs.w[bi], cs.size[static_cast<std::size_t>(i)], &cs.idx[bj],
                                       &cs.w[bj], cs.size[static_cast<std::size_t>(j)], cells)) {
                        accept(detail::candidate_distribution(g, cs, i), detail::candidate_distribution(g, cs, j), "grid");
                    }
                }
            }
        } else {
            const std::int64_t rb = b - grid_blocks;
            Rng rng(config.seed + static_cast<std::uint64_t>(rb));
            const std::int64_t trials = std::min(kRandomBlock, config.random_trials - rb * kRandomBlock);
            for (std::int64_t t = 0; t < trials; ++t) {
                Distribution m1 = random_distribution(g, rng, g.order(), config.denominator_cap);
                Distribution m2 = random_distribution(g, rng, g.order(), config.denominator_cap);
                FormsInstance inst = FormsInstance::canonical(alpha, m1, m2);
                if (is_conditionally_symmetric(inst)) accept(std::move(m1), std::move(m2), "random");
            }
        }
    };
    detail::run_blocks(grid_blocks + random_blocks, config.threads, run);

    ScanResult result;
    result.grid_candidates = c;
    result.summary.evaluated = c * c + config.random_trials;
    for (auto& hits : block_hits)
        for (auto& r : hits) {
            result.summary.add(r);
            result.hits.push_back(std::move(r));
        }
    return result;
}

// ---------------------------------------------------------------------------
// Finite levels Z_{p^k} of the p-adic integers
// ---------------------------------------------------------------------------

struct PadicReport {
    std::int64_t p = 0;
    std::int64_t k = 0;
    std::int64_t c = 0;
    std::int64_t modulus = 0;
    /// Base-p digits of c.
    std::int64_t c0 = 0;
    std::int64_t c1 = 0;
    Subgroup kernel;
    bool one_plus_alpha_is_auto = false;
    /// Support cap actually used after fitting the search budget.
    std::int64_t effective_support_cap = 0;
    ScanResult scan;
    /// Non-idempotent witness from the kernel construction, when the kernel is nontrivial.
    std::optional<SymmetryReport> kernel_witness;
    std::string tag;
    bool exploratory = false;
    /// The outcome matches the expected finite-level case; always true when exploratory.
    bool consistent = true;
};

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// alpha = multiplication by c on Z_{p^k}. For p > 2 the case split on the
/// first digit c0 decides whether I + alpha is invertible at every level.
inline PadicReport padic_scan(std::int64_t p, std::int64_t k, std::int64_t c, SearchConfig config) {
    if (!is_prime(p)) throw PreconditionViolation("p = " + std::to_string(p) + " is not prime");
    if (k < 1) throw PreconditionViolation("k must be at least 1");
    std::int64_t modulus = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        if (modulus > kDefaultEnumerationCap / p) throw PreconditionViolation("p^k exceeds the enumeration cap");
        modulus *= p;
    }
    c = mod(c, modulus);
    if (c % p == 0) throw PreconditionViolation("gcd(c, p) must be 1");
    config.validate();

    const FiniteAbelianGroup g({modulus});
    const Endomorphism alpha = Endomorphism::scalar(g, c);
    PadicReport rep{p, k, c, modulus, c % p, (c / p) % p, kernel(add(Endomorphism::identity(g), alpha)),
                    false, 0, {}, std::nullopt, "", false, true};
    rep.one_plus_alpha_is_auto = add(Endomorphism::identity(g), alpha).is_auto();

    while (config.support_size_cap > 1 &&
           search_space_size(g.order(), config) > static_cast<long double>(config.max_candidates)) {
        --config.support_size_cap;
    }
    rep.effective_support_cap = config.support_size_cap;
    rep.scan = grid_scan(alpha, config);

    if (!rep.kernel.is_trivial()) {
        // 2/3 at 0 and 1/3 at a kernel generator: never uniform, so never idempotent.
        const GroupElement gen = rep.kernel.generators().front();
        const Distribution w = Distribution::from_weights(g, {{g.zero(), 2}, {gen, 1}});
        rep.kernel_witness = make_report(kernel_construction(alpha, w), "kernel-construction");
    }

    const std::int64_t non_idempotent = rep.scan.summary.other + (rep.kernel_witness ? 1 : 0);
    if (p == 2) {
        rep.exploratory = true;
        rep.tag = "exploratory p=2";
    } else if (rep.c0 != p - 1) {
        rep.tag = "finite-level 1(i) analogue: all symmetric hits idempotent";
        rep.consistent = rep.one_plus_alpha_is_auto && rep.scan.summary.other == 0;
    } else {
        rep.tag = "finite-level 2(i) analogue: counterexamples found";
        rep.consistent = !rep.kernel.is_trivial() && non_idempotent >= 1;
    }
    return rep;
}

}  // namespace heyde
