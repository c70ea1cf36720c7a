#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/group.hpp"
#include "heyde/predicates.hpp"
#include "heyde/random.hpp"

namespace heyde {

/// Real-valued function on every element of a group, stored by element index.
class GroupFunction {
public:
    GroupFunction(FiniteAbelianGroup g, std::vector<double> values) : group_(std::move(g)), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != group_.order()) {
            throw GroupError("group function needs one value per element");
        }
    }

    static GroupFunction zero(const FiniteAbelianGroup& g) {
        return GroupFunction(g, std::vector<double>(static_cast<std::size_t>(g.order()), 0.0));
    }

    static GroupFunction from(const FiniteAbelianGroup& g, const std::function<double(const GroupElement&)>& f) {
        std::vector<double> v(static_cast<std::size_t>(g.order()));
        for (std::int64_t i = 0; i < g.order(); ++i) v[static_cast<std::size_t>(i)] = f(g.at(i));
        return GroupFunction(g, std::move(v));
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator()(const GroupElement& y) const { return values_[static_cast<std::size_t>(group_.index_of(y))]; }
    double at_index(std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::fabs(v));
        return m;
    }

private:
    FiniteAbelianGroup group_;
    std::vector<double> values_;
};

/// Delta_h f(y) = f(y + h) - f(y).
inline GroupFunction finite_difference(const GroupFunction& f, const GroupElement& h) {
    const auto& g = f.group();
    g.require(h);
    std::vector<double> v(static_cast<std::size_t>(g.order()));
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const GroupElement y = g.at(i);
        v[static_cast<std::size_t>(i)] = f(g.add(y, h)) - f.at_index(i);
    }
    return GroupFunction(g, std::move(v));
}

/// phi(y) = -log mu^(y); requires mu^ real and above 1e-9 everywhere.
inline GroupFunction neg_log_char(const Distribution& mu, double floor = 1e-9) {
    const CharFunction f = char_function(mu);
    const auto& g = mu.group();
    std::vector<double> v(static_cast<std::size_t>(g.order()));
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const auto c = f.at_index(i);
        if (std::fabs(c.imag()) > 1e-9 || c.real() <= floor) {
            throw DomainError("characteristic function is not strictly positive at (" + to_string(g.at(i)) +
                              "): " + std::to_string(c.real()) + (c.imag() >= 0 ? "+" : "") +
                              std::to_string(c.imag()) + "i");
        }
        v[static_cast<std::size_t>(i)] = -std::log(c.real());
    }
    v[0] = 0.0;
    return GroupFunction(g, std::move(v));
}

/// True when every value of nu^ exceeds floor, i.e. neg_log_char is defined.
inline bool has_positive_char(const Distribution& nu, double floor = 1e-9) {
    const CharFunction f = char_function(nu);
    for (const auto& c : f.values())
        if (std::fabs(c.imag()) > 1e-9 || c.real() <= floor) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Difference chain for phi1(u+v) + phi2(u + a~v) - phi1(u-v) - phi2(u - a~v) = 0
// ---------------------------------------------------------------------------

struct HeydeChainResult {
    // l11 = (I+a~)k1, l12 = 2a~k1, l13 = (a~-I)k1, l21 = 2k2, l22 = (I+a~)k2,
    // l31 = (I-a~)k3, l32 = -(I-a~)k3.
    GroupElement l11, l12, l13, l21, l22, l31, l32;
    /// Delta_{l31} Delta_{l21} Delta_{l11} phi1.
    GroupFunction residual1;
    /// Delta_{l32} Delta_{l22} Delta_{l12} phi2.
    GroupFunction residual2;

    double max_residual() const { return std::max(residual1.max_abs(), residual2.max_abs()); }
};

inline HeydeChainResult heyde_difference_chain(const GroupFunction& phi1, const GroupFunction& phi2,
                                               const Endomorphism& alpha_adj, const GroupElement& k1,
                                               const GroupElement& k2, const GroupElement& k3) {
    const auto& g = phi1.group();
    require_same_group(g, phi2.group());
    require_same_group(g, alpha_adj.group());
    const auto& a = alpha_adj;
    GroupElement l11 = g.add(k1, a.apply(k1));
    GroupElement l12 = g.scale(2, a.apply(k1));
    GroupElement l13 = g.subtract(a.apply(k1), k1);
    GroupElement l21 = g.scale(2, k2);
    GroupElement l22 = g.add(k2, a.apply(k2));
    GroupElement l31 = g.subtract(k3, a.apply(k3));
    GroupElement l32 = g.negate(l31);
    GroupFunction r1 = finite_difference(finite_difference(finite_difference(phi1, l11), l21), l31);
    GroupFunction r2 = finite_difference(finite_difference(finite_difference(phi2, l12), l22), l32);
    return HeydeChainResult{std::move(l11), std::move(l12), std::move(l13), std::move(l21), std::move(l22),
                            std::move(l31), std::move(l32), std::move(r1),  std::move(r2)};
}

/// Residual of phi1(u+v) + phi2(u+a~v) - phi1(u-v) - phi2(u-a~v) maximized over u, v.
inline double log_heyde_equation_residual(const GroupFunction& phi1, const GroupFunction& phi2,
                                          const Endomorphism& alpha_adj) {
    const auto& g = phi1.group();
    const auto adj = detail::index_table(alpha_adj);
    const detail::IndexArithmetic ix(g);
    double worst = 0.0;
    for (std::int64_t u = 0; u < g.order(); ++u)
        for (std::int64_t v = 0; v < g.order(); ++v) {
            const auto av = adj[static_cast<std::size_t>(v)];
            const double r = phi1.at_index(ix.add(u, v)) + phi2.at_index(ix.add(u, av)) -
                             phi1.at_index(ix.sub(u, v)) - phi2.at_index(ix.sub(u, av));
            worst = std::max(worst, std::fabs(r));
        }
    return worst;
}

namespace detail {

/// Dense addition table for the increment scans.
struct AddTable {
    explicit AddTable(const FiniteAbelianGroup& g) : n(g.order()) {
        const IndexArithmetic ix(g);
        sum.resize(static_cast<std::size_t>(n * n));
        for (std::int64_t a = 0; a < n; ++a)
            for (std::int64_t b = 0; b < n; ++b) sum[static_cast<std::size_t>(a * n + b)] = ix.add(a, b);
        neg = ix.neg;
    }
    std::int64_t add(std::int64_t a, std::int64_t b) const { return sum[static_cast<std::size_t>(a * n + b)]; }

    std::int64_t n;
    std::vector<std::int64_t> sum;
    std::vector<std::int64_t> neg;
};

/// max over y of |Delta_c Delta_b Delta_a f(y)|, expanded into its 8 terms.
inline double max_triple_difference(const std::vector<double>& f, const AddTable& t, std::int64_t a, std::int64_t b,
                                    std::int64_t c) {
    const std::int64_t ab = t.add(a, b), ac = t.add(a, c), bc = t.add(b, c), abc = t.add(ab, c);
    double worst = 0.0;
    for (std::int64_t y = 0; y < t.n; ++y) {
        auto at = [&](std::int64_t s) { return f[static_cast<std::size_t>(t.add(y, s))]; };
        const double r = at(abc) - at(ab) - at(ac) - at(bc) + at(a) + at(b) + at(c) - f[static_cast<std::size_t>(y)];
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

}  // namespace detail

struct ChainReport {
    double max_residual = 0.0;
    /// Increments attaining max_residual.
    std::vector<GroupElement> worst_increments;
    std::int64_t increments_checked = 0;
    bool exhaustive = true;
    std::optional<bool> quadratic;
};

/// Runs heyde_difference_chain over every (k1, k2, k3) when |Y|^3 <= full_limit,
/// otherwise over random_triples seeded triples.
inline ChainReport heyde_chain_scan(const GroupFunction& phi1, const GroupFunction& phi2,
                                    const Endomorphism& alpha_adj, std::int64_t full_limit = 100'000,
                                    std::int64_t random_triples = 10'000, std::uint64_t seed = 0) {
    const auto& g = phi1.group();
    const std::int64_t n = g.order();
    ChainReport report;
    const detail::AddTable t(g);
    const auto one_plus = detail::index_table(add(Endomorphism::identity(g), alpha_adj));
    const auto one_minus = detail::index_table(subtract(Endomorphism::identity(g), alpha_adj));
    const auto two_a = detail::index_table(compose(Endomorphism::scalar(g, 2), alpha_adj));
    const auto two = detail::index_table(Endomorphism::scalar(g, 2));
    auto visit = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
        const auto sa = static_cast<std::size_t>(a);
        const auto sb = static_cast<std::size_t>(b);
        const auto l31 = one_minus[static_cast<std::size_t>(c)];
        const double r1 = detail::max_triple_difference(phi1.values(), t, one_plus[sa], two[sb], l31);
        const double r2 = detail::max_triple_difference(phi2.values(), t, two_a[sa], one_plus[sb],
                                                        t.neg[static_cast<std::size_t>(l31)]);
        ++report.increments_checked;
        const double m = std::max(r1, r2);
        if (report.worst_increments.empty() || m > report.max_residual) {
            report.max_residual = m;
            report.worst_increments = {g.at(a), g.at(b), g.at(c)};
        }
    };
    if (n * n * n <= full_limit) {
        for (std::int64_t a = 0; a < n; ++a)
            for (std::int64_t b = 0; b < n; ++b)
                for (std::int64_t c = 0; c < n; ++c) visit(a, b, c);
    } else {
        report.exhaustive = false;
        Rng rng(seed);
        for (std::int64_t t = 0; t < random_triples; ++t) {
            const auto a = uniform_int(rng, 0, n - 1);
            const auto b = uniform_int(rng, 0, n - 1);
            const auto c = uniform_int(rng, 0, n - 1);
            visit(a, b, c);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Difference chain for the independent forms M1, M2
// ---------------------------------------------------------------------------

/// P(y) = psi1((I+a~)y) + psi2(2a~y),  Q(y) = psi1(2y) + psi2((I+a~)y).
struct MFormsPotentials {
    GroupFunction p;
    GroupFunction q;
};

inline MFormsPotentials m_forms_potentials(const GroupFunction& psi1, const GroupFunction& psi2,
                                           const Endomorphism& alpha_adj) {
    const auto& g = psi1.group();
    require_same_group(g, psi2.group());
    require_same_group(g, alpha_adj.group());
    const auto id = Endomorphism::identity(g);
    const Endomorphism one_plus = add(id, alpha_adj);
    const Endomorphism two_a = compose(Endomorphism::scalar(g, 2), alpha_adj);
    std::vector<double> p(static_cast<std::size_t>(g.order())), q(static_cast<std::size_t>(g.order()));
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const GroupElement y = g.at(i);
        p[static_cast<std::size_t>(i)] = psi1(one_plus.apply_unchecked(y)) + psi2(two_a.apply_unchecked(y));
        q[static_cast<std::size_t>(i)] = psi1(g.scale(2, y)) + psi2(one_plus.apply_unchecked(y));
    }
    return MFormsPotentials{GroupFunction(g, std::move(p)), GroupFunction(g, std::move(q))};
}

/// Max over u, v of |psi1((I+a~)u + 2v) + psi2(2a~u + (I+a~)v) - P(u) - Q(v)|.
inline double m_forms_equation_residual(const GroupFunction& psi1, const GroupFunction& psi2,
                                        const Endomorphism& alpha_adj) {
    const auto& g = psi1.group();
    const auto pq = m_forms_potentials(psi1, psi2, alpha_adj);
    const auto id = Endomorphism::identity(g);
    const auto one_plus = detail::index_table(add(id, alpha_adj));
    const auto two_a = detail::index_table(compose(Endomorphism::scalar(g, 2), alpha_adj));
    const auto two = detail::index_table(Endomorphism::scalar(g, 2));
    const detail::IndexArithmetic ix(g);
    double worst = 0.0;
    for (std::int64_t u = 0; u < g.order(); ++u)
        for (std::int64_t v = 0; v < g.order(); ++v) {
            const auto su = static_cast<std::size_t>(u);
            const auto sv = static_cast<std::size_t>(v);
            const double r = psi1.at_index(ix.add(one_plus[su], two[sv])) + psi2.at_index(ix.add(two_a[su], one_plus[sv])) -
                             pq.p.at_index(u) - pq.q.at_index(v);
            worst = std::max(worst, std::fabs(r));
        }
    return worst;
}

struct MFormsChainResult {
    GroupFunction p;
    GroupFunction q;
    /// Delta_h Delta_{2h2} Delta_{(I+a~)h1} P.
    GroupFunction residual_p;
    /// Delta_k Delta_{-(I+a~)h2} Delta_{-2a~h1} Q.
    GroupFunction residual_q;

    double max_residual() const { return std::max(residual_p.max_abs(), residual_q.max_abs()); }
};

inline MFormsChainResult m_forms_difference_chain(const GroupFunction& psi1, const GroupFunction& psi2,
                                                  const Endomorphism& alpha_adj, const GroupElement& h1,
                                                  const GroupElement& h2, const GroupElement& h,
                                                  const GroupElement& k) {
    const auto& g = psi1.group();
    auto pq = m_forms_potentials(psi1, psi2, alpha_adj);
    const GroupElement a_h1 = alpha_adj.apply(h1);
    const GroupElement one_plus_h1 = g.add(h1, a_h1);
    const GroupElement one_plus_h2 = g.add(h2, alpha_adj.apply(h2));
    GroupFunction rp = finite_difference(finite_difference(finite_difference(pq.p, one_plus_h1), g.scale(2, h2)), h);
    GroupFunction rq = finite_difference(
        finite_difference(finite_difference(pq.q, g.negate(g.scale(2, a_h1))), g.negate(one_plus_h2)), k);
    return MFormsChainResult{std::move(pq.p), std::move(pq.q), std::move(rp), std::move(rq)};
}

/// max over y, h of |Delta_h^3 f(y)|.
inline double third_difference_residual(const GroupFunction& f) {
    const auto& g = f.group();
    double worst = 0.0;
    for (std::int64_t hi = 0; hi < g.order(); ++hi) {
        const GroupElement h = g.at(hi);
        const GroupFunction d = finite_difference(finite_difference(finite_difference(f, h), h), h);
        worst = std::max(worst, d.max_abs());
    }
    return worst;
}


/// Max residual of m_forms_difference_chain over every (h1, h2, h, k) when
/// |Y|^4 <= full_limit, otherwise over random quadruples.
inline ChainReport m_forms_chain_scan(const GroupFunction& psi1, const GroupFunction& psi2,
                                      const Endomorphism& alpha_adj, std::int64_t full_limit = 100'000,
                                      std::int64_t random_quadruples = 10'000, std::uint64_t seed = 0) {
    const auto& g = psi1.group();
    const std::int64_t n = g.order();
    const auto pq = m_forms_potentials(psi1, psi2, alpha_adj);
    const detail::AddTable t(g);
    const auto one_plus = detail::index_table(add(Endomorphism::identity(g), alpha_adj));
    const auto two_a = detail::index_table(compose(Endomorphism::scalar(g, 2), alpha_adj));
    const auto two = detail::index_table(Endomorphism::scalar(g, 2));
    ChainReport report;
    auto visit = [&](std::int64_t h1, std::int64_t h2, std::int64_t h, std::int64_t k) {
        const auto s1 = static_cast<std::size_t>(h1);
        const auto s2 = static_cast<std::size_t>(h2);
        const double rp = detail::max_triple_difference(pq.p.values(), t, one_plus[s1], two[s2], h);
        const double rq = detail::max_triple_difference(pq.q.values(), t, t.neg[static_cast<std::size_t>(two_a[s1])],
                                                        t.neg[static_cast<std::size_t>(one_plus[s2])], k);
        ++report.increments_checked;
        const double m = std::max(rp, rq);
        if (report.worst_increments.empty() || m > report.max_residual) {
            report.max_residual = m;
            report.worst_increments = {g.at(h1), g.at(h2), g.at(h), g.at(k)};
        }
    };
    if (n * n * n * n <= full_limit) {
        for (std::int64_t a = 0; a < n; ++a)
            for (std::int64_t b = 0; b < n; ++b)
                for (std::int64_t c = 0; c < n; ++c)
                    for (std::int64_t d = 0; d < n; ++d) visit(a, b, c, d);
    } else {
        report.exhaustive = false;
        Rng rng(seed);
        for (std::int64_t i = 0; i < random_quadruples; ++i) {
            const auto a = uniform_int(rng, 0, n - 1);
            const auto b = uniform_int(rng, 0, n - 1);
            const auto c = uniform_int(rng, 0, n - 1);
            const auto d = uniform_int(rng, 0, n - 1);
            visit(a, b, c, d);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Quadratic functional equation phi(u+v) + phi(u-v) = 2[phi(u) + phi(v)]
// ---------------------------------------------------------------------------

struct QuadraticCheck {
    bool holds = true;
    double max_deviation = 0.0;
    std::optional<ElementPair> witness;
};

inline QuadraticCheck quadratic_residual(const GroupFunction& phi, double tolerance = 1e-9) {
    const auto& g = phi.group();
    const detail::IndexArithmetic ix(g);
    QuadraticCheck check;
    for (std::int64_t u = 0; u < g.order(); ++u)
        for (std::int64_t v = 0; v < g.order(); ++v) {
            const double d = std::fabs(phi.at_index(ix.add(u, v)) + phi.at_index(ix.sub(u, v)) -
                                       2.0 * (phi.at_index(u) + phi.at_index(v)));
            check.max_deviation = std::max(check.max_deviation, d);
            if (d > tolerance && check.holds) {
                check.holds = false;
                check.witness = ElementPair{g.at(u), g.at(v)};
            }
        }
    return check;
}

inline bool quadratic_check(const GroupFunction& phi, double tolerance = 1e-9) {
    return quadratic_residual(phi, tolerance).holds;
}

/// One induction trace: phi(n y) = c_n phi(y) with c_{n+1} = 2 c_n + 2 - c_{n-1},
/// c_0 = 0, c_1 = 1, checked against n^2 up to n = ord(y).
struct ScalingTrace {
    GroupElement element;
    std::int64_t order = 1;
    std::vector<std::int64_t> coefficients;
    bool scaling_verified = false;
};

struct QuadraticVanishingRecord {
    FiniteAbelianGroup group;
    /// u = v = 0 gives 2 phi(0) = 4 phi(0).
    bool zero_forced = false;
    std::vector<ScalingTrace> traces;
    /// Rank of the linear system of quadratic equations over a prime field; |Y| means only phi = 0.
    std::int64_t rank = 0;
    /// Every trace closes (ord(y)^2 phi(y) = phi(0) = 0) and the rank is full.
    bool only_zero = false;
};

namespace detail {

/// Rank modulo a prime of the quadratic equations as rows over the |Y| unknowns.
/// Full rank mod p implies full rank over Q.
inline std::int64_t quadratic_system_rank(const FiniteAbelianGroup& g) {
    constexpr std::int64_t p = 2'147'483'647;
    const std::int64_t n = g.order();
    const IndexArithmetic ix(g);
    auto pow_mod = [&](std::int64_t b, std::int64_t e) {
        std::int64_t r = 1;
        b %= p;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    // basis[c] is a reduced row with pivot column c (pivot entry 1), or empty.
    std::vector<std::vector<std::int64_t>> basis(static_cast<std::size_t>(n));
    std::int64_t rank = 0;
    for (std::int64_t u = 0; u < n && rank < n; ++u)
        for (std::int64_t v = 0; v < n && rank < n; ++v) {
            std::vector<std::int64_t> row(static_cast<std::size_t>(n), 0);
            auto bump = [&](std::int64_t col, std::int64_t c) {
                auto& r = row[static_cast<std::size_t>(col)];
                r = mod(r + c, p);
            };
            bump(ix.add(u, v), 1);
            bump(ix.sub(u, v), 1);
            bump(u, -2);
            bump(v, -2);
            for (std::int64_t c = 0; c < n; ++c) {
                const auto coef = row[static_cast<std::size_t>(c)];
                if (coef == 0) continue;
                const auto& b = basis[static_cast<std::size_t>(c)];
                if (b.empty()) {
                    const std::int64_t inv = pow_mod(coef, p - 2);
                    for (auto& x : row) x = x * inv % p;
                    basis[static_cast<std::size_t>(c)] = std::move(row);
                    ++rank;
                    break;
                }
                for (std::int64_t j = c; j < n; ++j) {
                    auto& x = row[static_cast<std::size_t>(j)];
                    x = mod(x - coef * b[static_cast<std::size_t>(j)] % p, p);
                }
            }
        }
    return rank;
}

}  // namespace detail

/// Certificate that the quadratic functional equation has only the zero
/// solution on g: the scaling induction phi(n y) = n^2 phi(y) closes at
/// n = ord(y), and independently the linear system has full rank.
inline QuadraticVanishingRecord quadratic_vanishing(const FiniteAbelianGroup& g) {
    QuadraticVanishingRecord rec{g, true, {}, 0, false};
    bool all_closed = true;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        ScalingTrace t;
        t.element = g.at(i);
        t.order = g.element_order(t.element);
        t.coefficients = {0, 1};
        bool ok = true;
        // u = n y, v = y: phi((n+1)y) + phi((n-1)y) = 2 phi(n y) + 2 phi(y).
        for (std::int64_t n = 1; n < t.order; ++n) {
            const std::int64_t next = 2 * t.coefficients[static_cast<std::size_t>(n)] + 2 -
                                      t.coefficients[static_cast<std::size_t>(n - 1)];
            ok = ok && next == (n + 1) * (n + 1);
            t.coefficients.push_back(next);
        }
        // ord(y) y = 0, so c_ord phi(y) = phi(0) = 0 with c_ord = ord^2 != 0.
        const bool closes = g.scale(t.order, t.element) == g.zero() &&
                            t.coefficients[static_cast<std::size_t>(t.order)] == t.order * t.order;
        t.scaling_verified = ok && closes;
        all_closed = all_closed && t.scaling_verified;
        rec.traces.push_back(std::move(t));
    }
    rec.rank = detail::quadratic_system_rank(g);
    rec.only_zero = rec.zero_forced && all_closed && rec.rank == g.order();
    return rec;
}

/// Checks mu^(y) = (x, y) exp(-phi(y)) with phi >= 0 satisfying the
/// quadratic equation, trying every x. Independent of is_gaussian.
inline bool has_gaussian_form(const Distribution& mu, double tolerance = 1e-9) {
    const auto& g = mu.group();
    const CharFunction f = char_function(mu);
    for (const auto& c : f.values())
        if (std::abs(c) <= tolerance) return false;
    for (std::int64_t xi = 0; xi < g.order(); ++xi) {
        const GroupElement x = g.at(xi);
        std::vector<double> phi(static_cast<std::size_t>(g.order()));
        bool real_positive = true;
        for (std::int64_t yi = 0; yi < g.order() && real_positive; ++yi) {
            const auto r = f.at_index(yi) / character(g, x, g.at(yi));
            if (std::fabs(r.imag()) > tolerance || r.real() <= 0.0) {
                real_positive = false;
            } else {
                phi[static_cast<std::size_t>(yi)] = std::max(0.0, -std::log(r.real()));
            }
        }
        if (real_positive && quadratic_check(GroupFunction(g, std::move(phi)), tolerance)) return true;
    }
    return false;
}

}  // namespace heyde
