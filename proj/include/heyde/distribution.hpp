#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heyde/group.hpp"
#include "heyde/random.hpp"
#include "heyde/rational.hpp"

namespace heyde {

/// Exact rational probability vector. Zero masses are never stored.
class Distribution {
public:
    Distribution(FiniteAbelianGroup g, std::map<GroupElement, Rational> probs) : group_(std::move(g)) {
        Rational total = 0;
        for (auto& [x, p] : probs) {
            group_.require(x);
            if (p < 0) throw InvalidDistribution("negative mass " + format_fraction(p) + " at (" + to_string(x) + ")");
            total += p;
            if (p != 0) probs_.emplace(x, std::move(p));
        }
        if (total != 1) throw InvalidDistribution("masses sum to " + format_fraction(total) + ", not 1");
    }

    /// Normalizes nonnegative integer weights; repeated elements accumulate.
    static Distribution from_weights(const FiniteAbelianGroup& g,
                                     const std::vector<std::pair<GroupElement, std::int64_t>>& weights) {
        std::int64_t total = 0;
        for (const auto& [x, w] : weights) {
            if (w < 0) throw InvalidDistribution("negative weight at (" + to_string(x) + ")");
            total += w;
        }
        if (total == 0) throw InvalidDistribution("all weights are zero");
        std::map<GroupElement, Rational> probs;
        for (const auto& [x, w] : weights) probs[x] += Rational(w, total);
        return Distribution(g, std::move(probs));
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::map<GroupElement, Rational>& probs() const noexcept { return probs_; }

    Rational mass(const GroupElement& x) const {
        auto it = probs_.find(x);
        return it == probs_.end() ? Rational(0) : it->second;
    }

    /// Sorted lexicographically.
    std::vector<GroupElement> support() const {
        std::vector<GroupElement> out;
        out.reserve(probs_.size());
        for (const auto& [x, p] : probs_) out.push_back(x);
        return out;
    }

    std::size_t support_size() const noexcept { return probs_.size(); }

    bool operator==(const Distribution& other) const {
        return group_ == other.group_ && probs_ == other.probs_;
    }

private:
    FiniteAbelianGroup group_;
    std::map<GroupElement, Rational> probs_;
};

/// Characteristic function values indexed by character (element index order).
class CharFunction {
public:
    CharFunction(FiniteAbelianGroup g, std::vector<std::complex<double>> values)
        : group_(std::move(g)), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != group_.order()) {
            throw InvalidCharFunction("expected " + std::to_string(group_.order()) + " values, got " +
                                      std::to_string(values_.size()));
        }
        if (std::abs(values_[0] - 1.0) > 1e-12) throw InvalidCharFunction("value at 0 is not 1");
        for (std::int64_t i = 0; i < group_.order(); ++i) {
            const auto& v = values_[static_cast<std::size_t>(i)];
            if (std::abs(v) > 1.0 + 1e-12) {
                throw InvalidCharFunction("|value| exceeds 1 at (" + to_string(group_.at(i)) + ")");
            }
            const auto j = group_.index_of(group_.negate(group_.at(i)));
            if (std::abs(values_[static_cast<std::size_t>(j)] - std::conj(v)) > 1e-9) {
                throw InvalidCharFunction("not hermitian at (" + to_string(group_.at(i)) + ")");
            }
        }
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<std::complex<double>>& values() const noexcept { return values_; }

    std::complex<double> operator()(const GroupElement& y) const {
        return values_[static_cast<std::size_t>(group_.index_of(y))];
    }
    std::complex<double> at_index(std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

private:
    FiniteAbelianGroup group_;
    std::vector<std::complex<double>> values_;
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline Distribution point_mass(const FiniteAbelianGroup& g, const GroupElement& x) {
    g.require(x);
    return Distribution(g, {{x, Rational(1)}});
}

/// m_K, the uniform distribution on K.
inline Distribution haar_on(const Subgroup& k) {
    std::map<GroupElement, Rational> probs;
    const Rational w(1, static_cast<std::int64_t>(k.size()));
    for (const auto& x : k.elements()) probs.emplace(x, w);
    return Distribution(k.parent(), std::move(probs));
}

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

inline Distribution convolve(const Distribution& mu, const Distribution& nu) {
    require_same_group(mu.group(), nu.group());
    const auto& g = mu.group();
    std::map<GroupElement, Rational> probs;
    for (const auto& [x, p] : mu.probs())
        for (const auto& [y, q] : nu.probs()) probs[g.add(x, y)] += p * q;
    return Distribution(g, std::move(probs));
}

/// mu-bar(B) = mu(-B).
inline Distribution reflect(const Distribution& mu) {
    const auto& g = mu.group();
    std::map<GroupElement, Rational> probs;
    for (const auto& [x, p] : mu.probs()) probs.emplace(g.negate(x), p);
    return Distribution(g, std::move(probs));
}

inline Distribution shift(const Distribution& mu, const GroupElement& x) {
    const auto& g = mu.group();
    g.require(x);
    std::map<GroupElement, Rational> probs;
    for (const auto& [y, p] : mu.probs()) probs.emplace(g.add(y, x), p);
    return Distribution(g, std::move(probs));
}

/// Distribution of alpha(xi) for xi ~ mu.
inline Distribution push_forward(const Distribution& mu, const Endomorphism& alpha) {
    require_same_group(mu.group(), alpha.group());
    std::map<GroupElement, Rational> probs;
    for (const auto& [x, p] : mu.probs()) probs[alpha.apply_unchecked(x)] += p;
    return Distribution(mu.group(), std::move(probs));
}

/// nu = mu * mu-bar; its characteristic function is |mu-hat|^2.
inline Distribution symmetrize(const Distribution& mu) { return convolve(mu, reflect(mu)); }

// ---------------------------------------------------------------------------
// Fourier side
// ---------------------------------------------------------------------------

/// mu-hat(y) = sum_x mu(x) (x, y).
inline CharFunction char_function(const Distribution& mu) {
    const auto& g = mu.group();
    const std::int64_t e = g.exponent();
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(e));
    for (std::int64_t k = 0; k < e; ++k) roots[static_cast<std::size_t>(k)] = root_of_unity(k, e);

    std::vector<std::complex<double>> values(static_cast<std::size_t>(g.order()));
    std::vector<std::pair<GroupElement, double>> masses;
    for (const auto& [x, p] : mu.probs()) masses.emplace_back(x, to_double(p));
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const GroupElement y = g.at(i);
        std::complex<double> acc = 0.0;
        for (const auto& [x, p] : masses) acc += p * roots[static_cast<std::size_t>(pairing_phase(g, x, y))];
        values[static_cast<std::size_t>(i)] = acc;
    }
    values[0] = 1.0;  // exact total mass
    return CharFunction(g, std::move(values));
}

struct InversionResult {
    /// Set when every mass snapped to a rational and the snapped masses sum to 1.
    std::optional<Distribution> exact;
    /// Raw inverted masses, indexed by element.
    std::vector<double> masses;
};

/// Finite Fourier inversion mu(x) = |X|^{-1} sum_y f(y) conj((x, y)); masses
/// within 1e-9 of a rational with denominator <= 10^6 are snapped.
inline InversionResult distribution_from_char(const CharFunction& f, double tolerance = 1e-9) {
    const auto& g = f.group();
    const std::int64_t e = g.exponent();
    const auto n = static_cast<double>(g.order());
    InversionResult result;
    result.masses.resize(static_cast<std::size_t>(g.order()));
    std::map<GroupElement, Rational> snapped;
    bool all_snapped = true;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const GroupElement x = g.at(i);
        std::complex<double> acc = 0.0;
        for (std::int64_t j = 0; j < g.order(); ++j) {
            acc += f.at_index(j) * root_of_unity(-pairing_phase(g, x, g.at(j)), e);
        }
        acc /= n;
        if (std::fabs(acc.imag()) > tolerance) {
            throw InvalidCharFunction("inversion gives non-real mass at (" + to_string(x) + ")");
        }
        if (acc.real() < -tolerance) {
            throw InvalidCharFunction("inversion gives negative mass at (" + to_string(x) + ")");
        }
        result.masses[static_cast<std::size_t>(i)] = acc.real();
        if (auto q = snap_rational(acc.real(), tolerance)) {
            if (*q != 0) snapped.emplace(x, *q);
        } else {
            all_snapped = false;
        }
    }
    if (all_snapped) {
        Rational total = 0;
        for (const auto& [x, p] : snapped) total += p;
        if (total == 1) result.exact.emplace(g, std::move(snapped));
    }
    return result;
}

/// E = {y : f(y) = 1}, decided at 1e-9; values at distance in (1e-9, 1e-6)
/// from 1 are ambiguous.
inline Subgroup one_set(const CharFunction& f, double tolerance = 1e-9, double ambiguity = 1e-6) {
    const auto& g = f.group();
    std::vector<GroupElement> members;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const double d = std::abs(f.at_index(i) - 1.0);
        if (d <= tolerance) {
            members.push_back(g.at(i));
        } else if (d < ambiguity) {
            throw AmbiguousMembership("char value at (" + to_string(g.at(i)) + ") is within " +
                                      std::to_string(d) + " of 1");
        }
    }
    return Subgroup::from_elements(g, std::move(members));
}

/// support(mu) is contained in A(X, E).
inline bool support_within_annihilator(const Distribution& mu, const Subgroup& e) {
    const Subgroup a = annihilator(e);
    for (const auto& [x, p] : mu.probs())
        if (!a.contains(x)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

inline bool is_degenerate(const Distribution& mu) { return mu.support_size() == 1; }

struct IdempotentWitness {
    Subgroup subgroup;
    GroupElement shift;
};

/// Succeeds iff mu = m_K * E_x; x is the smallest support element.
inline std::optional<IdempotentWitness> is_idempotent_shift(const Distribution& mu) {
    const auto& g = mu.group();
    const auto& probs = mu.probs();
    const Rational& first = probs.begin()->second;
    for (const auto& [x, p] : probs)
        if (p != first) return std::nullopt;
    if (first != Rational(1, static_cast<std::int64_t>(probs.size()))) return std::nullopt;

    const GroupElement x0 = probs.begin()->first;
    std::vector<GroupElement> translated;
    translated.reserve(probs.size());
    for (const auto& [x, p] : probs) translated.push_back(g.subtract(x, x0));
    std::sort(translated.begin(), translated.end());
    for (const auto& a : translated)
        for (const auto& b : translated)
            if (!std::binary_search(translated.begin(), translated.end(), g.add(a, b))) return std::nullopt;
    return IdempotentWitness{Subgroup::from_elements(g, std::move(translated)), x0};
}

/// On a finite group a Gaussian distribution is degenerate: the only
/// solution of phi(u+v) + phi(u-v) = 2[phi(u) + phi(v)] is phi = 0.
inline bool is_gaussian(const Distribution& mu) { return is_degenerate(mu); }

// ---------------------------------------------------------------------------
// Sampling and random generation
// ---------------------------------------------------------------------------

/// Inverse-CDF sampling; deterministic given (seed, count).
inline std::vector<GroupElement> sample(const Distribution& mu, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw InvalidDistribution("sample count must be at least 1");
    std::vector<GroupElement> atoms;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& [x, p] : mu.probs()) {
        acc += to_double(p);
        atoms.push_back(x);
        cumulative.push_back(acc);
    }
    cumulative.back() = 1.0;
    Rng rng(seed);
    std::vector<GroupElement> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = unit_double(rng);
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        out.push_back(atoms[static_cast<std::size_t>(it - cumulative.begin())]);
    }
    return out;
}

/// Integer weights in [1, denominator_cap] on a random support of size
/// [1, max_support], normalized.
inline Distribution random_distribution(const FiniteAbelianGroup& g, Rng& rng, std::int64_t max_support,
                                        std::int64_t denominator_cap) {
    const std::int64_t size = uniform_int(rng, 1, std::min<std::int64_t>(max_support, g.order()));
    std::vector<std::pair<GroupElement, std::int64_t>> weights;
    for (auto idx : random_subset(rng, g.order(), size)) {
        weights.emplace_back(g.at(idx), uniform_int(rng, 1, denominator_cap));
    }
    return Distribution::from_weights(g, weights);
}

/// Random distribution supported inside the subgroup k.
inline Distribution random_distribution_on(const Subgroup& k, Rng& rng, std::int64_t denominator_cap) {
    const auto n = static_cast<std::int64_t>(k.size());
    const std::int64_t size = uniform_int(rng, 1, n);
    std::vector<std::pair<GroupElement, std::int64_t>> weights;
    for (auto idx : random_subset(rng, n, size)) {
        weights.emplace_back(k.elements()[static_cast<std::size_t>(idx)], uniform_int(rng, 1, denominator_cap));
    }
    return Distribution::from_weights(k.parent(), weights);
}

}  // namespace heyde
