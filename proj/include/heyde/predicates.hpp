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

#include "heyde/distribution.hpp"
#include "heyde/group.hpp"

namespace heyde {

/// Independent xi_1 ~ mu1, xi_2 ~ mu2 with the forms
///   L1 = alpha1 xi_1 + alpha2 xi_2,   L2 = beta1 xi_1 + beta2 xi_2.
/// The canonical Heyde instance has alpha1 = alpha2 = beta1 = I, beta2 = alpha.
struct FormsInstance {
    Endomorphism alpha1;
    Endomorphism alpha2;
    Endomorphism beta1;
    Endomorphism beta2;
    Distribution mu1;
    Distribution mu2;

    FormsInstance(Endomorphism a1, Endomorphism a2, Endomorphism b1, Endomorphism b2, Distribution m1,
                  Distribution m2)
        : alpha1(std::move(a1)), alpha2(std::move(a2)), beta1(std::move(b1)), beta2(std::move(b2)),
          mu1(std::move(m1)), mu2(std::move(m2)) {
        const auto& g = mu1.group();
        require_same_group(g, mu2.group());
        require_same_group(g, alpha1.group());
        require_same_group(g, alpha2.group());
        require_same_group(g, beta1.group());
        require_same_group(g, beta2.group());
    }

    static FormsInstance canonical(const Endomorphism& alpha, Distribution m1, Distribution m2) {
        const auto id = Endomorphism::identity(alpha.group());
        return FormsInstance(id, id, id, alpha, std::move(m1), std::move(m2));
    }

    const FiniteAbelianGroup& group() const noexcept { return mu1.group(); }

    bool is_canonical() const {
        const auto id = Endomorphism::identity(group());
        return alpha1 == id && alpha2 == id && beta1 == id;
    }

    /// The coefficient alpha of a canonical instance.
    const Endomorphism& alpha() const noexcept { return beta2; }
};

using ElementPair = std::pair<GroupElement, GroupElement>;

/// Exact joint law of a pair of group-valued random variables.
class JointDistribution {
public:
    JointDistribution(FiniteAbelianGroup g, std::map<ElementPair, Rational> probs) : group_(std::move(g)) {
        Rational total = 0;
        for (auto& [st, p] : probs) {
            if (p < 0) throw InvalidDistribution("negative joint mass");
            total += p;
            if (p != 0) probs_.emplace(st, std::move(p));
        }
        if (total != 1) throw InvalidDistribution("joint masses sum to " + format_fraction(total));
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::map<ElementPair, Rational>& probs() const noexcept { return probs_; }

    Rational mass(const GroupElement& s, const GroupElement& t) const {
        auto it = probs_.find({s, t});
        return it == probs_.end() ? Rational(0) : it->second;
    }

    Distribution first_marginal() const {
        std::map<GroupElement, Rational> m;
        for (const auto& [st, p] : probs_) m[st.first] += p;
        return Distribution(group_, std::move(m));
    }

    Distribution second_marginal() const {
        std::map<GroupElement, Rational> m;
        for (const auto& [st, p] : probs_) m[st.second] += p;
        return Distribution(group_, std::move(m));
    }

private:
    FiniteAbelianGroup group_;
    std::map<ElementPair, Rational> probs_;
};

/// Law of (L1, L2), enumerated over support(mu1) x support(mu2).
inline JointDistribution joint_of_forms(const FormsInstance& inst) {
    const auto& g = inst.group();
    std::map<ElementPair, Rational> probs;
    for (const auto& [x1, p1] : inst.mu1.probs()) {
        const GroupElement a1 = inst.alpha1.apply_unchecked(x1);
        const GroupElement b1 = inst.beta1.apply_unchecked(x1);
        for (const auto& [x2, p2] : inst.mu2.probs()) {
            probs[{g.add(a1, inst.alpha2.apply_unchecked(x2)), g.add(b1, inst.beta2.apply_unchecked(x2))}] += p1 * p2;
        }
    }
    return JointDistribution(g, std::move(probs));
}

/// Lexicographically smallest (s, t) with P(L1=s, L2=t) != P(L1=s, L2=-t).
inline std::optional<ElementPair> find_asymmetry(const JointDistribution& joint) {
    const auto& g = joint.group();
    std::optional<ElementPair> best;
    for (const auto& [st, p] : joint.probs()) {
        const GroupElement minus_t = g.negate(st.second);
        if (joint.mass(st.first, minus_t) != p) {
            ElementPair candidate = std::min(st, ElementPair{st.first, minus_t});
            if (!best || candidate < *best) best = std::move(candidate);
        }
    }
    return best;
}

/// Exact: P(L1=s, L2=t) = P(L1=s, L2=-t) for all s, t.
inline bool is_conditionally_symmetric(const FormsInstance& inst) {
    return !find_asymmetry(joint_of_forms(inst)).has_value();
}

struct EquationCheck {
    bool holds = true;
    double max_deviation = 0.0;
    /// First (u, v) in lexicographic order violating the equation.
    std::optional<ElementPair> witness;
};

namespace detail {

inline std::vector<std::int64_t> index_table(const Endomorphism& a) {
    const auto& g = a.group();
    std::vector<std::int64_t> t(static_cast<std::size_t>(g.order()));
    for (std::int64_t i = 0; i < g.order(); ++i) t[static_cast<std::size_t>(i)] = g.index_of(a.apply_unchecked(g.at(i)));
    return t;
}

/// Dense index arithmetic for the equation scans.
struct IndexArithmetic {
    explicit IndexArithmetic(const FiniteAbelianGroup& g) : group(g), elements(g.elements()) {
        neg.resize(elements.size());
        for (std::size_t i = 0; i < elements.size(); ++i) neg[i] = g.index_of(g.negate(elements[i]));
    }
    std::int64_t add(std::int64_t a, std::int64_t b) const {
        return group.index_of(group.add(elements[static_cast<std::size_t>(a)], elements[static_cast<std::size_t>(b)]));
    }
    std::int64_t sub(std::int64_t a, std::int64_t b) const { return add(a, neg[static_cast<std::size_t>(b)]); }

    const FiniteAbelianGroup& group;
    std::vector<GroupElement> elements;
    std::vector<std::int64_t> neg;
};

inline void record(EquationCheck& check, double deviation, double tolerance, const IndexArithmetic& ix,
                   std::int64_t u, std::int64_t v) {
    check.max_deviation = std::max(check.max_deviation, deviation);
    if (deviation > tolerance && check.holds) {
        check.holds = false;
        check.witness = ElementPair{ix.elements[static_cast<std::size_t>(u)], ix.elements[static_cast<std::size_t>(v)]};
    }
}

}  // namespace detail

/// mu1^(u+v) mu2^(u + a~ v) = mu1^(u-v) mu2^(u - a~ v) for all u, v, with a~ the
/// adjoint of alpha. Canonical instances only.
inline EquationCheck heyde_equation_check(const FormsInstance& inst, double tolerance = 1e-9) {
    if (!inst.is_canonical()) throw NonCanonicalInstance("heyde_equation_check needs alpha1 = alpha2 = beta1 = I");
    const auto& g = inst.group();
    const CharFunction f1 = char_function(inst.mu1);
    const CharFunction f2 = char_function(inst.mu2);
    const auto adj = detail::index_table(adjoint(inst.alpha()));
    const detail::IndexArithmetic ix(g);
    EquationCheck check;
    for (std::int64_t u = 0; u < g.order(); ++u) {
        for (std::int64_t v = 0; v < g.order(); ++v) {
            const std::int64_t av = adj[static_cast<std::size_t>(v)];
            const auto lhs = f1.at_index(ix.add(u, v)) * f2.at_index(ix.add(u, av));
            const auto rhs = f1.at_index(ix.sub(u, v)) * f2.at_index(ix.sub(u, av));
            detail::record(check, std::abs(lhs - rhs), tolerance, ix, u, v);
        }
    }
    return check;
}

/// Coefficients of M1 = (I+alpha) xi_1 + 2 alpha xi_2 and M2 = 2 xi_1 + (I+alpha) xi_2.
struct DerivedForms {
    Endomorphism m1_first;
    Endomorphism m1_second;
    Endomorphism m2_first;
    Endomorphism m2_second;
};

inline DerivedForms derived_forms(const FormsInstance& inst) {
    if (!inst.is_canonical()) throw NonCanonicalInstance("derived_forms needs a canonical instance");
    const auto& g = inst.group();
    const auto& alpha = inst.alpha();
    const auto id = Endomorphism::identity(g);
    const auto two = Endomorphism::scalar(g, 2);
    return DerivedForms{add(id, alpha), compose(two, alpha), two, add(id, alpha)};
}

/// The instance whose (L1, L2) is (M1, M2).
inline FormsInstance m_forms_instance(const FormsInstance& inst) {
    DerivedForms d = derived_forms(inst);
    return FormsInstance(d.m1_first, d.m1_second, d.m2_first, d.m2_second, inst.mu1, inst.mu2);
}

/// Exact: the joint law of (L1, L2) is the product of its marginals.
inline bool are_forms_independent(const FormsInstance& inst) {
    const JointDistribution joint = joint_of_forms(inst);
    const Distribution a = joint.first_marginal();
    const Distribution b = joint.second_marginal();
    for (const auto& [s, p] : a.probs())
        for (const auto& [t, q] : b.probs())
            if (joint.mass(s, t) != p * q) return false;
    return true;
}

/// mu1^(a1~u + b1~v) mu2^(a2~u + b2~v) = mu1^(a1~u) mu2^(a2~u) mu1^(b1~v) mu2^(b2~v).
inline EquationCheck independence_equation_check(const FormsInstance& inst, double tolerance = 1e-9) {
    const auto& g = inst.group();
    const CharFunction f1 = char_function(inst.mu1);
    const CharFunction f2 = char_function(inst.mu2);
    const auto a1 = detail::index_table(adjoint(inst.alpha1));
    const auto a2 = detail::index_table(adjoint(inst.alpha2));
    const auto b1 = detail::index_table(adjoint(inst.beta1));
    const auto b2 = detail::index_table(adjoint(inst.beta2));
    const detail::IndexArithmetic ix(g);
    EquationCheck check;
    for (std::int64_t u = 0; u < g.order(); ++u) {
        const auto su = static_cast<std::size_t>(u);
        for (std::int64_t v = 0; v < g.order(); ++v) {
            const auto sv = static_cast<std::size_t>(v);
            const auto lhs = f1.at_index(ix.add(a1[su], b1[sv])) * f2.at_index(ix.add(a2[su], b2[sv]));
            const auto rhs = f1.at_index(a1[su]) * f2.at_index(a2[su]) * f1.at_index(b1[sv]) * f2.at_index(b2[sv]);
            detail::record(check, std::abs(lhs - rhs), tolerance, ix, u, v);
        }
    }
    return check;
}

struct SymmetryVerdict {
    bool symmetric = false;
    /// Lexicographically smallest asymmetric (s, t), when not symmetric.
    std::optional<ElementPair> witness;
    EquationCheck eq42;
};

/// Runs the exact predicate and the characteristic-function equation on a
/// canonical instance; throws PredicateDisagreement when they differ.
inline SymmetryVerdict evaluate_symmetry(const FormsInstance& inst, double tolerance = 1e-9) {
    SymmetryVerdict verdict;
    verdict.witness = find_asymmetry(joint_of_forms(inst));
    verdict.symmetric = !verdict.witness.has_value();
    verdict.eq42 = heyde_equation_check(inst, tolerance);
    if (verdict.eq42.holds != verdict.symmetric) {
        throw PredicateDisagreement(std::string("exact symmetry is ") + (verdict.symmetric ? "true" : "false") +
                                    " but the characteristic-function equation " +
                                    (verdict.eq42.holds ? "holds" : "fails") + " (max deviation " +
                                    std::to_string(verdict.eq42.max_deviation) + ")");
    }
    return verdict;
}

/// With alpha = -I on a group without elements of order 2, symmetry forces
/// mu1 = mu2. Returns whether mu1 == mu2.
inline bool symmetry_forces_equal(const FormsInstance& inst) {
    const auto& g = inst.group();
    if (g.order() % 2 == 0) throw PreconditionViolation("group order is even");
    if (!inst.is_canonical() || !(inst.alpha() == Endomorphism::scalar(g, -1))) {
        throw PreconditionViolation("instance must be canonical with alpha = -I");
    }
    if (!is_conditionally_symmetric(inst)) throw PreconditionViolation("instance is not conditionally symmetric");
    return inst.mu1 == inst.mu2;
}

struct CanonicalForm {
    FormsInstance instance;
    /// alpha1 beta1^-1 beta2 alpha2^-1.
    Endomorphism alpha_prime;
    /// Ker(I + alpha_prime).
    Subgroup kernel;
};

/// eta_j = alpha_j xi_j turns the general forms into the canonical pair
/// eta_1 + eta_2, eta_1 + alpha' eta_2 with the same symmetry verdict.
inline CanonicalForm canonicalize(const FormsInstance& inst) {
    if (!inst.alpha1.is_auto()) throw NotAnAutomorphism("alpha1 is not an automorphism");
    if (!inst.alpha2.is_auto()) throw NotAnAutomorphism("alpha2 is not an automorphism");
    if (!inst.beta1.is_auto()) throw NotAnAutomorphism("beta1 is not an automorphism");
    const auto& g = inst.group();
    Endomorphism alpha_prime =
        compose(compose(inst.alpha1, invert(inst.beta1)), compose(inst.beta2, invert(inst.alpha2)));
    Subgroup k = kernel(add(Endomorphism::identity(g), alpha_prime));
    FormsInstance canon = FormsInstance::canonical(alpha_prime, push_forward(inst.mu1, inst.alpha1),
                                                   push_forward(inst.mu2, inst.alpha2));
    return CanonicalForm{std::move(canon), std::move(alpha_prime), std::move(k)};
}

/// Empirical frequencies of (L1, L2) from count independent draws; xi_1 and
/// xi_2 use the seeds seed and seed + 1.
inline std::map<ElementPair, double> empirical_joint(const FormsInstance& inst, std::size_t count,
                                                     std::uint64_t seed) {
    const auto& g = inst.group();
    const auto xs1 = sample(inst.mu1, count, seed);
    const auto xs2 = sample(inst.mu2, count, seed + 1);
    std::map<ElementPair, double> freq;
    const double w = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        freq[{g.add(inst.alpha1.apply_unchecked(xs1[i]), inst.alpha2.apply_unchecked(xs2[i])),
              g.add(inst.beta1.apply_unchecked(xs1[i]), inst.beta2.apply_unchecked(xs2[i]))}] += w;
    }
    return freq;
}

}  // namespace heyde
