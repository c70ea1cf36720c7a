#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heyde/errors.hpp"

namespace heyde {

/// Largest group order accepted by the enumeration-based algorithms.
inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;

/// Tolerance for deciding that a character value equals 1 numerically.
inline constexpr double kCharacterTolerance = 1e-9;

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

/// Residue vector; doubles as a character index through the self-duality pairing.
struct GroupElement {
    std::vector<std::int64_t> coords;

    auto operator<=>(const GroupElement&) const = default;
    bool operator==(const GroupElement&) const = default;
};

/// Comma-joined coordinates, e.g. "0,3".
inline std::string to_string(const GroupElement& x) {
    std::string out;
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(x.coords[j]);
    }
    return out;
}

/// Z_{n_1} x ... x Z_{n_k}. Elements are enumerated lexicographically with the
/// first coordinate most significant, so index order and element order agree.
class FiniteAbelianGroup {
public:
    explicit FiniteAbelianGroup(std::vector<std::int64_t> cyclic_orders,
                                std::int64_t enumeration_cap = kDefaultEnumerationCap)
        : orders_(std::move(cyclic_orders)) {
        if (orders_.empty()) throw GroupError("group needs at least one cyclic factor");
        order_ = 1;
        exponent_ = 1;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            if (orders_[j] < 2) {
                throw GroupError("cyclic order " + std::to_string(orders_[j]) + " at position " +
                                 std::to_string(j) + " is below 2");
            }
            if (order_ > enumeration_cap / orders_[j]) {
                throw GroupError("group order exceeds enumeration cap " +
                                 std::to_string(enumeration_cap));
            }
            order_ *= orders_[j];
            exponent_ = std::lcm(exponent_, orders_[j]);
        }
        if (order_ > enumeration_cap) {
            throw GroupError("group order exceeds enumeration cap " + std::to_string(enumeration_cap));
        }
    }

    const std::vector<std::int64_t>& cyclic_orders() const noexcept { return orders_; }
    std::size_t rank() const noexcept { return orders_.size(); }
    std::int64_t order() const noexcept { return order_; }
    /// lcm of the cyclic orders.
    std::int64_t exponent() const noexcept { return exponent_; }

    bool operator==(const FiniteAbelianGroup& other) const { return orders_ == other.orders_; }

    std::string to_string() const {
        std::string out;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            if (j) out += " x ";
            out += "Z" + std::to_string(orders_[j]);
        }
        return out;
    }

    /// Builds an element, reducing each coordinate modulo its cyclic order.
    GroupElement element(std::vector<std::int64_t> coords) const {
        if (coords.size() != orders_.size()) {
            throw GroupError("element has " + std::to_string(coords.size()) +
                             " coordinates, group " + to_string() + " has rank " +
                             std::to_string(orders_.size()));
        }
        for (std::size_t j = 0; j < coords.size(); ++j) coords[j] = mod(coords[j], orders_[j]);
        return GroupElement{std::move(coords)};
    }

    GroupElement zero() const { return GroupElement{std::vector<std::int64_t>(orders_.size(), 0)}; }

    /// The j-th standard generator e_j.
    GroupElement generator(std::size_t j) const {
        GroupElement e = zero();
        e.coords.at(j) = 1;
        return e;
    }

    bool contains(const GroupElement& x) const noexcept {
        if (x.coords.size() != orders_.size()) return false;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            if (x.coords[j] < 0 || x.coords[j] >= orders_[j]) return false;
        }
        return true;
    }

    void require(const GroupElement& x) const {
        if (!contains(x)) {
            throw GroupError("element (" + heyde::to_string(x) + ") does not belong to " + to_string());
        }
    }

    GroupElement at(std::int64_t index) const {
        GroupElement x = zero();
        for (std::size_t j = orders_.size(); j-- > 0;) {
            x.coords[j] = index % orders_[j];
            index /= orders_[j];
        }
        return x;
    }

    std::int64_t index_of(const GroupElement& x) const {
        std::int64_t index = 0;
        for (std::size_t j = 0; j < orders_.size(); ++j) index = index * orders_[j] + x.coords[j];
        return index;
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        out.reserve(static_cast<std::size_t>(order_));
        for (std::int64_t i = 0; i < order_; ++i) out.push_back(at(i));
        return out;
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        GroupElement r = a;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            r.coords[j] += b.coords[j];
            if (r.coords[j] >= orders_[j]) r.coords[j] -= orders_[j];
        }
        return r;
    }

    GroupElement negate(const GroupElement& a) const {
        GroupElement r = a;
        for (std::size_t j = 0; j < orders_.size(); ++j) r.coords[j] = r.coords[j] ? orders_[j] - r.coords[j] : 0;
        return r;
    }

    GroupElement subtract(const GroupElement& a, const GroupElement& b) const { return add(a, negate(b)); }

    /// f_n x = n x.
    GroupElement scale(std::int64_t n, const GroupElement& a) const {
        GroupElement r = a;
        for (std::size_t j = 0; j < orders_.size(); ++j) r.coords[j] = mod(mod(n, orders_[j]) * a.coords[j], orders_[j]);
        return r;
    }

    std::int64_t element_order(const GroupElement& x) const {
        std::int64_t result = 1;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            result = std::lcm(result, orders_[j] / std::gcd(orders_[j], x.coords[j]));
        }
        return result;
    }

private:
    std::vector<std::int64_t> orders_;
    std::int64_t order_ = 1;
    std::int64_t exponent_ = 1;
};

// ---------------------------------------------------------------------------
// Character pairing (x, y) = exp(2 pi i sum_j x_j y_j / n_j)
// ---------------------------------------------------------------------------

/// Exact phase k of the pairing, (x, y) = exp(2 pi i k / exponent).
inline std::int64_t pairing_phase(const FiniteAbelianGroup& g, const GroupElement& x, const GroupElement& y) {
    const auto& n = g.cyclic_orders();
    const std::int64_t e = g.exponent();
    std::int64_t k = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        k += ((x.coords[j] * y.coords[j]) % n[j]) * (e / n[j]);
        k %= e;
    }
    return k;
}

inline std::complex<double> root_of_unity(std::int64_t k, std::int64_t n) {
    k = mod(k, n);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

inline std::complex<double> character(const FiniteAbelianGroup& g, const GroupElement& x, const GroupElement& y) {
    g.require(x);
    g.require(y);
    return root_of_unity(pairing_phase(g, x, y), g.exponent());
}

/// (x, y) = 1, decided by the exact congruence.
inline bool pairing_is_trivial(const FiniteAbelianGroup& g, const GroupElement& x, const GroupElement& y) {
    return pairing_phase(g, x, y) == 0;
}

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

class Subgroup {
public:
    /// Closure of the generators under addition.
    static Subgroup generated_by(const FiniteAbelianGroup& g, std::vector<GroupElement> generators) {
        for (const auto& x : generators) g.require(x);
        Subgroup h(g);
        h.elements_ = closure(g, generators);
        h.generators_ = std::move(generators);
        return h;
    }

    /// Wraps an explicit element set; throws GroupError unless it is a subgroup.
    static Subgroup from_elements(const FiniteAbelianGroup& g, std::vector<GroupElement> elements) {
        for (const auto& x : elements) g.require(x);
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        if (elements.empty() || elements.front() != g.zero()) {
            throw GroupError("element set does not contain the identity");
        }
        // Greedy lexicographic generating set.
        std::vector<GroupElement> gens;
        std::vector<GroupElement> span{g.zero()};
        for (const auto& x : elements) {
            if (!std::binary_search(span.begin(), span.end(), x)) {
                gens.push_back(x);
                span = closure(g, gens);
            }
        }
        if (span != elements) throw GroupError("element set is not closed under addition");
        Subgroup h(g);
        h.elements_ = std::move(elements);
        h.generators_ = std::move(gens);
        return h;
    }

    const FiniteAbelianGroup& parent() const noexcept { return parent_; }
    /// Sorted lexicographically.
    const std::vector<GroupElement>& elements() const noexcept { return elements_; }
    const std::vector<GroupElement>& generators() const noexcept { return generators_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool is_trivial() const noexcept { return elements_.size() == 1; }

    bool contains(const GroupElement& x) const {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    bool operator==(const Subgroup& other) const {
        return parent_ == other.parent_ && elements_ == other.elements_;
    }

private:
    explicit Subgroup(FiniteAbelianGroup g) : parent_(std::move(g)) {}

    static std::vector<GroupElement> closure(const FiniteAbelianGroup& g, std::span<const GroupElement> gens) {
        std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
        std::vector<GroupElement> frontier{g.zero()};
        seen[0] = 1;
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            for (const auto& s : gens) {
                GroupElement next = g.add(frontier[head], s);
                const auto idx = static_cast<std::size_t>(g.index_of(next));
                if (!seen[idx]) {
                    seen[idx] = 1;
                    frontier.push_back(std::move(next));
                }
            }
        }
        std::sort(frontier.begin(), frontier.end());
        return frontier;
    }

    FiniteAbelianGroup parent_;
    std::vector<GroupElement> elements_;
    std::vector<GroupElement> generators_;
};

inline Subgroup subgroup_generated(const FiniteAbelianGroup& g, std::vector<GroupElement> generators) {
    return Subgroup::generated_by(g, std::move(generators));
}

inline Subgroup trivial_subgroup(const FiniteAbelianGroup& g) { return Subgroup::generated_by(g, {}); }

inline Subgroup whole_group(const FiniteAbelianGroup& g) {
    std::vector<GroupElement> gens;
    for (std::size_t j = 0; j < g.rank(); ++j) gens.push_back(g.generator(j));
    return Subgroup::generated_by(g, std::move(gens));
}

/// A(Y, H) = {y : (x, y) = 1 for all x in H}. The numeric test at
/// kCharacterTolerance must agree with the exact congruence.
inline Subgroup annihilator(const Subgroup& h) {
    const auto& g = h.parent();
    const auto& probes = h.generators().empty() ? h.elements() : h.generators();
    std::vector<GroupElement> members;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        GroupElement y = g.at(i);
        bool numeric = true;
        bool exact = true;
        for (const auto& x : probes) {
            numeric = numeric && std::abs(character(g, x, y) - 1.0) < kCharacterTolerance;
            exact = exact && pairing_is_trivial(g, x, y);
        }
        if (numeric != exact) {
            throw PredicateDisagreement("numeric and exact annihilator membership differ at (" + to_string(y) + ")");
        }
        if (exact) members.push_back(std::move(y));
    }
    return Subgroup::from_elements(g, std::move(members));
}

/// Subgroup generated by all x with 2x = 0.
inline Subgroup order2_subgroup(const FiniteAbelianGroup& g) {
    std::vector<GroupElement> gens;
    for (std::int64_t i = 1; i < g.order(); ++i) {
        GroupElement x = g.at(i);
        if (g.scale(2, x) == g.zero()) gens.push_back(std::move(x));
    }
    return Subgroup::generated_by(g, std::move(gens));
}

// ---------------------------------------------------------------------------
// Endomorphisms
// ---------------------------------------------------------------------------

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// x -> A x with (A x)_i = sum_j a_ij x_j mod n_i. Well defined iff
/// n_j a_ij = 0 (mod n_i) for all i, j.
class Endomorphism {
public:
    Endomorphism(FiniteAbelianGroup g, IntMatrix matrix) : group_(std::move(g)), matrix_(std::move(matrix)) {
        const auto& n = group_.cyclic_orders();
        const std::size_t k = n.size();
        if (matrix_.size() != k) {
            throw GroupError("matrix has " + std::to_string(matrix_.size()) + " rows, expected " + std::to_string(k));
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (matrix_[i].size() != k) {
                throw GroupError("matrix row " + std::to_string(i) + " has " + std::to_string(matrix_[i].size()) +
                                 " entries, expected " + std::to_string(k));
            }
            for (std::size_t j = 0; j < k; ++j) {
                matrix_[i][j] = mod(matrix_[i][j], n[i]);
                if (mod(n[j] * matrix_[i][j], n[i]) != 0) {
                    throw IncompatibleMatrix(i, j,
                                             "entry a(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                                 std::to_string(matrix_[i][j]) + " violates " + std::to_string(n[j]) +
                                                 " * a = 0 mod " + std::to_string(n[i]));
                }
            }
        }
        image_size_ = compute_image_size();
    }

    static Endomorphism identity(const FiniteAbelianGroup& g) { return scalar(g, 1); }

    /// f_n, multiplication by n.
    static Endomorphism scalar(const FiniteAbelianGroup& g, std::int64_t n) {
        IntMatrix m(g.rank(), std::vector<std::int64_t>(g.rank(), 0));
        for (std::size_t i = 0; i < g.rank(); ++i) m[i][i] = n;
        return Endomorphism(g, std::move(m));
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const IntMatrix& matrix() const noexcept { return matrix_; }
    bool is_auto() const noexcept { return image_size_ == group_.order(); }
    std::int64_t image_size() const noexcept { return image_size_; }

    GroupElement apply(const GroupElement& x) const {
        group_.require(x);
        return apply_unchecked(x);
    }

    bool operator==(const Endomorphism& other) const {
        return group_ == other.group_ && matrix_ == other.matrix_;
    }

    GroupElement apply_unchecked(const GroupElement& x) const {
        const auto& n = group_.cyclic_orders();
        GroupElement r = group_.zero();
        for (std::size_t i = 0; i < n.size(); ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < n.size(); ++j) acc = (acc + matrix_[i][j] * x.coords[j]) % n[i];
            r.coords[i] = acc;
        }
        return r;
    }

private:
    std::int64_t compute_image_size() const {
        std::vector<char> hit(static_cast<std::size_t>(group_.order()), 0);
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < group_.order(); ++i) {
            const auto idx = static_cast<std::size_t>(group_.index_of(apply_unchecked(group_.at(i))));
            if (!hit[idx]) {
                hit[idx] = 1;
                ++count;
            }
        }
        return count;
    }

    FiniteAbelianGroup group_;
    IntMatrix matrix_;
    std::int64_t image_size_ = 0;
};

inline Endomorphism make_endomorphism(const FiniteAbelianGroup& g, IntMatrix matrix) {
    return Endomorphism(g, std::move(matrix));
}

inline void require_same_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    if (!(a == b)) throw GroupError("group mismatch: " + a.to_string() + " vs " + b.to_string());
}

/// The adjoint with (alpha x, y) = (x, adjoint(alpha) y): entry (j, i) is a_ij n_j / n_i.
inline Endomorphism adjoint(const Endomorphism& alpha) {
    const auto& n = alpha.group().cyclic_orders();
    const std::size_t k = n.size();
    IntMatrix m(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            m[j][i] = mod(alpha.matrix()[i][j] * n[j] / n[i], n[j]);
        }
    }
    return Endomorphism(alpha.group(), std::move(m));
}

/// {x : alpha x = 0}.
inline Subgroup kernel(const Endomorphism& alpha) {
    const auto& g = alpha.group();
    std::vector<GroupElement> members;
    const GroupElement zero = g.zero();
    for (std::int64_t i = 0; i < g.order(); ++i) {
        GroupElement x = g.at(i);
        if (alpha.apply_unchecked(x) == zero) members.push_back(std::move(x));
    }
    return Subgroup::from_elements(g, std::move(members));
}

/// alpha o beta.
inline Endomorphism compose(const Endomorphism& alpha, const Endomorphism& beta) {
    require_same_group(alpha.group(), beta.group());
    const auto& n = alpha.group().cyclic_orders();
    const std::size_t k = n.size();
    IntMatrix m(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < k; ++j) acc = (acc + alpha.matrix()[i][j] * beta.matrix()[j][l]) % n[i];
            m[i][l] = acc;
        }
    return Endomorphism(alpha.group(), std::move(m));
}

inline Endomorphism add(const Endomorphism& alpha, const Endomorphism& beta) {
    require_same_group(alpha.group(), beta.group());
    IntMatrix m = alpha.matrix();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) m[i][j] += beta.matrix()[i][j];
    return Endomorphism(alpha.group(), std::move(m));
}

inline Endomorphism negate(const Endomorphism& alpha) {
    IntMatrix m = alpha.matrix();
    for (auto& row : m)
        for (auto& a : row) a = -a;
    return Endomorphism(alpha.group(), std::move(m));
}

inline Endomorphism subtract(const Endomorphism& alpha, const Endomorphism& beta) { return add(alpha, negate(beta)); }

/// Inverse read off the inverted element permutation at the standard generators.
inline Endomorphism invert(const Endomorphism& alpha) {
    if (!alpha.is_auto()) throw NotAnAutomorphism("cannot invert a non-automorphism");
    const auto& g = alpha.group();
    std::vector<std::int64_t> preimage(static_cast<std::size_t>(g.order()), -1);
    for (std::int64_t i = 0; i < g.order(); ++i) {
        preimage[static_cast<std::size_t>(g.index_of(alpha.apply_unchecked(g.at(i))))] = i;
    }
    const std::size_t k = g.rank();
    IntMatrix m(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t j = 0; j < k; ++j) {
        const GroupElement col = g.at(preimage[static_cast<std::size_t>(g.index_of(g.generator(j)))]);
        for (std::size_t i = 0; i < k; ++i) m[i][j] = col.coords[i];
    }
    return Endomorphism(g, std::move(m));
}

}  // namespace heyde
