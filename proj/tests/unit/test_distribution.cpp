#include <gtest/gtest.h>

#include "heyde/distribution.hpp"
#include "oracles.hpp"

using namespace heyde;

namespace {

Distribution uniform(const FiniteAbelianGroup& g) { return haar_on(whole_group(g)); }

double char_distance(const CharFunction& f, const std::vector<std::complex<double>>& expected) {
    double d = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) d = std::max(d, std::abs(f.values()[i] - expected[i]));
    return d;
}

std::vector<FiniteAbelianGroup> groups_upto_81() {
    std::vector<FiniteAbelianGroup> out;
    for (auto v : std::vector<std::vector<std::int64_t>>{{5}, {7}, {8}, {9}, {2, 3}, {3, 3}, {9, 3}, {4, 4}, {81}, {9, 9}}) {
        out.emplace_back(v);
    }
    return out;
}

}  // namespace

TEST(Distribution, ValidatesMasses) {
    const FiniteAbelianGroup g({5});
    EXPECT_THROW(Distribution(g, {{g.element({0}), Rational(1, 2)}}), InvalidDistribution);
    EXPECT_THROW(Distribution(g, {{g.element({0}), Rational(3, 2)}, {g.element({1}), Rational(-1, 2)}}),
                 InvalidDistribution);
    EXPECT_THROW(Distribution(g, {{GroupElement{{7}}, Rational(1)}}), GroupError);
    const Distribution mu(g, {{g.element({0}), Rational(1)}, {g.element({2}), Rational(0)}});
    EXPECT_EQ(mu.support_size(), 1u);
    EXPECT_EQ(mu.mass(g.element({2})), 0);
    EXPECT_THROW(Distribution::from_weights(g, {{g.element({1}), 0}}), InvalidDistribution);
    EXPECT_THROW(Distribution::from_weights(g, {{g.element({1}), -1}, {g.element({2}), 2}}), InvalidDistribution);
    const auto w = Distribution::from_weights(g, {{g.element({1}), 1}, {g.element({1}), 2}, {g.element({3}), 1}});
    EXPECT_EQ(w.mass(g.element({1})), Rational(3, 4));
}

TEST(PointMass, Examples) {
    const FiniteAbelianGroup g({5});
    const auto e0 = char_function(point_mass(g, g.zero()));
    for (const auto& v : e0.values()) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-12);
    const auto e1 = char_function(point_mass(g, g.element({1})));
    for (std::int64_t y = 0; y < 5; ++y)
        EXPECT_NEAR(std::abs(e1.at_index(y) - std::polar(1.0, 2 * std::numbers::pi * y / 5)), 0.0, 1e-12);
    EXPECT_EQ(convolve(point_mass(g, g.element({3})), point_mass(g, g.element({4}))), point_mass(g, g.element({2})));
}

TEST(Haar, Examples) {
    const FiniteAbelianGroup z9({9});
    EXPECT_EQ(haar_on(trivial_subgroup(z9)), point_mass(z9, z9.zero()));
    const auto k = subgroup_generated(z9, {z9.element({3})});
    const auto m = haar_on(k);
    EXPECT_EQ(m.mass(z9.element({6})), Rational(1, 3));
    std::vector<std::complex<double>> ind(9, 0.0);
    for (int y : {0, 3, 6}) ind[static_cast<std::size_t>(y)] = 1.0;
    EXPECT_LT(char_distance(char_function(m), ind), 1e-9);
    const FiniteAbelianGroup z5({5});
    std::vector<std::complex<double>> delta(5, 0.0);
    delta[0] = 1.0;
    EXPECT_LT(char_distance(char_function(uniform(z5)), delta), 1e-9);
}

TEST(Haar, CharIsAnnihilatorIndicator) {
    for (const auto& g : groups_upto_81()) {
        Rng rng(g.order());
        for (int t = 0; t < 4; ++t) {
            const auto k = subgroup_generated(g, {g.at(uniform_int(rng, 0, g.order() - 1))});
            const auto a = annihilator(k);
            const auto f = char_function(haar_on(k));
            for (std::int64_t i = 0; i < g.order(); ++i)
                ASSERT_NEAR(std::abs(f.at_index(i) - (a.contains(g.at(i)) ? 1.0 : 0.0)), 0.0, 1e-9);
        }
    }
}

TEST(Operations, Examples) {
    const FiniteAbelianGroup g({5});
    Rng rng(3);
    const auto mu = random_distribution(g, rng, 5, 6);
    EXPECT_EQ(convolve(mu, point_mass(g, g.zero())), mu);
    EXPECT_EQ(reflect(point_mass(g, g.element({3}))), point_mass(g, g.element({2})));
    const auto f = char_function(symmetrize(mu));
    for (const auto& v : f.values()) {
        EXPECT_GE(v.real(), -1e-12);
        EXPECT_NEAR(v.imag(), 0.0, 1e-12);
    }
    EXPECT_EQ(shift(point_mass(g, g.element({1})), g.element({3})), point_mass(g, g.element({4})));
    EXPECT_THROW(convolve(mu, point_mass(FiniteAbelianGroup({7}), GroupElement{{0}})), GroupError);
}

TEST(Operations, FourierIdentities) {
    for (const auto& g : groups_upto_81()) {
        Rng rng(g.order() + 17);
        const auto mu = random_distribution(g, rng, 6, 6);
        const auto nu = random_distribution(g, rng, 6, 6);
        const auto alpha = random_endomorphism(g, rng);
        const auto fm = char_function(mu);
        const auto fn = char_function(nu);
        const auto fc = char_function(convolve(mu, nu));
        const auto fr = char_function(reflect(mu));
        const auto fp = char_function(push_forward(mu, alpha));
        const auto adj = adjoint(alpha);
        for (const auto& y : g.elements()) {
            ASSERT_NEAR(std::abs(fm(y) - oracle::char_value(mu, y)), 0.0, 1e-9);
            ASSERT_NEAR(std::abs(fc(y) - fm(y) * fn(y)), 0.0, 1e-9);
            ASSERT_NEAR(std::abs(fr(y) - std::conj(fm(y))), 0.0, 1e-9);
            ASSERT_NEAR(std::abs(fp(y) - fm(adj.apply(y))), 0.0, 1e-9);
        }
    }
}

TEST(CharFunction, Validation) {
    const FiniteAbelianGroup g({3});
    EXPECT_THROW(CharFunction(g, {1.0, 0.0}), InvalidCharFunction);
    EXPECT_THROW(CharFunction(g, {0.5, 0.0, 0.0}), InvalidCharFunction);
    EXPECT_THROW(CharFunction(g, {1.0, 1.5, 1.5}), InvalidCharFunction);
    EXPECT_THROW(CharFunction(g, {1.0, {0.0, 0.5}, {0.0, 0.5}}), InvalidCharFunction);
    EXPECT_NO_THROW(CharFunction(g, {1.0, {0.0, 0.5}, {0.0, -0.5}}));
}

TEST(Inversion, Examples) {
    const FiniteAbelianGroup z5({5});
    const auto e0 = distribution_from_char(char_function(point_mass(z5, z5.zero())));
    ASSERT_TRUE(e0.exact);
    EXPECT_EQ(*e0.exact, point_mass(z5, z5.zero()));
    const auto u = distribution_from_char(char_function(uniform(z5)));
    ASSERT_TRUE(u.exact);
    EXPECT_EQ(*u.exact, uniform(z5));
}

TEST(Inversion, RoundTripIsExact) {
    for (const auto& g : groups_upto_81()) {
        Rng rng(g.order() * 31);
        for (int t = 0; t < 5; ++t) {
            const auto mu = random_distribution(g, rng, g.order(), 9);
            const auto back = distribution_from_char(char_function(mu));
            ASSERT_TRUE(back.exact.has_value()) << g.to_string();
            EXPECT_EQ(*back.exact, mu);
            for (std::int64_t i = 0; i < g.order(); ++i)
                EXPECT_NEAR(back.masses[static_cast<std::size_t>(i)], to_double(mu.mass(g.at(i))), 1e-9);
        }
    }
}

TEST(Inversion, RejectsNegativeMass) {
    const FiniteAbelianGroup g({3});
    // mass(0) = (1 + 2c) / 3 < 0 for c = -0.9.
    EXPECT_THROW(distribution_from_char(CharFunction(g, {1.0, -0.9, -0.9})), InvalidCharFunction);
    EXPECT_NO_THROW(distribution_from_char(CharFunction(g, {1.0, 0.9, 0.9})));
}

TEST(OneSet, Examples) {
    const FiniteAbelianGroup z9({9});
    const auto k = subgroup_generated(z9, {z9.element({3})});
    EXPECT_EQ(one_set(char_function(haar_on(k))), k);
    const FiniteAbelianGroup g({9, 3});
    const auto x = g.element({3, 1});
    const auto e = one_set(char_function(point_mass(g, x)));
    for (const auto& y : g.elements()) EXPECT_EQ(e.contains(y), pairing_is_trivial(g, x, y));
    const FiniteAbelianGroup z5({5});
    const auto mu = Distribution::from_weights(z5, {{z5.element({0}), 2}, {z5.element({1}), 1}});
    EXPECT_TRUE(one_set(char_function(mu)).is_trivial());
}

TEST(OneSet, AmbiguousMembership) {
    const FiniteAbelianGroup g({3});
    const double c = 1.0 - 1e-7;
    EXPECT_THROW(one_set(CharFunction(g, {1.0, c, c})), AmbiguousMembership);
}

TEST(OneSet, SupportLiesInAnnihilator) {
    for (const auto& g : groups_upto_81()) {
        Rng rng(g.order() + 2);
        for (int t = 0; t < 6; ++t) {
            Distribution mu = t % 2 ? random_distribution(g, rng, 3, 6)
                                    : shift(haar_on(subgroup_generated(g, {g.at(uniform_int(rng, 0, g.order() - 1))})),
                                            g.at(uniform_int(rng, 0, g.order() - 1)));
            const auto f = char_function(mu);
            const auto e = one_set(f);
            EXPECT_TRUE(support_within_annihilator(reflect(convolve(mu, reflect(mu))), e));
            // Values constant on cosets of E up to the character of a support point.
            const auto s0 = mu.support().front();
            const auto shifted = char_function(shift(mu, g.negate(s0)));
            for (const auto& y : g.elements())
                for (const auto& h : e.elements())
                    ASSERT_NEAR(std::abs(shifted(g.add(y, h)) - shifted(y)), 0.0, 1e-9);
            EXPECT_TRUE(support_within_annihilator(shift(mu, g.negate(s0)), e));
        }
    }
}

TEST(Classify, IdempotentExamples) {
    const FiniteAbelianGroup z5({5});
    const auto w = is_idempotent_shift(point_mass(z5, z5.element({4})));
    ASSERT_TRUE(w);
    EXPECT_TRUE(w->subgroup.is_trivial());
    EXPECT_EQ(w->shift, z5.element({4}));
    const FiniteAbelianGroup z9({9});
    const auto k = subgroup_generated(z9, {z9.element({3})});
    const auto w2 = is_idempotent_shift(shift(haar_on(k), z9.element({1})));
    ASSERT_TRUE(w2);
    EXPECT_EQ(w2->subgroup, k);
    EXPECT_EQ(w2->shift, z9.element({1}));
    EXPECT_FALSE(is_idempotent_shift(Distribution::from_weights(z5, {{z5.element({0}), 1}, {z5.element({1}), 1}})));
    EXPECT_FALSE(
        is_idempotent_shift(Distribution::from_weights(z9, {{z9.element({0}), 2}, {z9.element({3}), 1}, {z9.element({6}), 1}})));
}

TEST(Classify, IdempotentMatchesOracle) {
    for (const auto& g : groups_upto_81()) {
        if (g.order() > 27) continue;
        Rng rng(g.order() + 40);
        for (int t = 0; t < 200; ++t) {
            Distribution mu = random_distribution(g, rng, 4, 2);
            EXPECT_EQ(is_idempotent_shift(mu).has_value(), oracle::is_haar_coset(mu));
        }
    }
}

TEST(Classify, GaussianExamples) {
    const FiniteAbelianGroup z7({7});
    EXPECT_TRUE(is_gaussian(point_mass(z7, z7.element({2}))));
    const FiniteAbelianGroup z9({9});
    EXPECT_FALSE(is_gaussian(haar_on(subgroup_generated(z9, {z9.element({3})}))));
    EXPECT_FALSE(is_gaussian(uniform(FiniteAbelianGroup({5}))));
}

TEST(Sample, Examples) {
    const FiniteAbelianGroup z5({5});
    for (const auto& x : sample(point_mass(z5, z5.element({3})), 100, 42)) EXPECT_EQ(x, z5.element({3}));
    const auto xs = sample(uniform(z5), 100000, 7);
    std::map<GroupElement, int> counts;
    for (const auto& x : xs) ++counts[x];
    for (const auto& [x, c] : counts) EXPECT_NEAR(c / 100000.0, 0.2, 0.01);
    EXPECT_EQ(sample(uniform(z5), 50, 9), sample(uniform(z5), 50, 9));
    EXPECT_NE(sample(uniform(z5), 50, 9), sample(uniform(z5), 50, 10));
    EXPECT_THROW(sample(uniform(z5), 0, 1), InvalidDistribution);
}

TEST(Sample, TotalVariationBound) {
    const FiniteAbelianGroup g({9, 3});
    Rng rng(5);
    const auto mu = random_distribution(g, rng, 27, 6);
    const std::size_t count = 100000;
    std::map<GroupElement, double> freq;
    for (const auto& x : sample(mu, count, 11)) freq[x] += 1.0 / count;
    double tv = 0.0;
    for (const auto& x : g.elements()) tv += std::fabs(freq[x] - to_double(mu.mass(x)));
    EXPECT_LT(0.5 * tv, 4.0 * std::sqrt(27.0 / count));
}

TEST(RandomDistribution, RespectsCaps) {
    const FiniteAbelianGroup g({15});
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        const auto mu = random_distribution(g, rng, 3, 6);
        EXPECT_LE(mu.support_size(), 3u);
        for (const auto& [x, p] : mu.probs()) EXPECT_LE(denominator(p), 18);
    }
    const auto k = subgroup_generated(g, {g.element({5})});
    for (int t = 0; t < 50; ++t)
        for (const auto& x : random_distribution_on(k, rng, 6).support()) EXPECT_TRUE(k.contains(x));
}
