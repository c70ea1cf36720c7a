#include <cmath>

#include <gtest/gtest.h>

#include "heyde/funceq.hpp"
#include "heyde/verify.hpp"

using namespace heyde;

namespace {

GroupFunction random_function(const FiniteAbelianGroup& g, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return GroupFunction::from(g, [&](const GroupElement&) { return u(rng); });
}

// More than half the mass at zero keeps |mu^| away from zero.
Distribution heavy_at_zero(const FiniteAbelianGroup& g, Rng& rng) {
    std::vector<std::pair<GroupElement, std::int64_t>> w{{g.zero(), 4}};
    for (int i = 0; i < 3; ++i) w.emplace_back(g.at(uniform_int(rng, 0, g.order() - 1)), 1);
    return Distribution::from_weights(g, w);
}

double brute_log_residual(const GroupFunction& p1, const GroupFunction& p2, const Endomorphism& adj) {
    const auto& g = p1.group();
    double worst = 0.0;
    for (const auto& u : g.elements())
        for (const auto& v : g.elements()) {
            const auto av = adj.apply(v);
            worst = std::max(worst, std::fabs(p1(g.add(u, v)) + p2(g.add(u, av)) - p1(g.subtract(u, v)) -
                                              p2(g.subtract(u, av))));
        }
    return worst;
}

}  // namespace

TEST(FiniteDifference, LinearAndCommuting) {
    const FiniteAbelianGroup g({9, 3});
    Rng rng(1);
    const auto f = random_function(g, rng);
    const auto h = g.element({4, 1});
    const auto k = g.element({2, 2});
    const auto hk = finite_difference(finite_difference(f, h), k);
    const auto kh = finite_difference(finite_difference(f, k), h);
    for (std::int64_t i = 0; i < g.order(); ++i) EXPECT_NEAR(hk.at_index(i), kh.at_index(i), 1e-12);
    EXPECT_EQ(finite_difference(f, g.zero()).max_abs(), 0.0);
    const auto d = finite_difference(f, h);
    for (const auto& y : g.elements()) EXPECT_DOUBLE_EQ(d(y), f(g.add(y, h)) - f(y));
    EXPECT_THROW(finite_difference(f, GroupElement{{9, 0}}), GroupError);
}

TEST(NegLogChar, ValuesAndDomain) {
    const FiniteAbelianGroup g({7});
    Rng rng(2);
    const auto nu = symmetrize(heavy_at_zero(g, rng));
    ASSERT_TRUE(has_positive_char(nu));
    const auto phi = neg_log_char(nu);
    const auto f = char_function(nu);
    EXPECT_EQ(phi.at_index(0), 0.0);
    for (std::int64_t i = 0; i < g.order(); ++i) {
        EXPECT_GE(phi.at_index(i), 0.0);
        EXPECT_NEAR(std::exp(-phi.at_index(i)), f.at_index(i).real(), 1e-12);
    }
    const auto haar = haar_on(whole_group(g));
    EXPECT_FALSE(has_positive_char(haar));
    EXPECT_THROW(neg_log_char(haar), DomainError);
    // Complex values are outside the domain too.
    EXPECT_THROW(neg_log_char(Distribution::from_weights(g, {{g.zero(), 2}, {g.element({1}), 1}})), DomainError);
}

TEST(DifferenceChain, VanishesOnSymmetricInstances) {
    int checked = 0;
    for (auto v : std::vector<std::vector<std::int64_t>>{{5}, {7}, {9}, {3, 3}}) {
        const FiniteAbelianGroup g(v);
        Rng rng(g.order());
        for (int t = 0; t < 5; ++t) {
            const auto mu = heavy_at_zero(g, rng);
            const auto inst = FormsInstance::canonical(Endomorphism::scalar(g, -1), mu, mu);
            ASSERT_TRUE(is_conditionally_symmetric(inst));
            const auto phi = verify::chain_potentials(inst);
            ASSERT_TRUE(phi);
            const auto adj = adjoint(inst.alpha());
            EXPECT_LT(log_heyde_equation_residual(phi->first, phi->second, adj), 1e-10);
            const auto k1 = g.at(uniform_int(rng, 0, g.order() - 1));
            const auto k2 = g.at(uniform_int(rng, 0, g.order() - 1));
            const auto k3 = g.at(uniform_int(rng, 0, g.order() - 1));
            EXPECT_LT(heyde_difference_chain(phi->first, phi->second, adj, k1, k2, k3).max_residual(), 1e-10);
            const auto scan = heyde_chain_scan(phi->first, phi->second, adj);
            EXPECT_TRUE(scan.exhaustive);
            EXPECT_EQ(scan.increments_checked, g.order() * g.order() * g.order());
            EXPECT_LT(scan.max_residual, 1e-10);
            ++checked;
        }
    }
    EXPECT_EQ(checked, 20);
}

TEST(DifferenceChain, ResidualMatchesBruteForce) {
    const FiniteAbelianGroup g({9, 3});
    Rng rng(5);
    const auto p1 = random_function(g, rng);
    const auto p2 = random_function(g, rng);
    const auto adj = adjoint(make_endomorphism(g, {{4, 3}, {1, 2}}));
    const double r = log_heyde_equation_residual(p1, p2, adj);
    EXPECT_NEAR(r, brute_log_residual(p1, p2, adj), 1e-12);
    EXPECT_GT(r, 0.1);
    // Random potentials do not satisfy the chain.
    EXPECT_GT(heyde_chain_scan(p1, p2, adj, 0, 200, 1).max_residual, 1e-3);
}

TEST(DifferenceChain, SampledScanIsDeterministic) {
    const FiniteAbelianGroup g({15});
    Rng rng(6);
    const auto p1 = random_function(g, rng);
    const auto p2 = random_function(g, rng);
    const auto adj = adjoint(Endomorphism::scalar(g, 7));
    const auto a = heyde_chain_scan(p1, p2, adj, 10, 300, 9);
    const auto b = heyde_chain_scan(p1, p2, adj, 10, 300, 9);
    EXPECT_FALSE(a.exhaustive);
    EXPECT_EQ(a.increments_checked, 300);
    EXPECT_EQ(a.max_residual, b.max_residual);
    EXPECT_EQ(a.worst_increments, b.worst_increments);
}

TEST(MFormsChain, VanishesOnSymmetricInstances) {
    verify::VerifyOptions opts;
    opts.seed = 21;
    opts.instances_per_group = 40;
    int eligible = 0;
    int restricted = 0;
    for (const auto& inst : verify::symmetric_only(verify::lemma1_instances(opts))) {
        const auto psi = verify::chain_potentials(inst);
        if (!psi) continue;
        ++eligible;
        const auto adj = adjoint(inst.alpha());
        ASSERT_LT(m_forms_equation_residual(psi->first, psi->second, adj), 1e-8);
        ASSERT_LT(m_forms_chain_scan(psi->first, psi->second, adj).max_residual, 1e-8);
        const auto& g = inst.group();
        if (g.order() % 2 == 0 || !kernel(add(Endomorphism::identity(g), inst.alpha())).is_trivial()) continue;
        const auto pq = m_forms_potentials(psi->first, psi->second, adj);
        ASSERT_LT(third_difference_residual(pq.p), 1e-8);
        ASSERT_TRUE(quadratic_check(pq.p, 1e-8));
        ASSERT_LT(pq.p.max_abs(), 1e-8);
        ++restricted;
    }
    EXPECT_GT(eligible, 5);
    EXPECT_GT(restricted, 0);
}

TEST(Quadratic, ResidualAndWitness) {
    const FiniteAbelianGroup g({5});
    EXPECT_TRUE(quadratic_check(GroupFunction::zero(g)));
    const auto bump = GroupFunction::from(g, [&](const GroupElement& y) { return y == g.element({2}) ? 1.0 : 0.0; });
    const auto q = quadratic_residual(bump);
    EXPECT_FALSE(q.holds);
    ASSERT_TRUE(q.witness);
    EXPECT_GT(q.max_deviation, 0.5);
    EXPECT_GE(third_difference_residual(bump), 1.0);
    EXPECT_EQ(third_difference_residual(GroupFunction::zero(g)), 0.0);
}

TEST(Quadratic, OnlyZeroOnFiniteGroups) {
    for (auto v : std::vector<std::vector<std::int64_t>>{{2}, {4}, {5}, {9}, {3, 3}, {2, 4}, {9, 3}}) {
        const FiniteAbelianGroup g(v);
        const auto rec = quadratic_vanishing(g);
        EXPECT_TRUE(rec.zero_forced);
        EXPECT_EQ(rec.rank, g.order());
        EXPECT_TRUE(rec.only_zero) << g.to_string();
        ASSERT_EQ(rec.traces.size(), static_cast<std::size_t>(g.order()));
        for (const auto& t : rec.traces) {
            EXPECT_TRUE(t.scaling_verified);
            for (std::size_t n = 0; n < t.coefficients.size(); ++n)
                EXPECT_EQ(t.coefficients[n], static_cast<std::int64_t>(n * n));
        }
    }
}

TEST(GaussianForm, OnlyPointMasses) {
    for (auto v : std::vector<std::vector<std::int64_t>>{{2}, {5}, {9}, {3, 3}}) {
        const FiniteAbelianGroup g(v);
        Rng rng(g.order() + 3);
        for (const auto& x : g.elements()) EXPECT_TRUE(has_gaussian_form(point_mass(g, x)));
        EXPECT_FALSE(has_gaussian_form(haar_on(whole_group(g))));
        for (int t = 0; t < 10; ++t) {
            const auto mu = heavy_at_zero(g, rng);
            EXPECT_EQ(has_gaussian_form(mu), is_gaussian(mu));
        }
    }
}
