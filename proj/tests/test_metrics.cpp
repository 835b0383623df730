// test_metrics.cpp — distances, steady-state deviation, populations

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "qme/calibration.hpp"
#include "qme/metrics.hpp"
#include "qme/oracle.hpp"
#include "qme/quadratic_solver.hpp"

namespace qme {
namespace {

struct Chain {
    ChainSpec chain;
    SingleParticleMatrix h;
    Eigen::MatrixXcd hmaj;
    std::vector<BathSite> baths;
    Chain(ChainSpec c, double tau_b, double tau_sb) : chain(c), h(build_chain_hamiltonian(c)), hmaj(hamiltonian_to_majorana(h)) {
        baths = make_chain_baths(c, tau_b, calibrate_jint(tau_sb, h, make_chain_baths(c, tau_b, 1.0)));
    }
    CovarianceW w(QmeKind k, int r) const { return steady_state_covariance(hmaj, build_generator(k, h, baths, r)); }
};

TEST(Distance, Examples) {
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(6, 6);
    EXPECT_EQ(generator_distance(m, m), 0.0);
    EXPECT_NEAR(generator_distance(2.0 * m, m), 1.0, 1e-15);
    EXPECT_THROW(generator_distance(m, Eigen::MatrixXcd::Zero(6, 6)), ConfigError);
    EXPECT_THROW(generator_distance(m, Eigen::MatrixXcd::Zero(4, 4)), ConfigError);
}

TEST(Distance, TriangleInequalityOnNumerators) {
    std::srand(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(8, 8), b = Eigen::MatrixXcd::Random(8, 8),
                               c = Eigen::MatrixXcd::Random(8, 8);
        EXPECT_LE(generator_distance(a, c) * c.norm(),
                  generator_distance(a, b) * b.norm() + generator_distance(b, c) * c.norm() + 1e-12);
        EXPECT_GE(generator_distance(a, b), 0.0);
    }
}

TEST(Delta, IdenticalIsZero) {
    const Chain s({8, 2, 1.0, 0.0, 0.5, 0.1}, 1.0, 100.0);
    const auto w = s.w(QmeKind::Redfield, 8);
    EXPECT_EQ(steady_state_delta(w, w), 0.0);
}

TEST(Delta, RadiusOneIsAlwaysOne) {
    // Single-site windows give a product steady state with no off-diagonal weight at omega0 = 0.
    for (double tau_b : {0.05, 1.0, 5.0})
        for (QmeKind k : {QmeKind::LocalDavies, QmeKind::LocalNRE}) {
            const Chain s({16, 3, 1.0, 0.0, 0.5, 0.1}, tau_b, 100.0);
            EXPECT_NEAR(steady_state_delta(s.w(k, 1), s.w(QmeKind::Redfield, 16)), 1.0, 1e-10) << tau_b;
        }
}

TEST(Delta, EquilibriumDaviesMatchesRedfield) {
    const Chain s({32, 4, 1.0, 0.0, 0.1, 0.1}, 1.0, 100.0);
    EXPECT_LT(steady_state_delta(s.w(QmeKind::Davies, 32), s.w(QmeKind::Redfield, 32)), 1e-3);
}

TEST(Delta, InvariantUnderSiteRelabelling) {
    const Chain s({10, 2, 1.0, 0.2, 0.5, 0.1}, 0.5, 100.0);
    const auto a = s.w(QmeKind::LocalNRE, 3);
    const auto b = s.w(QmeKind::Redfield, 10);
    std::vector<int> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(5));
    Eigen::PermutationMatrix<Eigen::Dynamic> p(20);
    for (int i = 0; i < 10; ++i) {
        p.indices()(2 * i) = 2 * perm[i];
        p.indices()(2 * i + 1) = 2 * perm[i] + 1;
    }
    const Eigen::MatrixXcd pa = p * a * p.transpose(), pb = p * b * p.transpose();
    EXPECT_NEAR(steady_state_delta(pa, pb), steady_state_delta(a, b), 1e-15);
}

TEST(Delta, DiagonalReferenceIsRejected) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
    EXPECT_THROW(steady_state_delta(id, id), NumericalError);
}

TEST(Populations, IdentityIsHalfFilling) {
    const auto eig = diagonalize(build_chain_hamiltonian({6, 1, 1.0, 0.0, 0.0, 0.0}));
    for (const auto& p : mode_populations(Eigen::MatrixXcd::Identity(12, 12), eig)) EXPECT_NEAR(p.population, 0.5, 1e-15);
}

TEST(Populations, SingleSiteConventionMatchesRateEquation) {
    // One mode at omega0 with gain gamma_22(-omega0) and loss gamma_11(omega0).
    const BathSpec bath{0.6, 1.2, 0.4, 0.0};
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = 0.8;
    const std::vector<BathSite> baths{{0, bath}};
    const double g11 = power_spectrum(bath, Channel::Annihilation, 0.8);
    const double g22 = power_spectrum(bath, Channel::Creation, -0.8);
    for (QmeKind k : {QmeKind::Redfield, QmeKind::Davies, QmeKind::NRE, QmeKind::LocalDavies}) {
        const auto w = steady_state_covariance(hamiltonian_to_majorana(h), build_generator(k, h, baths, 1));
        const auto pops = mode_populations(w, diagonalize(h));
        ASSERT_EQ(pops.size(), 1u);
        EXPECT_NEAR(pops[0].population, g22 / (g11 + g22), 1e-12) << to_string(k);
        // and the dense density matrix agrees on the sign convention
        const auto f = oracle::jordan_wigner(1);
        const auto rho = oracle::dense_steady_state(oracle::dense_reference_superoperator(k, h, baths, 1, f)).rho;
        EXPECT_NEAR((f.adag[0] * f.a[0] * rho).trace().real(), pops[0].population, 1e-12);
    }
}

TEST(Populations, CorrelationMatrixMatchesDense) {
    const int L = 3;
    const ChainSpec chain{L, 1, 1.0, 0.2, 0.5, 0.1};
    const auto h = build_chain_hamiltonian(chain);
    const auto baths = make_chain_baths(chain, 0.8, 0.4);
    const auto f = oracle::jordan_wigner(L);
    const auto rho = oracle::dense_steady_state(oracle::dense_reference_superoperator(QmeKind::Redfield, h, baths, L, f)).rho;
    const auto g = correlation_matrix(steady_state_covariance(hamiltonian_to_majorana(h), build_generator(QmeKind::Redfield, h, baths, L)));
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) EXPECT_NEAR(std::abs(g(i, j) - (f.adag[i] * f.a[j] * rho).trace()), 0.0, 1e-10);
}

TEST(Populations, DaviesEquilibriumIsGibbs) {
    const double beta = 0.3;
    const Chain s({24, 3, 1.0, 0.0, beta, beta}, 1.0, 100.0);
    const auto eig = diagonalize(s.h);
    const auto pops = mode_populations(s.w(QmeKind::Davies, 24), eig);
    const auto gibbs = gibbs_populations(eig, beta);
    for (std::size_t m = 0; m < pops.size(); ++m) EXPECT_NEAR(pops[m].population, gibbs[m].population, 1e-6) << m;
}

TEST(Populations, WithinUnitIntervalForAllKinds) {
    const Chain s({20, 3, 1.0, 0.1, 0.5, 0.1}, 0.7, 100.0);
    const auto eig = diagonalize(s.h);
    for (QmeKind k : {QmeKind::Redfield, QmeKind::Davies, QmeKind::NRE, QmeKind::LocalDavies, QmeKind::LocalNRE})
        for (const auto& p : mode_populations(s.w(k, 3), eig)) {
            EXPECT_GE(p.population, -1e-8);
            EXPECT_LE(p.population, 1.0 + 1e-8);
        }
}

TEST(Gibbs, Examples) {
    const auto eig = diagonalize(build_chain_hamiltonian({5, 1, 1.0, 0.0, 0.0, 0.0}));
    for (const auto& p : gibbs_populations(eig, 0.0)) EXPECT_DOUBLE_EQ(p.population, 0.5);
    const auto g = gibbs_populations(eig, 2.0);
    EXPECT_NEAR(g[2].omega, 0.0, 1e-12); // odd chain has a zero mode
    EXPECT_NEAR(g[2].population, 0.5, 1e-12);
    for (std::size_t m = 1; m < g.size(); ++m) EXPECT_LE(g[m].population, g[m - 1].population);
}

TEST(Plateaus, Counting) {
    EXPECT_EQ(count_plateaus({}), 0);
    EXPECT_EQ(count_plateaus({0.1, 0.1, 0.1}), 1);
    EXPECT_EQ(count_plateaus({0.1, 0.1}), 0);
    EXPECT_EQ(count_plateaus({0.1, 0.1, 0.1, 0.5, 0.5, 0.5, 0.5, 0.9}), 2);
    EXPECT_EQ(count_plateaus({0.1, 0.2, 0.3, 0.4}), 0);
    EXPECT_EQ(count_plateaus({0.1, 0.1005, 0.101, 0.1015}, 1e-3, 4), 1);
}

} // namespace
} // namespace qme
