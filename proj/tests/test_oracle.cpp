// test_oracle.cpp — dense many-body reference and its agreement with the quadratic machinery

#include <cmath>

#include <gtest/gtest.h>

#include "qme/builders.hpp"
#include "qme/oracle.hpp"
#include "qme/quadratic_solver.hpp"
#include "qme/validation.hpp"

namespace qme {
namespace {

using oracle::DenseOperator;

const std::vector<QmeKind> kAllKinds{QmeKind::Redfield, QmeKind::Davies, QmeKind::NRE, QmeKind::LocalDavies,
                                     QmeKind::LocalNRE};

TEST(JordanWigner, SingleSite) {
    const auto f = oracle::jordan_wigner(1);
    DenseOperator a(2, 2);
    a << 0, 1, 0, 0;
    EXPECT_EQ(f.a[0], a);
}

TEST(JordanWigner, CanonicalRelations) {
    for (int L : {1, 2, 3, 4}) {
        const auto f = oracle::jordan_wigner(L);
        const auto d = f.a[0].rows();
        const DenseOperator id = DenseOperator::Identity(d, d);
        for (std::size_t m = 0; m < f.w.size(); ++m) {
            EXPECT_LT((f.w[m] - f.w[m].adjoint()).norm(), 1e-12);
            EXPECT_LT((f.w[m] * f.w[m] - id).norm(), 1e-12);
            for (std::size_t n = m + 1; n < f.w.size(); ++n) EXPECT_LT((f.w[m] * f.w[n] + f.w[n] * f.w[m]).norm(), 1e-12);
        }
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) {
                const DenseOperator car = f.a[i] * f.adag[j] + f.adag[j] * f.a[i];
                EXPECT_LT((car - (i == j ? id : DenseOperator::Zero(d, d))).norm(), 1e-12);
            }
    }
    EXPECT_THROW(oracle::jordan_wigner(7), ConfigError);
}

TEST(Superoperator, TrivialCases) {
    const auto f = oracle::jordan_wigner(2);
    const DenseOperator zero = DenseOperator::Zero(4, 4);
    EXPECT_EQ(oracle::superoperator_from_lindblad(zero, std::vector<DenseOperator>{}), Eigen::MatrixXcd::Zero(16, 16));
    const auto H = oracle::many_body_hamiltonian(build_chain_hamiltonian({2, 1, 1.0, 0.3, 0.0, 0.0}), f);
    EXPECT_LT((oracle::superoperator_from_m(H, Eigen::MatrixXcd::Zero(4, 4), f) - oracle::commutator_part(H)).norm(), 1e-15);
}

TEST(Superoperator, TracePreservingForAllKinds) {
    const int L = 3;
    const auto f = oracle::jordan_wigner(L);
    const ChainSpec chain{L, 1, 1.0, 0.1, 0.5, 0.1};
    const auto h = build_chain_hamiltonian(chain);
    const auto baths = make_chain_baths(chain, 0.6, 0.5);
    const Eigen::VectorXcd vec_id = Eigen::Map<const Eigen::VectorXcd>(DenseOperator::Identity(8, 8).eval().data(), 64);
    for (QmeKind k : kAllKinds) {
        const auto ref = oracle::dense_reference_superoperator(k, h, baths, 2, f);
        EXPECT_LT((vec_id.adjoint() * ref).norm(), 1e-10 * ref.norm()) << to_string(k);
        const auto mform = oracle::superoperator_from_m(oracle::many_body_hamiltonian(h, f), build_generator(k, h, baths, 2).m, f);
        EXPECT_LT((vec_id.adjoint() * mform).norm(), 1e-10 * mform.norm()) << to_string(k);
    }
}

TEST(FrequencyComponents, SumToOperator) {
    const int L = 3;
    const auto f = oracle::jordan_wigner(L);
    const auto H = oracle::many_body_hamiltonian(build_chain_hamiltonian({L, 1, 1.0, 0.2, 0.0, 0.0}), f);
    for (int j = 0; j < L; ++j) {
        DenseOperator sum = DenseOperator::Zero(8, 8);
        for (const auto& c : oracle::frequency_components(H, f.a[j])) {
            sum += c.op;
            EXPECT_LT((H * c.op - c.op * H + c.omega * c.op).norm(), 1e-12);
        }
        EXPECT_LT((sum - f.a[j]).norm(), 1e-12);
    }
}

TEST(DenseSteadyState, SingleSite) {
    const auto f = oracle::jordan_wigner(1);
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = 0.0;
    const std::vector<BathSite> hot{{0, {1.0, 0.0, 0.5, 0.0}}};
    const auto mixed = oracle::dense_steady_state(oracle::dense_reference_superoperator(QmeKind::Davies, h, hot, 1, f)).rho;
    EXPECT_LT((mixed - 0.5 * DenseOperator::Identity(2, 2)).norm(), 1e-12);

    h(0, 0) = 0.7;
    const BathSpec bath{0.4, 1.5, 0.5, 0.0};
    const std::vector<BathSite> cold{{0, bath}};
    const double g11 = power_spectrum(bath, Channel::Annihilation, 0.7);
    const double g22 = power_spectrum(bath, Channel::Creation, -0.7);
    for (QmeKind k : kAllKinds) {
        const auto rho = oracle::dense_steady_state(oracle::dense_reference_superoperator(k, h, cold, 1, f)).rho;
        EXPECT_NEAR((f.adag[0] * f.a[0] * rho).trace().real(), g22 / (g11 + g22), 1e-12) << to_string(k);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    }
}

TEST(DenseSteadyState, NoNullVectorIsRejected) {
    EXPECT_THROW(oracle::dense_steady_state(Eigen::MatrixXcd::Identity(4, 4)), NumericalError);
}

// M-form vs defining form and solver W vs dense W over every kind, radius and temperature pair.
class OracleEquivalence : public ::testing::TestWithParam<std::tuple<QmeKind, int, double, double>> {};

TEST_P(OracleEquivalence, MFormAndCovariance) {
    const auto [kind, radius, bl, br] = GetParam();
    const int L = 3;
    const auto f = oracle::jordan_wigner(L);
    const ChainSpec chain{L, 1, 1.0, 0.0, bl, br};
    const auto h = build_chain_hamiltonian(chain);
    const auto baths = make_chain_baths(chain, 0.7, 0.4);
    const auto g = build_generator(kind, h, baths, radius);
    const auto ref = oracle::dense_reference_superoperator(kind, h, baths, radius, f);
    const auto mform = oracle::superoperator_from_m(oracle::many_body_hamiltonian(h, f), g.m, f);
    EXPECT_LT((mform - ref).norm() / ref.norm(), 1e-10);
    const auto wd = oracle::covariance_from_density(oracle::dense_steady_state(ref).rho, f);
    EXPECT_LT((steady_state_covariance(hamiltonian_to_majorana(h), g) - wd).cwiseAbs().maxCoeff(), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, OracleEquivalence,
                         ::testing::Combine(::testing::ValuesIn(kAllKinds), ::testing::Values(1, 2, 3),
                                            ::testing::Values(0.0, 0.5), ::testing::Values(0.0, 0.5)));

TEST(OracleEquivalence, RedfieldWithPrincipalValueTerms) {
    const int L = 3;
    const auto f = oracle::jordan_wigner(L);
    const ChainSpec chain{L, 1, 1.0, 0.2, 0.5, 0.1};
    const auto h = build_chain_hamiltonian(chain);
    const auto baths = make_chain_baths(chain, 0.7, 0.4);
    const auto g = build_redfield_m(h, baths, true);
    const auto ref = oracle::dense_redfield_superoperator(h, baths, f, true);
    EXPECT_LT((oracle::superoperator_from_m(oracle::many_body_hamiltonian(h, f), g.m, f) - ref).norm() / ref.norm(), 1e-10);
}

TEST(LiebRobinson, ZeroTime) {
    const ChainSpec chain{5, 1, 1.0, 0.0, 0.0, 0.0};
    const auto f = oracle::jordan_wigner(5);
    const auto r = oracle::lieb_robinson_check(chain, {0}, {0, 1}, f.w[0], 0.0);
    EXPECT_NEAR(r.lhs, 0.0, 1e-14);
    EXPECT_LE(r.lhs, r.bound + 1e-14); // the bound is exactly zero
}

TEST(LiebRobinson, BoundArithmetic) {
    // |X| = 1, ||O|| = 1, zeta0 = 4, t = 0.1, l = 3: (2 * 4 * 0.1)^3 / 3! = 0.0853
    const ChainSpec chain{6, 1, 1.0, 0.0, 0.0, 0.0};
    const auto f = oracle::jordan_wigner(6);
    const auto r = oracle::lieb_robinson_check(chain, {0}, {0, 1, 2}, f.w[0], 0.1);
    EXPECT_EQ(r.distance, 3);
    EXPECT_NEAR(r.bound, std::pow(0.8, 3) / 6.0, 1e-14);
    EXPECT_LE(r.lhs, r.bound);
}

TEST(LiebRobinson, NoViolationsOnGrid) {
    const ChainSpec chain{6, 1, 1.0, 0.0, 0.0, 0.0};
    const auto f = oracle::jordan_wigner(6);
    for (double t : {0.01, 0.05, 0.1, 0.2, 0.4, 0.8})
        for (int last = 0; last <= 4; ++last) {
            std::vector<int> omega;
            for (int i = 0; i <= last; ++i) omega.push_back(i);
            for (const auto& O : {f.w[0], f.w[1], f.a[0]}) {
                const auto r = oracle::lieb_robinson_check(chain, {0}, omega, O, t);
                EXPECT_LE(r.lhs, r.bound) << "t=" << t << " last=" << last;
            }
        }
}

TEST(Validation, CleanRunPassesAndNegativeControlFires) {
    const auto checks = run_validation();
    EXPECT_TRUE(all_passed(checks));
    ValidationOptions bad;
    bad.m_scale = 2.0;
    EXPECT_FALSE(oracle_checks(bad).front().passed);
}

} // namespace
} // namespace qme
