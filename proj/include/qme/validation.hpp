// validation.hpp — Oracle equivalence and invariant checks behind `qme validate`

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qme/builders.hpp"
#include "qme/experiments.hpp"
#include "qme/metrics.hpp"
#include "qme/oracle.hpp"
#include "qme/quadratic_solver.hpp"

namespace qme {

struct CheckResult {
    std::string name;
    double observed{0.0};
    double tolerance{0.0};
    bool passed{false};
    std::string detail;
};

struct ValidationOptions {
    // Multiplies every M before comparing with the dense reference. Anything other than 1
    // must make the equivalence checks fail; used as a negative control.
    double m_scale{1.0};
    double tau_b{0.7};
    double j_int{0.4};
};

struct ValidationCase {
    QmeKind kind;
    int radius;
    double beta_left, beta_right;
    bool include_eta;
};

inline std::vector<ValidationCase> validation_cases(int L) {
    std::vector<ValidationCase> out;
    for (double bl : {0.0, 0.5})
        for (double br : {0.0, 0.5}) {
            out.push_back({QmeKind::Redfield, L, bl, br, false});
            out.push_back({QmeKind::Davies, L, bl, br, false});
            out.push_back({QmeKind::NRE, L, bl, br, false});
            for (int r = 1; r <= L; ++r) {
                out.push_back({QmeKind::LocalDavies, r, bl, br, false});
                out.push_back({QmeKind::LocalNRE, r, bl, br, false});
            }
        }
    out.push_back({QmeKind::Redfield, L, 0.5, 0.1, true});
    return out;
}

inline std::string describe(const ValidationCase& c) {
    return to_string(c.kind) + " R=" + std::to_string(c.radius) + " beta=(" + format_double(c.beta_left) + "," +
           format_double(c.beta_right) + ")" + (c.include_eta ? " eta" : "");
}

inline CheckResult make_check(std::string name, double observed, double tol, std::string detail = {}) {
    return {std::move(name), observed, tol, observed <= tol, std::move(detail)};
}

// M-form vs defining-form dense superoperators, and solver W vs dense W, at L = 3.
inline std::vector<CheckResult> oracle_checks(const ValidationOptions& opt = {}) {
    const int L = 3;
    const oracle::FermionOperators f = oracle::jordan_wigner(L);
    double worst_equiv = 0.0, worst_w = 0.0;
    std::string where_equiv, where_w;
    for (const auto& c : validation_cases(L)) {
        ChainSpec chain{L, 1, 1.0, 0.0, c.beta_left, c.beta_right};
        const auto h = build_chain_hamiltonian(chain);
        const auto baths = make_chain_baths(chain, opt.tau_b, opt.j_int);
        const GeneratorM g = build_generator(c.kind, h, baths, c.radius, c.include_eta);
        const Eigen::MatrixXcd m = opt.m_scale * g.m;
        const auto H = oracle::many_body_hamiltonian(h, f);
        const auto ref = oracle::dense_reference_superoperator(c.kind, h, baths, c.radius, f, c.include_eta);
        const double e = (oracle::superoperator_from_m(H, m, f) - ref).norm() / ref.norm();
        if (e > worst_equiv) worst_equiv = e, where_equiv = describe(c);
        const auto wd = oracle::covariance_from_density(oracle::dense_steady_state(ref).rho, f);
        const double dw = (steady_state_covariance(hamiltonian_to_majorana(h), m) - wd).cwiseAbs().maxCoeff();
        if (dw > worst_w) worst_w = dw, where_w = describe(c);
    }
    return {make_check("M-form vs defining-form superoperator (L=3, all kinds)", worst_equiv, 1e-10, where_equiv),
            make_check("solver W vs dense W (L=3, all kinds)", worst_w, 1e-8, where_w)};
}

// |lambda_max| and the rapidity sum against the dense dissipator spectrum at L = 2.
inline std::vector<CheckResult> spectrum_checks(const ValidationOptions& opt = {}) {
    const int L = 2;
    const oracle::FermionOperators f = oracle::jordan_wigner(L);
    ChainSpec chain{L, 1, 1.0, 0.0, 0.5, 0.1};
    const auto h = build_chain_hamiltonian(chain);
    const auto baths = make_chain_baths(chain, opt.tau_b, opt.j_int);
    double worst_lambda = 0.0, worst_sum = 0.0;
    for (QmeKind k : {QmeKind::Redfield, QmeKind::Davies, QmeKind::NRE}) {
        const Eigen::MatrixXcd m = opt.m_scale * build_generator(k, h, baths, L).m;
        const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1 << L, 1 << L);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(oracle::superoperator_from_m(zero, m, f), false);
        const double dense = es.eigenvalues().cwiseAbs().maxCoeff();
        worst_lambda = std::max(worst_lambda, std::abs(dissipator_largest_eigenvalue(m) - dense) / dense);
        const Eigen::VectorXcd beta = rapidities(build_structure_matrix(Eigen::MatrixXcd::Zero(2 * L, 2 * L), m));
        worst_sum = std::max(worst_sum, std::abs(beta.sum() - kRapiditySumPerTrace * m.trace()) / std::abs(m.trace()));
    }
    return {make_check("|lambda_max| = 4|tr M| vs dense spectrum (L=2)", worst_lambda, 1e-8),
            make_check("sum of rapidities = 2 tr M (L=2)", worst_sum, 1e-8)};
}

inline CheckResult lindblad_normalization_check() {
    LindbladSet set;
    set.L = 1;
    set.operators.push_back({Eigen::VectorXcd::Unit(2, 0), 0, Channel::Annihilation, 0.0});
    const GeneratorM g = lindblad_to_m(set);
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
    expect(0, 0) = 0.5;
    return make_check("L = w_1 gives M_11 = 1/2", (g.m - expect).cwiseAbs().maxCoeff(), 1e-15);
}

// Zero violations of the Lieb-Robinson bound on a 5 x 4 (t, Omega) grid at L = 6.
inline CheckResult lieb_robinson_grid_check() {
    ChainSpec chain{6, 1, 1.0, 0.0, 0.0, 0.0};
    const oracle::FermionOperators f = oracle::jordan_wigner(chain.L);
    int violations = 0, total = 0;
    for (double t : {0.05, 0.1, 0.2, 0.3, 0.5})
        for (int last = 1; last <= 4; ++last) {
            std::vector<int> omega;
            for (int i = 0; i <= last; ++i) omega.push_back(i);
            const auto r = oracle::lieb_robinson_check(chain, {0}, omega, f.w[1], t);
            ++total;
            if (r.lhs > r.bound) ++violations;
        }
    return make_check("Lieb-Robinson bound violations (L=6, 20 points)", violations, 0.0,
                      std::to_string(total) + " points");
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
    std::vector<CheckResult> out;
    out.push_back(lindblad_normalization_check());
    for (auto& c : oracle_checks(opt)) out.push_back(std::move(c));
    for (auto& c : spectrum_checks(opt)) out.push_back(std::move(c));
    out.push_back(lieb_robinson_grid_check());

    // Negative control: doubling M must be caught by the equivalence check.
    ValidationOptions bad = opt;
    bad.m_scale = 2.0 * opt.m_scale;
    const CheckResult corrupted = oracle_checks(bad).front();
    out.push_back({"negative control: doubled M is detected", corrupted.observed, corrupted.tolerance, !corrupted.passed,
                   "equivalence residual with doubled M"});
    return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

inline void print_report(std::ostream& os, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << "  observed=" << format_double(c.observed)
           << " tol=" << format_double(c.tolerance);
        if (!c.detail.empty()) os << "  [" << c.detail << "]";
        os << '\n';
    }
}

} // namespace qme
