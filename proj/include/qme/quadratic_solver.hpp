// quadratic_solver.hpp — Structure matrix, rapidities and steady-state covariance of quadratic Liouvillians
//
// Generator: d rho/dt = -i[H_S, rho] + sum_mn ( M_mn [w_m rho, w_n] + h.c. ), with
// H_S = sum_mn H_mn w_m w_n. The covariance W_ab = tr(w_a w_b rho) is I + Z with Z
// antisymmetric, and Z obeys
//   dZ/dt = X Z + Z X^T - 8i Im M,   X = -4i H - 4 Re M   (X is real).
// The steady state therefore solves the Lyapunov equation X Z + Z X^T = 8i Im M.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qme/builders.hpp"
#include "qme/error.hpp"
#include "qme/lattice.hpp"

namespace qme {

using StructureMatrixA = Eigen::MatrixXcd;
using CovarianceW = Eigen::MatrixXcd;

// |lambda_max| / |tr M|. The dissipator spectrum is {-2 sum_j v_j beta_j, v_j in {0,1}} and the
// rapidities obey sum_j beta_j = 2 tr M, so |lambda_max| = 2 sum beta = 4 |tr M|. Checked against
// the dense spectrum of D[rho] = w rho w - rho (M_11 = 1/2, eigenvalue -2).
inline constexpr double kLambdaMaxPerTrace = 4.0;
inline constexpr double kRapiditySumPerTrace = 2.0;

// H_maj with H_S = sum h_ij a_i^dag a_j = sum_mn H_mn w_m w_n + const; antisymmetric and Hermitian.
inline Eigen::MatrixXcd hamiltonian_to_majorana(const SingleParticleMatrix& h) {
    require(is_hermitian(h, 1e-12), "hamiltonian_to_majorana: h is not Hermitian");
    const Eigen::Index L = h.rows();
    const cplx I(0.0, 1.0);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = 0; j < L; ++j) {
            const cplx q = 0.25 * h(i, j);
            t(2 * i, 2 * j) = q;
            t(2 * i, 2 * j + 1) = -I * q;
            t(2 * i + 1, 2 * j) = I * q;
            t(2 * i + 1, 2 * j + 1) = q;
        }
    return 0.5 * (t - t.transpose());
}

inline void check_generator_inputs(const Eigen::MatrixXcd& hmaj, const Eigen::MatrixXcd& m, const char* who) {
    const std::string w(who);
    require(m.rows() == m.cols() && m.rows() % 2 == 0, w + ": M must be square with even dimension");
    require(hmaj.rows() == m.rows() && hmaj.cols() == m.cols(), w + ": H and M dimensions differ");
    require(is_hermitian(m, 1e-10), w + ": M is not Hermitian");
    require(is_hermitian(hmaj, 1e-10), w + ": H is not Hermitian");
    const double scale = std::max(1.0, hmaj.norm());
    require((hmaj + hmaj.transpose()).norm() <= 1e-10 * scale, w + ": H is not antisymmetric");
}

// Off-diagonal blocks of A. Full keeps M and M^T apart (A_{2m-1,2n} = 2i M_nm,
// A_{2m,2n-1} = -2i M_mn) and reproduces the dense Liouvillian spectrum for any Hermitian M.
// Symmetrized uses i (M_mn + M_nm) in both blocks; the two agree only when Im M = 0.
enum class CrossBlock { Full, Symmetrized };

// 4L x 4L antisymmetric matrix, 1-based formulas
//   A_{2m-1,2n-1} = -2i H_mn - M_mn + M_nm    A_{2m,2n} = -2i H_mn + M_mn - M_nm
// with the cross blocks chosen by `form`.
inline StructureMatrixA build_structure_matrix(const Eigen::MatrixXcd& hmaj, const Eigen::MatrixXcd& m,
                                               CrossBlock form = CrossBlock::Full) {
    check_generator_inputs(hmaj, m, "build_structure_matrix");
    const Eigen::Index n2 = m.rows();
    const cplx I(0.0, 1.0);
    StructureMatrixA a(2 * n2, 2 * n2);
    for (Eigen::Index p = 0; p < n2; ++p)
        for (Eigen::Index q = 0; q < n2; ++q) {
            const cplx h = hmaj(p, q), mpq = m(p, q), mqp = m(q, p);
            a(2 * p, 2 * q) = -2.0 * I * h - mpq + mqp;
            a(2 * p + 1, 2 * q + 1) = -2.0 * I * h + mpq - mqp;
            if (form == CrossBlock::Full) {
                a(2 * p, 2 * q + 1) = 2.0 * I * mqp;
                a(2 * p + 1, 2 * q) = -2.0 * I * mpq;
            } else {
                a(2 * p, 2 * q + 1) = I * (mqp + mpq);
                a(2 * p + 1, 2 * q) = -I * (mpq + mqp);
            }
        }
    return a;
}

inline StructureMatrixA build_structure_matrix(const Eigen::MatrixXcd& hmaj, const GeneratorM& g,
                                               CrossBlock form = CrossBlock::Full) {
    return build_structure_matrix(hmaj, g.m, form);
}

// Eigenvalues of A paired as (beta, -beta); returns the representative with Re >= 0
// (Im >= 0 on ties), sorted by real then imaginary part.
inline Eigen::VectorXcd rapidities(const StructureMatrixA& a, double pair_tol = 1e-8) {
    require(a.rows() == a.cols() && a.rows() % 2 == 0, "rapidities: A must be square with even dimension");
    const Eigen::Index n = a.rows();
    if (n == 0) return {};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    if (es.info() != Eigen::Success) throw NumericalError("rapidities: eigensolver failed");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    const double scale = std::max(1.0, std::abs(ev.front()));

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n / 2));
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::size_t best = ev.size();
        double dist = INFINITY;
        for (std::size_t j = 0; j < ev.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(ev[i] + ev[j]);
            if (d < dist) {
                dist = d;
                best = j;
            }
        }
        if (best == ev.size() || dist > pair_tol * scale)
            throw NumericalError("rapidities: eigenvalue " + std::to_string(ev[i].real()) + "+" +
                                 std::to_string(ev[i].imag()) + "i has no partner (gap " + std::to_string(dist) + ")");
        used[best] = true;
        cplx b = 0.5 * (ev[i] - ev[best]);
        if (b.real() < 0.0 || (b.real() == 0.0 && b.imag() < 0.0)) b = -b;
        out.push_back(b);
    }
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

// |lambda_max| of the dissipator, kLambdaMaxPerTrace * |tr M|.
inline double dissipator_largest_eigenvalue(const Eigen::MatrixXcd& m) {
    require(m.rows() == m.cols(), "dissipator_largest_eigenvalue: M must be square");
    return kLambdaMaxPerTrace * std::abs(m.trace());
}

inline double dissipator_largest_eigenvalue(const GeneratorM& g) { return dissipator_largest_eigenvalue(g.m); }

struct LyapunovSystem {
    Eigen::MatrixXd x; // real drift
    Eigen::MatrixXcd c; // right-hand side, X Z + Z X^T = C
};

inline LyapunovSystem covariance_lyapunov_system(const Eigen::MatrixXcd& hmaj, const Eigen::MatrixXcd& m) {
    check_generator_inputs(hmaj, m, "covariance_lyapunov_system");
    const cplx I(0.0, 1.0);
    const Eigen::MatrixXcd xc = -4.0 * I * hmaj - 4.0 * m.real().cast<cplx>();
    LyapunovSystem s;
    s.x = xc.real();
    s.c = (8.0 * I) * m.imag().cast<cplx>();
    return s;
}

// ||X Z + Z X^T - C|| for Z = W - I.
inline double stationarity_residual(const Eigen::MatrixXcd& hmaj, const Eigen::MatrixXcd& m, const CovarianceW& w) {
    const LyapunovSystem s = covariance_lyapunov_system(hmaj, m);
    const Eigen::MatrixXcd z = w - Eigen::MatrixXcd::Identity(w.rows(), w.cols());
    const Eigen::MatrixXcd x = s.x.cast<cplx>();
    return (x * z + z * x.transpose() - s.c).norm();
}

namespace detail {

// Solves X Z + Z X^T = C through the complex Schur form X = Q T Q^dag.
inline Eigen::MatrixXcd lyapunov_schur(const Eigen::ComplexSchur<Eigen::MatrixXcd>& schur, const Eigen::MatrixXcd& c) {
    const Eigen::MatrixXcd& q = schur.matrixU();
    const Eigen::MatrixXcd& t = schur.matrixT();
    const Eigen::Index n = t.rows();
    Eigen::MatrixXcd chat = q.adjoint() * c * q.conjugate();
    Eigen::MatrixXcd zhat = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = chat.col(k);
        if (k + 1 < n) rhs.noalias() -= zhat.rightCols(n - k - 1) * t.row(k).tail(n - k - 1).transpose();
        Eigen::MatrixXcd tk = t;
        tk.diagonal().array() += t(k, k);
        zhat.col(k) = tk.triangularView<Eigen::Upper>().solve(rhs);
    }
    return q * zhat * q.transpose();
}

inline Eigen::MatrixXcd lyapunov_dense(const Eigen::MatrixXd& x, const Eigen::MatrixXcd& c) {
    const Eigen::Index n = x.rows();
    // vec(X Z + Z X^T) = (I (x) X + X (x) I) vec(Z), column-major
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) {
            if (j == l) op.block(j * n, l * n, n, n) += x.cast<cplx>();
            op.block(j * n, l * n, n, n).diagonal().array() += x(j, l);
        }
    Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(c.data(), n * n);
    Eigen::VectorXcd z = op.partialPivLu().solve(rhs);
    return Eigen::Map<Eigen::MatrixXcd>(z.data(), n, n);
}

} // namespace detail

// Rapidities from the 2L x 2L drift matrix: beta = -eig(X) / 2, which is the spectrum of the
// full-cross-block structure matrix at a quarter of the size.
inline Eigen::VectorXcd rapidities_from_drift(const Eigen::MatrixXcd& hmaj, const Eigen::MatrixXcd& m) {
    const LyapunovSystem s = covariance_lyapunov_system(hmaj, m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(s.x, false);
    if (es.info() != Eigen::Success) throw NumericalError("rapidities_from_drift: eigensolver failed");
    std::vector<cplx> out(static_cast<std::size_t>(s.x.rows()));
    for (Eigen::Index i = 0; i < s.x.rows(); ++i) out[static_cast<std::size_t>(i)] = -0.5 * es.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

enum class LyapunovMethod { Schur, Dense };

inline CovarianceW steady_state_covariance(const Eigen::MatrixXcd& hmaj, const Eigen::MatrixXcd& m,
                                           LyapunovMethod method = LyapunovMethod::Schur) {
    const LyapunovSystem s = covariance_lyapunov_system(hmaj, m);
    const Eigen::Index n = s.x.rows();
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(s.x.cast<cplx>());
    if (schur.info() != Eigen::Success) throw NumericalError("steady_state_covariance: Schur decomposition failed");
    const Eigen::VectorXcd eig = schur.matrixT().diagonal();
    double max_re = -INFINITY;
    for (Eigen::Index i = 0; i < n; ++i) max_re = std::max(max_re, eig(i).real());
    if (max_re > -1e-12)
        throw NumericalError("steady_state_covariance: dynamics not relaxing, max Re eig(X) = " + std::to_string(max_re));

    Eigen::MatrixXcd z;
    if (method == LyapunovMethod::Dense) {
        require(n <= 16, "steady_state_covariance: dense Lyapunov solve limited to L <= 8");
        z = detail::lyapunov_dense(s.x, s.c);
    } else {
        z = detail::lyapunov_schur(schur, s.c);
    }
    z = 0.5 * (z - z.transpose()).eval();
    return Eigen::MatrixXcd::Identity(n, n) + z;
}

inline CovarianceW steady_state_covariance(const Eigen::MatrixXcd& hmaj, const GeneratorM& g,
                                           LyapunovMethod method = LyapunovMethod::Schur) {
    return steady_state_covariance(hmaj, g.m, method);
}

} // namespace qme
