// oracle.hpp — Dense brute-force reference: Jordan-Wigner operators, superoperators, steady states
//
// Density matrices are vectorised column-major, vec(A rho B) = (B^T (x) A) vec(rho).
// Fock basis: bit (L-1-j) of the basis index is the occupation of site j, site 0 is the
// leftmost tensor factor.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qme/bath.hpp"
#include "qme/builders.hpp"
#include "qme/error.hpp"
#include "qme/lattice.hpp"

namespace qme::oracle {

using DenseOperator = Eigen::MatrixXcd;
using DenseSuperoperator = Eigen::MatrixXcd;

struct FermionOperators {
    int L{0};
    std::vector<DenseOperator> a;    // a_j
    std::vector<DenseOperator> adag; // a_j^dag
    std::vector<DenseOperator> w;    // w_{2j} = a + a^dag, w_{2j+1} = i (a - a^dag)
};

inline DenseOperator kron(const DenseOperator& x, const DenseOperator& y) {
    DenseOperator out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

inline FermionOperators jordan_wigner(int L) {
    require(L >= 1 && L <= 6, "jordan_wigner: need 1 <= L <= 6, got " + std::to_string(L));
    DenseOperator lower(2, 2), parity(2, 2), id = DenseOperator::Identity(2, 2);
    lower << 0, 1, 0, 0;
    parity << 1, 0, 0, -1;
    FermionOperators f;
    f.L = L;
    const cplx I(0.0, 1.0);
    for (int j = 0; j < L; ++j) {
        DenseOperator op = DenseOperator::Identity(1, 1);
        for (int k = 0; k < L; ++k) op = kron(op, k < j ? parity : (k == j ? lower : id));
        f.a.push_back(op);
        f.adag.push_back(op.adjoint());
        f.w.push_back(op + op.adjoint());
        f.w.push_back(I * (op - op.adjoint()));
    }
    return f;
}

inline DenseOperator many_body_hamiltonian(const SingleParticleMatrix& h, const FermionOperators& f) {
    require(h.rows() == f.L, "many_body_hamiltonian: size mismatch");
    const Eigen::Index d = f.a.front().rows();
    DenseOperator H = DenseOperator::Zero(d, d);
    for (int i = 0; i < f.L; ++i)
        for (int j = 0; j < f.L; ++j)
            if (h(i, j) != cplx(0.0)) H += h(i, j) * f.adag[i] * f.a[j];
    return H;
}

inline DenseOperator majorana_linear(const Eigen::VectorXcd& coeffs, const FermionOperators& f) {
    require(coeffs.size() == 2 * f.L, "majorana_linear: coefficient length mismatch");
    DenseOperator op = DenseOperator::Zero(f.w.front().rows(), f.w.front().cols());
    for (Eigen::Index m = 0; m < coeffs.size(); ++m) op += coeffs(m) * f.w[static_cast<std::size_t>(m)];
    return op;
}

// vec(A rho B)
inline DenseSuperoperator sandwich(const DenseOperator& a, const DenseOperator& b) { return kron(b.transpose(), a); }

inline DenseSuperoperator commutator_part(const DenseOperator& H) {
    const DenseOperator id = DenseOperator::Identity(H.rows(), H.cols());
    const cplx I(0.0, 1.0);
    return -I * (sandwich(H, id) - sandwich(id, H));
}

// L rho L^dag - {L^dag L, rho}/2
inline DenseSuperoperator dissipator(const DenseOperator& op) {
    const DenseOperator id = DenseOperator::Identity(op.rows(), op.cols());
    const DenseOperator ldl = op.adjoint() * op;
    return sandwich(op, op.adjoint()) - 0.5 * (sandwich(ldl, id) + sandwich(id, ldl));
}

inline DenseSuperoperator superoperator_from_lindblad(const DenseOperator& H, const std::vector<DenseOperator>& ops) {
    DenseSuperoperator s = commutator_part(H);
    for (const auto& op : ops) {
        require(op.rows() == H.rows(), "superoperator_from_lindblad: dimension mismatch");
        s += dissipator(op);
    }
    return s;
}

inline DenseSuperoperator superoperator_from_lindblad(const DenseOperator& H, const LindbladSet& set,
                                                      const FermionOperators& f) {
    require(set.L == f.L, "superoperator_from_lindblad: L mismatch");
    require(f.L <= 4, "superoperator_from_lindblad: L <= 4 only");
    std::vector<DenseOperator> ops;
    for (const auto& op : set.operators) ops.push_back(majorana_linear(op.coeffs, f));
    return superoperator_from_lindblad(H, ops);
}

// sum_mn M_mn (w_m rho w_n - w_n w_m rho) + conj(M_mn) (w_n rho w_m - rho w_m w_n)
inline DenseSuperoperator superoperator_from_m(const DenseOperator& H, const Eigen::MatrixXcd& m,
                                               const FermionOperators& f) {
    require(m.rows() == 2 * f.L && m.cols() == 2 * f.L, "superoperator_from_m: M has wrong dimension");
    require(f.L <= 4, "superoperator_from_m: L <= 4 only");
    const DenseOperator id = DenseOperator::Identity(H.rows(), H.cols());
    DenseSuperoperator s = commutator_part(H);
    for (Eigen::Index p = 0; p < m.rows(); ++p)
        for (Eigen::Index q = 0; q < m.cols(); ++q) {
            const cplx c = m(p, q);
            if (c == cplx(0.0)) continue;
            const auto& wp = f.w[static_cast<std::size_t>(p)];
            const auto& wq = f.w[static_cast<std::size_t>(q)];
            s += c * (sandwich(wp, wq) - sandwich(wq * wp, id));
            s += std::conj(c) * (sandwich(wq, wp) - sandwich(id, wp * wq));
        }
    return s;
}

// --- Many-body frequency decomposition -----------------------------------------------------

struct DenseComponent {
    double omega{0.0};
    DenseOperator op;
};

// A = sum_omega A(omega), A(omega) = sum_{E_n - E_m = omega} |m><m|A|n><n| for the eigenbasis of H.
inline std::vector<DenseComponent> frequency_components(const DenseOperator& H, const DenseOperator& A, double tol = 1e-8) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("frequency_components: eigensolver failed");
    const DenseOperator& v = es.eigenvectors();
    const Eigen::VectorXd& e = es.eigenvalues();
    const DenseOperator a = v.adjoint() * A * v;
    const Eigen::Index d = H.rows();
    struct Entry {
        double omega;
        Eigen::Index m, n;
    };
    std::vector<Entry> entries;
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n)
            if (std::abs(a(m, n)) > 1e-14) entries.push_back({e(n) - e(m), m, n});
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.omega < y.omega; });
    std::vector<DenseComponent> out;
    std::vector<int> counts;
    double last = -std::numeric_limits<double>::infinity();
    for (const auto& en : entries) {
        if (out.empty() || en.omega - last >= tol) {
            out.push_back({0.0, DenseOperator::Zero(d, d)});
            counts.push_back(0);
        }
        out.back().op(en.m, en.n) += a(en.m, en.n);
        out.back().omega += en.omega;
        ++counts.back();
        last = en.omega;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].omega /= counts[k];
        out[k].op = v * out[k].op * v.adjoint();
    }
    return out;
}

struct DenseBath {
    int site{0};
    BathSpec bath;
};

inline std::vector<DenseBath> to_dense_baths(const std::vector<BathSite>& baths) {
    std::vector<DenseBath> out;
    for (const auto& b : baths) out.push_back({b.site, b.bath});
    return out;
}

// Hamiltonian seen by the coupling at `site`: the window Hamiltonian on the full Fock space.
inline DenseOperator window_hamiltonian(const SingleParticleMatrix& h, int site, int radius, const FermionOperators& f) {
    const SubsystemWindow win = subsystem_window(site, radius, f.L);
    SingleParticleMatrix hw = SingleParticleMatrix::Zero(f.L, f.L);
    hw.block(win.first, win.first, win.size(), win.size()) = build_subsystem_hamiltonian(h, win);
    return many_body_hamiltonian(hw, f);
}

// Lindblad operators of Davies / NRE kinds from the many-body decomposition.
inline std::vector<DenseOperator> dense_lindblad_operators(QmeKind kind, const SingleParticleMatrix& h,
                                                           const std::vector<BathSite>& baths, int radius,
                                                           const FermionOperators& f) {
    require(kind != QmeKind::Redfield, "dense_lindblad_operators: Redfield has no Lindblad form");
    if (!is_local(kind)) radius = f.L;
    std::vector<DenseOperator> ops;
    for (const auto& b : baths) {
        const DenseOperator Hw = window_hamiltonian(h, b.site, radius, f);
        for (Channel ch : {Channel::Annihilation, Channel::Creation}) {
            const DenseOperator& A = ch == Channel::Annihilation ? f.a[b.site] : f.adag[b.site];
            const auto comps = frequency_components(Hw, A);
            if (is_davies_like(kind)) {
                for (const auto& c : comps) ops.push_back(std::sqrt(power_spectrum(b.bath, ch, c.omega)) * c.op);
            } else {
                DenseOperator op = DenseOperator::Zero(A.rows(), A.cols());
                for (const auto& c : comps) op += std::sqrt(power_spectrum(b.bath, ch, c.omega)) * c.op;
                ops.push_back(op);
            }
        }
    }
    return ops;
}

// Redfield dissipator from the frequency-pair sum
//   sum_{w,w'} c(w,w') ( A(w) rho A(w')^dag - {A(w')^dag A(w), rho}/2 ),
//   c(w,w') = (g(w) + g(w'))/2 + i (eta(w) - eta(w')).
inline DenseSuperoperator dense_redfield_superoperator(const SingleParticleMatrix& h, const std::vector<BathSite>& baths,
                                                       const FermionOperators& f, bool include_eta = false) {
    require(f.L <= 4, "dense_redfield_superoperator: L <= 4 only");
    const DenseOperator H = many_body_hamiltonian(h, f);
    const DenseOperator id = DenseOperator::Identity(H.rows(), H.cols());
    DenseSuperoperator s = commutator_part(H);
    const cplx I(0.0, 1.0);
    for (const auto& b : baths)
        for (Channel ch : {Channel::Annihilation, Channel::Creation}) {
            const DenseOperator& A = ch == Channel::Annihilation ? f.a[b.site] : f.adag[b.site];
            const auto comps = frequency_components(H, A);
            std::vector<double> g, eta;
            for (const auto& c : comps) {
                g.push_back(power_spectrum(b.bath, ch, c.omega));
                eta.push_back(include_eta ? bath_eta(b.bath, ch, c.omega) : 0.0);
            }
            for (std::size_t x = 0; x < comps.size(); ++x)
                for (std::size_t y = 0; y < comps.size(); ++y) {
                    const cplx c = 0.5 * (g[x] + g[y]) + I * (eta[x] - eta[y]);
                    const DenseOperator& ax = comps[x].op;
                    const DenseOperator ayd = comps[y].op.adjoint();
                    const DenseOperator prod = ayd * ax;
                    s += c * (sandwich(ax, ayd) - 0.5 * (sandwich(prod, id) + sandwich(id, prod)));
                }
        }
    return s;
}

// Defining-form superoperator for any kind (H_S included).
inline DenseSuperoperator dense_reference_superoperator(QmeKind kind, const SingleParticleMatrix& h,
                                                        const std::vector<BathSite>& baths, int radius,
                                                        const FermionOperators& f, bool include_eta = false) {
    if (kind == QmeKind::Redfield) return dense_redfield_superoperator(h, baths, f, include_eta);
    return superoperator_from_lindblad(many_body_hamiltonian(h, f), dense_lindblad_operators(kind, h, baths, radius, f));
}

struct DenseSteadyState {
    DenseOperator rho;
    double null_gap{0.0}; // second-smallest singular value / largest
};

inline DenseSteadyState dense_steady_state(const DenseSuperoperator& gen) {
    const Eigen::Index n = gen.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    require(d * d == n, "dense_steady_state: superoperator dimension is not a square");
    Eigen::JacobiSVD<DenseSuperoperator> svd(gen, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = std::max(sv(0), 1e-300);
    DenseSteadyState out;
    out.null_gap = n > 1 ? sv(n - 2) / smax : 1.0;
    if (sv(n - 1) > 1e-8 * smax) throw NumericalError("dense_steady_state: generator has no null vector");
    if (out.null_gap < 1e-10) throw NumericalError("dense_steady_state: degenerate null space");
    Eigen::VectorXcd v = svd.matrixV().col(n - 1);
    DenseOperator rho = Eigen::Map<DenseOperator>(v.data(), d, d);
    rho /= rho.trace();
    out.rho = 0.5 * (rho + rho.adjoint());
    return out;
}

inline Eigen::MatrixXcd covariance_from_density(const DenseOperator& rho, const FermionOperators& f) {
    const Eigen::Index n = static_cast<Eigen::Index>(f.w.size());
    Eigen::MatrixXcd w(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q)
            w(p, q) = (f.w[static_cast<std::size_t>(p)] * f.w[static_cast<std::size_t>(q)] * rho).trace();
    return w;
}

// --- Lieb-Robinson bound ---------------------------------------------------------------------

struct LiebRobinsonResult {
    double lhs{0.0};
    double bound{0.0};
    int distance{0};
};

inline DenseOperator evolve_heisenberg(const DenseOperator& H, const DenseOperator& O, double t) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
    const cplx I(0.0, 1.0);
    const Eigen::VectorXcd ph = (I * t * es.eigenvalues().cast<cplx>()).array().exp();
    const DenseOperator U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint(); // e^{iHt}
    return U * O * U.adjoint();
}

inline double spectral_norm(const DenseOperator& x) {
    Eigen::JacobiSVD<DenseOperator> svd(x);
    return svd.singularValues()(0);
}

// lhs = || O(t) - O_Omega(t) ||, bound = |X| ||O|| (2 zeta0 |t|)^l / l!, l = dist(X, complement of Omega).
inline LiebRobinsonResult lieb_robinson_check(const ChainSpec& spec, const std::vector<int>& X, const std::vector<int>& omega,
                                              const DenseOperator& O, double t) {
    spec.validate();
    require(spec.L <= 6, "lieb_robinson_check: L <= 6 only");
    require(!X.empty(), "lieb_robinson_check: X is empty");
    for (int x : X) require(std::find(omega.begin(), omega.end(), x) != omega.end(), "lieb_robinson_check: X not inside Omega");
    const FermionOperators f = jordan_wigner(spec.L);
    const SingleParticleMatrix h = build_chain_hamiltonian(spec);
    SingleParticleMatrix hw = SingleParticleMatrix::Zero(spec.L, spec.L);
    for (int i : omega)
        for (int j : omega) hw(i, j) = h(i, j);
    const DenseOperator H = many_body_hamiltonian(h, f), Hw = many_body_hamiltonian(hw, f);

    LiebRobinsonResult r;
    r.lhs = spectral_norm(evolve_heisenberg(H, O, t) - evolve_heisenberg(Hw, O, t));
    r.distance = std::numeric_limits<int>::max();
    for (int y = 0; y < spec.L; ++y) {
        if (std::find(omega.begin(), omega.end(), y) != omega.end()) continue;
        for (int x : X) r.distance = std::min(r.distance, std::abs(x - y));
    }
    if (r.distance == std::numeric_limits<int>::max()) {
        r.bound = 0.0;
        return r;
    }
    const double z = 2.0 * lieb_robinson_velocity(spec) * std::abs(t);
    r.bound = static_cast<double>(X.size()) * spectral_norm(O) * std::pow(z, r.distance) / std::tgamma(r.distance + 1.0);
    return r;
}

} // namespace qme::oracle
