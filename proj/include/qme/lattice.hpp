// lattice.hpp — Tight-binding chain, subsystem windows and single-particle diagonalization

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qme/error.hpp"

namespace qme {

using cplx = std::complex<double>;

// Sites are 0-based throughout the library.
struct ChainSpec {
    int L{2};               // number of sites
    int N{1};               // bath-coupled sites at each edge
    double J{1.0};          // hopping amplitude
    double omega0{0.0};     // on-site energy
    double beta_left{0.0};  // inverse temperature of the left baths
    double beta_right{0.0}; // inverse temperature of the right baths

    void validate() const {
        require(L >= 2, "ChainSpec: L must be >= 2, got " + std::to_string(L));
        require(N > 0 && 2 * N <= L, "ChainSpec: need 0 < N <= L/2, got N=" + std::to_string(N));
        require(J > 0.0, "ChainSpec: J must be positive");
        require(beta_left >= 0.0 && beta_right >= 0.0, "ChainSpec: inverse temperatures must be >= 0");
        require(std::isfinite(beta_left) && std::isfinite(beta_right),
                "ChainSpec: zero temperature is not supported");
    }
};

// h_{ij} in H = sum_ij h_ij a_i^dag a_j.
using SingleParticleMatrix = Eigen::MatrixXcd;

struct SubsystemWindow {
    int center{0};
    int radius{1};
    int first{0}; // inclusive
    int last{0};  // inclusive

    int size() const { return last - first + 1; }
    bool contains(int site) const { return site >= first && site <= last; }
    int local_index(int site) const { return site - first; }
    std::vector<int> sites() const {
        std::vector<int> s(static_cast<std::size_t>(size()));
        std::iota(s.begin(), s.end(), first);
        return s;
    }
};

// Rows of `modes` are eigenmodes: modes * h * modes^dag = diag(frequencies),
// d_m = sum_i modes(m,i) a_i.
struct EigenDecomposition {
    Eigen::VectorXd frequencies; // ascending
    Eigen::MatrixXcd modes;

    int dim() const { return static_cast<int>(frequencies.size()); }
};

inline SingleParticleMatrix build_chain_hamiltonian(const ChainSpec& spec) {
    spec.validate();
    SingleParticleMatrix h = SingleParticleMatrix::Zero(spec.L, spec.L);
    for (int i = 0; i < spec.L; ++i) h(i, i) = spec.omega0;
    for (int i = 0; i + 1 < spec.L; ++i) {
        h(i, i + 1) = -spec.J;
        h(i + 1, i) = -spec.J;
    }
    return h;
}

// Sites whose distance from `center` is shorter than `radius`, i.e. |i - center| <= radius - 1.
inline SubsystemWindow subsystem_window(int center, int radius, int L) {
    require(L >= 1, "subsystem_window: L must be positive");
    require(radius >= 1, "subsystem_window: radius must be >= 1, got " + std::to_string(radius));
    require(center >= 0 && center < L, "subsystem_window: center " + std::to_string(center) + " outside [0, L)");
    SubsystemWindow w;
    w.center = center;
    w.radius = radius;
    w.first = std::max(0, center - (radius - 1));
    w.last = std::min(L - 1, center + (radius - 1));
    return w;
}

// Principal submatrix on the window: bonds crossing the window boundary are dropped.
inline SingleParticleMatrix build_subsystem_hamiltonian(const SingleParticleMatrix& h, const SubsystemWindow& w) {
    require(w.first >= 0 && w.last < h.rows() && w.first <= w.last, "build_subsystem_hamiltonian: window outside lattice");
    return h.block(w.first, w.first, w.size(), w.size());
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.norm());
    return (m - m.adjoint()).norm() <= rel_tol * scale;
}

inline EigenDecomposition diagonalize(const SingleParticleMatrix& h) {
    require(is_hermitian(h, 1e-12), "diagonalize: input matrix is not Hermitian");
    const Eigen::Index n = h.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");

    Eigen::MatrixXcd rows = es.eigenvectors().adjoint();
    const Eigen::VectorXd& w = es.eigenvalues();

    // Fix the phase: largest-magnitude component (lowest site on ties) real positive.
    std::vector<Eigen::Index> peak(static_cast<std::size_t>(n), 0);
    for (Eigen::Index m = 0; m < n; ++m) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(rows(m, i));
            if (a > best + 1e-12) {
                best = a;
                arg = i;
            }
        }
        peak[static_cast<std::size_t>(m)] = arg;
        const cplx c = rows(m, arg);
        rows.row(m) *= std::conj(c) / std::abs(c);
    }

    // Within degenerate blocks order by the site of the peak component.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const double deg_tol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && w(stop) - w(stop - 1) < deg_tol) ++stop;
        std::stable_sort(order.begin() + start, order.begin() + stop,
                         [&](Eigen::Index a, Eigen::Index b) { return peak[static_cast<std::size_t>(a)] < peak[static_cast<std::size_t>(b)]; });
        start = stop;
    }

    EigenDecomposition out;
    out.frequencies.resize(n);
    out.modes.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.frequencies(k) = w(order[static_cast<std::size_t>(k)]);
        out.modes.row(k) = rows.row(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

// zeta_0 = max_p sum_{Z ∋ p} |Z| ||h_Z||; each site touches two bonds of norm J.
inline double lieb_robinson_velocity(const ChainSpec& spec) {
    require(spec.J >= 0.0, "lieb_robinson_velocity: J must be >= 0");
    return 4.0 * spec.J;
}

} // namespace qme
