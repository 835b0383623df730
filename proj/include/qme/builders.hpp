// builders.hpp — Redfield, Davies and Nathan-Rudner generators for the boundary-driven chain
//
// Every generator is reduced to the Hermitian matrix M of
//   D[rho] = sum_{mn} ( M_mn [w_m rho, w_n] + h.c. ),
// which equals sum_{mn} 2 M_mn ( w_m rho w_n - {w_n w_m, rho}/2 ). A Lindblad operator
// L = sum_m l_m w_m therefore contributes M += l l^dag / 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qme/bath.hpp"
#include "qme/error.hpp"
#include "qme/lattice.hpp"
#include "qme/majorana.hpp"

namespace qme {

enum class QmeKind { Redfield, Davies, NRE, LocalDavies, LocalNRE };

inline std::string to_string(QmeKind k) {
    switch (k) {
    case QmeKind::Redfield: return "redfield";
    case QmeKind::Davies: return "davies";
    case QmeKind::NRE: return "nre";
    case QmeKind::LocalDavies: return "local-davies";
    case QmeKind::LocalNRE: return "local-nre";
    }
    return "unknown";
}

inline QmeKind parse_kind(const std::string& s) {
    static const std::map<std::string, QmeKind> names{
        {"redfield", QmeKind::Redfield}, {"davies", QmeKind::Davies}, {"nre", QmeKind::NRE},
        {"local-davies", QmeKind::LocalDavies}, {"local_davies", QmeKind::LocalDavies},
        {"local-nre", QmeKind::LocalNRE}, {"local_nre", QmeKind::LocalNRE}};
    auto it = names.find(s);
    if (it == names.end()) throw ConfigError("unknown QME kind '" + s + "'");
    return it->second;
}

inline bool is_local(QmeKind k) { return k == QmeKind::LocalDavies || k == QmeKind::LocalNRE; }
inline bool is_davies_like(QmeKind k) { return k == QmeKind::Davies || k == QmeKind::LocalDavies; }

// One term of A = sum_omega A(omega), as Majorana coefficients.
struct FrequencyComponent {
    double omega{0.0};
    Eigen::VectorXcd coeffs;
};

struct LindbladOperator {
    Eigen::VectorXcd coeffs;
    int site{0};
    Channel channel{Channel::Annihilation};
    double omega{std::numeric_limits<double>::quiet_NaN()}; // frequency bin (Davies kinds only)
};

struct LindbladSet {
    int L{0};
    std::vector<LindbladOperator> operators;
};

struct GeneratorM {
    Eigen::MatrixXcd m;
    QmeKind kind{QmeKind::Redfield};
    int radius{0};
    bool include_eta{false};

    int L() const { return static_cast<int>(m.rows() / 2); }
};

struct BathSite {
    int site{0};
    BathSpec bath;
};

// Left edge sites 0..N-1 at beta_left, right edge sites L-N..L-1 at beta_right.
inline std::vector<BathSite> make_chain_baths(const ChainSpec& chain, double tau_b, double j_int) {
    chain.validate();
    std::vector<BathSite> out;
    for (int j = 0; j < chain.N; ++j) out.push_back({j, {tau_b, chain.beta_left, j_int, chain.omega0}});
    for (int j = chain.L - chain.N; j < chain.L; ++j) out.push_back({j, {tau_b, chain.beta_right, j_int, chain.omega0}});
    return out;
}

inline double default_frequency_tolerance(const SingleParticleMatrix& h) {
    double hop = 0.0;
    for (Eigen::Index i = 0; i + 1 < h.rows(); ++i) hop = std::max(hop, std::abs(h(i, i + 1)));
    return 1e-9 * (hop > 0.0 ? hop : 1.0);
}

// Frequency components of a_site (channel 1) or a_site^dag (channel 2) with respect to the
// window Hamiltonian whose decomposition is `eig`. Components are sorted by frequency.
inline std::vector<FrequencyComponent> decompose_coupling(Channel channel, int site, const EigenDecomposition& eig,
                                                          const SubsystemWindow& window, int L) {
    require(window.contains(site), "decompose_coupling: site " + std::to_string(site) + " outside window");
    require(eig.dim() == window.size(), "decompose_coupling: decomposition does not match window size");
    require(window.last < L, "decompose_coupling: window exceeds lattice");
    const int jl = window.local_index(site);
    std::vector<FrequencyComponent> out;
    out.reserve(static_cast<std::size_t>(eig.dim()));
    for (int m = 0; m < eig.dim(); ++m) {
        const Eigen::VectorXcd row = eig.modes.row(m).transpose();
        FrequencyComponent c;
        if (channel == Channel::Annihilation) {
            // a_j = sum_m conj(O_mj) d_m, d_m = sum_i O_mi a_i
            c.omega = eig.frequencies(m);
            c.coeffs = std::conj(eig.modes(m, jl)) * annihilator_combination(row, window.first, L);
        } else {
            // a_j^dag = sum_m O_mj d_m^dag, at frequency -omega_m
            c.omega = -eig.frequencies(m);
            c.coeffs = eig.modes(m, jl) * creator_combination(row.conjugate(), window.first, L);
        }
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });
    return out;
}

// Merge components whose frequencies differ by less than `tol` (chained); coefficients add.
inline std::vector<FrequencyComponent> group_frequencies(std::vector<FrequencyComponent> comps, double tol) {
    std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });
    std::vector<FrequencyComponent> bins;
    std::vector<int> counts;
    double last = -std::numeric_limits<double>::infinity();
    for (auto& c : comps) {
        if (!bins.empty() && c.omega - last < tol) {
            bins.back().coeffs += c.coeffs;
            bins.back().omega += c.omega;
            ++counts.back();
        } else {
            bins.push_back(c);
            counts.push_back(1);
        }
        last = c.omega;
    }
    for (std::size_t b = 0; b < bins.size(); ++b) bins[b].omega /= counts[b];
    return bins;
}

inline GeneratorM lindblad_to_m(const LindbladSet& set, QmeKind kind = QmeKind::Davies, int radius = 0) {
    GeneratorM g;
    g.m = Eigen::MatrixXcd::Zero(2 * set.L, 2 * set.L);
    for (const auto& op : set.operators) {
        require(op.coeffs.size() == 2 * set.L, "lindblad_to_m: operator has wrong length");
        require(op.coeffs.allFinite(), "lindblad_to_m: operator has non-finite coefficients");
        g.m.noalias() += 0.5 * op.coeffs * op.coeffs.adjoint();
    }
    g.kind = kind;
    g.radius = radius == 0 ? set.L : radius;
    return g;
}

namespace detail {

inline Eigen::VectorXcd coupling_coeffs(Channel channel, int site, int L) {
    return channel == Channel::Annihilation ? annihilator_coeffs(site, L) : creator_coeffs(site, L);
}

} // namespace detail

// Redfield dissipator (Lamb-shift Hamiltonian omitted). With x_w = A(w) and coefficients
// c(w, w') = (g(w) + g(w'))/2 + i (eta(w) - eta(w')), the double frequency sum
//   K = sum_{w,w'} c(w, w') x_w x_{w'}^dag
// collapses to rank-4 form using sum_w x_w = A:
//   K = [(X g) A^dag + A (X g)^dag] / 2 + i [(X eta) A^dag - A (X eta)^dag].
inline GeneratorM build_redfield_m(const SingleParticleMatrix& h, const std::vector<BathSite>& baths,
                                   bool include_eta = false) {
    const int L = static_cast<int>(h.rows());
    const EigenDecomposition eig = diagonalize(h);
    const SubsystemWindow full = subsystem_window(0, L, L);
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
    // Edge baths share parameters, so each principal-value integral is evaluated once.
    std::map<std::tuple<double, double, double, double, int, double>, double> eta_cache;
    auto eta = [&](const BathSpec& b, Channel ch, double w) {
        const auto key = std::make_tuple(b.tau_b, b.beta, b.j_int, b.omega_peak, static_cast<int>(ch), w);
        auto it = eta_cache.find(key);
        if (it == eta_cache.end()) it = eta_cache.emplace(key, bath_eta(b, ch, w)).first;
        return it->second;
    };
    for (const auto& bs : baths) {
        bs.bath.validate();
        require(bs.site >= 0 && bs.site < L, "build_redfield_m: bath site outside lattice");
        for (Channel ch : {Channel::Annihilation, Channel::Creation}) {
            const auto comps = decompose_coupling(ch, bs.site, eig, full, L);
            const Eigen::VectorXcd a = detail::coupling_coeffs(ch, bs.site, L);
            Eigen::VectorXcd xg = Eigen::VectorXcd::Zero(2 * L);
            Eigen::VectorXcd xe = Eigen::VectorXcd::Zero(2 * L);
            for (const auto& c : comps) {
                xg += power_spectrum(bs.bath, ch, c.omega) * c.coeffs;
                if (include_eta) xe += eta(bs.bath, ch, c.omega) * c.coeffs;
            }
            k.noalias() += 0.5 * (xg * a.adjoint() + a * xg.adjoint());
            if (include_eta) k.noalias() += cplx(0.0, 1.0) * (xe * a.adjoint() - a * xe.adjoint());
        }
    }
    GeneratorM g;
    g.m = 0.5 * k;
    g.kind = QmeKind::Redfield;
    g.radius = L;
    g.include_eta = include_eta;
    return g;
}

// Lindblad operators of the Davies / NRE family. Global kinds use the full lattice as window.
inline LindbladSet build_lindblad_set(QmeKind kind, const SingleParticleMatrix& h, const std::vector<BathSite>& baths,
                                      int radius, double freq_tol = -1.0) {
    require(kind != QmeKind::Redfield, "build_lindblad_set: the Redfield equation has no Lindblad form");
    const int L = static_cast<int>(h.rows());
    if (!is_local(kind)) radius = L;
    require(radius >= 1, "build_lindblad_set: radius must be >= 1");
    require(radius <= L, "build_lindblad_set: radius " + std::to_string(radius) + " exceeds L=" + std::to_string(L));
    if (freq_tol < 0.0) freq_tol = default_frequency_tolerance(h);

    LindbladSet set;
    set.L = L;
    std::map<std::pair<int, int>, EigenDecomposition> cache; // (first, last) -> window decomposition
    for (const auto& bs : baths) {
        bs.bath.validate();
        require(bs.site >= 0 && bs.site < L, "build_lindblad_set: bath site outside lattice");
        const SubsystemWindow win = subsystem_window(bs.site, radius, L);
        auto key = std::make_pair(win.first, win.last);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, diagonalize(build_subsystem_hamiltonian(h, win))).first;
        for (Channel ch : {Channel::Annihilation, Channel::Creation}) {
            const auto bins = group_frequencies(decompose_coupling(ch, bs.site, it->second, win, L), freq_tol);
            if (is_davies_like(kind)) {
                for (const auto& b : bins) {
                    const double rate = power_spectrum(bs.bath, ch, b.omega);
                    set.operators.push_back({std::sqrt(rate) * b.coeffs, bs.site, ch, b.omega});
                }
            } else {
                LindbladOperator op{Eigen::VectorXcd::Zero(2 * L), bs.site, ch,
                                    std::numeric_limits<double>::quiet_NaN()};
                for (const auto& b : bins) op.coeffs += std::sqrt(power_spectrum(bs.bath, ch, b.omega)) * b.coeffs;
                set.operators.push_back(std::move(op));
            }
        }
    }
    return set;
}

inline std::pair<LindbladSet, GeneratorM> build_gksl_generator(QmeKind kind, const SingleParticleMatrix& h,
                                                               const std::vector<BathSite>& baths, int radius,
                                                               double freq_tol = -1.0) {
    const int L = static_cast<int>(h.rows());
    require(radius <= L, "build_gksl_generator: radius " + std::to_string(radius) + " exceeds L=" + std::to_string(L));
    LindbladSet set = build_lindblad_set(kind, h, baths, radius, freq_tol);
    GeneratorM g = lindblad_to_m(set, kind, is_local(kind) ? radius : L);
    return {std::move(set), std::move(g)};
}

// Any of the five kinds; `radius` is ignored for global kinds.
inline GeneratorM build_generator(QmeKind kind, const SingleParticleMatrix& h, const std::vector<BathSite>& baths,
                                  int radius, bool include_eta = false) {
    if (kind == QmeKind::Redfield) return build_redfield_m(h, baths, include_eta);
    GeneratorM g = build_gksl_generator(kind, h, baths, is_local(kind) ? radius : static_cast<int>(h.rows())).second;
    g.include_eta = include_eta;
    return g;
}

} // namespace qme
