// metrics.hpp — Generator distance, steady-state deviation and mode populations

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qme/bath.hpp"
#include "qme/builders.hpp"
#include "qme/error.hpp"
#include "qme/lattice.hpp"
#include "qme/majorana.hpp"

namespace qme {

struct ComparisonResult {
    double tau_b{0.0};
    int radius{0};
    QmeKind kind{QmeKind::Redfield};
    double distance{0.0};
    double delta{0.0};
    double j_int{0.0};
    double tau_sb{0.0};
};

struct ModePopulation {
    double omega{0.0};
    double population{0.0};
};

// Hilbert-Schmidt distance relative to the reference.
inline double generator_distance(const Eigen::MatrixXcd& m_loc, const Eigen::MatrixXcd& m_ref) {
    require(m_loc.rows() == m_ref.rows() && m_loc.cols() == m_ref.cols(), "generator_distance: dimension mismatch");
    const double ref = m_ref.norm();
    require(ref > 0.0, "generator_distance: reference generator is zero");
    return (m_loc - m_ref).norm() / ref;
}

inline double generator_distance(const GeneratorM& loc, const GeneratorM& ref) { return generator_distance(loc.m, ref.m); }

// max |W_loc - W_ref| normalised by the largest off-diagonal |W_ref|.
inline double steady_state_delta(const Eigen::MatrixXcd& w_loc, const Eigen::MatrixXcd& w_ref) {
    require(w_loc.rows() == w_ref.rows() && w_loc.cols() == w_ref.cols(), "steady_state_delta: dimension mismatch");
    double off = 0.0;
    for (Eigen::Index i = 0; i < w_ref.rows(); ++i)
        for (Eigen::Index j = 0; j < w_ref.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(w_ref(i, j)));
    if (!(off > 0.0)) throw NumericalError("steady_state_delta: reference covariance has no off-diagonal weight");
    return (w_loc - w_ref).cwiseAbs().maxCoeff() / off;
}

// Correlation matrix G_ij = <a_i^dag a_j> from the Majorana covariance.
inline Eigen::MatrixXcd correlation_matrix(const Eigen::MatrixXcd& w) {
    require(w.rows() == w.cols() && w.rows() % 2 == 0, "correlation_matrix: W must be 2L x 2L");
    const int L = static_cast<int>(w.rows() / 2);
    Eigen::MatrixXcd cr(L, 2 * L), an(L, 2 * L);
    for (int i = 0; i < L; ++i) {
        cr.row(i) = creator_coeffs(i, L).transpose();
        an.row(i) = annihilator_coeffs(i, L).transpose();
    }
    return cr * w * an.transpose();
}

// <d_m^dag d_m> for the modes of `eig`, d_m = sum_i O_mi a_i.
inline std::vector<ModePopulation> mode_populations(const Eigen::MatrixXcd& w, const EigenDecomposition& eig) {
    require(w.rows() == 2 * eig.dim(), "mode_populations: W and decomposition sizes differ");
    const Eigen::MatrixXcd g = correlation_matrix(w);
    const Eigen::MatrixXcd gm = eig.modes.conjugate() * g * eig.modes.transpose();
    std::vector<ModePopulation> out(static_cast<std::size_t>(eig.dim()));
    for (int m = 0; m < eig.dim(); ++m) out[static_cast<std::size_t>(m)] = {eig.frequencies(m), gm(m, m).real()};
    return out;
}

inline std::vector<ModePopulation> gibbs_populations(const EigenDecomposition& eig, double beta) {
    std::vector<ModePopulation> out(static_cast<std::size_t>(eig.dim()));
    for (int m = 0; m < eig.dim(); ++m)
        out[static_cast<std::size_t>(m)] = {eig.frequencies(m), fermi_dirac(beta, eig.frequencies(m))};
    return out;
}

// Number of runs of at least `min_run` consecutive modes (in the given order) whose
// neighbouring populations differ by less than `tol`.
inline int count_plateaus(const std::vector<double>& populations, double tol = 1e-3, int min_run = 3) {
    int count = 0, run = 1;
    for (std::size_t i = 1; i <= populations.size(); ++i) {
        if (i < populations.size() && std::abs(populations[i] - populations[i - 1]) < tol) {
            ++run;
            continue;
        }
        if (run >= min_run) ++count;
        run = 1;
    }
    return count;
}

} // namespace qme
