// calibration.hpp — Coupling J_int <-> system-bath timescale tau_SB

#pragma once

#include <cmath>
#include <vector>

#include "qme/bath.hpp"
#include "qme/builders.hpp"
#include "qme/error.hpp"
#include "qme/quadratic_solver.hpp"

namespace qme {

// tau_SB = 1 / |lambda_max| of the dissipator.
inline double tau_sb_from_m(const Eigen::MatrixXcd& m_redfield) {
    require(is_hermitian(m_redfield, 1e-10), "tau_sb_from_m: M is not Hermitian");
    const double rate = dissipator_largest_eigenvalue(m_redfield);
    require(rate > 0.0, "tau_sb_from_m: tr M = 0, the timescale is undefined");
    return 1.0 / rate;
}

inline double tau_sb_from_m(const GeneratorM& g) { return tau_sb_from_m(g.m); }

inline std::vector<BathSite> with_coupling(std::vector<BathSite> baths, double j_int) {
    for (auto& b : baths) b.bath.j_int = j_int;
    return baths;
}

// M is quadratic in J_int, so one build at J_int = 1 fixes the coupling for any target.
inline double calibrate_jint(double target_tau_sb, const SingleParticleMatrix& h, const std::vector<BathSite>& baths,
                             bool include_eta = false) {
    require(target_tau_sb > 0.0 && std::isfinite(target_tau_sb), "calibrate_jint: target tau_SB must be positive");
    const GeneratorM unit = build_redfield_m(h, with_coupling(baths, 1.0), include_eta);
    const double rate = dissipator_largest_eigenvalue(unit);
    require(rate > 0.0, "calibrate_jint: tr M vanishes at J_int = 1");
    return std::sqrt(1.0 / (target_tau_sb * rate));
}

inline double calibrate_jint(double target_tau_sb, const ChainSpec& chain, double tau_b, bool include_eta = false) {
    return calibrate_jint(target_tau_sb, build_chain_hamiltonian(chain), make_chain_baths(chain, tau_b, 1.0), include_eta);
}

} // namespace qme
