// majorana.hpp — Operators linear in Majorana fermions
//
// Basis (0-based): w_{2i} = a_i + a_i^dag, w_{2i+1} = i (a_i - a_i^dag), so
// a_i = (w_{2i} - i w_{2i+1}) / 2 and a_i^dag = (w_{2i} + i w_{2i+1}) / 2.
// An operator sum_m c_m w_m is stored as the coefficient vector c of length 2L.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qme {

using cplx = std::complex<double>;

inline Eigen::VectorXcd annihilator_coeffs(int site, int L) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * L);
    c(2 * site) = 0.5;
    c(2 * site + 1) = cplx(0.0, -0.5);
    return c;
}

inline Eigen::VectorXcd creator_coeffs(int site, int L) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * L);
    c(2 * site) = 0.5;
    c(2 * site + 1) = cplx(0.0, 0.5);
    return c;
}

// sum_i amp(i) a_{offset+i}
inline Eigen::VectorXcd annihilator_combination(const Eigen::Ref<const Eigen::VectorXcd>& amp, int offset, int L) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * L);
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
        const Eigen::Index s = offset + i;
        c(2 * s) = 0.5 * amp(i);
        c(2 * s + 1) = cplx(0.0, -0.5) * amp(i);
    }
    return c;
}

// sum_i amp(i) a_{offset+i}^dag
inline Eigen::VectorXcd creator_combination(const Eigen::Ref<const Eigen::VectorXcd>& amp, int offset, int L) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * L);
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
        const Eigen::Index s = offset + i;
        c(2 * s) = 0.5 * amp(i);
        c(2 * s + 1) = cplx(0.0, 0.5) * amp(i);
    }
    return c;
}

} // namespace qme
