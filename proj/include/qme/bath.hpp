// bath.hpp — Lorentzian fermionic bath: spectra, correlation functions, timescales

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "qme/error.hpp"

namespace qme {

using cplx = std::complex<double>;

// Bath attached to a single site. Channel 1 couples through a_j, channel 2 through a_j^dag.
struct BathSpec {
    double tau_b{1.0};      // relaxation time of the Lorentzian density of states
    double beta{0.0};       // inverse temperature, chemical potential fixed at 0
    double j_int{1.0};      // system-bath coupling
    double omega_peak{0.0}; // centre of the density of states

    void validate() const {
        require(tau_b > 0.0 && std::isfinite(tau_b), "BathSpec: tau_b must be positive");
        require(beta >= 0.0 && std::isfinite(beta), "BathSpec: beta must be finite and >= 0");
        require(j_int >= 0.0, "BathSpec: j_int must be >= 0");
    }
};

enum class Channel { Annihilation = 0, Creation = 1 };

// gamma_{mu nu}(omega) over channels {1, 2}; diagonal for this bath.
using SpectralMatrix = Eigen::Matrix2cd;

template <class T>
struct Quadrature {
    T value{};
    double error{0.0};
};

inline double lorentzian_dos(const BathSpec& bath, double omega) {
    const double inv = 1.0 / bath.tau_b;
    const double x = omega - bath.omega_peak;
    return 2.0 * inv / (inv * inv + x * x);
}

inline double fermi_dirac(double beta, double omega) {
    const double x = beta * omega;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

inline double power_spectrum(const BathSpec& bath, Channel channel, double omega) {
    const double j2 = bath.j_int * bath.j_int;
    if (channel == Channel::Annihilation)
        return j2 * (1.0 - fermi_dirac(bath.beta, omega)) * lorentzian_dos(bath, omega);
    return j2 * fermi_dirac(bath.beta, -omega) * lorentzian_dos(bath, -omega);
}

inline SpectralMatrix power_spectrum(const BathSpec& bath, double omega) {
    SpectralMatrix g = SpectralMatrix::Zero();
    g(0, 0) = power_spectrum(bath, Channel::Annihilation, omega);
    g(1, 1) = power_spectrum(bath, Channel::Creation, omega);
    return g;
}

namespace detail {

// Half-width of the frequency window resolved by adaptive quadrature; tails go to Ooura.
inline double frequency_window(const BathSpec& bath) {
    const double beta_eff = std::max(bath.beta, bath.tau_b / 10.0);
    return 40.0 / bath.tau_b + 20.0 / beta_eff;
}

template <class F>
Quadrature<double> kronrod(const F& f, double a, double b, double tol = 1e-13, unsigned max_depth = 25) {
    using boost::math::quadrature::gauss_kronrod;
    Quadrature<double> q;
    q.value = gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &q.error);
    return q;
}

// Absolute error of the real-valued pair estimate, combined in quadrature.
inline double combine_errors(double a, double b) { return std::hypot(a, b); }

// int_{-inf}^{inf} e^{-i omega t} g(omega) d omega for smooth g decaying at least like omega^-2.
template <class G>
Quadrature<cplx> fourier_transform(const G& g, double centre, double half_window, double t) {
    using boost::math::quadrature::exp_sinh;
    using boost::math::quadrature::ooura_fourier_cos;
    using boost::math::quadrature::ooura_fourier_sin;

    const double lo = centre - half_window;
    const double hi = centre + half_window;
    auto re = kronrod([&](double w) { return std::cos(w * t) * g(w); }, lo, hi);
    auto im = kronrod([&](double w) { return -std::sin(w * t) * g(w); }, lo, hi);
    cplx value(re.value, im.value);
    double err = combine_errors(re.error, im.error);

    auto right = [&](double v) { return g(hi + v); };
    auto left = [&](double v) { return g(lo - v); };
    if (t == 0.0) {
        static thread_local exp_sinh<double> es;
        double e1 = 0.0, e2 = 0.0, l1 = 0.0;
        value += es.integrate(right, 1e-12, &e1, &l1) + es.integrate(left, 1e-12, &e2, &l1);
        err += e1 + e2;
        return {value, err};
    }

    static thread_local ooura_fourier_cos<double> fc(1e-12);
    static thread_local ooura_fourier_sin<double> fs(1e-12);
    const double s = std::abs(t);
    const double sgn = t > 0 ? 1.0 : -1.0;
    auto [rc, rce] = fc.integrate(right, s);
    auto [rs, rse] = fs.integrate(right, s);
    auto [lc, lce] = fc.integrate(left, s);
    auto [ls, lse] = fs.integrate(left, s);
    // e^{-i(hi+v)t} and e^{-i(lo-v)t}
    value += std::exp(cplx(0.0, -hi * t)) * cplx(rc, -sgn * rs);
    value += std::exp(cplx(0.0, -lo * t)) * cplx(lc, sgn * ls);
    // Ooura reports relative errors; a tail that underflows to zero gives 0/0.
    auto abs_err = [](double rel, double v) { return v == 0.0 ? 0.0 : rel * std::abs(v); };
    err += abs_err(rce, rc) + abs_err(rse, rs) + abs_err(lce, lc) + abs_err(lse, ls);
    return {value, err};
}

} // namespace detail

// C_{mu nu}(t) as the inverse Fourier transform of the power spectrum integrand.
// Channel pairs are 0-based: (0,0) <-> C_11, (1,1) <-> C_22; off-diagonal pairs vanish.
inline Quadrature<cplx> correlation_function_detailed(const BathSpec& bath, int mu, int nu, double t) {
    bath.validate();
    require(mu >= 0 && mu < 2 && nu >= 0 && nu < 2, "correlation_function: channel index out of range");
    if (mu != nu) return {};
    const double j2 = bath.j_int * bath.j_int;
    const double w = detail::frequency_window(bath);
    Quadrature<cplx> q;
    if (mu == 0) {
        auto g = [&](double om) { return (1.0 - fermi_dirac(bath.beta, om)) * lorentzian_dos(bath, om); };
        q = detail::fourier_transform(g, bath.omega_peak, w, t);
    } else {
        auto g = [&](double om) { return fermi_dirac(bath.beta, om) * lorentzian_dos(bath, om); };
        q = detail::fourier_transform(g, bath.omega_peak, w, -t);
    }
    const double scale = j2 / (2.0 * M_PI);
    q.value *= scale;
    q.error *= scale;
    if (!(q.error <= 1e-8 * std::max(j2, 1e-300)) || !std::isfinite(std::abs(q.value)))
        throw NumericalError("correlation_function: quadrature did not converge (error estimate " +
                             std::to_string(q.error) + ")");
    return q;
}

inline cplx correlation_function(const BathSpec& bath, int mu, int nu, double t) {
    return correlation_function_detailed(bath, mu, nu, t).value;
}

// First moment of a decaying kernel: int t|C| dt / int |C| dt over [0, inf).
inline double bath_relaxation_time(const std::function<double(double)>& abs_kernel) {
    using boost::math::quadrature::exp_sinh;
    exp_sinh<double> es;
    double e0 = 0.0, e1 = 0.0;
    double m0 = 0.0, m1 = 0.0;
    try {
        m0 = es.integrate([&](double t) { return abs_kernel(t); }, 1e-10, &e0);
        m1 = es.integrate([&](double t) { return t * abs_kernel(t); }, 1e-10, &e1);
    } catch (const std::exception& ex) {
        throw NumericalError(std::string("bath_relaxation_time: kernel is not integrable (") + ex.what() + ")");
    }
    if (!std::isfinite(m0) || !std::isfinite(m1) || m0 <= 0.0 || e0 > 1e-6 * m0 || e1 > 1e-6 * std::abs(m1))
        throw NumericalError("bath_relaxation_time: kernel does not decay (zeroth moment " + std::to_string(m0) +
                             ", error " + std::to_string(e0) + ")");
    return m1 / m0;
}

// tau_B of the model bath: maximum over the two non-vanishing channels. Both channels decay at
// least like exp(-min(1/tau_B, pi/beta) t), so a horizon of 50 decay times truncates nothing.
inline double bath_relaxation_time(const BathSpec& bath) {
    bath.validate();
    const double horizon = 50.0 * std::max(bath.tau_b, bath.beta / M_PI);
    double best = 0.0;
    for (int c = 0; c < 2; ++c) {
        auto k = [&](double t) { return std::abs(correlation_function(bath, c, c, t)); };
        const auto m0 = detail::kronrod(k, 0.0, horizon, 1e-10);
        const auto m1 = detail::kronrod([&](double t) { return t * k(t); }, 0.0, horizon, 1e-10);
        if (!(m0.value > 0.0) || m0.error > 1e-6 * m0.value || m1.error > 1e-6 * m1.value)
            throw NumericalError("bath_relaxation_time: moments did not converge");
        best = std::max(best, m1.value / m0.value);
    }
    return best;
}

// eta(omega) = (1/2pi) PV int gamma(w') / (omega - w') dw', by symmetric excision around omega:
// PV int = int_0^inf [gamma(omega - u) - gamma(omega + u)] / u du.
// `breakpoints` are frequencies where gamma has structure; `scale` is its narrowest feature width.
inline Quadrature<double> eta_principal_value_detailed(const std::function<double(double)>& gamma, double omega,
                                                       double scale, std::initializer_list<double> breakpoints = {}) {
    using boost::math::quadrature::exp_sinh;
    require(scale > 0.0, "eta_principal_value: scale must be positive");
    auto f = [&](double u) { return (gamma(omega - u) - gamma(omega + u)) / u; };

    std::vector<double> cuts{0.0};
    for (double b : breakpoints) {
        const double d = std::abs(b - omega);
        if (d > 1e-6 * scale) { // closer breakpoints coincide with omega
            cuts.push_back(std::max(0.0, d - 10.0 * scale));
            cuts.push_back(d);
            cuts.push_back(d + 10.0 * scale);
        }
    }
    cuts.push_back(cuts.back() + 50.0 * scale);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // The difference quotient near u = 0 carries rounding noise of order eps gamma / u, so
    // accuracy is judged against the size of gamma itself rather than against eta.
    double size = std::abs(gamma(omega));
    for (double b : breakpoints) size = std::max(size, std::abs(gamma(b)));

    Quadrature<double> q;
    double l1 = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        auto part = detail::kronrod(f, cuts[k], cuts[k + 1], 1e-10, 15);
        q.value += part.value;
        q.error += part.error;
        l1 += std::abs(part.value);
    }
    exp_sinh<double> es;
    double et = 0.0;
    const double tail = es.integrate(f, cuts.back(), std::numeric_limits<double>::infinity(), 1e-12, &et);
    q.value += tail;
    q.error += et * std::abs(tail);
    l1 += std::abs(tail);

    q.value /= 2.0 * M_PI;
    q.error /= 2.0 * M_PI;
    l1 /= 2.0 * M_PI;
    if (!std::isfinite(q.value) || q.error > 1e-6 * std::max({l1, size, 1e-300}))
        throw NumericalError("eta_principal_value: quadrature error estimate " + std::to_string(q.error) +
                             " above 1e-6 relative");
    return q;
}

inline double eta_principal_value(const std::function<double(double)>& gamma, double omega, double scale,
                                  std::initializer_list<double> breakpoints = {}) {
    return eta_principal_value_detailed(gamma, omega, scale, breakpoints).value;
}

// Lamb-shift kernel of one channel of the model bath.
inline double bath_eta(const BathSpec& bath, Channel channel, double omega) {
    const double width = bath.beta > 0.0 ? std::min(1.0 / bath.tau_b, 1.0 / bath.beta) : 1.0 / bath.tau_b;
    const double peak = channel == Channel::Annihilation ? bath.omega_peak : -bath.omega_peak;
    return eta_principal_value([&](double w) { return power_spectrum(bath, channel, w); }, omega, width,
                               {peak, 0.0});
}

// Principal square root of a Hermitian positive-semidefinite matrix.
inline Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
    require(m.rows() == m.cols(), "psd_sqrt: matrix must be square");
    const double scale = std::max(1.0, m.norm());
    require((m - m.adjoint()).norm() <= 1e-10 * scale, "psd_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        require(ev(i) >= -1e-8 * scale, "psd_sqrt: matrix has eigenvalue " + std::to_string(ev(i)) + " < -1e-8");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace qme
