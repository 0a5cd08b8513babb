#pragma once
// Independent reference computations for the unit tests. Nothing here calls the
// library's own grids or recurrences.

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hermite.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(),
                                                std::numeric_limits<double>::infinity(), 15, 1e-13);
}

inline double integrate(const std::function<double(double)>& f, double lo, double hi) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

// Gaussian amplitude with intensity std sigma.
inline double gauss(double t, double sigma = 1.0) {
    return std::pow(2.0 * M_PI * sigma * sigma, -0.25) * std::exp(-t * t / (4.0 * sigma * sigma));
}

// HG_n from the physicists' Hermite polynomial, normalized explicitly.
inline double hg(int n, double t, double sigma = 1.0) {
    const double x = t / (std::sqrt(2.0) * sigma);
    const double norm = 1.0 / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0));
    return norm * boost::math::hermite(static_cast<unsigned>(n), x) * gauss(t, sigma);
}

// psi_s (parity +1) and psi_a (parity -1) built directly from the two shifted pulses.
inline double psi_s(double t, double tau, double sigma = 1.0) {
    return 0.5 * (gauss(t - tau / 2, sigma) + gauss(t + tau / 2, sigma));
}
inline double psi_a(double t, double tau, double sigma = 1.0) {
    return 0.5 * (gauss(t - tau / 2, sigma) - gauss(t + tau / 2, sigma));
}

// Analytic tau-derivative of the incoherent intensity 0.5 (g(t - tau/2)^2 + g(t + tau/2)^2).
inline double incoherent_intensity(double t, double tau) {
    return 0.5 * (gauss(t - tau / 2) * gauss(t - tau / 2) + gauss(t + tau / 2) * gauss(t + tau / 2));
}
inline double incoherent_intensity_dtau(double t, double tau) {
    // d/dtau g(u)^2 = g(u)^2 * (-u) * du/dtau with sigma = 1.
    const double up = t - tau / 2, um = t + tau / 2;
    const double gp = gauss(up) * gauss(up), gm = gauss(um) * gauss(um);
    return 0.5 * (gp * (up / 2.0) + gm * (-um / 2.0));
}

inline double incoherent_intensity_fi(double tau) {
    return integrate([&](double t) {
        const double p = incoherent_intensity(t, tau);
        if (p < 1e-300) return 0.0;
        const double d = incoherent_intensity_dtau(t, tau);
        return d * d / p;
    });
}

} // namespace oracle
