#include "fermigibbs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fermigibbs/quadrature.hpp"

namespace fg {

namespace {
constexpr double pi = std::numbers::pi;
const double sqrt2pi = std::sqrt(2.0 * pi);

double f_norm(double beta) { return 1.0 / std::sqrt(beta * std::sqrt(pi / 2.0)); }
}  // namespace

double KernelBundle::f(double t) const { return f_norm(beta) * std::exp(-t * t / (beta * beta)); }

double KernelBundle::f_hat(double omega) const {
    return f_norm(beta) * beta / std::sqrt(2.0) * std::exp(-beta * beta * omega * omega / 4.0);
}

double KernelBundle::eta(double omega) const {
    if (eta_is_one) return 1.0;
    const double x = beta * omega + 1.0;
    return std::exp(-x * x / 2.0);
}

double KernelBundle::b1(double t) {
    auto integrand = [t](double s) {
        const double c = std::cosh(2.0 * pi * (t - s));
        return (1.0 / c) * (-std::sin(s)) * std::exp(-2.0 * s * s);
    };
    const double conv = integrate(integrand, -10.0, 10.0, 1e-16, 1e-13);
    return 2.0 * std::sqrt(pi) * std::exp(0.125) * conv;
}

cd KernelBundle::b2(double t) {
    return std::exp(cd(-4.0 * t * t, -2.0 * t)) / (2.0 * std::pow(pi, 1.5));
}

double KernelBundle::sech_hat(double omega) {
    // \int e^{-iwt} sech(a t) dt = (pi / a) sech(pi w / (2a)), a = 2 pi
    return 0.5 / std::cosh(omega / 4.0) / sqrt2pi;
}

cd KernelBundle::sine_gauss_hat(double omega) {
    // sin(-t) = -(e^{it} - e^{-it}) / (2i); transform of e^{-2t^2} is e^{-w^2/8} / 2.
    auto g = [](double w) { return 0.5 * std::exp(-w * w / 8.0); };
    return cd(0.0, 0.5) * (g(omega - 1.0) - g(omega + 1.0));
}

cd KernelBundle::b1_hat(double omega) {
    // Convolution theorem: (u * v)^ = sqrt(2 pi) u_hat v_hat.
    return 2.0 * std::sqrt(pi) * std::exp(0.125) * sqrt2pi * sech_hat(omega) * sine_gauss_hat(omega);
}

double KernelBundle::b2_hat(double omega) {
    const double x = omega + 2.0;
    return std::exp(-x * x / 16.0) / (4.0 * pi * sqrt2pi);
}

double dissipator_coefficient_closed(double nu1, double nu2, const KernelBundle& k) {
    const double a = k.beta * nu1;
    const double b = k.beta * nu2;
    if (k.eta_is_one) return std::exp(-(a - b) * (a - b) / 8.0);
    const double p = 1.0 - 0.5 * (a + b);
    return std::exp(p * p / 4.0 - 0.5 - (a * a + b * b) / 4.0) / std::sqrt(2.0);
}

double dissipator_coefficient_quadrature(double nu1, double nu2, const KernelBundle& k) {
    const double lo = std::min({-1.0 / k.beta, nu1, nu2}) - 12.0 / k.beta;
    const double hi = std::max({-1.0 / k.beta, nu1, nu2}) + 12.0 / k.beta;
    auto integrand = [&](double w) { return k.eta(w) * k.f_hat(w - nu1) * k.f_hat(w - nu2); };
    return integrate(integrand, lo, hi, 1e-17, 1e-13);
}

cd coherent_coefficient(double nu, double nu2, double beta) {
    return 2.0 * pi * KernelBundle::b1_hat(beta * (nu + nu2)) * KernelBundle::b2_hat(beta * (nu2 - nu));
}

cd coherent_coefficient_balanced(double nu, double nu2, const KernelBundle& k) {
    const double mu = nu + nu2;
    return cd(0.0, 0.5) * std::tanh(k.beta * mu / 4.0) * dissipator_coefficient_closed(-nu, nu2, k);
}

cd F1(double nu, double omega, const KernelBundle& k) {
    return std::exp(-k.beta * nu / 4.0) * k.f_hat(omega - nu);
}

cd F1_check_closed(double t, double omega, const KernelBundle& k) {
    const double b = k.beta;
    return std::exp(1.0 / 16.0) * f_norm(b) * std::exp(-t * t / (b * b)) *
           std::exp(cd(0.0, -t * (omega - 1.0 / (2.0 * b)))) * std::exp(-b * omega / 4.0);
}

cd F1_check_quadrature(double t, double omega, const KernelBundle& k) {
    const double centre = omega - 1.0 / (2.0 * k.beta);
    auto integrand = [&](double nu) { return F1(nu, omega, k) * std::exp(cd(0.0, -nu * t)); };
    return integrate(integrand, centre - 16.0 / k.beta, centre + 16.0 / k.beta, 1e-16, 1e-13) / sqrt2pi;
}

cd F2_check(double t, double t2) {
    // Rotate to s = nu + nu', d = nu' - nu; the integral factorizes (Jacobian 1/2).
    auto is = [&](double s) {
        return std::exp(-s / 4.0) * 2.0 * pi * KernelBundle::b1_hat(s) * std::exp(cd(0.0, s * (t + t2) / 2.0));
    };
    auto id = [&](double d) { return KernelBundle::b2_hat(d) * std::exp(cd(0.0, d * (t2 - t) / 2.0)); };
    const cd I1 = integrate(is, -40.0, 40.0, 1e-17, 1e-12, 4000);
    const cd I2 = integrate(id, -42.0, 38.0, 1e-17, 1e-12, 4000);
    return 0.5 * I1 * I2 / (2.0 * pi);
}

}  // namespace fg
