#pragma once

#include "fermigibbs/types.hpp"

namespace fg {

// Filter, weight and coherent-term kernels.  Fourier convention:
// g_hat(w) = (2 pi)^{-1/2} \int e^{-i w t} g(t) dt.
struct KernelBundle {
    double beta = 1.0;
    // Test hook: replaces eta by the constant 1.
    bool eta_is_one = false;

    explicit KernelBundle(double beta_ = 1.0) : beta(beta_) {
        if (!(beta_ > 0.0)) throw ValidationError("kernels: beta must be positive");
    }

    double f(double t) const;
    double f_hat(double omega) const;
    double eta(double omega) const;

    // b1(t) = 2 sqrt(pi) e^{1/8} (sech(2 pi .) * sin(-.) e^{-2 .^2})(t), by direct convolution quadrature.
    static double b1(double t);
    static cd b2(double t);
    // Closed forms; b1_hat is the product of the transforms of its two convolution factors.
    static cd b1_hat(double omega);
    static double b2_hat(double omega);
    static double sech_hat(double omega);    // transform of sech(2 pi t)
    static cd sine_gauss_hat(double omega);  // transform of sin(-t) e^{-2 t^2}
};

// g(nu1, nu2) = \int eta(w) f_hat(w - nu1) f_hat(w - nu2) dw
double dissipator_coefficient_closed(double nu1, double nu2, const KernelBundle& k);
double dissipator_coefficient_quadrature(double nu1, double nu2, const KernelBundle& k);

// Coefficient of (gamma)_nu (gamma)_nu' in the coherent term as printed:
// 2 pi b1_hat(beta(nu + nu')) b2_hat(beta(nu' - nu)).
cd coherent_coefficient(double nu, double nu2, double beta);

// Coefficient that detailed balance requires: (i/2) tanh(beta mu / 4) g(-nu, nu'), mu = nu + nu'.
cd coherent_coefficient_balanced(double nu, double nu2, const KernelBundle& k);

// Kernel of the tilded jump operators, F1(nu, w) = e^{-beta nu / 4} f_hat(w - nu), and the
// closed form of its inverse transform in nu.
cd F1(double nu, double omega, const KernelBundle& k);
cd F1_check_closed(double t, double omega, const KernelBundle& k);
cd F1_check_quadrature(double t, double omega, const KernelBundle& k);

// Inverse transform of F2(nu, nu') = e^{-(nu + nu')/4} 2 pi b1_hat(nu + nu') b2_hat(nu' - nu).
cd F2_check(double t, double t2);

}  // namespace fg
