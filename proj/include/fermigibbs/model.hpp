#pragma once

#include <string>
#include <vector>

#include "fermigibbs/majorana.hpp"

namespace fg {

// H0 = sum_jk h_jk gamma_j gamma_k + offset, with h Hermitian, purely imaginary
// and zero on the diagonal.
struct QuadraticHamiltonian {
    CMat h;
    ModeLayout layout;
    double offset = 0.0;

    int n_modes() const { return layout.n_modes(); }
    MajoranaPolynomial polynomial() const;
    CMat dense() const;
};

QuadraticHamiltonian build_quadratic(const CMat& h, const ModeLayout& layout, double offset = 0.0);
// Accepts a polynomial of degree <= 2 (constant goes to the offset).
QuadraticHamiltonian quadratic_from_polynomial(const MajoranaPolynomial& p, const ModeLayout& layout);

// gamma_j = sum_k Q_jk zeta_k and H0 = i sum_j eps_j zeta_{2j-1} zeta_{2j} + offset.
struct CanonicalForm {
    RMat Q;
    RVec epsilons;
};

CanonicalForm canonical_form(const QuadraticHamiltonian& H0);

// Column l of e^{4iht}: e^{iH0 t} gamma_l e^{-iH0 t} = sum_j c_j gamma_j.
CVec free_heisenberg(const QuadraticHamiltonian& H0, int l, double t);

struct InteractionSpec {
    MajoranaPolynomial terms{1};
    double U = 0.0;
    double r0 = 1.0;
};

struct Model {
    std::string name;
    ModeLayout layout;
    QuadraticHamiltonian h0;
    InteractionSpec v;

    int n_modes() const { return layout.n_modes(); }
    MajoranaPolynomial polynomial() const;
    CMat dense_H0() const { return h0.dense(); }
    CMat dense_H() const;
    // Keeps a term iff all of its Majorana indices sit inside the ball.
    Model restrict_to_ball(int center_site, double radius) const;
    // Same model with the interaction removed.
    Model free_part() const;
};

Model make_model(const QuadraticHamiltonian& h0, const InteractionSpec& v, std::string name);
// Degree <= 2 monomials go to H0, the rest to V.
Model model_from_polynomial(const MajoranaPolynomial& p, const ModeLayout& layout, double U, std::string name);

std::pair<QuadraticHamiltonian, InteractionSpec> build_fermi_hubbard(const std::vector<int>& dims, double U,
                                                                     double mu, double hopping = 1.0);
Model fermi_hubbard_model(const std::vector<int>& dims, double U, double mu, double hopping = 1.0);

// H0 = i eps (gamma_1 gamma_2 - gamma_2 gamma_1).
Model single_mode_model(double eps);

// Spinless chain: -t sum (c_i^dag c_{i+1} + h.c.) - mu sum n_i + U sum (n_i - 1/2)(n_{i+1} - 1/2).
Model spinless_chain_model(int n_modes, double hopping, double mu, double U);

// Random nearest-neighbour quadratic chain, for property tests.
Model random_quadratic_chain(int n_modes, std::uint64_t seed, double scale = 0.5);

// Annihilation operator of Dirac mode m: c_m = (gamma_{2m} + i gamma_{2m+1}) / 2.
MajoranaPolynomial annihilation(int n_modes, int m);
MajoranaPolynomial number_operator(int n_modes, int m);

struct LocalityBall {
    int center_site = 0;
    double radius = 0.0;
    double norm = 0.0;
    int n_terms = 0;
};

struct LocalityReport {
    std::vector<LocalityBall> balls;
    double max_ball_norm = 0.0;
    double max_radius = 0.0;
    std::vector<Monomial> violations;
};

LocalityReport locality_audit(const MajoranaPolynomial& p, const ModeLayout& layout, double r0);

}  // namespace fg
