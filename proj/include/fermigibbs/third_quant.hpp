#pragma once

#include <array>
#include <vector>

#include "fermigibbs/lindblad.hpp"
#include "fermigibbs/model.hpp"
#include "fermigibbs/superop.hpp"

namespace fg {

// Doubled Fock space of 2n a-Dirac modes.  The basis vector with index alpha
// is v_alpha, the image of the monomial with bitmask alpha.
struct AFermionSpace {
    int n_modes = 1;                // source Dirac modes
    std::vector<CMat> c;            // 2n annihilators
    std::vector<CMat> hat_gammas;   // 4n: c_j + c_j^dag, i(c_j^dag - c_j)
    CMat parity_op;                 // (-1)^{number}
    std::vector<int> site_map;      // a-Majorana index -> lattice site

    int n_dirac() const { return 2 * n_modes; }
    Eigen::Index dim() const { return parity_op.rows(); }
};

AFermionSpace build_a_fermion_space(const ModeLayout& layout, int max_modes = kMaxModes);
AFermionSpace build_a_fermion_space(int n_modes, int max_modes = kMaxModes);

// Bit-reversal permutation taking a-space indices to the Hilbert ordering of
// build_majorana_matrices(2n); conjugating hat_gammas by it gives those matrices.
Eigen::PermutationMatrix<Eigen::Dynamic> a_space_to_chain_order(int n_modes);

CVec phi_map(const CMat& X);
CMat phi_inverse(const CVec& v, int n_modes);

// Third-quantized left and right multiplication.  phi_right applies the odd
// branch (-1)^n twist when W is odd and rejects mixed-parity W.
CMat phi_left(const CMat& W);
CMat phi_right(const CMat& W);

struct PhiResult {
    CMat matrix;
    double residual = 0.0;  // || sum s_ab L_a R_b - S ||_F
};

// Phi of a superoperator through its expansion in the L_{gamma^a} R_{gamma^b} basis.
PhiResult phi_superop_checked(const SuperOperatorMatrix& S);
CMat phi_superop(const SuperOperatorMatrix& S);

struct CounterexampleReport {
    double superop_commutator = 0.0;     // || [L_{gamma_1}, R_{gamma_2}] ||
    double naive_anticommutator = 0.0;   // || {gamma_1, gamma_4} || on the doubled space
    double corrected_commutator = 0.0;   // || [gamma_1, gamma_4 (-1)^N] ||
    int corrected_support_modes = 0;     // Dirac modes touched by gamma_4 (-1)^N
    int total_modes = 0;
};

CounterexampleReport naive_vectorization_counterexample();

// X -> sigma^{1/4} X sigma^{1/4} and its inverse.
SuperOperatorMatrix gamma_superop(const GibbsState& g, double sign = 1.0);

struct ParentHamiltonian {
    CMat total;
    CMat C_free, C_int, D_free, D_int;
    double beta = 0.0;
    double U = 0.0;
    int n_modes = 1;

    CMat coherent() const { return C_free + C_int; }
    CMat dissipative() const { return D_free + D_int; }
    CMat free() const { return C_free + D_free; }
    CMat interacting() const { return C_int + D_int; }
};

// Phi(Gamma o S o Gamma^{-1})
CMat phi_tilde(const SuperOperatorMatrix& S, const GibbsState& g);

struct ParentParts {
    CMat coherent, dissipative;
    LindbladSuperops superops;
    LindbladModel lindblad;
};

ParentParts parent_parts(const CMat& H, double beta, const LindbladOptions& options = {});
ParentHamiltonian build_parent_hamiltonian(const Model& model, double beta, const LindbladOptions& options = {});
// Parent Hamiltonian assembled term by term from the tilded Bohr components.
CMat parent_hamiltonian_explicit(const LindbladModel& m);

// C e^{-4 beta^2 eps^2} (-i d1^dag d2 + i d2^dag d1 - sinh d1^dag d1 + sinh d2^dag d2 - cosh),
// d1 = (z1 + i z3)/2, d2 = (z2 + i z4)/2.
CMat single_mode_closed_form(const std::array<CMat, 4>& z, double eps, double beta, double C);
// Same on the 4-dimensional a-space of one source mode.
CMat single_mode_closed_form(double eps, double beta, double C);

double calibrate_single_mode_constant(double beta = 1.0);

struct FreeDecoupling {
    CanonicalForm canonical;
    std::vector<CMat> blocks;  // one closed form per canonical mode, on the full a-space
    CMat sum;
};

// The canonical energies enter the closed form as eps_k / 2 (the single-mode
// input iε(ζ1ζ2 - ζ2ζ1) has canonical energy 2ε).
FreeDecoupling decouple_free_parent(const QuadraticHamiltonian& H0, double beta, double C);

struct NormPreservation {
    double norm_A = 0.0;
    double norm_left = 0.0;
    double norm_right = 0.0;
    double adjoint_rule_residual = 0.0;  // || Phi(R_{A^dag}) -+ Phi(R_A)^dag ||
};

NormPreservation norm_preservation_check(const CMat& A);

// Eigenvector of the largest eigenvalue, phase fixed by a real positive v_0.
// Throws when the top eigenvalue is degenerate.
CVec parent_top_eigenvector(const CMat& parent);
cd expectation_via_parent(const CMat& X, const CVec& v);

struct SectorSpectrum {
    RVec even_eigenvalues, odd_eigenvalues;
    double gap_even = 0.0;
    double top = 0.0;
};

SectorSpectrum sector_spectrum(const CMat& parent, int n_modes);

}  // namespace fg
