#pragma once

#include <memory>
#include <random>
#include <vector>

#include "fermigibbs/kernels.hpp"
#include "fermigibbs/spectral.hpp"
#include "fermigibbs/superop.hpp"

namespace fg {

// The coherent term built from b1, b2 as printed carries half the weight that
// KMS detailed balance requires, (i/2) tanh(beta mu / 4) K_mu.  The assembled
// generator uses this multiple of it.
inline constexpr double kCoherentScale = 2.0;

enum class DissipatorMethod { ClosedForm, Quadrature };
enum class CoherentMethod { BohrProduct, DoubleQuadrature };

struct LindbladOptions {
    DissipatorMethod dissipator = DissipatorMethod::ClosedForm;
    CoherentMethod coherent = CoherentMethod::BohrProduct;
    double coherent_scale = kCoherentScale;
    bool eta_is_one = false;
    std::vector<int> jumps;  // Majorana indices; empty means all 2n
};

// g over the clustered Bohr frequencies: g(nus[a], nus[b]).
struct DissipatorCoefficients {
    std::vector<double> nus;
    RMat g;
};

DissipatorCoefficients dissipator_coefficients(const std::vector<double>& nus, const KernelBundle& k,
                                               DissipatorMethod method);

// Everything the generator is built from, sharing one eigendecomposition of H.
struct LindbladModel {
    int n_modes = 1;
    double beta = 1.0;
    KernelBundle kernels{1.0};
    LindbladOptions options;
    std::shared_ptr<const EigenDecomposition> eig;
    GibbsState gibbs;
    BohrGrid grid;
    DissipatorCoefficients coeffs;
    std::vector<int> jumps;
    std::vector<CMat> gammas;      // jump Majoranas, original basis
    std::vector<CMat> gammas_eig;  // U^dag gamma_j U
    CMat B;                        // total coherent term, scaled
    CMat K;                        // sum_j sum g(-nu1, nu2) (gamma_j)_nu1 (gamma_j)_nu2
};

LindbladModel prepare_lindblad(const CMat& H, double beta, const LindbladOptions& options = {});

// A_j(w) = sum_nu f_hat(w - nu) (gamma_j)_nu
CMat jump_operator(const BohrDecomposition& bohr, double omega, const KernelBundle& k);

// Coherent term of a single jump, from b1 and b2 exactly as defined (no scale).
CMat coherent_term(const LindbladModel& m, int jump_slot, CoherentMethod method);
// sum_j of the form detailed balance requires; equals kCoherentScale * sum_j coherent_term.
CMat coherent_term_balanced(const LindbladModel& m);

struct LindbladSuperops {
    SuperOperatorMatrix L;                 // Schrodinger picture
    SuperOperatorMatrix L_dagger;          // Heisenberg picture
    SuperOperatorMatrix L_dagger_coherent;  // X -> i[B, X]
    SuperOperatorMatrix L_dagger_dissipative;
};

LindbladSuperops assemble_lindbladian(const LindbladModel& m);
// Same generator from explicit left/right multiplications of Bohr components.
SuperOperatorMatrix heisenberg_generator_explicit(const LindbladModel& m);

// || L^dag - (L^dag)^{*KMS} ||_F
double kms_dbc_residual(const SuperOperatorMatrix& L_dagger, const GibbsState& g);

CMat propagator(const SuperOperatorMatrix& L, double t);
CMat evolve(const SuperOperatorMatrix& L, const CMat& rho0, double t);
double trace_distance(const CMat& a, const CMat& b);

// Initial states for worst-case mixing estimates: even-parity computational
// basis states plus `n_random` Haar-random even pure states.
std::vector<CMat> even_initial_states(int n_modes, int n_random, std::uint64_t seed);

struct MixingEstimate {
    double t_mix = 0.0;
    bool converged = false;
    double worst_distance = 0.0;
};

MixingEstimate mixing_time_empirical(const SuperOperatorMatrix& L, const GibbsState& g, double epsilon,
                                     std::uint64_t seed = 7, int n_random = 10, double t_max = 1e4);

}  // namespace fg
