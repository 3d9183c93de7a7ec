#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fermigibbs/lindblad.hpp"
#include "fermigibbs/model.hpp"
#include "fermigibbs/third_quant.hpp"

namespace fg {

enum class Sector { Full, Even, Odd };
const char* sector_name(Sector s);

struct GapReport {
    double top = 0.0;
    double second = 0.0;
    double gap = 0.0;
    bool degenerate = false;
    Sector sector = Sector::Full;
};

// Gap of a real spectrum; degenerate when the two largest values differ by
// less than 1e-9 of the spectral range.
GapReport gap_from_spectrum(const RVec& eigenvalues, Sector sector);
// Hermitian operator on the a-space, optionally restricted to monomial-parity coordinates.
GapReport spectral_gap(const CMat& H, int n_modes, Sector sector);
// Real parts of the eigenvalues of L^dag on a parity sector of operator space.
RVec lindbladian_spectrum(const SuperOperatorMatrix& L_dagger, Sector sector);
GapReport lindbladian_gap(const SuperOperatorMatrix& L_dagger, Sector sector);

struct DecayFit {
    std::vector<std::pair<double, double>> samples;
    bool fitted = false;
    double rate = 0.0;      // value ~ A e^{-rate x}
    double prefactor = 0.0;
    double residual = 0.0;  // rms of the log-scale fit
    bool monotone = false;  // nonincreasing over the samples used for the fit
    std::string note;
};

// Least squares on log values, over samples with x > x_min and value >= 1e-13.
DecayFit fit_exponential(std::vector<std::pair<double, double>> samples, double x_min = -1e300);

// Worker count for parallel sweeps: FERMIGIBBS_WORKERS, default 1.
int worker_count();

struct SweepPoint {
    double beta = 0.0;
    double U = 0.0;
    double top = 0.0;
    double gap = 0.0;
    bool degenerate = false;
    double v_parent_norm = 0.0;
    double free_gap = 0.0;
    double mixing_time = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    bool fitted = false;
    double gap0 = 0.0;
    double slope = 0.0;             // smallest c with |gap(U) - gap0| <= c U on the grid
    double v_over_u_spread = 0.0;   // (max - min) / mean of ||V^parent|| / U over U > 0
    bool top_zero_nondegenerate = true;
    bool continuous = true;
};

using ModelFamily = std::function<Model(double U)>;

SweepResult gap_vs_U_sweep(const ModelFamily& family, double beta, const std::vector<double>& U_grid,
                           const LindbladOptions& options = {}, bool with_mixing = false, int workers = 0);

struct MixingReport {
    double gap = 0.0;
    double sigma_min = 0.0;
    std::vector<double> times;
    int n_states = 0;
    int n_observables = 0;
    double max_state_violation = 0.0;       // max of ||rho(t) - sigma||_1 - e^{-gt}/sqrt(sigma_min)
    double max_observable_violation = 0.0;  // max of ||Y(t)||_KMS - e^{-gt}||Y||_KMS
    double empirical_rate = 0.0;
    bool bound_holds = false;
    bool rate_ok = false;
};

MixingReport mixing_bound_verify(const LindbladSuperops& ops, const GibbsState& g, double gap, std::uint64_t seed,
                                 int n_random = 10, double slack = 1e-7);

// Exponential rate of the worst-case trace distance at late times, from the
// eigen-expansion of L on the even sector (deviations from sigma only).
double empirical_mixing_rate(const SuperOperatorMatrix& L, const GibbsState& g, const std::vector<CMat>& states,
                             double gap);

// |Tr[sigma n_x n_y] - Tr[sigma n_x] Tr[sigma n_y]| against site distance.
DecayFit correlation_decay(const Model& model, double beta, int x_mode, const std::vector<int>& y_modes);

// || A~_j(w) - A~_j^loc(w) || against the radius of the ball the Hamiltonian is restricted to.
DecayFit quasi_locality_profile(const Model& model, double beta, int jump, double omega,
                                const std::vector<double>& radii);

struct KernelDiagnostics {
    double beta = 1.0;
    double F1_max_error = 0.0;       // closed form vs quadrature
    double F1_modulus_spread = 0.0;  // spread of |F1_check(0, w)| e^{beta w / 4} over w
    double b1_hat_zero = 0.0;
    double eta_at_minus_inv_beta = 0.0;
    double f_hat_zero = 0.0;
    DecayFit F2_radial;
    double F2_ratio_4_2 = 0.0;
    double F2_envelope_4_2 = 0.0;  // e^{-2 rate}
};

KernelDiagnostics kernel_diagnostics(double beta);

// Shared by the CLI validation suite and the acceptance harness.
// max_{j,k} || {g_j, g_k} - 2 delta_jk I ||
double anticommutation_residual(const std::vector<CMat>& gammas);
// Largest difference between two sorted spectra; infinity when the sizes differ.
double spectrum_distance(RVec a, RVec b);
// |<v, w>| with v the top parent eigenvector and w = 2^{n/2} phi(sigma^{1/2}).
double top_eigenvector_overlap(const CMat& parent, const GibbsState& g);
// Hermitian operator with random coefficients on monomials of the given parity.
CMat random_parity_operator(int n_modes, int par, std::mt19937_64& rng, bool hermitian = true);
// max |Tr[sigma X] - <v, Phi(L_X) v>| over `count` random even Hermitian X.
double expectation_correspondence_error(const CMat& parent, const GibbsState& g, int count, std::uint64_t seed);

}  // namespace fg
