// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fermigibbs/analysis.hpp"
#include "fermigibbs/kernels.hpp"
#include "fermigibbs/third_quant.hpp"

using namespace fg;

namespace {

struct Case {
    Model model;
    double beta;
};

std::vector<Case> test_matrix() {
    std::vector<Case> out;
    for (double beta : {0.5, 1.0, 2.0}) {
        out.push_back({single_mode_model(0.5), beta});
        out.push_back({spinless_chain_model(2, 1.0, 0.3, 0.0), beta});
        out.push_back({fermi_hubbard_model({1}, 0.0, 0.1), beta});
        out.push_back({fermi_hubbard_model({1}, 0.2, 0.1), beta});
    }
    return out;
}

struct Built {
    const Case* c;
    LindbladModel lm;
    LindbladSuperops ops;
    ParentHamiltonian parent;
};

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail, double seconds) {
    std::printf("[%s] %2d %s: %s (%.2fs)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename F>
void criterion(int id, const std::string& title, double time_limit, F body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
        ok = false;
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit > 0.0 && s > time_limit) {
        detail << "; exceeded " << time_limit << "s";
        ok = false;
    }
    report(id, title, ok, detail.str(), s);
}

double even_gap(const SuperOperatorMatrix& L_dagger) { return lindbladian_gap(L_dagger, Sector::Even).gap; }

}  // namespace

int main() {
    std::printf("acceptance: %d criteria\n", 13);
    const auto cases = test_matrix();
    std::vector<Built> built;
    double build_seconds = 0.0;
    {
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto& c : cases) {
            LindbladModel lm = prepare_lindblad(c.model.dense_H(), c.beta);
            LindbladSuperops ops = assemble_lindbladian(lm);
            ParentHamiltonian ph = build_parent_hamiltonian(c.model, c.beta);
            built.push_back({&c, std::move(lm), std::move(ops), std::move(ph)});
        }
        build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    criterion(1, "algebra exactness", 10.0, [](std::ostream& d) {
        double src = 0.0, hat = 0.0;
        for (int n = 1; n <= 6; ++n) src = std::max(src, anticommutation_residual(build_majorana_matrices(n)));
        for (int n = 1; n <= 3; ++n) hat = std::max(hat, anticommutation_residual(build_a_fermion_space(n).hat_gammas));
        d << "source n<=6 residual=" << src << ", a-space n<=3 residual=" << hat;
        return src <= 1e-13 && hat <= 1e-13;
    });

    criterion(2, "stationarity", 120.0 - build_seconds, [&](std::ostream& d) {
        double worst = 0.0;
        for (const auto& b : built) worst = std::max(worst, b.ops.L.apply(b.lm.gibbs.sigma).norm());
        d << built.size() << " model/beta pairs, max ||L(sigma)||_F=" << worst << " (build " << build_seconds << "s)";
        return worst <= 1e-7;
    });

    criterion(3, "KMS detailed balance", 0.0, [&](std::ostream& d) {
        double worst = 0.0;
        for (const auto& b : built) worst = std::max(worst, kms_dbc_residual(b.ops.L_dagger, b.lm.gibbs));
        const Model chain = spinless_chain_model(3, 1.0, 0.3, 0.4);
        LindbladOptions doubled;
        doubled.coherent_scale = 2.0 * kCoherentScale;
        const auto lm = prepare_lindblad(chain.dense_H(), 1.0, doubled);
        const double neg = kms_dbc_residual(assemble_lindbladian(lm).L_dagger, lm.gibbs);
        d << "max residual=" << worst << ", doubled-B control on 3-mode chain=" << neg;
        return worst <= 1e-7 && neg > 1e-3;
    });

    criterion(4, "spectrum correspondence", 0.0, [&](std::ostream& d) {
        double worst = 0.0;
        for (const auto& b : built) {
            const int n = b.c->model.n_modes();
            const CMat parent = phi_tilde(b.ops.L_dagger, b.lm.gibbs);
            worst = std::max(worst, spectrum_distance(sector_spectrum(parent, n).even_eigenvalues,
                                                      lindbladian_spectrum(b.ops.L_dagger, Sector::Even)));
        }
        d << "max even-sector eigenvalue distance=" << worst;
        return worst <= 1e-8;
    });

    criterion(5, "parent Hermiticity and gap ordering", 0.0, [&](std::ostream& d) {
        double herm = 0.0, excess = -1e300;
        for (const auto& b : built) {
            const int n = b.c->model.n_modes();
            herm = std::max(herm, (b.parent.total - b.parent.total.adjoint()).norm());
            const double full = spectral_gap(b.parent.total, n, Sector::Full).gap;
            const double even = spectral_gap(b.parent.total, n, Sector::Even).gap;
            excess = std::max(excess, full - even);
        }
        d << "max ||H - H^dag||_F=" << herm << ", max (gap_full - gap_even)=" << excess;
        return herm <= 1e-9 && excess <= 1e-9;
    });

    criterion(6, "free-sector exactness", 120.0, [&](std::ostream& d) {
        double cfree = 0.0;
        for (const auto& b : built) cfree = std::max(cfree, b.parent.C_free.norm());
        const Model rq = random_quadratic_chain(3, 5);
        cfree = std::max(cfree, build_parent_hamiltonian(rq, 1.0).C_free.norm());

        const double C = calibrate_single_mode_constant(1.0);
        double rel = 0.0;
        for (double eps : {0.3, 0.5, 1.0})
            for (double beta : {0.5, 1.0, 2.0}) {
                const auto ph = build_parent_hamiltonian(single_mode_model(eps), beta);
                const double gap = spectral_gap(ph.total, 1, Sector::Full).gap;
                const double pred = C * std::exp(-4.0 * beta * beta * eps * eps) * std::cosh(2.0 * beta * eps);
                rel = std::max(rel, std::abs(gap - pred) / pred);
            }

        double dec = 0.0;
        for (const Model& m : {spinless_chain_model(2, 1.0, 0.3, 0.0), spinless_chain_model(3, 1.0, 0.2, 0.0), rq,
                               fermi_hubbard_model({1}, 0.0, 0.1)})
            for (double beta : {0.5, 1.0, 2.0}) {
                const auto ph = build_parent_hamiltonian(m, beta);
                dec = std::max(dec, (ph.free() - decouple_free_parent(m.h0, beta, C).sum).norm());
            }
        d << "(a) max ||C_free||=" << cfree << "; (b) C=" << C << ", max rel gap error=" << rel
          << "; (c) max decoupling residual=" << dec;
        return cfree <= 1e-8 && rel <= 1e-6 && dec <= 1e-8;
    });

    criterion(7, "mixing bound", 0.0, [&](std::ostream& d) {
        double sv = -1e300, ov = -1e300, rate_margin = 1e300;
        int points = 0;
        for (const auto& b : built) {
            const double g = even_gap(b.ops.L_dagger);
            const auto r = mixing_bound_verify(b.ops, b.lm.gibbs, g, 7, 10, 1e-7);
            sv = std::max(sv, r.max_state_violation);
            ov = std::max(ov, r.max_observable_violation);
            rate_margin = std::min(rate_margin, r.empirical_rate - g);
            points += static_cast<int>(r.times.size()) * r.n_states;
        }
        d << points << " (t, rho0) points, max state violation=" << sv << ", max observable violation=" << ov
          << ", min (empirical rate - gap)=" << rate_margin;
        return sv <= 1e-7 && ov <= 1e-7 && rate_margin >= -1e-6;
    });

    criterion(8, "Gibbs expectation correspondence", 0.0, [&](std::ostream& d) {
        double worst = 0.0;
        std::uint64_t seed = 100;
        for (const auto& b : built)
            worst = std::max(worst, expectation_correspondence_error(b.parent.total, b.lm.gibbs, 20, seed++));
        d << "20 observables per model, max |Tr[sigma X] - <v, X v>|=" << worst;
        return worst <= 1e-7;
    });

    criterion(9, "naive vectorization counterexample", 0.0, [](std::ostream& d) {
        const auto r = naive_vectorization_counterexample();
        d << "superop commutator=" << r.superop_commutator << ", naive anticommutator=" << r.naive_anticommutator
          << ", corrected commutator=" << r.corrected_commutator;
        return r.superop_commutator <= 1e-13 && r.naive_anticommutator <= 1e-13 && r.corrected_commutator <= 1e-13;
    });

    criterion(10, "norm preservation", 0.0, [](std::ostream& d) {
        std::mt19937_64 rng(2024);
        double left = 0.0, right = -1e300, adj = 0.0;
        for (int n : {1, 2, 3})
            for (int par = 0; par < 2; ++par)
                for (int i = 0; i < 100; ++i) {
                    const auto np = norm_preservation_check(random_parity_operator(n, par, rng, false));
                    left = std::max(left, std::abs(np.norm_left - np.norm_A));
                    right = std::max(right, np.norm_right - np.norm_A);
                    adj = std::max(adj, np.adjoint_rule_residual);
                }
        d << "100 per parity for n=1..3, max | ||Phi(L_A)|| - ||A|| |=" << left << ", max ||Phi(R_A)|| - ||A||=" << right
          << ", adjoint rule residual=" << adj;
        return left <= 1e-10 && right <= 1e-10;
    });

    criterion(11, "dual-method agreement", 0.0, [&](std::ostream& d) {
        double diss = 0.0;
        for (const auto& b : built) {
            const KernelBundle k(b.c->beta);
            for (double nu1 : b.lm.grid.nus)
                for (double nu2 : b.lm.grid.nus)
                    diss = std::max(diss, std::abs(dissipator_coefficient_closed(nu1, nu2, k) -
                                                   dissipator_coefficient_quadrature(nu1, nu2, k)));
        }
        double coh = 0.0;
        for (const Model& m : {fermi_hubbard_model({1}, 0.2, 0.1), spinless_chain_model(3, 1.0, 0.3, 0.4)}) {
            const auto lm = prepare_lindblad(m.dense_H(), 1.0);
            for (std::size_t s = 0; s < lm.jumps.size(); ++s)
                coh = std::max(coh, (coherent_term(lm, static_cast<int>(s), CoherentMethod::BohrProduct) -
                                     coherent_term(lm, static_cast<int>(s), CoherentMethod::DoubleQuadrature))
                                        .norm());
        }
        d << "max dissipator coefficient difference=" << diss << ", max coherent term difference=" << coh;
        return diss <= 1e-8 && coh <= 1e-6;
    });

    criterion(12, "stability sweep", 300.0, [](std::ostream& d) {
        const ModelFamily family = [](double U) { return fermi_hubbard_model({1}, U, 0.0); };
        std::vector<double> grid;
        for (int i = 0; i < 7; ++i) grid.push_back(0.05 * i);
        const auto r = gap_vs_U_sweep(family, 1.0, grid);
        double top = 0.0, envelope = 0.0;
        for (const auto& p : r.points) {
            top = std::max(top, std::abs(p.top));
            envelope = std::max(envelope, std::abs(p.gap - r.gap0) - r.slope * p.U);
        }
        d << "gap(0)=" << r.gap0 << ", gap(0.3)=" << r.points.back().gap << ", slope=" << r.slope
          << ", max |top|=" << top << ", nondegenerate=" << r.top_zero_nondegenerate
          << ", ||V||/U spread=" << r.v_over_u_spread;
        return r.fitted && top <= 1e-8 && r.top_zero_nondegenerate && r.continuous && envelope <= 1e-12 &&
               r.v_over_u_spread <= 0.1;
    });

    criterion(13, "decay diagnostics", 0.0, [](std::ostream& d) {
        const auto ql = quasi_locality_profile(spinless_chain_model(5, 1.0, 0.3, 0.0), 1.0, 0, 0.0, {1.0, 2.0, 3.0});
        const auto corr = correlation_decay(spinless_chain_model(5, 1.0, 0.3, 0.1), 1.0, 0, {1, 2, 3, 4});
        bool corr_monotone = true;
        for (std::size_t i = 1; i < corr.samples.size(); ++i)
            corr_monotone = corr_monotone && corr.samples[i].second <= corr.samples[i - 1].second;
        const auto k = kernel_diagnostics(1.0);
        d << "quasi-locality monotone=" << ql.monotone << " rate=" << ql.rate << "; correlations monotone="
          << corr_monotone << " rate=" << corr.rate << "; F1 error=" << k.F1_max_error
          << "; |b1_hat(0)|=" << k.b1_hat_zero;
        return ql.monotone && ql.fitted && ql.rate > 0.0 && corr_monotone && k.F1_max_error <= 1e-7 &&
               k.b1_hat_zero <= 1e-10;
    });

    std::printf("acceptance: %d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
