#include "fermigibbs/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

namespace fg {

const char* sector_name(Sector s) {
    switch (s) {
        case Sector::Full: return "full";
        case Sector::Even: return "even";
        case Sector::Odd: return "odd";
    }
    return "?";
}

GapReport gap_from_spectrum(const RVec& eigenvalues, Sector sector) {
    GapReport r;
    r.sector = sector;
    if (eigenvalues.size() == 0) return r;
    RVec e = eigenvalues;
    std::sort(e.data(), e.data() + e.size());
    const Eigen::Index D = e.size();
    r.top = e(D - 1);
    r.second = D > 1 ? e(D - 2) : e(D - 1);
    r.gap = r.top - r.second;
    const double range = e(D - 1) - e(0);
    r.degenerate = D > 1 && r.gap < 1e-9 * range;
    return r;
}

GapReport spectral_gap(const CMat& H, int n_modes, Sector sector) {
    const CMat Hh = 0.5 * (H + H.adjoint());
    const CMat block = sector == Sector::Full ? Hh : sector_block(Hh, n_modes, sector == Sector::Even ? 0 : 1);
    Eigen::SelfAdjointEigenSolver<CMat> es(block, Eigen::EigenvaluesOnly);
    return gap_from_spectrum(es.eigenvalues(), sector);
}

RVec lindbladian_spectrum(const SuperOperatorMatrix& L_dagger, Sector sector) {
    const CMat block = sector == Sector::Full
                           ? L_dagger.matrix
                           : sector_block(L_dagger.matrix, L_dagger.n_modes, sector == Sector::Even ? 0 : 1);
    Eigen::ComplexEigenSolver<CMat> es(block, false);
    return es.eigenvalues().real();
}

GapReport lindbladian_gap(const SuperOperatorMatrix& L_dagger, Sector sector) {
    return gap_from_spectrum(lindbladian_spectrum(L_dagger, sector), sector);
}

DecayFit fit_exponential(std::vector<std::pair<double, double>> samples, double x_min) {
    DecayFit fit;
    std::sort(samples.begin(), samples.end());
    fit.samples = samples;
    std::vector<std::pair<double, double>> used;
    for (const auto& s : samples)
        if (s.first > x_min) used.push_back(s);
    fit.monotone = true;
    for (std::size_t i = 1; i < used.size(); ++i)
        if (used[i].second > used[i - 1].second * (1.0 + 1e-12)) fit.monotone = false;
    std::vector<std::pair<double, double>> logs;
    for (const auto& s : used)
        if (s.second >= 1e-13) logs.push_back({s.first, std::log(s.second)});
    if (logs.size() < 2) {
        fit.note = used.empty() || logs.empty() ? "below noise floor" : "fewer than 2 usable samples";
        return fit;
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(logs.size()), 2);
    Eigen::VectorXd y(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = logs[i].first;
        y(i) = logs[i].second;
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    fit.fitted = true;
    fit.prefactor = std::exp(c(0));
    fit.rate = -c(1);
    fit.residual = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(A.rows()));
    return fit;
}

int worker_count() {
    if (const char* env = std::getenv("FERMIGIBBS_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

namespace {

template <typename Job>
void parallel_for(std::size_t count, int workers, Job job) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

SweepResult gap_vs_U_sweep(const ModelFamily& family, double beta, const std::vector<double>& U_grid,
                           const LindbladOptions& options, bool with_mixing, int workers) {
    if (U_grid.empty()) throw ValidationError("gap_vs_U_sweep: empty U grid");
    SweepResult res;
    res.points.resize(U_grid.size());
    parallel_for(U_grid.size(), workers > 0 ? workers : worker_count(), [&](std::size_t i) {
        const Model model = family(U_grid[i]);
        const int n = model.n_modes();
        const ParentParts full = parent_parts(model.dense_H(), beta, options);
        const ParentParts free = parent_parts(model.dense_H0(), beta, options);
        const CMat total = full.coherent + full.dissipative;
        const CMat free_total = free.coherent + free.dissipative;
        SweepPoint& p = res.points[i];
        p.beta = beta;
        p.U = U_grid[i];
        const GapReport g = spectral_gap(total, n, Sector::Full);
        p.top = g.top;
        p.gap = g.gap;
        p.degenerate = g.degenerate;
        p.v_parent_norm = operator_norm(total - free_total);
        p.free_gap = spectral_gap(free_total, n, Sector::Full).gap;
        if (with_mixing) p.mixing_time = mixing_time_empirical(full.superops.L, full.lindblad.gibbs, 0.1).t_mix;
    });

    for (const auto& p : res.points)
        if (p.degenerate || std::abs(p.top) > 1e-8) res.top_zero_nondegenerate = false;
    std::vector<double> ratios;
    for (const auto& p : res.points)
        if (p.U > 0.0) ratios.push_back(p.v_parent_norm / p.U);
    if (!ratios.empty()) {
        const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
        double mean = 0.0;
        for (double r : ratios) mean += r;
        mean /= static_cast<double>(ratios.size());
        res.v_over_u_spread = mean > 0.0 ? (*mx - *mn) / mean : 0.0;
    }
    if (res.points.size() >= 2) {
        auto pts = res.points;
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.U < b.U; });
        res.gap0 = pts.front().gap;
        const double U0 = pts.front().U;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].U > U0) res.slope = std::max(res.slope, std::abs(pts[i].gap - res.gap0) / (pts[i].U - U0));
        res.fitted = true;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double step = std::abs(pts[i].gap - pts[i - 1].gap);
            double neighbour = 0.0;
            if (i >= 2) neighbour = std::max(neighbour, std::abs(pts[i - 1].gap - pts[i - 2].gap));
            if (i + 1 < pts.size()) neighbour = std::max(neighbour, std::abs(pts[i + 1].gap - pts[i].gap));
            if (pts.size() >= 3 && step > 5.0 * neighbour + 1e-10) res.continuous = false;
        }
    } else {
        res.gap0 = res.points.front().gap;
    }
    return res;
}

namespace {

std::vector<double> log_times(double t0, double t1, int count) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (count - 1));
    return t;
}

double kms_norm(const CMat& Y, const GibbsState& g) { return std::sqrt(std::max(0.0, kms_inner(Y, Y, g).real())); }

}  // namespace

MixingReport mixing_bound_verify(const LindbladSuperops& ops, const GibbsState& g, double gap, std::uint64_t seed,
                                 int n_random, double slack) {
    MixingReport r;
    r.gap = gap;
    r.sigma_min = g.sigma_min;
    const int n = ops.L.n_modes;
    const auto states = even_initial_states(n, n_random, seed);
    r.n_states = static_cast<int>(states.size());
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<CMat> observables;
    for (int i = 0; i < 10; ++i) {
        CMat Y = random_parity_operator(n, 0, rng);
        Y -= (g.sigma * Y).trace() * CMat::Identity(Y.rows(), Y.cols());
        Y /= kms_norm(Y, g);
        observables.push_back(Y);
    }
    r.n_observables = static_cast<int>(observables.size());
    r.times = log_times(1e-2 / gap, 20.0 / gap, 20);
    const double prefactor = 1.0 / std::sqrt(g.sigma_min);
    r.max_state_violation = -std::numeric_limits<double>::infinity();
    r.max_observable_violation = -std::numeric_limits<double>::infinity();
    for (double t : r.times) {
        const double envelope = std::exp(-gap * t);
        const CMat P = propagator(ops.L, t);
        for (const auto& rho : states) {
            const CMat rt = monomial_devectorize(P * monomial_vectorize(rho), n);
            r.max_state_violation = std::max(r.max_state_violation, trace_distance(rt, g.sigma) - envelope * prefactor);
        }
        const CMat Pd = propagator(ops.L_dagger, t);
        for (const auto& Y : observables) {
            const CMat Yt = monomial_devectorize(Pd * monomial_vectorize(Y), n);
            r.max_observable_violation = std::max(r.max_observable_violation, kms_norm(Yt, g) - envelope);
        }
    }
    r.bound_holds = r.max_state_violation <= slack && r.max_observable_violation <= slack;
    r.empirical_rate = empirical_mixing_rate(ops.L, g, states, gap);
    r.rate_ok = r.empirical_rate >= gap - 1e-6;
    return r;
}

double empirical_mixing_rate(const SuperOperatorMatrix& L, const GibbsState& g, const std::vector<CMat>& states,
                             double gap) {
    const int n = L.n_modes;
    const auto even = parity_indices(n, 0);
    const CMat Le = L.matrix(even, even);
    Eigen::ComplexEigenSolver<CMat> es(Le);
    const CVec& lam = es.eigenvalues();
    const CMat& V = es.eigenvectors();
    const Eigen::PartialPivLU<CMat> lu(V);
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    const CVec sig = monomial_vectorize(g.sigma);
    std::vector<CVec> coeffs;
    for (const auto& rho : states) {
        const CVec dev = (monomial_vectorize(rho) - sig)(even);
        CVec c = lu.solve(dev);
        for (Eigen::Index k = 0; k < c.size(); ++k)
            if (std::abs(lam(k)) < 1e-9 * scale) c(k) = 0.0;
        coeffs.push_back(c);
    }
    const Eigen::Index nm = L.dim();
    auto worst = [&](double t) {
        double w = 0.0;
        for (const auto& c : coeffs) {
            const CVec de = V * (lam * t).array().exp().matrix().cwiseProduct(c);
            CVec full = CVec::Zero(nm);
            full(even) = de;
            w = std::max(w, trace_distance(monomial_devectorize(full, n), CMat::Zero(g.sigma.rows(), g.sigma.cols())));
        }
        return w;
    };
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 5; ++i) {
        const double t = (30.0 + 2.5 * i) / gap;
        samples.push_back({t, worst(t)});
    }
    std::vector<std::pair<double, double>> logs;
    for (const auto& s : samples)
        if (s.second > 0.0) logs.push_back({s.first, std::log(s.second)});
    if (logs.size() < 2) return std::numeric_limits<double>::infinity();
    // Least-squares slope of log distance.
    double mt = 0.0, my = 0.0;
    for (const auto& s : logs) {
        mt += s.first;
        my += s.second;
    }
    mt /= static_cast<double>(logs.size());
    my /= static_cast<double>(logs.size());
    double num = 0.0, den = 0.0;
    for (const auto& s : logs) {
        num += (s.first - mt) * (s.second - my);
        den += (s.first - mt) * (s.first - mt);
    }
    return -num / den;
}

DecayFit correlation_decay(const Model& model, double beta, int x_mode, const std::vector<int>& y_modes) {
    const int n = model.n_modes();
    const GibbsState g = gibbs_state(model.dense_H(), beta);
    const CMat X = polynomial_to_matrix(number_operator(n, x_mode));
    const double ex = (g.sigma * X).trace().real();
    std::vector<std::pair<double, double>> samples;
    const ModeLayout& lay = model.layout;
    for (int y : y_modes) {
        const CMat Y = polynomial_to_matrix(number_operator(n, y));
        const cd c = (g.sigma * X * Y).trace() - ex * (g.sigma * Y).trace();
        samples.push_back({lay.distance(lay.majorana_site[2 * x_mode], lay.majorana_site[2 * y]), std::abs(c)});
    }
    DecayFit fit = fit_exponential(samples, 0.0);
    bool any = false;
    for (const auto& s : samples)
        if (s.first > 0.0 && s.second >= 1e-14) any = true;
    if (!any) {
        fit.fitted = false;
        fit.note = "below noise floor";
    }
    return fit;
}

namespace {

CMat tilded_jump(const CMat& H, double beta, const CMat& gamma, double omega) {
    const auto eig = std::make_shared<const EigenDecomposition>(eigen_decompose(H));
    const GibbsState g = gibbs_state(eig, beta);
    const KernelBundle k(beta);
    const CMat A = jump_operator(bohr_decompose(gamma, *eig), omega, k);
    return imaginary_time_conjugate(A, g, 0.25);
}

}  // namespace

DecayFit quasi_locality_profile(const Model& model, double beta, int jump, double omega,
                                const std::vector<double>& radii) {
    if (radii.size() < 2) throw ValidationError("quasi_locality_profile: need at least 2 radii");
    const int n = model.n_modes();
    const CMat gamma = build_majorana_matrices(n).at(jump);
    const CMat full = tilded_jump(model.dense_H(), beta, gamma, omega);
    const int centre = model.layout.majorana_site.at(jump);
    std::vector<std::pair<double, double>> samples;
    for (double r : radii) {
        const Model local = model.restrict_to_ball(centre, r);
        const CMat loc = tilded_jump(local.dense_H(), beta, gamma, omega);
        samples.push_back({r, operator_norm(full - loc)});
    }
    return fit_exponential(samples);
}

KernelDiagnostics kernel_diagnostics(double beta) {
    KernelDiagnostics d;
    d.beta = beta;
    const KernelBundle k(beta);
    const std::vector<double> ts{-2.0, -0.7, 0.0, 0.4, 1.3, 3.0};
    const std::vector<double> ws{-1.0 / beta, 0.0, 0.5 / beta, 2.0 / beta};
    for (double t : ts)
        for (double w : ws)
            d.F1_max_error = std::max(d.F1_max_error,
                                      std::abs(F1_check_closed(t * beta, w, k) - F1_check_quadrature(t * beta, w, k)));
    double lo = 1e300, hi = 0.0;
    for (double w : ws) {
        const double m = std::abs(F1_check_quadrature(0.0, w, k)) * std::exp(beta * w / 4.0);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    d.F1_modulus_spread = hi - lo;
    d.b1_hat_zero = std::abs(KernelBundle::b1_hat(0.0));
    d.eta_at_minus_inv_beta = k.eta(-1.0 / beta);
    d.f_hat_zero = k.f_hat(0.0);

    // Largest |F2_check| on circles of growing radius.
    std::vector<std::pair<double, double>> samples;
    const int n_angles = 12;
    for (double r : {1.0, 2.0, 3.0, 4.0}) {
        double m = 0.0;
        for (int a = 0; a < n_angles; ++a) {
            const double th = 2.0 * M_PI * a / n_angles;
            m = std::max(m, std::abs(F2_check(r * std::cos(th), r * std::sin(th))));
        }
        samples.push_back({r, m});
    }
    d.F2_radial = fit_exponential(samples);
    d.F2_ratio_4_2 = samples[3].second / samples[1].second;
    d.F2_envelope_4_2 = std::exp(-2.0 * d.F2_radial.rate);
    return d;
}

double anticommutation_residual(const std::vector<CMat>& gammas) {
    double r = 0.0;
    for (std::size_t j = 0; j < gammas.size(); ++j)
        for (std::size_t k = j; k < gammas.size(); ++k) {
            CMat a = gammas[j] * gammas[k] + gammas[k] * gammas[j];
            if (j == k) a -= 2.0 * CMat::Identity(a.rows(), a.cols());
            r = std::max(r, a.cwiseAbs().maxCoeff());
        }
    return r;
}

double spectrum_distance(RVec a, RVec b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

double top_eigenvector_overlap(const CMat& parent, const GibbsState& g) {
    const int n = modes_from_dim(g.sigma.rows());
    const CVec v = parent_top_eigenvector(parent);
    const CVec w = std::pow(2.0, 0.5 * n) * phi_map(g.power(0.5));
    return std::abs(v.dot(w));
}

CMat random_parity_operator(int n_modes, int par, std::mt19937_64& rng, bool hermitian) {
    const Eigen::Index nm = Eigen::Index{1} << (2 * n_modes);
    std::normal_distribution<double> normal;
    CVec c = CVec::Zero(nm);
    for (Eigen::Index a = 0; a < nm; ++a)
        if (parity(static_cast<Monomial>(a)) == par) c(a) = cd(normal(rng), normal(rng));
    const CMat X = monomial_devectorize(c, n_modes);
    return hermitian ? CMat(0.5 * (X + X.adjoint())) : X;
}

double expectation_correspondence_error(const CMat& parent, const GibbsState& g, int count, std::uint64_t seed) {
    const int n = modes_from_dim(g.sigma.rows());
    const CVec v = parent_top_eigenvector(parent);
    std::mt19937_64 rng(seed);
    double err = 0.0;
    for (int i = 0; i < count; ++i) {
        const CMat X = random_parity_operator(n, 0, rng);
        err = std::max(err, std::abs((g.sigma * X).trace() - expectation_via_parent(X, v)));
    }
    return err;
}

}  // namespace fg
