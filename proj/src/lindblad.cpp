#include "fermigibbs/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "fermigibbs/quadrature.hpp"

namespace fg {

DissipatorCoefficients dissipator_coefficients(const std::vector<double>& nus, const KernelBundle& k,
                                               DissipatorMethod method) {
    DissipatorCoefficients out;
    out.nus = nus;
    const auto F = static_cast<Eigen::Index>(nus.size());
    out.g.resize(F, F);
    for (Eigen::Index a = 0; a < F; ++a)
        for (Eigen::Index b = a; b < F; ++b) {
            const double v = method == DissipatorMethod::ClosedForm
                                 ? dissipator_coefficient_closed(nus[a], nus[b], k)
                                 : dissipator_coefficient_quadrature(nus[a], nus[b], k);
            out.g(a, b) = v;
            out.g(b, a) = v;
        }
    return out;
}

CMat jump_operator(const BohrDecomposition& bohr, double omega, const KernelBundle& k) {
    CMat A = CMat::Zero(bohr.components.front().A.rows(), bohr.components.front().A.cols());
    for (const auto& c : bohr.components) A += k.f_hat(omega - c.nu) * c.A;
    return A;
}

namespace {

constexpr int kCoherentGridPoints = 801;
constexpr double kCoherentGridHalfWidth = 6.0;

// b1 sampled on the time grid of the double-quadrature oracle.
const std::vector<double>& b1_on_grid() {
    static const std::vector<double> values = [] {
        std::vector<double> v(kCoherentGridPoints);
        const double h = 2.0 * kCoherentGridHalfWidth / (kCoherentGridPoints - 1);
        for (int i = 0; i < kCoherentGridPoints; ++i) v[i] = KernelBundle::b1(-kCoherentGridHalfWidth + i * h);
        return v;
    }();
    return values;
}

// Trapezoid sum of w(t) e^{i k t} on the oracle grid.
template <typename W>
cd grid_transform(const W& w, double kfreq) {
    const double h = 2.0 * kCoherentGridHalfWidth / (kCoherentGridPoints - 1);
    cd s = 0.0;
    for (int i = 0; i < kCoherentGridPoints; ++i) {
        const double t = -kCoherentGridHalfWidth + i * h;
        const double wt = (i == 0 || i == kCoherentGridPoints - 1) ? 0.5 : 1.0;
        s += wt * w(i, t) * std::exp(cd(0.0, kfreq * t));
    }
    return s * h;
}

// sum_b coef(a, b, c) X_ab X_bc for every (a, c)
template <typename Coef>
CMat bohr_product(const CMat& X, Coef coef) {
    const Eigen::Index D = X.rows();
    CMat out = CMat::Zero(D, D);
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = 0; b < D; ++b) {
            if (X(a, b) == cd(0.0)) continue;
            for (Eigen::Index c = 0; c < D; ++c) {
                if (X(b, c) == cd(0.0)) continue;
                out(a, c) += coef(a, b, c) * X(a, b) * X(b, c);
            }
        }
    return out;
}

}  // namespace

LindbladModel prepare_lindblad(const CMat& H, double beta, const LindbladOptions& options) {
    LindbladModel m;
    m.n_modes = modes_from_dim(H.rows());
    check_capacity(m.n_modes);
    m.beta = beta;
    m.kernels = KernelBundle(beta);
    m.kernels.eta_is_one = options.eta_is_one;
    m.options = options;
    m.eig = std::make_shared<const EigenDecomposition>(eigen_decompose(H));
    m.gibbs = gibbs_state(m.eig, beta);
    m.grid = bohr_grid(*m.eig);
    m.coeffs = dissipator_coefficients(m.grid.nus, m.kernels, options.dissipator);
    m.jumps = options.jumps;
    if (m.jumps.empty())
        for (int k = 0; k < 2 * m.n_modes; ++k) m.jumps.push_back(k);
    const auto all = build_majorana_matrices(m.n_modes);
    for (int j : m.jumps) {
        if (j < 0 || j >= 2 * m.n_modes) throw ValidationError("jump index out of range");
        m.gammas.push_back(all[j]);
        m.gammas_eig.push_back(m.eig->U.adjoint() * all[j] * m.eig->U);
    }
    const auto& L = m.grid.label;
    const auto& G = m.coeffs.g;
    CMat K_eig = CMat::Zero(H.rows(), H.cols());
    for (const auto& X : m.gammas_eig)
        K_eig += bohr_product(X, [&](auto a, auto b, auto c) { return cd(G(L(b, a), L(b, c))); });
    m.K = m.eig->U * K_eig * m.eig->U.adjoint();
    m.B = CMat::Zero(H.rows(), H.cols());
    for (std::size_t s = 0; s < m.jumps.size(); ++s)
        m.B += coherent_term(m, static_cast<int>(s), options.coherent);
    m.B *= options.coherent_scale;
    return m;
}

CMat coherent_term(const LindbladModel& m, int slot, CoherentMethod method) {
    const CMat& X = m.gammas_eig.at(slot);
    const auto& U = m.eig->U;
    if (method == CoherentMethod::BohrProduct) {
        const auto& nus = m.grid.nus;
        const auto F = static_cast<Eigen::Index>(nus.size());
        CMat table(F, F);
        for (Eigen::Index p = 0; p < F; ++p)
            for (Eigen::Index q = 0; q < F; ++q) table(p, q) = coherent_coefficient(nus[p], nus[q], m.beta);
        const auto& L = m.grid.label;
        const CMat Bt = bohr_product(X, [&](auto a, auto b, auto c) { return table(L(a, b), L(b, c)); });
        return U * Bt * U.adjoint();
    }
    // Time-domain oracle: integrate b1(t) b2(t') gamma(beta(t'-t)) gamma(-beta(t+t')) on the
    // (t, t') grid.  In the eigenbasis the integrand of each matrix element is a product of a
    // t-factor and a t'-factor, so the 2-D trapezoid sum factorizes exactly.
    const auto& b1 = b1_on_grid();
    const auto& E = m.eig->E;
    const double beta = m.beta;
    const CMat Bt = bohr_product(X, [&](auto a, auto b, auto c) {
        const double nu = E(a) - E(b);
        const double nu2 = E(b) - E(c);
        const cd I1 = grid_transform([&](int i, double) { return cd(b1[i]); }, -beta * (nu + nu2));
        const cd I2 = grid_transform([](int, double t) { return KernelBundle::b2(t); }, beta * (nu - nu2));
        return I1 * I2;
    });
    return U * Bt * U.adjoint();
}

CMat coherent_term_balanced(const LindbladModel& m) {
    const auto& nus = m.grid.nus;
    const auto& L = m.grid.label;
    CMat Bt = CMat::Zero(m.eig->dim(), m.eig->dim());
    for (const auto& X : m.gammas_eig)
        Bt += bohr_product(X, [&](auto a, auto b, auto c) {
            return coherent_coefficient_balanced(nus[L(a, b)], nus[L(b, c)], m.kernels);
        });
    return m.eig->U * Bt * m.eig->U.adjoint();
}

LindbladSuperops assemble_lindbladian(const LindbladModel& m) {
    const auto& U = m.eig->U;
    const Eigen::Index D = U.rows();
    const Eigen::Index N = D * D;
    const CMat Bt = U.adjoint() * m.B * U;
    const CMat Kt = U.adjoint() * m.K * U;
    const auto& L = m.grid.label;
    const auto& G = m.coeffs.g;
    CMat Lc = CMat::Zero(N, N), Ld = CMat::Zero(N, N);
    // Column-stacked matrix units: (a, c) -> a + D c.
    for (Eigen::Index c = 0; c < D; ++c)
        for (Eigen::Index a = 0; a < D; ++a) {
            const Eigen::Index r = a + D * c;
            for (Eigen::Index b = 0; b < D; ++b) {
                // A X with X = |b><c|, and X A with X = |a><b|
                Lc(r, b + D * c) += cd(0.0, -1.0) * Bt(a, b);
                Lc(r, a + D * b) += cd(0.0, 1.0) * Bt(b, c);
                Ld(r, b + D * c) += -0.5 * Kt(a, b);
                Ld(r, a + D * b) += -0.5 * Kt(b, c);
            }
            for (Eigen::Index d = 0; d < D; ++d)
                for (Eigen::Index b = 0; b < D; ++b) {
                    cd s = 0.0;
                    for (const auto& X : m.gammas_eig) s += G(L(c, d), L(a, b)) * X(a, b) * std::conj(X(c, d));
                    Ld(r, b + D * d) += s;
                }
        }
    const CMat W = eigenbasis_to_monomial(U);
    const CMat Winv = static_cast<double>(D) * W.adjoint();
    LindbladSuperops out;
    const SuperOperatorMatrix C{W * Lc * Winv, m.n_modes};
    const SuperOperatorMatrix Dm{W * Ld * Winv, m.n_modes};
    out.L = C + Dm;
    out.L_dagger = out.L.adjoint();
    out.L_dagger_coherent = C.adjoint();
    out.L_dagger_dissipative = Dm.adjoint();
    return out;
}

SuperOperatorMatrix heisenberg_generator_explicit(const LindbladModel& m) {
    SuperOperatorMatrix S = cd(0.0, 1.0) * (left_mult(m.B) - right_mult(m.B));
    S = S - cd(0.5) * (left_mult(m.K) + right_mult(m.K));
    auto label_of = [&](double nu) {
        const auto it = std::find(m.grid.nus.begin(), m.grid.nus.end(), nu);
        return static_cast<Eigen::Index>(it - m.grid.nus.begin());
    };
    for (const auto& gamma : m.gammas) {
        const BohrDecomposition bd = bohr_decompose(gamma, *m.eig, m.grid);
        for (const auto& c2 : bd.components) {
            CMat C = CMat::Zero(gamma.rows(), gamma.cols());
            for (const auto& c1 : bd.components) C += m.coeffs.g(label_of(c1.nu), label_of(c2.nu)) * c1.A;
            // sum g(nu1, nu2) (A_nu2)^dag X A_nu1
            S = S + left_mult(c2.A.adjoint()) * right_mult(C);
        }
    }
    return S;
}

double kms_dbc_residual(const SuperOperatorMatrix& Ld, const GibbsState& g) {
    const CMat s = g.power(0.5);
    const CMat si = g.power(-0.5);
    const CMat M = (left_mult(s) * right_mult(s)).matrix;
    const CMat Minv = (left_mult(si) * right_mult(si)).matrix;
    return (Ld.matrix - Minv * Ld.matrix.adjoint() * M).norm();
}

CMat propagator(const SuperOperatorMatrix& L, double t) { return (t * L.matrix).exp(); }

CMat evolve(const SuperOperatorMatrix& L, const CMat& rho0, double t) {
    const CVec v = monomial_vectorize(rho0);
    double odd = 0.0;
    for (Eigen::Index a = 0; a < v.size(); ++a)
        if (parity(static_cast<Monomial>(a))) odd += std::norm(v(a));
    if (std::sqrt(odd) > 1e-10) throw ValidationError("evolve: initial state has an odd-parity component");
    return monomial_devectorize(propagator(L, t) * v, L.n_modes);
}

double trace_distance(const CMat& a, const CMat& b) {
    const CMat d = a - b;
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

std::vector<CMat> even_initial_states(int n_modes, int n_random, std::uint64_t seed) {
    const CMat P = parity_operator(n_modes);
    const Eigen::Index D = P.rows();
    std::vector<Eigen::Index> even;
    for (Eigen::Index x = 0; x < D; ++x)
        if (P(x, x).real() > 0.5) even.push_back(x);
    std::vector<CMat> states;
    for (auto x : even) {
        CMat r = CMat::Zero(D, D);
        r(x, x) = 1.0;
        states.push_back(r);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n_random; ++i) {
        CVec psi = CVec::Zero(D);
        for (auto x : even) psi(x) = cd(normal(rng), normal(rng));
        psi.normalize();
        states.push_back(psi * psi.adjoint());
    }
    return states;
}

MixingEstimate mixing_time_empirical(const SuperOperatorMatrix& L, const GibbsState& g, double epsilon,
                                     std::uint64_t seed, int n_random, double t_max) {
    MixingEstimate est;
    const auto states = even_initial_states(L.n_modes, n_random, seed);
    std::vector<CVec> vs;
    for (const auto& s : states) vs.push_back(monomial_vectorize(s));
    auto worst = [&](double t) {
        const CMat P = propagator(L, t);
        double w = 0.0;
        for (const auto& v : vs) w = std::max(w, trace_distance(monomial_devectorize(P * v, L.n_modes), g.sigma));
        return w;
    };
    est.worst_distance = worst(0.0);
    if (est.worst_distance <= epsilon) {
        est.converged = true;
        return est;
    }
    double lo = 0.0, hi = 1.0;
    while (worst(hi) > epsilon) {
        lo = hi;
        hi *= 2.0;
        if (hi > t_max) {
            est.t_mix = t_max;
            est.worst_distance = worst(t_max);
            return est;
        }
    }
    for (int it = 0; it < 50 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (worst(mid) > epsilon ? lo : hi) = mid;
    }
    est.t_mix = hi;
    est.converged = true;
    est.worst_distance = worst(hi);
    return est;
}

}  // namespace fg
