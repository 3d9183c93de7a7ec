#include "fermigibbs/third_quant.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace fg {

AFermionSpace build_a_fermion_space(const ModeLayout& layout, int max_modes) {
    AFermionSpace s = build_a_fermion_space(layout.n_modes(), max_modes);
    for (int k = 0; k < 4 * s.n_modes; ++k) s.site_map[k] = layout.majorana_site.at(k / 2);
    return s;
}

AFermionSpace build_a_fermion_space(int n_modes, int max_modes) {
    check_capacity(n_modes, max_modes);
    AFermionSpace s;
    s.n_modes = n_modes;
    const int na = 2 * n_modes;
    const Eigen::Index D = Eigen::Index{1} << na;
    s.parity_op = CMat::Zero(D, D);
    for (Eigen::Index a = 0; a < D; ++a) s.parity_op(a, a) = parity(static_cast<Monomial>(a)) ? -1.0 : 1.0;
    // c_j v_alpha = delta_{1, alpha_j} (-1)^{sum_{i<j} alpha_i} v_{alpha xor e_j}
    for (int j = 0; j < na; ++j) {
        CMat c = CMat::Zero(D, D);
        const Monomial below = bit(j) - 1;
        for (Eigen::Index a = 0; a < D; ++a) {
            const auto m = static_cast<Monomial>(a);
            if (!(m & bit(j))) continue;
            c(a ^ bit(j), a) = parity(m & below) ? -1.0 : 1.0;
        }
        const CMat cd_ = c.adjoint();
        s.hat_gammas.push_back(c + cd_);
        s.hat_gammas.push_back(cd(0.0, 1.0) * (cd_ - c));
        s.c.push_back(std::move(c));
    }
    s.site_map.assign(4 * n_modes, 0);
    for (int k = 0; k < 4 * n_modes; ++k) s.site_map[k] = k / 4;
    return s;
}

Eigen::PermutationMatrix<Eigen::Dynamic> a_space_to_chain_order(int n_modes) {
    const int na = 2 * n_modes;
    const Eigen::Index D = Eigen::Index{1} << na;
    Eigen::PermutationMatrix<Eigen::Dynamic> P(D);
    for (Eigen::Index a = 0; a < D; ++a) {
        Eigen::Index r = 0;
        for (int j = 0; j < na; ++j)
            if (a & (Eigen::Index{1} << j)) r |= Eigen::Index{1} << (na - 1 - j);
        P.indices()(a) = static_cast<int>(r);
    }
    return P;
}

CVec phi_map(const CMat& X) { return monomial_vectorize(X); }
CMat phi_inverse(const CVec& v, int n_modes) { return monomial_devectorize(v, n_modes); }

namespace {

// 0 even, 1 odd, -1 mixed (or zero)
int operator_parity(const CMat& W) {
    const CVec v = monomial_vectorize(W);
    double even = 0.0, odd = 0.0;
    for (Eigen::Index a = 0; a < v.size(); ++a) (parity(static_cast<Monomial>(a)) ? odd : even) += std::norm(v(a));
    const double tol = 1e-24 * std::max(1.0, even + odd);
    if (odd <= tol) return 0;
    if (even <= tol) return 1;
    return -1;
}

void apply_parity_on_right(CMat& M) {
    for (Eigen::Index b = 0; b < M.cols(); ++b)
        if (parity(static_cast<Monomial>(b))) M.col(b) *= -1.0;
}

}  // namespace

CMat phi_left(const CMat& W) { return left_mult(W).matrix; }

CMat phi_right(const CMat& W) {
    const int p = operator_parity(W);
    if (p < 0) throw ValidationError("phi_right: operator has mixed parity");
    CMat M = right_mult(W).matrix;
    if (p == 1) apply_parity_on_right(M);
    return M;
}

PhiResult phi_superop_checked(const SuperOperatorMatrix& S) {
    const Eigen::Index N = S.dim();
    const double inv = 1.0 / static_cast<double>(N);
    CMat even_right = CMat::Zero(N, N), odd_right = CMat::Zero(N, N);
    const double drop = 1e-15 * std::max(1.0, S.matrix.cwiseAbs().maxCoeff());
    for (Eigen::Index a = 0; a < N; ++a)
        for (Eigen::Index b = 0; b < N; ++b) {
            const auto ma = static_cast<Monomial>(a), mb = static_cast<Monomial>(b);
            // L_a R_b v_beta = sgn(a, beta) sgn(a xor beta, b) v_{a xor beta xor b}
            cd s = 0.0;
            for (Eigen::Index be = 0; be < N; ++be) {
                const auto mbe = static_cast<Monomial>(be);
                const int sg = monomial_product_sign(ma, mbe) * monomial_product_sign(ma ^ mbe, mb);
                s += static_cast<double>(sg) * S.matrix(a ^ be ^ b, be);
            }
            s *= inv;
            if (std::abs(s) <= drop) continue;
            CMat& target = parity(mb) ? odd_right : even_right;
            for (Eigen::Index be = 0; be < N; ++be) {
                const auto mbe = static_cast<Monomial>(be);
                const int sg = monomial_product_sign(ma, mbe) * monomial_product_sign(ma ^ mbe, mb);
                target(a ^ be ^ b, be) += static_cast<double>(sg) * s;
            }
        }
    PhiResult r;
    r.residual = (even_right + odd_right - S.matrix).norm();
    apply_parity_on_right(odd_right);
    r.matrix = even_right + odd_right;
    return r;
}

CMat phi_superop(const SuperOperatorMatrix& S) {
    PhiResult r = phi_superop_checked(S);
    if (r.residual > 1e-9 * std::max(1.0, S.matrix.norm()))
        throw ValidationError("phi_superop: L/R decomposition residual " + std::to_string(r.residual));
    return std::move(r.matrix);
}

CounterexampleReport naive_vectorization_counterexample() {
    CounterexampleReport r;
    const auto g1 = build_majorana_matrices(1);
    const CMat C1 = left_mult(g1[0]).matrix, C2 = right_mult(g1[1]).matrix;
    r.superop_commutator = (C1 * C2 - C2 * C1).norm();

    // Doubled space: source copy on mode 0, ancilla copy on mode 1.
    const auto g2 = build_majorana_matrices(2);
    r.naive_anticommutator = (g2[0] * g2[3] + g2[3] * g2[0]).norm();
    const CMat P = parity_operator(2);
    const CMat corrected = g2[3] * P;
    r.corrected_commutator = (g2[0] * corrected - corrected * g2[0]).norm();
    Monomial support = 0;
    const MajoranaPolynomial expanded = matrix_to_polynomial(corrected);
    for (const auto& [m, c] : expanded.terms()) support |= m;
    for (int mode = 0; mode < 2; ++mode)
        if (support & (bit(2 * mode) | bit(2 * mode + 1))) ++r.corrected_support_modes;
    r.total_modes = 2;
    return r;
}

SuperOperatorMatrix gamma_superop(const GibbsState& g, double sign) {
    const CMat s = g.power(0.25 * sign);
    return left_mult(s) * right_mult(s);
}

CMat phi_tilde(const SuperOperatorMatrix& S, const GibbsState& g) {
    if (g.sigma_min < 1e-300) throw ValidationError("phi_tilde: sigma_min underflow");
    return phi_superop(gamma_superop(g, 1.0) * S * gamma_superop(g, -1.0));
}

ParentParts parent_parts(const CMat& H, double beta, const LindbladOptions& options) {
    ParentParts p;
    p.lindblad = prepare_lindblad(H, beta, options);
    p.superops = assemble_lindbladian(p.lindblad);
    p.coherent = phi_tilde(p.superops.L_dagger_coherent, p.lindblad.gibbs);
    p.dissipative = phi_tilde(p.superops.L_dagger_dissipative, p.lindblad.gibbs);
    return p;
}

ParentHamiltonian build_parent_hamiltonian(const Model& model, double beta, const LindbladOptions& options) {
    const ParentParts full = parent_parts(model.dense_H(), beta, options);
    const ParentParts free = parent_parts(model.dense_H0(), beta, options);
    ParentHamiltonian ph;
    ph.beta = beta;
    ph.U = model.v.U;
    ph.n_modes = model.n_modes();
    ph.C_free = free.coherent;
    ph.D_free = free.dissipative;
    ph.C_int = full.coherent - free.coherent;
    ph.D_int = full.dissipative - free.dissipative;
    ph.total = full.coherent + full.dissipative;
    const double herm = (ph.total - ph.total.adjoint()).norm();
    if (herm > 1e-6 * std::max(1.0, ph.total.norm()))
        throw ValidationError("build_parent_hamiltonian: Hermiticity residual " + std::to_string(herm));
    return ph;
}

CMat parent_hamiltonian_explicit(const LindbladModel& m) {
    const GibbsState& g = m.gibbs;
    const Eigen::Index N = Eigen::Index{1} << (2 * m.n_modes);
    CMat out = CMat::Zero(N, N);
    auto label_of = [&](double nu) {
        return static_cast<Eigen::Index>(std::find(m.grid.nus.begin(), m.grid.nus.end(), nu) - m.grid.nus.begin());
    };
    for (const auto& gamma : m.gammas) {
        const BohrDecomposition bd = bohr_decompose(gamma, *m.eig, m.grid);
        std::vector<CMat> right_tilde;
        for (const auto& c : bd.components) right_tilde.push_back(imaginary_time_conjugate(c.A, g, -0.25));
        for (const auto& c2 : bd.components) {
            // sigma^{1/4} (A_nu2)^dag sigma^{-1/4} on the left
            const CMat left = imaginary_time_conjugate(c2.A.adjoint(), g, 0.25);
            CMat right = CMat::Zero(gamma.rows(), gamma.cols());
            for (std::size_t i = 0; i < bd.components.size(); ++i)
                right += m.coeffs.g(label_of(bd.components[i].nu), label_of(c2.nu)) * right_tilde[i];
            out += phi_left(left) * phi_right(right);
        }
    }
    const CMat Kl = imaginary_time_conjugate(m.K, g, 0.25);
    const CMat Kr = imaginary_time_conjugate(m.K, g, -0.25);
    out -= 0.5 * (phi_left(Kl) + phi_right(Kr));
    const CMat Bl = imaginary_time_conjugate(m.B, g, 0.25);
    const CMat Br = imaginary_time_conjugate(m.B, g, -0.25);
    out += cd(0.0, 1.0) * (phi_left(Bl) - phi_right(Br));
    return out;
}

CMat single_mode_closed_form(const std::array<CMat, 4>& z, double eps, double beta, double C) {
    const cd I(0.0, 1.0);
    const CMat d1 = 0.5 * (z[0] + I * z[2]);
    const CMat d2 = 0.5 * (z[1] + I * z[3]);
    const double sh = std::sinh(2.0 * beta * eps), ch = std::cosh(2.0 * beta * eps);
    const CMat id = CMat::Identity(z[0].rows(), z[0].cols());
    const CMat body = -I * d1.adjoint() * d2 + I * d2.adjoint() * d1 - sh * d1.adjoint() * d1 +
                      sh * d2.adjoint() * d2 - ch * id;
    return C * std::exp(-4.0 * beta * beta * eps * eps) * body;
}

CMat single_mode_closed_form(double eps, double beta, double C) {
    const AFermionSpace s = build_a_fermion_space(1);
    return single_mode_closed_form({s.hat_gammas[0], s.hat_gammas[1], s.hat_gammas[2], s.hat_gammas[3]}, eps, beta,
                                   C);
}

double calibrate_single_mode_constant(double beta) {
    const ParentHamiltonian ph = build_parent_hamiltonian(single_mode_model(0.0), beta);
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (ph.total + ph.total.adjoint()), Eigen::EigenvaluesOnly);
    const RVec& e = es.eigenvalues();
    return e(e.size() - 1) - e(e.size() - 2);
}

FreeDecoupling decouple_free_parent(const QuadraticHamiltonian& H0, double beta, double C) {
    FreeDecoupling fd;
    fd.canonical = canonical_form(H0);
    const int n = H0.layout.n_modes();
    const AFermionSpace s = build_a_fermion_space(n);
    const RMat& Q = fd.canonical.Q;
    // a-Majoranas of zeta_m = sum_j Q_jm gamma_j: left copy sum_j Q_jm hat_{2j}, right copy with hat_{2j+1}.
    auto rotated = [&](int m, int branch) {
        CMat z = CMat::Zero(s.dim(), s.dim());
        for (int j = 0; j < 2 * n; ++j) z += Q(j, m) * s.hat_gammas[2 * j + branch];
        return z;
    };
    fd.sum = CMat::Zero(s.dim(), s.dim());
    for (int k = 0; k < n; ++k) {
        const std::array<CMat, 4> z{rotated(2 * k, 0), rotated(2 * k, 1), rotated(2 * k + 1, 0),
                                    rotated(2 * k + 1, 1)};
        fd.blocks.push_back(single_mode_closed_form(z, 0.5 * fd.canonical.epsilons(k), beta, C));
        fd.sum += fd.blocks.back();
    }
    return fd;
}

NormPreservation norm_preservation_check(const CMat& A) {
    const int p = operator_parity(A);
    if (p < 0) throw ValidationError("norm_preservation_check: operator has mixed parity");
    NormPreservation r;
    r.norm_A = operator_norm(A);
    r.norm_left = operator_norm(phi_left(A));
    const CMat R = phi_right(A);
    r.norm_right = operator_norm(R);
    const CMat Rd = phi_right(A.adjoint());
    r.adjoint_rule_residual = p == 1 ? (Rd + R.adjoint()).norm() : (Rd - R.adjoint()).norm();
    return r;
}

CVec parent_top_eigenvector(const CMat& parent) {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (parent + parent.adjoint()));
    const RVec& e = es.eigenvalues();
    const Eigen::Index D = e.size();
    const double range = std::max(e(D - 1) - e(0), 1e-300);
    if (D > 1 && e(D - 1) - e(D - 2) < 1e-9 * range)
        throw ValidationError("parent_top_eigenvector: top eigenvalue is degenerate");
    CVec v = es.eigenvectors().col(D - 1);
    if (std::abs(v(0)) > 0.0) v *= std::conj(v(0)) / std::abs(v(0));
    return v;
}

cd expectation_via_parent(const CMat& X, const CVec& v) { return v.dot(phi_left(X) * v); }

SectorSpectrum sector_spectrum(const CMat& parent, int n_modes) {
    const CMat Hh = 0.5 * (parent + parent.adjoint());
    SectorSpectrum s;
    Eigen::SelfAdjointEigenSolver<CMat> ee(sector_block(Hh, n_modes, 0), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<CMat> eo(sector_block(Hh, n_modes, 1), Eigen::EigenvaluesOnly);
    s.even_eigenvalues = ee.eigenvalues();
    s.odd_eigenvalues = eo.eigenvalues();
    const Eigen::Index D = s.even_eigenvalues.size();
    s.top = s.even_eigenvalues(D - 1);
    s.gap_even = D > 1 ? s.top - s.even_eigenvalues(D - 2) : 0.0;
    return s;
}

}  // namespace fg
