#include "fermigibbs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fg {

MajoranaPolynomial QuadraticHamiltonian::polynomial() const {
    const int n = n_modes();
    MajoranaPolynomial p(n);
    if (offset != 0.0) p.add(0, offset);
    for (int j = 0; j < 2 * n; ++j)
        for (int k = j + 1; k < 2 * n; ++k) {
            const cd c = h(j, k) - h(k, j);
            if (c != cd(0.0)) p.add(bit(j) | bit(k), c);
        }
    return p;
}

CMat QuadraticHamiltonian::dense() const { return polynomial_to_matrix(polynomial()); }

QuadraticHamiltonian build_quadratic(const CMat& h, const ModeLayout& layout, double offset) {
    layout.validate();
    check_capacity(layout.n_modes());
    const int m = layout.n_majoranas();
    if (h.rows() != m || h.cols() != m)
        throw ValidationError("build_quadratic: h must be " + std::to_string(m) + "x" + std::to_string(m));
    std::ostringstream err;
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) err << "h is not Hermitian; ";
    if (h.real().cwiseAbs().maxCoeff() > 1e-12) err << "h has real parts above 1e-12; ";
    if (h.diagonal().cwiseAbs().maxCoeff() > 1e-12) err << "h has a nonzero diagonal; ";
    std::vector<std::pair<int, int>> bad;
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            if (std::abs(h(j, k)) > 1e-12 && layout.majorana_distance(j, k) > layout.r0 + 1e-12)
                bad.emplace_back(j, k);
    if (!bad.empty()) {
        err << "locality violated at (j,k) =";
        for (auto [j, k] : bad) err << " (" << j << "," << k << ")";
        err << "; ";
    }
    if (!err.str().empty()) throw ValidationError("build_quadratic: " + err.str());
    QuadraticHamiltonian H0;
    H0.h = CMat(h.imag().cast<cd>() * cd(0.0, 1.0));
    H0.layout = layout;
    H0.offset = offset;
    return H0;
}

QuadraticHamiltonian quadratic_from_polynomial(const MajoranaPolynomial& p, const ModeLayout& layout) {
    const int m = layout.n_majoranas();
    CMat h = CMat::Zero(m, m);
    double offset = 0.0;
    for (const auto& [mono, c] : p.terms()) {
        const auto idx = monomial_indices(mono);
        if (idx.empty()) {
            if (std::abs(c.imag()) > 1e-12) throw ValidationError("quadratic: complex constant term");
            offset += c.real();
        } else if (idx.size() == 2) {
            // c gamma_j gamma_k = h_jk gamma_j gamma_k + h_kj gamma_k gamma_j with h_kj = -h_jk
            h(idx[0], idx[1]) += 0.5 * c;
            h(idx[1], idx[0]) -= 0.5 * c;
        } else {
            throw ValidationError("quadratic: monomial of degree " + std::to_string(idx.size()));
        }
    }
    return build_quadratic(h, layout, offset);
}

CanonicalForm canonical_form(const QuadraticHamiltonian& H0) {
    const int m = H0.layout.n_majoranas();
    const int n = m / 2;
    const RMat a = H0.h.imag();
    CanonicalForm cf;
    cf.Q = RMat::Identity(m, m);
    cf.epsilons = RVec::Zero(n);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (a.cwiseAbs().maxCoeff() == 0.0) return cf;

    Eigen::RealSchur<RMat> schur(a);
    if (schur.info() != Eigen::Success) throw ValidationError("canonical_form: real Schur failed");
    const RMat& T = schur.matrixT();
    const RMat& Z = schur.matrixU();
    const double tol = 1e-10 * scale;

    std::vector<std::pair<int, double>> blocks;  // first column, lambda
    std::vector<int> zero_cols;
    for (int i = 0; i < m;) {
        if (i + 1 < m && std::abs(T(i + 1, i)) > tol) {
            blocks.emplace_back(i, 0.5 * (T(i, i + 1) - T(i + 1, i)));
            i += 2;
        } else {
            zero_cols.push_back(i);
            i += 1;
        }
    }
    if (zero_cols.size() % 2 != 0)
        throw ValidationError("canonical_form: odd number of zero modes in the antisymmetric reduction");
    std::vector<std::pair<int, int>> col_pairs;
    std::vector<double> lam;
    for (auto [c, l] : blocks) {
        if (l >= 0) col_pairs.emplace_back(c, c + 1);
        else col_pairs.emplace_back(c + 1, c);
        lam.push_back(std::abs(l));
    }
    for (std::size_t z = 0; z < zero_cols.size(); z += 2) {
        col_pairs.emplace_back(zero_cols[z], zero_cols[z + 1]);
        lam.push_back(0.0);
    }
    for (int k = 0; k < n; ++k) {
        cf.Q.col(2 * k) = Z.col(col_pairs[k].first);
        cf.Q.col(2 * k + 1) = Z.col(col_pairs[k].second);
        cf.epsilons(k) = 2.0 * lam[k];
    }
    // The reduced form must be block diagonal with +lambda above the diagonal.
    RMat target = RMat::Zero(m, m);
    for (int k = 0; k < n; ++k) {
        target(2 * k, 2 * k + 1) = 0.5 * cf.epsilons(k);
        target(2 * k + 1, 2 * k) = -0.5 * cf.epsilons(k);
    }
    const double resid = (cf.Q.transpose() * a * cf.Q - target).cwiseAbs().maxCoeff();
    if (resid > 1e-8 * scale) {
        std::ostringstream os;
        os << "canonical_form: antisymmetric reduction residual " << resid
           << " (input may be numerically degenerate)";
        throw ValidationError(os.str());
    }
    return cf;
}

CVec free_heisenberg(const QuadraticHamiltonian& H0, int l, double t) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H0.h);
    const CVec phases = (es.eigenvalues().cast<cd>() * cd(0.0, 4.0 * t)).array().exp();
    const CMat U = es.eigenvectors();
    return U * phases.asDiagonal() * U.row(l).adjoint();
}

MajoranaPolynomial Model::polynomial() const { return h0.polynomial() + v.terms; }

CMat Model::dense_H() const {
    MajoranaPolynomial p = polynomial();
    return polynomial_to_matrix(p);
}

Model Model::restrict_to_ball(int center_site, double radius) const {
    auto inside = [&](int k) { return layout.distance(center_site, layout.majorana_site[k]) <= radius + 1e-12; };
    Model out = *this;
    for (int j = 0; j < layout.n_majoranas(); ++j)
        for (int k = 0; k < layout.n_majoranas(); ++k)
            if (!inside(j) || !inside(k)) out.h0.h(j, k) = 0.0;
    out.v.terms = v.terms.filter(inside);
    out.name = name + "|ball";
    return out;
}

Model Model::free_part() const {
    Model out = *this;
    out.v.terms = MajoranaPolynomial(n_modes());
    out.v.U = 0.0;
    out.name = name + "|free";
    return out;
}

Model make_model(const QuadraticHamiltonian& h0, const InteractionSpec& v, std::string name) {
    if (!v.terms.is_even()) throw ValidationError("interaction must contain only even monomials");
    for (const auto& [m, c] : v.terms.terms())
        if (degree(m) == 0) throw ValidationError("interaction constant terms belong in the quadratic offset");
    Model M;
    M.name = std::move(name);
    M.layout = h0.layout;
    M.h0 = h0;
    M.v = v;
    check_capacity(M.n_modes());
    return M;
}

MajoranaPolynomial annihilation(int n_modes, int m) {
    MajoranaPolynomial c(n_modes);
    c.add(bit(2 * m), 0.5);
    c.add(bit(2 * m + 1), cd(0.0, 0.5));
    return c;
}

MajoranaPolynomial number_operator(int n_modes, int m) {
    const MajoranaPolynomial c = annihilation(n_modes, m);
    return c.adjoint() * c;
}

namespace {

// Splits a Hermitian polynomial of degree <= 4 into its quadratic part and the rest.
std::pair<QuadraticHamiltonian, MajoranaPolynomial> split_degrees(const MajoranaPolynomial& p,
                                                                  const ModeLayout& layout) {
    MajoranaPolynomial quad(layout.n_modes()), rest(layout.n_modes());
    for (const auto& [m, c] : p.terms()) {
        if (degree(m) <= 2) quad.add(m, c);
        else rest.add(m, c);
    }
    return {quadratic_from_polynomial(quad, layout), rest};
}

}  // namespace

std::pair<QuadraticHamiltonian, InteractionSpec> build_fermi_hubbard(const std::vector<int>& dims, double U,
                                                                     double mu, double hopping) {
    ModeLayout layout = ModeLayout::lattice(dims, 2, 1.0);
    check_capacity(layout.n_modes());
    const int n = layout.n_modes();
    MajoranaPolynomial H(n);
    auto mode = [](int site, int spin) { return 2 * site + spin; };
    for (int a = 0; a < layout.n_sites; ++a)
        for (int b = a + 1; b < layout.n_sites; ++b) {
            if (std::abs(layout.distance(a, b) - 1.0) > 1e-12) continue;
            for (int s = 0; s < 2; ++s) {
                const auto ca = annihilation(n, mode(a, s));
                const auto cb = annihilation(n, mode(b, s));
                H += cd(-hopping) * (ca.adjoint() * cb + cb.adjoint() * ca);
            }
        }
    MajoranaPolynomial V(n);
    for (int a = 0; a < layout.n_sites; ++a) {
        const auto nu = number_operator(n, mode(a, 0));
        const auto nd = number_operator(n, mode(a, 1));
        H += cd(-mu) * (nu + nd);
        const auto half = MajoranaPolynomial::identity(n, -0.5);
        V += cd(U) * ((nu + half) * (nd + half));
    }
    // (n_up - 1/2)(n_dn - 1/2) is purely quartic, so V carries no constant.
    auto [h0, rest] = split_degrees(H + V, layout);
    InteractionSpec spec;
    spec.terms = rest;
    spec.U = U;
    spec.r0 = 0.0;
    return {h0, spec};
}

Model fermi_hubbard_model(const std::vector<int>& dims, double U, double mu, double hopping) {
    auto [h0, v] = build_fermi_hubbard(dims, U, mu, hopping);
    std::ostringstream name;
    name << "hubbard[";
    for (std::size_t i = 0; i < dims.size(); ++i) name << (i ? "x" : "") << dims[i];
    name << "] U=" << U << " mu=" << mu;
    return make_model(h0, v, name.str());
}

Model single_mode_model(double eps) {
    ModeLayout layout = ModeLayout::chain(1);
    CMat h = CMat::Zero(2, 2);
    h(0, 1) = cd(0.0, eps);
    h(1, 0) = cd(0.0, -eps);
    std::ostringstream name;
    name << "single-mode eps=" << eps;
    return make_model(build_quadratic(h, layout), InteractionSpec{MajoranaPolynomial(1), 0.0, 1.0}, name.str());
}

Model spinless_chain_model(int n_modes, double hopping, double mu, double U) {
    ModeLayout layout = ModeLayout::chain(n_modes, 1.0);
    check_capacity(n_modes);
    MajoranaPolynomial H(n_modes), V(n_modes);
    const auto half = MajoranaPolynomial::identity(n_modes, -0.5);
    for (int i = 0; i < n_modes; ++i) {
        H += cd(-mu) * number_operator(n_modes, i);
        if (i + 1 < n_modes) {
            const auto a = annihilation(n_modes, i);
            const auto b = annihilation(n_modes, i + 1);
            H += cd(-hopping) * (a.adjoint() * b + b.adjoint() * a);
            V += cd(U) * ((number_operator(n_modes, i) + half) * (number_operator(n_modes, i + 1) + half));
        }
    }
    auto [h0, rest] = split_degrees(H + V, layout);
    InteractionSpec spec;
    spec.terms = rest;
    spec.U = U;
    spec.r0 = 1.0;
    std::ostringstream name;
    name << "chain n=" << n_modes << " t=" << hopping << " mu=" << mu << " U=" << U;
    return make_model(h0, spec, name.str());
}

Model random_quadratic_chain(int n_modes, std::uint64_t seed, double scale) {
    ModeLayout layout = ModeLayout::chain(n_modes, 1.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    const int m = 2 * n_modes;
    CMat h = CMat::Zero(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
            if (layout.majorana_distance(j, k) <= layout.r0) {
                const double a = normal(rng);
                h(j, k) = cd(0.0, a);
                h(k, j) = cd(0.0, -a);
            }
    return make_model(build_quadratic(h, layout), InteractionSpec{MajoranaPolynomial(n_modes), 0.0, 1.0},
                      "random quadratic chain seed=" + std::to_string(seed));
}

LocalityReport locality_audit(const MajoranaPolynomial& p, const ModeLayout& layout, double r0) {
    LocalityReport rep;
    std::map<std::pair<int, double>, MajoranaPolynomial> groups;
    for (const auto& [m, c] : p.terms()) {
        if (m == 0) continue;
        std::vector<int> sites;
        for (int k : monomial_indices(m)) sites.push_back(layout.majorana_site.at(k));
        int best_center = 0;
        double best_radius = std::numeric_limits<double>::infinity();
        for (int s = 0; s < layout.n_sites; ++s) {
            double r = 0.0;
            for (int t : sites) r = std::max(r, layout.distance(s, t));
            if (r < best_radius - 1e-12) {
                best_radius = r;
                best_center = s;
            }
        }
        if (best_radius > r0 + 1e-12) rep.violations.push_back(m);
        auto [it, inserted] = groups.try_emplace({best_center, best_radius}, p.n_modes());
        it->second.add(m, c);
    }
    for (const auto& [key, poly] : groups) {
        LocalityBall ball;
        ball.center_site = key.first;
        ball.radius = key.second;
        ball.n_terms = static_cast<int>(poly.terms().size());
        ball.norm = operator_norm(polynomial_to_matrix(poly));
        rep.max_ball_norm = std::max(rep.max_ball_norm, ball.norm);
        rep.max_radius = std::max(rep.max_radius, ball.radius);
        rep.balls.push_back(ball);
    }
    return rep;
}

}  // namespace fg

namespace fg {

Model model_from_polynomial(const MajoranaPolynomial& p, const ModeLayout& layout, double U, std::string name) {
    auto [h0, rest] = split_degrees(p, layout);
    InteractionSpec spec;
    spec.terms = rest;
    spec.U = U;
    spec.r0 = layout.r0;
    return make_model(h0, spec, std::move(name));
}

}  // namespace fg
