#include "doctest.h"

#include <algorithm>

#include "fermigibbs/model.hpp"
#include "oracles.hpp"

using namespace fg;

TEST_CASE("zero quadratic form") {
    const auto H0 = build_quadratic(CMat::Zero(4, 4), ModeLayout::chain(2));
    CHECK(H0.dense().norm() == 0.0);
    const auto cf = canonical_form(H0);
    CHECK(cf.epsilons.norm() == 0.0);
    CHECK((cf.Q - RMat::Identity(4, 4)).norm() <= 1e-14);
}

TEST_CASE("single mode spectrum is plus or minus two epsilon") {
    for (double eps : {0.3, 0.5, 1.0}) {
        const auto m = single_mode_model(eps);
        // H0 = i eps (g1 g2 - g2 g1) written out with the Pauli pair
        const CMat X = oracle::pauli_x(), Y = oracle::pauli_y();
        const CMat ref = cd(0, eps) * (X * Y - Y * X);
        CHECK((m.dense_H() - ref).norm() <= 1e-14);
        const auto ev = oracle::sorted_eigenvalues(m.dense_H());
        CHECK(ev(0) == doctest::Approx(-2 * eps));
        CHECK(ev(1) == doctest::Approx(2 * eps));
        const auto cf = canonical_form(m.h0);
        CHECK(std::abs(cf.epsilons(0)) == doctest::Approx(2 * eps));
    }
}

TEST_CASE("building from an imaginary antisymmetric h") {
    CMat h = CMat::Zero(2, 2);
    h(0, 1) = cd(0, 0.4);
    h(1, 0) = cd(0, -0.4);
    const auto H0 = build_quadratic(h, ModeLayout::chain(1));
    CHECK(oracle::sorted_eigenvalues(H0.dense())(1) == doctest::Approx(0.8));
    CMat bad = h;
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(build_quadratic(bad, ModeLayout::chain(1)), ValidationError);
}

TEST_CASE("canonical form reproduces the Hamiltonian") {
    const auto m = random_quadratic_chain(3, 42);
    const auto cf = canonical_form(m.h0);
    CHECK((cf.Q.transpose() * cf.Q - RMat::Identity(6, 6)).norm() <= 1e-12);
    // Rebuild H0 from the rotated Majoranas: zeta_k = sum_j Q_jk gamma_j.
    const auto g = build_majorana_matrices(3);
    const Eigen::Index d = 8;
    std::vector<CMat> zeta(6, CMat::Zero(d, d));
    for (int k = 0; k < 6; ++k)
        for (int j = 0; j < 6; ++j) zeta[k] += cf.Q(j, k) * g[j];
    CMat rebuilt = m.h0.offset * CMat::Identity(d, d);
    for (int j = 0; j < 3; ++j) rebuilt += cd(0, cf.epsilons(j)) * zeta[2 * j] * zeta[2 * j + 1];
    CHECK((rebuilt - m.dense_H0()).norm() <= 1e-12);

    const double hnorm = oracle::spectral_norm(m.dense_H0());
    CHECK(cf.epsilons.cwiseAbs().maxCoeff() <= hnorm + 1e-12);
}

TEST_CASE("free Heisenberg evolution of a Majorana") {
    const auto m = spinless_chain_model(2, 1.0, 0.3, 0.0);
    const auto g = build_majorana_matrices(2);
    for (int l = 0; l < 4; ++l) {
        CVec c0 = free_heisenberg(m.h0, l, 0.0);
        CHECK((c0 - CVec::Unit(4, l)).norm() <= 1e-14);
    }
    const double t = 0.7;
    const CMat H = oracle::spinless_chain(2, 1.0, 0.3, 0.0);
    const CMat Ut = (cd(0, t) * H).exp();
    for (int l = 0; l < 4; ++l) {
        const CMat evolved = Ut * g[l] * Ut.adjoint();
        const CVec c = free_heisenberg(m.h0, l, t);
        CMat rebuilt = CMat::Zero(4, 4);
        for (int j = 0; j < 4; ++j) rebuilt += c(j) * g[j];
        CHECK((rebuilt - evolved).cwiseAbs().maxCoeff() <= 1e-10);
    }
    const auto zero = build_quadratic(CMat::Zero(4, 4), ModeLayout::chain(2));
    CHECK((free_heisenberg(zero, 2, 3.0) - CVec::Unit(4, 2)).norm() <= 1e-14);
}

TEST_CASE("spinless chain matches second quantization") {
    for (double U : {0.0, 0.4}) {
        const auto m = spinless_chain_model(3, 1.0, 0.3, U);
        CHECK((m.dense_H() - oracle::spinless_chain(3, 1.0, 0.3, U)).norm() <= 1e-13);
    }
}

TEST_CASE("one-site Hubbard spectra") {
    const auto ev = [](const Model& m) { return oracle::sorted_eigenvalues(m.dense_H()); };
    {
        const auto m = fermi_hubbard_model({1}, 1.0, 0.0);
        const auto e = ev(m);
        CHECK(e(0) == doctest::Approx(-0.25));
        CHECK(e(1) == doctest::Approx(-0.25));
        CHECK(e(2) == doctest::Approx(0.25));
        CHECK(e(3) == doctest::Approx(0.25));
    }
    {
        const auto m = fermi_hubbard_model({1}, 0.0, 1.0);
        const auto e = ev(m);
        CHECK(e(0) == doctest::Approx(-2.0));
        CHECK(e(1) == doctest::Approx(-1.0));
        CHECK(e(2) == doctest::Approx(-1.0));
        CHECK(std::abs(e(3)) <= 1e-14);
    }
}

TEST_CASE("two-site Hubbard hopping gives single-particle energies plus or minus one") {
    const auto m = fermi_hubbard_model({2}, 0.0, 0.0);
    const auto cf = canonical_form(m.h0);
    std::vector<double> e(cf.epsilons.data(), cf.epsilons.data() + cf.epsilons.size());
    for (double& x : e) x = std::abs(x);
    std::sort(e.begin(), e.end());
    // i eps zeta zeta' has eigenvalues +-eps, so a single-particle energy of 1 is a canonical energy of 1/2
    for (double x : e) CHECK(x == doctest::Approx(0.5));

    // U = 0 Hubbard equals its own quadratic block
    const auto [h0, v] = build_fermi_hubbard({2}, 0.0, 0.0);
    CHECK((h0.dense() - m.dense_H()).norm() <= 1e-14);
    CHECK(v.terms.terms().empty());
}

TEST_CASE("locality audit") {
    MajoranaPolynomial p(2);
    p.add_word({0, 1}, cd(0, 1));
    auto rep = locality_audit(p, ModeLayout::chain(2), 1.0);
    REQUIRE(rep.balls.size() == 1);
    CHECK(rep.balls[0].radius == doctest::Approx(0.0));
    CHECK(rep.violations.empty());

    // a hopping term across distance r0 + 1 needs a ball of radius 1 > r0 = 0
    MajoranaPolynomial far(2);
    far.add_word({0, 3}, cd(0, 1));
    rep = locality_audit(far, ModeLayout::chain(2), 0.0);
    CHECK(rep.violations.size() == 1);
    rep = locality_audit(far, ModeLayout::chain(2), 1.0);
    CHECK(rep.violations.empty());

    // Hubbard interaction: every ball carries an on-site quartic of norm U / 4
    const double U = 0.6;
    const auto m = fermi_hubbard_model({2}, U, 0.0);
    rep = locality_audit(m.v.terms, m.layout, 0.0);
    CHECK(rep.violations.empty());
    CHECK(rep.max_ball_norm <= U * 0.25 + 1e-12);
}

TEST_CASE("restriction to a ball keeps only terms inside") {
    const auto m = spinless_chain_model(4, 1.0, 0.2, 0.3);
    const auto r0 = m.restrict_to_ball(0, 0.0);
    // only the on-site chemical potential of site 0 survives
    CHECK(r0.v.terms.terms().empty());
    const auto full = m.restrict_to_ball(0, 10.0);
    CHECK((full.dense_H() - m.dense_H()).norm() <= 1e-13);
    CHECK(m.free_part().v.terms.terms().empty());
}
