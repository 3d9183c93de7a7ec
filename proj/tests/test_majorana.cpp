#include "doctest.h"

#include <random>

#include "fermigibbs/majorana.hpp"
#include "oracles.hpp"

using namespace fg;

namespace {

double anticomm_residual(const std::vector<CMat>& g) {
    double worst = 0.0;
    const Eigen::Index d = g.front().rows();
    for (std::size_t j = 0; j < g.size(); ++j)
        for (std::size_t k = 0; k < g.size(); ++k) {
            const CMat ac = g[j] * g[k] + g[k] * g[j];
            const CMat target = (j == k ? 2.0 : 0.0) * CMat::Identity(d, d);
            worst = std::max(worst, (ac - target).norm());
        }
    return worst;
}

}  // namespace

TEST_CASE("one-mode Majoranas are the Pauli pair") {
    const auto g = build_majorana_matrices(1);
    CHECK((g[0] - oracle::pauli_x()).norm() == 0.0);
    CHECK((g[1] - oracle::pauli_y()).norm() == 0.0);
    CHECK((g[0] * g[1] + g[1] * g[0]).norm() == 0.0);
}

TEST_CASE("Majorana matrices agree with an explicit Jordan-Wigner construction") {
    for (int n = 1; n <= 4; ++n) {
        const auto g = build_majorana_matrices(n);
        const auto ref = oracle::majoranas(n);
        REQUIRE(g.size() == ref.size());
        for (std::size_t k = 0; k < g.size(); ++k) CHECK((g[k] - ref[k]).norm() == 0.0);
    }
}

TEST_CASE("canonical anticommutation up to six modes") {
    for (int n = 1; n <= 6; ++n) CHECK(anticomm_residual(build_majorana_matrices(n)) <= 1e-13);
}

TEST_CASE("capacity is checked before allocation") {
    CHECK_THROWS_AS(build_majorana_matrices(8), CapacityError);
    CHECK_THROWS_AS(build_majorana_matrices(3, 2), CapacityError);
    CHECK_THROWS_AS(build_majorana_matrices(0), ValidationError);
}

TEST_CASE("word canonicalization") {
    auto [s, m] = canonicalize({1, 0});
    CHECK(s == -1);
    CHECK(m == 0b11u);
    std::tie(s, m) = canonicalize({2, 2});
    CHECK(s == 1);
    CHECK(m == 0u);
    std::tie(s, m) = canonicalize({2, 0, 1, 0});
    // g2 g0 g1 g0 = -g2 g1 g0 g0 = -g2 g1 = g1 g2
    CHECK(s == 1);
    CHECK(m == 0b110u);
}

TEST_CASE("monomial product sign matches dense multiplication") {
    const int n = 3;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Monomial> pick(0, 63);
    for (int trial = 0; trial < 200; ++trial) {
        const Monomial a = pick(rng), b = pick(rng);
        const CMat lhs = monomial_matrix(a, n) * monomial_matrix(b, n);
        const CMat rhs = double(monomial_product_sign(a, b)) * monomial_matrix(a ^ b, n);
        CHECK((lhs - rhs).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("polynomial to matrix") {
    const auto g = build_majorana_matrices(1);
    CHECK((polynomial_to_matrix(MajoranaPolynomial::identity(1), g) - CMat::Identity(2, 2)).norm() == 0.0);

    MajoranaPolynomial p(1);
    p.add_word({0, 1}, cd(0, 1));
    CMat expected = CMat::Zero(2, 2);
    expected(0, 0) = -1.0;
    expected(1, 1) = 1.0;
    // i X Y = i (i Z) = -Z
    CHECK((polynomial_to_matrix(p, g) - expected).norm() <= 1e-15);

    MajoranaPolynomial q(2);
    q.add_word({0}, 1.0);
    q.add_word({1}, 1.0);
    CHECK(operator_norm(polynomial_to_matrix(q)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("polynomial product agrees with the matrix product") {
    const int n = 2;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    MajoranaPolynomial a(n), b(n);
    for (Monomial m = 0; m < 16; ++m) {
        a.add(m, cd(nd(rng), nd(rng)));
        b.add(m, cd(nd(rng), nd(rng)));
    }
    const CMat lhs = polynomial_to_matrix(a * b);
    const CMat rhs = polynomial_to_matrix(a) * polynomial_to_matrix(b);
    CHECK((lhs - rhs).norm() <= 1e-12);
    CHECK((polynomial_to_matrix(a.adjoint()) - polynomial_to_matrix(a).adjoint()).norm() <= 1e-13);
}

TEST_CASE("monomial vectorization") {
    const int n = 2;
    CVec v = monomial_vectorize(CMat::Identity(4, 4));
    CHECK(std::abs(v(0) - 1.0) <= 1e-15);
    CHECK(v.tail(15).norm() <= 1e-15);

    const auto g = build_majorana_matrices(n);
    v = monomial_vectorize(g[2]);
    CHECK(std::abs(v(bit(2)) - 1.0) <= 1e-15);
    CHECK((v.norm() - 1.0) <= 1e-15);

    std::mt19937_64 rng(5);
    const CMat X = oracle::random_matrix(4, rng);
    v = monomial_vectorize(X);
    CHECK(std::abs(v.squaredNorm() - 0.25 * (X.adjoint() * X).trace().real()) <= 1e-12);
    CHECK((monomial_devectorize(v, n) - X).norm() <= 1e-12);
    CHECK((polynomial_to_matrix(matrix_to_polynomial(X, 0.0)) - X).norm() <= 1e-12);
}

TEST_CASE("norm of a linear combination of Majoranas") {
    CHECK(operator_norm(CMat::Identity(2, 2)) == doctest::Approx(1.0));
    CHECK(operator_norm(build_majorana_matrices(1)[0]) == doctest::Approx(1.0));

    // x g1 + i y g2 with x = 3, y = 4
    RVec x = RVec::Zero(2), y = RVec::Zero(2);
    x(0) = 3.0;
    y(1) = 4.0;
    const auto g = build_majorana_matrices(1);
    const CMat M = 3.0 * g[0] + cd(0, 4.0) * g[1];
    CHECK(oracle::spectral_norm(M) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(linear_combination_norm(x, y) == doctest::Approx(7.0).epsilon(1e-14));

    RVec e1 = RVec::Zero(4);
    e1(0) = 1.0;
    CHECK(linear_combination_norm(e1, RVec::Zero(4)) == doctest::Approx(1.0));
    CHECK(linear_combination_norm(e1, e1) == doctest::Approx(std::sqrt(2.0)));

    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    const auto g4 = build_majorana_matrices(4);
    for (int trial = 0; trial < 10; ++trial) {
        RVec a(8), b(8);
        for (int k = 0; k < 8; ++k) {
            a(k) = nd(rng);
            b(k) = nd(rng);
        }
        CMat S = CMat::Zero(16, 16);
        for (int k = 0; k < 8; ++k) S += cd(a(k), b(k)) * g4[k];
        CHECK(std::abs(linear_combination_norm(a, b) - oracle::spectral_norm(S)) <= 1e-10);
    }
}

TEST_CASE("parity operator and parity split") {
    for (int n = 1; n <= 3; ++n) {
        const CMat P = parity_operator(n);
        const Eigen::Index d = P.rows();
        CHECK((P * P - CMat::Identity(d, d)).norm() <= 1e-14);
        for (const auto& gk : build_majorana_matrices(n)) CHECK((P * gk + gk * P).norm() <= 1e-14);
    }

    const auto g = build_majorana_matrices(2);
    auto [even, odd] = parity_split(g[0]);
    CHECK(even.norm() <= 1e-15);
    CHECK((odd - g[0]).norm() <= 1e-15);
    const CMat X = CMat::Identity(4, 4) + g[0] * g[1];
    std::tie(even, odd) = parity_split(X);
    CHECK((even - X).norm() <= 1e-15);
    CHECK(odd.norm() <= 1e-15);

    std::mt19937_64 rng(2);
    const CMat Y = oracle::random_matrix(4, rng);
    std::tie(even, odd) = parity_split(Y);
    CHECK((even + odd - Y).norm() <= 1e-12);
    const CVec ve = monomial_vectorize(even), vo = monomial_vectorize(odd);
    for (Monomial m = 0; m < 16; ++m) {
        if (parity(m))
            CHECK(std::abs(ve(m)) <= 1e-14);
        else
            CHECK(std::abs(vo(m)) <= 1e-14);
    }
}

TEST_CASE("lattice layout geometry") {
    const auto L = ModeLayout::lattice({2, 2}, 2);
    CHECK(L.n_sites == 4);
    CHECK(L.n_modes() == 8);
    CHECK(L.distance(0, 3) == doctest::Approx(std::sqrt(2.0)));
    CHECK(L.majorana_site[5] == 1);
    const auto C = ModeLayout::chain(3);
    CHECK(C.majorana_distance(0, 5) == doctest::Approx(2.0));
}
