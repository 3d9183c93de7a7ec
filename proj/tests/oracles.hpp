#pragma once

// Independent reference constructions used by the unit tests.  Nothing here
// calls into the library, so agreement is a genuine cross-check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat pauli_x() { CMat m(2, 2); m << 0, 1, 1, 0; return m; }
inline CMat pauli_y() { CMat m(2, 2); m << 0, cd(0, -1), cd(0, 1), 0; return m; }
inline CMat pauli_z() { CMat m(2, 2); m << 1, 0, 0, -1; return m; }

inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Jordan-Wigner string Z x ... x Z x P x I x ... x I with P at slot j.
inline CMat jw(int n, int j, const CMat& p) {
    CMat out = CMat::Identity(1, 1);
    for (int s = 0; s < n; ++s) {
        const CMat f = s < j ? pauli_z() : (s == j ? p : CMat(CMat::Identity(2, 2)));
        out = kron(out, f);
    }
    return out;
}

inline std::vector<CMat> majoranas(int n) {
    std::vector<CMat> g;
    for (int j = 0; j < n; ++j) {
        g.push_back(jw(n, j, pauli_x()));
        g.push_back(jw(n, j, pauli_y()));
    }
    return g;
}

// c_j = (gamma_{2j} + i gamma_{2j+1}) / 2
inline CMat annihilator(int n, int j) {
    const auto g = majoranas(n);
    return 0.5 * (g[2 * j] + cd(0, 1) * g[2 * j + 1]);
}

inline double spectral_norm(const CMat& m) {
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues()(0);
}

// Gibbs state by Pade matrix exponential, independent of any eigensolver.
inline CMat gibbs(const CMat& H, double beta) {
    const CMat e = (-beta * H).exp();
    return e / e.trace();
}

inline CMat random_matrix(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    CMat m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cd(nd(rng), nd(rng));
    return m;
}

inline CMat random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
    const CMat m = random_matrix(d, rng);
    return 0.5 * (m + m.adjoint());
}

// Hermitian square root through the Schur-based matrix function.
inline CMat matrix_power(const CMat& m, double p) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    Eigen::VectorXd d = es.eigenvalues().array().pow(p);
    return es.eigenvectors() * d.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::VectorXd sorted_eigenvalues(const CMat& H) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    return es.eigenvalues();
}

template <typename F>
double trapezoid(F f, double a, double b, int n) {
    const double h = (b - a) / (n - 1);
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n - 1; ++i) s += f(a + i * h);
    return s * h;
}

// Spinless chain in second quantization, written from annihilators directly.
inline CMat spinless_chain(int n, double t, double mu, double U) {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMat H = CMat::Zero(d, d);
    std::vector<CMat> c, num;
    for (int j = 0; j < n; ++j) {
        c.push_back(annihilator(n, j));
        num.push_back(c.back().adjoint() * c.back());
    }
    const CMat I = CMat::Identity(d, d);
    for (int j = 0; j + 1 < n; ++j) {
        H -= t * (c[j].adjoint() * c[j + 1] + c[j + 1].adjoint() * c[j]);
        H += U * (num[j] - 0.5 * I) * (num[j + 1] - 0.5 * I);
    }
    for (int j = 0; j < n; ++j) H -= mu * num[j];
    return H;
}

}  // namespace oracle
