#include "fermigibbs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace fg {

namespace {

// Single-linkage clustering of sorted values; returns cluster ids and means.
struct Clusters {
    std::vector<int> id;
    std::vector<double> mean;
    bool ambiguous = false;
};

Clusters cluster_sorted(const std::vector<double>& sorted, double tol) {
    Clusters c;
    c.id.resize(sorted.size());
    double acc = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0) {
            const double gap = sorted[i] - sorted[i - 1];
            if (gap > tol) {
                c.mean.push_back(acc / count);
                acc = 0.0;
                count = 0;
                if (gap <= 10.0 * tol) c.ambiguous = true;
            }
        }
        c.id[i] = static_cast<int>(c.mean.size());
        acc += sorted[i];
        ++count;
    }
    if (count) c.mean.push_back(acc / count);
    return c;
}

}  // namespace

EigenDecomposition eigen_decompose(const CMat& H, double rel_tol) {
    if (H.rows() != H.cols()) throw ValidationError("eigen_decompose: matrix not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()))
        throw ValidationError("eigen_decompose: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    EigenDecomposition d;
    d.E = es.eigenvalues();
    d.U = es.eigenvectors();
    const double range = d.E.size() ? d.E.maxCoeff() - d.E.minCoeff() : 0.0;
    d.degeneracy_tol = rel_tol * std::max(range, 1.0);
    std::vector<double> e(d.E.data(), d.E.data() + d.E.size());
    const Clusters c = cluster_sorted(e, d.degeneracy_tol);
    d.cluster_of = c.id;
    d.cluster_energy = Eigen::Map<const RVec>(c.mean.data(), static_cast<Eigen::Index>(c.mean.size()));
    d.ambiguous = c.ambiguous;
    return d;
}

CMat BohrDecomposition::sum() const {
    if (components.empty()) return CMat();
    CMat s = CMat::Zero(components.front().A.rows(), components.front().A.cols());
    for (const auto& c : components) s += c.A;
    return s;
}

std::vector<double> BohrDecomposition::frequencies() const {
    std::vector<double> f;
    for (const auto& c : components) f.push_back(c.nu);
    return f;
}

BohrGrid bohr_grid(const EigenDecomposition& eig) {
    const int nc = eig.n_clusters();
    // Candidate frequencies between every pair of energy clusters.
    std::vector<std::pair<double, std::pair<int, int>>> pairs;
    pairs.reserve(static_cast<std::size_t>(nc) * nc);
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) pairs.push_back({eig.cluster_energy(a) - eig.cluster_energy(b), {a, b}});
    std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<double> nus;
    for (const auto& p : pairs) nus.push_back(p.first);
    const Clusters fc = cluster_sorted(nus, eig.degeneracy_tol);

    Eigen::MatrixXi cluster_label(nc, nc);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        cluster_label(pairs[i].second.first, pairs[i].second.second) = fc.id[i];
    BohrGrid g;
    g.nus = fc.mean;
    // Symmetrize so that the frequency of (k, i) is exactly minus that of (i, k).
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) {
            const int f = cluster_label(a, b), r = cluster_label(b, a);
            if (f > r) g.nus[f] = -g.nus[r];
        }
    g.ambiguous = fc.ambiguous || eig.ambiguous;
    const Eigen::Index D = eig.dim();
    g.label.resize(D, D);
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index k = 0; k < D; ++k) g.label(i, k) = cluster_label(eig.cluster_of[i], eig.cluster_of[k]);
    return g;
}

BohrDecomposition bohr_decompose(const CMat& A, const EigenDecomposition& eig) {
    return bohr_decompose(A, eig, bohr_grid(eig));
}

BohrDecomposition bohr_decompose(const CMat& A, const EigenDecomposition& eig, const BohrGrid& grid) {
    if (A.rows() != eig.dim() || A.cols() != eig.dim())
        throw ValidationError("bohr_decompose: dimension mismatch");
    const CMat At = eig.U.adjoint() * A * eig.U;
    std::vector<CMat> blocks(grid.nus.size());
    std::vector<bool> used(grid.nus.size(), false);
    const Eigen::Index D = eig.dim();
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index k = 0; k < D; ++k) {
            if (At(i, k) == cd(0.0)) continue;
            const int f = grid.label(i, k);
            if (!used[f]) {
                blocks[f] = CMat::Zero(D, D);
                used[f] = true;
            }
            blocks[f](i, k) = At(i, k);
        }
    BohrDecomposition out;
    out.ambiguous = grid.ambiguous;
    const double drop = 1e-15 * std::max(1.0, At.norm());
    for (std::size_t f = 0; f < blocks.size(); ++f) {
        if (!used[f] || blocks[f].norm() <= drop) continue;
        out.components.push_back({grid.nus[f], eig.U * blocks[f] * eig.U.adjoint()});
    }
    return out;
}

CMat GibbsState::power(double p) const {
    const RVec w = (p * log_weights.array()).exp();
    return eig->U * w.cast<cd>().asDiagonal() * eig->U.adjoint();
}

GibbsState gibbs_state(std::shared_ptr<const EigenDecomposition> eig, double beta) {
    if (!(beta >= 0.0)) throw ValidationError("gibbs_state: beta must be nonnegative");
    GibbsState g;
    g.beta = beta;
    const RVec x = -beta * eig->E;
    const double mx = x.maxCoeff();
    g.log_Z = mx + std::log((x.array() - mx).exp().sum());
    g.log_weights = x.array() - g.log_Z;
    g.sigma_min = std::exp(g.log_weights.minCoeff());
    g.eig = std::move(eig);
    g.sigma = g.power(1.0);
    return g;
}

GibbsState gibbs_state(const CMat& H, double beta) {
    return gibbs_state(std::make_shared<const EigenDecomposition>(eigen_decompose(H)), beta);
}

cd kms_inner(const CMat& X, const CMat& Y, const GibbsState& g) {
    if (g.sigma_min < 1e-14) throw ValidationError("kms_inner: sigma is not full rank (sigma_min below 1e-14)");
    const CMat s = g.power(0.5);
    return (s * X.adjoint() * s * Y).trace();
}

CMat imaginary_time_conjugate(const CMat& A, const GibbsState& g, double p) {
    const auto& U = g.eig->U;
    CMat At = U.adjoint() * A * U;
    const Eigen::Index D = At.rows();
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index k = 0; k < D; ++k) {
            const double expo = p * (g.log_weights(i) - g.log_weights(k));
            if (std::abs(expo) > 700.0)
                throw ValidationError("imaginary_time_conjugate: exponent beyond 700 (thermal overflow)");
            At(i, k) *= std::exp(expo);
        }
    return U * At * U.adjoint();
}

}  // namespace fg
