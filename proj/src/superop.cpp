#include "fermigibbs/superop.hpp"

namespace fg {

CMat SuperOperatorMatrix::apply(const CMat& X) const {
    return monomial_devectorize(matrix * monomial_vectorize(X), n_modes);
}

double SuperOperatorMatrix::off_block_mass() const {
    double s = 0.0;
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < matrix.cols(); ++c)
            if (parity(static_cast<Monomial>(r)) != parity(static_cast<Monomial>(c))) s += std::norm(matrix(r, c));
    return std::sqrt(s);
}

SuperOperatorMatrix identity_superop(int n_modes) {
    const Eigen::Index nm = Eigen::Index{1} << (2 * n_modes);
    return {CMat::Identity(nm, nm), n_modes};
}

namespace {

SuperOperatorMatrix multiplication(const CMat& A, bool left) {
    const int n = modes_from_dim(A.rows());
    const CVec c = monomial_vectorize(A);
    const Eigen::Index nm = c.size();
    SuperOperatorMatrix S{CMat::Zero(nm, nm), n};
    for (Eigen::Index a = 0; a < nm; ++a) {
        if (c(a) == cd(0.0)) continue;
        const auto ma = static_cast<Monomial>(a);
        for (Eigen::Index b = 0; b < nm; ++b) {
            const auto mb = static_cast<Monomial>(b);
            const int s = left ? monomial_product_sign(ma, mb) : monomial_product_sign(mb, ma);
            S.matrix(a ^ b, b) += static_cast<double>(s) * c(a);
        }
    }
    return S;
}

}  // namespace

SuperOperatorMatrix left_mult(const CMat& A) { return multiplication(A, true); }
SuperOperatorMatrix right_mult(const CMat& A) { return multiplication(A, false); }
SuperOperatorMatrix sandwich(const CMat& A, const CMat& C) { return left_mult(A) * right_mult(C); }

CMat eigenbasis_to_monomial(const CMat& U) {
    const Eigen::Index D = U.rows();
    CMat W(D * D, D * D);
    for (Eigen::Index c = 0; c < D; ++c)
        for (Eigen::Index a = 0; a < D; ++a)
            W.col(a + D * c) = monomial_vectorize(U.col(a) * U.col(c).adjoint());
    return W;
}

std::vector<Eigen::Index> parity_indices(int n_modes, int par) {
    std::vector<Eigen::Index> idx;
    const Eigen::Index nm = Eigen::Index{1} << (2 * n_modes);
    for (Eigen::Index a = 0; a < nm; ++a)
        if (parity(static_cast<Monomial>(a)) == par) idx.push_back(a);
    return idx;
}

CMat sector_block(const CMat& M, int n_modes, int par) {
    const auto idx = parity_indices(n_modes, par);
    return M(idx, idx);
}

}  // namespace fg
