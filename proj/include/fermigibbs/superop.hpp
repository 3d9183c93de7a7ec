#pragma once

#include <vector>

#include "fermigibbs/majorana.hpp"
#include "fermigibbs/spectral.hpp"

namespace fg {

// Matrix of a linear map on operators, in the monomial coordinates returned by
// monomial_vectorize.  Those coordinates are orthonormal for 2^{-n} Tr[X^dag Y],
// so the Hilbert-Schmidt adjoint is the conjugate transpose.
struct SuperOperatorMatrix {
    CMat matrix;
    int n_modes = 1;

    Eigen::Index dim() const { return matrix.rows(); }
    CMat apply(const CMat& X) const;
    SuperOperatorMatrix adjoint() const { return {matrix.adjoint(), n_modes}; }
    // Frobenius mass of the blocks mapping even <-> odd monomials.
    double off_block_mass() const;

    friend SuperOperatorMatrix operator*(const SuperOperatorMatrix& a, const SuperOperatorMatrix& b) {
        return {a.matrix * b.matrix, a.n_modes};
    }
    friend SuperOperatorMatrix operator+(const SuperOperatorMatrix& a, const SuperOperatorMatrix& b) {
        return {a.matrix + b.matrix, a.n_modes};
    }
    friend SuperOperatorMatrix operator-(const SuperOperatorMatrix& a, const SuperOperatorMatrix& b) {
        return {a.matrix - b.matrix, a.n_modes};
    }
    friend SuperOperatorMatrix operator*(cd s, const SuperOperatorMatrix& a) { return {s * a.matrix, a.n_modes}; }
};

SuperOperatorMatrix identity_superop(int n_modes);
// X -> A X and X -> X A, built from the monomial expansion of A.
SuperOperatorMatrix left_mult(const CMat& A);
SuperOperatorMatrix right_mult(const CMat& A);
// X -> A X C
SuperOperatorMatrix sandwich(const CMat& A, const CMat& C);
// Materializes an arbitrary linear map column by column.
template <typename F>
SuperOperatorMatrix superop_from_map(F map, int n_modes) {
    const Eigen::Index nm = Eigen::Index{1} << (2 * n_modes);
    SuperOperatorMatrix S{CMat(nm, nm), n_modes};
    for (Eigen::Index b = 0; b < nm; ++b)
        S.matrix.col(b) = monomial_vectorize(map(monomial_matrix(static_cast<Monomial>(b), n_modes)));
    return S;
}

// Change of basis from energy-eigenbasis matrix units |a><c| (index a + D c) to
// monomial coordinates: column (a, c) = vec(u_a u_c^dag).
CMat eigenbasis_to_monomial(const CMat& U);

std::vector<Eigen::Index> parity_indices(int n_modes, int par);
CMat sector_block(const CMat& M, int n_modes, int par);

}  // namespace fg
