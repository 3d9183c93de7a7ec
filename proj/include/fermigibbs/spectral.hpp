#pragma once

#include <memory>
#include <vector>

#include "fermigibbs/types.hpp"

namespace fg {

// Shared eigendecomposition of a Hermitian matrix.  Eigenvalues ascend;
// eigenvalues closer than degeneracy_tol are merged into one cluster.
struct EigenDecomposition {
    RVec E;
    CMat U;
    double degeneracy_tol = 0.0;
    std::vector<int> cluster_of;  // eigenvalue index -> cluster
    RVec cluster_energy;          // mean energy of each cluster
    bool ambiguous = false;

    Eigen::Index dim() const { return E.size(); }
    int n_clusters() const { return static_cast<int>(cluster_energy.size()); }
};

EigenDecomposition eigen_decompose(const CMat& H, double rel_tol = 1e-9);

struct BohrComponent {
    double nu = 0.0;
    CMat A;
};

struct BohrDecomposition {
    std::vector<BohrComponent> components;
    bool ambiguous = false;  // two frequency gaps within 10x the clustering tolerance

    CMat sum() const;
    std::vector<double> frequencies() const;
};

// Clustered Bohr frequencies of H and the frequency label of every pair of
// eigenvector indices (i, k), i.e. the cluster containing E_i - E_k.
struct BohrGrid {
    std::vector<double> nus;
    Eigen::MatrixXi label;
    bool ambiguous = false;

    double nu(Eigen::Index i, Eigen::Index k) const { return nus[label(i, k)]; }
};

BohrGrid bohr_grid(const EigenDecomposition& eig);

// A_nu = sum_{E_i - E_j = nu} Pi_i A Pi_j
BohrDecomposition bohr_decompose(const CMat& A, const EigenDecomposition& eig);
BohrDecomposition bohr_decompose(const CMat& A, const EigenDecomposition& eig, const BohrGrid& grid);

struct GibbsState {
    CMat sigma;
    double beta = 0.0;
    double log_Z = 0.0;
    double sigma_min = 0.0;
    RVec log_weights;  // log of sigma's eigenvalues, in the eigenbasis order
    std::shared_ptr<const EigenDecomposition> eig;

    // sigma^p through the shared eigenbasis.
    CMat power(double p) const;
};

GibbsState gibbs_state(std::shared_ptr<const EigenDecomposition> eig, double beta);
GibbsState gibbs_state(const CMat& H, double beta);

// Tr[sigma^{1/2} X^dagger sigma^{1/2} Y]
cd kms_inner(const CMat& X, const CMat& Y, const GibbsState& g);

// sigma^p A sigma^{-p}, evaluated in the eigenbasis of H.
CMat imaginary_time_conjugate(const CMat& A, const GibbsState& g, double p);

}  // namespace fg
