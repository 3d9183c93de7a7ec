#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fg {

using cd = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMat = DenseMatrix<cd>;
using CVec = DenseVector<cd>;
using RMat = DenseMatrix<double>;
using RVec = DenseVector<double>;

// Hard cap on Dirac modes; the superoperator space is 4^n dimensional.
inline constexpr int kMaxModes = 7;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_capacity(int n_modes, int max_modes = kMaxModes) {
    if (n_modes < 1)
        throw ValidationError("mode count must be positive, got " + std::to_string(n_modes));
    if (n_modes > max_modes)
        throw CapacityError("mode count " + std::to_string(n_modes) + " exceeds cap " +
                            std::to_string(max_modes));
}

}  // namespace fg
