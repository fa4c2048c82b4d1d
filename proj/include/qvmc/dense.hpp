#pragma once

#include <Eigen/Dense>

#include "qvmc/pauli.hpp"
#include "qvmc/state.hpp"

namespace qvmc {

using DenseMatrix = Eigen::MatrixXcd;

// Dense 2^n x 2^n matrix of a Pauli sum. Oracle-grade utility: used by the
// exact-diagonalization path and by tests that cross-check the statevector
// kernels against explicit linear algebra.
DenseMatrix dense_matrix(const PauliSum& H);
DenseMatrix dense_matrix(const PauliString& p);

// exp(scale * H) for Hermitian H via eigendecomposition (scale may be complex).
DenseMatrix dense_expm_hermitian(const PauliSum& H, cplx scale);

Eigen::VectorXcd to_eigen(const StateVec& s);
StateVec from_eigen(const Eigen::VectorXcd& v, std::size_t n, bool normalized);

}  // namespace qvmc
