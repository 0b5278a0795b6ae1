#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vnd/errors.hpp"

namespace vnd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Default cap on the dimension of materialized matrices (kronecker results,
// full dilation spaces).
inline constexpr Eigen::Index kDimensionCap = 16384;

// True if every entry is finite.
bool all_finite(const ComplexMatrix& m);

// Largest singular value. Deterministic; absolute error well below 1e-12
// for the matrix sizes handled here. Throws invalid_input_error on
// non-finite entries or an empty matrix.
double operator_norm(const ComplexMatrix& m);

// Modified Gram-Schmidt with one re-orthogonalization pass. The k-th output
// lies in the span of the first k inputs and has a real positive inner
// product with the k-th input. Throws degeneracy_error (naming the index)
// when the residual after projection drops below 1e-8 of the input norm.
std::vector<ComplexVector> gram_schmidt(const std::vector<ComplexVector>& vs);

// Tensor (Kronecker) product. Throws capacity_error when the result
// dimension would exceed `cap`.
ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b,
                        Eigen::Index cap = kDimensionCap);

// N x N cyclic permutation unitary C with C e_j = e_{j+1 mod N}. N >= 2.
ComplexMatrix cyclic_shift(int n);

// Factor a rank-one matrix as A = v f* with ||f|| = 1 and the first nonzero
// entry of f real positive. Throws structure_error (reporting both singular
// values) when the numerical rank is not one.
std::pair<ComplexVector, ComplexVector> rank_one_factor(const ComplexMatrix& a);

// ||AB - BA|| for square matrices of equal dimension.
double commutation_residual(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace vnd
