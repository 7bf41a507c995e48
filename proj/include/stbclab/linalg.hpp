#pragma once

#include <vector>

#include "stbclab/complex_matrix.hpp"

namespace stbclab {

inline constexpr double kDefaultRankTol = 1e-9;

// Determinant via elimination with partial pivoting. Throws std::invalid_argument
// for non-square input.
cplx det(const ComplexMatrix& m);

// M^H * M (Hermitian positive semidefinite, cols x cols).
ComplexMatrix gram(const ComplexMatrix& m);

// ||M||_F^2.
double frobenius_norm_sq(const ComplexMatrix& m);

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, sorted descending.
// Throws std::invalid_argument if the matrix is not square or not Hermitian
// within a small absolute tolerance.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// Number of eigenvalues of gram(m) exceeding tol * largest. Zero matrix has rank 0.
std::size_t rank(const ComplexMatrix& m, double tol = kDefaultRankTol);

}  // namespace stbclab
