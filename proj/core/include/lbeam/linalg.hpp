#pragma once

#include <stdexcept>
#include <vector>

#include "lbeam/cmatrix.hpp"

namespace lbeam {

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cholesky pivot fell at or below its floor.
struct NotPositiveDefinite : LinalgError {
    using LinalgError::LinalgError;
};

// An eigenvalue was too negative to be attributed to roundoff.
struct NotPositiveSemidefinite : LinalgError {
    using LinalgError::LinalgError;
};

struct SingularTriangular : LinalgError {
    using LinalgError::LinalgError;
};

struct NoConvergence : LinalgError {
    using LinalgError::LinalgError;
};

// True when max_ij |a_ij - conj(a_ji)| <= rtol * max_ij |a_ij| (square only).
bool is_hermitian(const CMatrix& a, double rtol = 1e-10);

struct EigResult {
    std::vector<double> eigenvalues;  // descending
    CMatrix eigenvectors;             // unitary; column j pairs with eigenvalues[j]
};

// Eigendecomposition of a Hermitian matrix by cyclic-by-rows complex Jacobi
// rotations. Converged when the off-diagonal Frobenius norm drops to
// 1e-12 * ||A||_F; at most 30 sweeps, then NoConvergence. Eigenvalues are
// stable-sorted in descending order and each eigenvector is rescaled so its
// largest-magnitude component is real and positive.
EigResult hermitian_eig(const CMatrix& a);

// Lower-triangular Cholesky factor with positive real diagonal: A = L L^H.
// A pivot at or below 1e-12 * trace(A)/n raises NotPositiveDefinite.
CMatrix cholesky_lower(const CMatrix& a);

// Inverse of a lower-triangular matrix by forward substitution. Any diagonal
// entry below 1e-14 * (largest diagonal magnitude) raises SingularTriangular.
CMatrix invert_lower_triangular(const CMatrix& l);

// Roundoff policy for eigenvalues of a Hermitian PSD matrix: negatives within
// 1e-10 * max(eigenvalue, 0) of zero are clamped to zero, anything more
// negative raises NotPositiveSemidefinite.
void clamp_hpsd_eigenvalues(std::vector<double>& eigenvalues, double rel_tol = 1e-10);

}  // namespace lbeam
