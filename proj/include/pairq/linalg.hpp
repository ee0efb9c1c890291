#pragma once

#include <vector>

#include "pairq/matrix.hpp"

namespace pairq {

/// Eigen-decomposition of a symmetric matrix.
/// Eigenvalues are sorted in descending order; column i of `eigenvectors`
/// belongs to eigenvalues[i].
struct SymEig {
    std::vector<double> eigenvalues;
    DenseMatrix eigenvectors;
};

/// Thin singular value decomposition A = U diag(s) V^T with s descending.
/// For A of shape m x n, U is m x min(m,n) and V is n x min(m,n).
struct Svd {
    DenseMatrix u;
    std::vector<double> singular_values;
    DenseMatrix v;
};

/// Cyclic Jacobi eigen-solver. Throws on non-square input or asymmetry
/// beyond 1e-10 relative to the Frobenius norm.
SymEig sym_eig(const DenseMatrix& a);

/// One-sided (Hestenes) Jacobi SVD. Columns of U belonging to exactly-zero
/// singular values are completed to an orthonormal set when U is square.
Svd svd(const DenseMatrix& a);

/// Symmetric square root C = V diag(sqrt(lambda)) V^T with C^T C = G.
/// Eigenvalues below 1e-10 * lambda_max are clamped to zero; an eigenvalue
/// below -1e-6 * lambda_max raises NotPositiveSemidefinite.
DenseMatrix psd_sqrt(const DenseMatrix& g);

/// Moore-Penrose pseudoinverse; singular values <= 1e-10 * sigma_max count as zero.
DenseMatrix pseudo_inverse(const DenseMatrix& c);

/// Orthogonal factor U V^T of the polar decomposition of a square matrix.
DenseMatrix orthogonal_polar(const DenseMatrix& m);

/// argmin over orthogonal R of ||R X - Y||_F for column-sample matrices X, Y (n x N).
DenseMatrix procrustes(const DenseMatrix& x, const DenseMatrix& y);

/// ||A^T A - I||_F
double orthogonality_error(const DenseMatrix& a);

}  // namespace pairq
