#pragma once

#include <vector>

#include "heunspec/precision.hpp"

namespace heunspec {

// Small dense square matrix of extended-precision reals, row major.  This is
// deliberately minimal: the solvers need Cholesky, triangular solves, cyclic
// Jacobi eigenvalues and pivoted LU determinants at adjustable precision,
// nothing more.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    int size() const { return n_; }
    Real& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Real& at(int i, int j) const {
        return a_[static_cast<size_t>(i) * n_ + j];
    }

private:
    int n_ = 0;
    std::vector<Real> a_;
};

// Lower Cholesky factor of a symmetric positive definite matrix.  Throws
// IllConditionedBasis when a pivot drops below rel_floor times the largest
// diagonal entry of S.
Matrix cholesky_lower(const Matrix& S, const Real& rel_floor);

// Solve L X = B for lower triangular L (forward substitution), overwriting
// nothing; returns X.
Matrix forward_substitute(const Matrix& L, const Matrix& B);

Matrix transpose(const Matrix& A);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations with a fixed
// sweep order, iterated until the off-diagonal Frobenius norm falls below
// off_tol times the full Frobenius norm.  Returns the eigenvalues sorted
// ascending.
std::vector<Real> jacobi_eigenvalues(Matrix A, const Real& off_tol,
                                     int max_sweeps = 64);

// Determinant by LU factorisation with partial pivoting.
Real lu_determinant(Matrix A);

}  // namespace heunspec
