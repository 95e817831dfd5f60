#pragma once

#include <vector>

#include "heunspec/matrix.hpp"
#include "heunspec/precision.hpp"
#include "heunspec/types.hpp"

namespace heunspec {

// Gaussian weighted moment I(p) = integral_0^inf zeta^p exp(-zeta^2) dzeta
// = Gamma((p+1)/2) / 2, evaluated at the current working precision.  Throws
// DivergentMoment for p <= -1.
Real gaussian_moment(const Real& p);

struct MatrixPair {
    Matrix H;  // Hamiltonian in the unnormalised basis
    Matrix S;  // overlap (Gram) matrix
};

// Rayleigh-Ritz matrices in the basis u_j = zeta^(gamma+j) exp(-zeta^2/2),
// j = 0..N-1, with scalar product <u, v> = integral u v zeta dzeta.  All
// matrix elements are combinations of gaussian_moment values; terms whose
// prefactor vanishes are skipped so no divergent moment is ever requested.
MatrixPair build_matrices(const DimensionlessProblem& problem, int N,
                          int digits = 50);

// Eigenvalues of the pencil H x = W S x, ascending: Cholesky-reduce to a
// symmetric standard problem and diagonalise with cyclic Jacobi rotations.
std::vector<Real> solve_generalized(const MatrixPair& hs, int digits = 50);

struct VariationalSpectrum {
    std::vector<EigenvalueEstimate> estimates;  // lowest n_states
    std::vector<Real> values;                   // same values, full precision
};

// Upper bounds for the lowest n_states eigenvalues at basis size N.  The
// error gauge of state j is the (non-negative) drop W_j^(N-1) - W_j^(N)
// against the next-smaller basis.  Requires n_states <= N - 2 so the gauge
// itself is meaningful for every reported state.
VariationalSpectrum variational_spectrum(const DimensionlessProblem& problem,
                                         int N, int digits, int n_states);

}  // namespace heunspec
