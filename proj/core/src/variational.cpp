#include "heunspec/variational.hpp"

#include <algorithm>
#include <stdexcept>

namespace heunspec {

using boost::multiprecision::tgamma;

Real gaussian_moment(const Real& p) {
    if (p <= -1)
        throw DivergentMoment(
            "moment integral of zeta^p exp(-zeta^2) diverges for p <= -1");
    return tgamma((p + 1) / 2) / 2;
}

MatrixPair build_matrices(const DimensionlessProblem& problem, int N,
                          int digits) {
    if (N < 1) throw std::invalid_argument("basis size must be positive");
    if (problem.gamma < 0)
        throw std::invalid_argument("gamma must be non-negative");
    PrecisionGuard guard(digits);

    const Real g = problem.gamma;
    const Real b = problem.b;
    const Real g2 = g * g;

    MatrixPair out{Matrix(N), Matrix(N)};

    // Each term is prefactor * I(power); skip terms with zero prefactor so
    // that gamma = 0 never requests the divergent moment I(-1).
    auto moment_term = [&](const Real& prefactor, const Real& power) -> Real {
        if (prefactor == 0) return Real(0);
        return prefactor * gaussian_moment(power);
    };

    for (int i = 0; i < N; ++i) {
        const Real ci = g + i;
        for (int j = i; j < N; ++j) {
            const Real cj = g + j;
            const Real q = 2 * g + i + j;  // common moment exponent base

            const Real s = gaussian_moment(q + 1);
            // Kinetic part integrates to c_i c_j I(c_i+c_j-1)
            //  - (c_i+c_j) I(c_i+c_j+1) + I(c_i+c_j+3) after differentiating
            // u = zeta^c exp(-zeta^2/2); note c_i + c_j = q in exponent
            // bookkeeping below.
            Real h = moment_term(ci * cj, q - 1);
            h -= moment_term(ci + cj, q + 1);
            h += gaussian_moment(q + 3);
            // Centrifugal, harmonic and Coulomb-like potential terms.
            h += moment_term(g2, q - 1);
            h += gaussian_moment(q + 3);
            h -= moment_term(b, q);

            out.S.at(i, j) = s;
            out.S.at(j, i) = s;
            out.H.at(i, j) = h;
            out.H.at(j, i) = h;
        }
    }
    return out;
}

std::vector<Real> solve_generalized(const MatrixPair& hs, int digits) {
    PrecisionGuard guard(digits);
    const Real pivot_floor = pow10_neg(digits - 8);
    const Matrix L = cholesky_lower(hs.S, pivot_floor);

    // A = L^-1 H L^-T is symmetric with the same spectrum as the pencil.
    const Matrix Y = forward_substitute(L, hs.H);
    Matrix A = forward_substitute(L, transpose(Y));
    const int n = A.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Real sym = (A.at(i, j) + A.at(j, i)) / 2;
            A.at(i, j) = sym;
            A.at(j, i) = sym;
        }

    return jacobi_eigenvalues(std::move(A), pow10_neg(digits - 5));
}

VariationalSpectrum variational_spectrum(const DimensionlessProblem& problem,
                                         int N, int digits, int n_states) {
    if (n_states < 1) throw std::invalid_argument("n_states must be positive");
    if (n_states > N - 2)
        throw std::invalid_argument(
            "n_states must not exceed N - 2 so the convergence gauge covers "
            "every reported state");
    PrecisionGuard guard(digits);

    const auto full = solve_generalized(build_matrices(problem, N, digits), digits);
    const auto prev =
        solve_generalized(build_matrices(problem, N - 1, digits), digits);

    VariationalSpectrum out;
    for (int j = 0; j < n_states; ++j) {
        const Real& w = full[static_cast<size_t>(j)];
        Real gauge = prev[static_cast<size_t>(j)] - w;
        if (gauge < 0) gauge = 0;  // monotone in exact arithmetic
        EigenvalueEstimate e;
        e.index = j;
        e.W = to_double(w);
        e.method = Method::Variational;
        e.order = N;
        e.error_gauge = to_double(gauge);
        out.estimates.push_back(e);
        out.values.push_back(w);
    }
    return out;
}

}  // namespace heunspec
