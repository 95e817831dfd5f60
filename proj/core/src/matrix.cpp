#include "heunspec/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "heunspec/types.hpp"

namespace heunspec {

using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

Matrix cholesky_lower(const Matrix& S, const Real& rel_floor) {
    const int n = S.size();
    Real max_diag = 0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, abs(S.at(i, i)));
    const Real floor = rel_floor * max_diag;

    Matrix L(n);
    for (int j = 0; j < n; ++j) {
        Real d = S.at(j, j);
        for (int k = 0; k < j; ++k) d -= L.at(j, k) * L.at(j, k);
        if (d <= floor)
            throw IllConditionedBasis(
                "overlap matrix is not positive definite at the working "
                "precision; reduce the basis size or raise the precision");
        const Real ljj = sqrt(d);
        L.at(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            Real s = S.at(i, j);
            for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
            L.at(i, j) = s / ljj;
        }
    }
    return L;
}

Matrix forward_substitute(const Matrix& L, const Matrix& B) {
    const int n = L.size();
    Matrix X(n);
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) {
            Real s = B.at(i, col);
            for (int k = 0; k < i; ++k) s -= L.at(i, k) * X.at(k, col);
            X.at(i, col) = s / L.at(i, i);
        }
    }
    return X;
}

Matrix transpose(const Matrix& A) {
    const int n = A.size();
    Matrix T(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T.at(i, j) = A.at(j, i);
    return T;
}

namespace {

Real off_diagonal_sq(const Matrix& A) {
    Real s = 0;
    const int n = A.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += A.at(i, j) * A.at(i, j);
    return s;
}

Real frobenius_sq(const Matrix& A) {
    Real s = 0;
    const int n = A.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += A.at(i, j) * A.at(i, j);
    return s;
}

}  // namespace

std::vector<Real> jacobi_eigenvalues(Matrix A, const Real& off_tol,
                                     int max_sweeps) {
    const int n = A.size();
    if (n == 0) return {};
    const Real target_sq = off_tol * off_tol * frobenius_sq(A);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_sq(A) <= target_sq) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Real apq = A.at(p, q);
                if (apq == 0) continue;
                // Classical Jacobi rotation annihilating A(p, q).
                const Real theta = (A.at(q, q) - A.at(p, p)) / (2 * apq);
                Real t;
                if (theta >= 0)
                    t = 1 / (theta + sqrt(1 + theta * theta));
                else
                    t = -1 / (-theta + sqrt(1 + theta * theta));
                const Real c = 1 / sqrt(1 + t * t);
                const Real s = t * c;
                const Real tau = s / (1 + c);

                const Real app = A.at(p, p), aqq = A.at(q, q);
                A.at(p, p) = app - t * apq;
                A.at(q, q) = aqq + t * apq;
                A.at(p, q) = 0;
                A.at(q, p) = 0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Real akp = A.at(k, p), akq = A.at(k, q);
                    A.at(k, p) = akp - s * (akq + tau * akp);
                    A.at(p, k) = A.at(k, p);
                    A.at(k, q) = akq + s * (akp - tau * akq);
                    A.at(q, k) = A.at(k, q);
                }
            }
        }
    }
    if (off_diagonal_sq(A) > target_sq)
        throw std::runtime_error("Jacobi iteration failed to converge");

    std::vector<Real> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = A.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Real lu_determinant(Matrix A) {
    const int n = A.size();
    Real det = 1;
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        Real best = abs(A.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const Real v = abs(A.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0) return Real(0);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(k, j));
            sign = -sign;
        }
        det *= A.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            const Real m = A.at(i, k) / A.at(k, k);
            for (int j = k + 1; j < n; ++j) A.at(i, j) -= m * A.at(k, j);
        }
    }
    return sign > 0 ? det : -det;
}

}  // namespace heunspec
