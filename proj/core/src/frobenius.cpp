#include "heunspec/frobenius.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace heunspec {

using boost::multiprecision::abs;
using boost::multiprecision::denominator;
using boost::multiprecision::mpz_int;
using boost::multiprecision::numerator;
using boost::multiprecision::sqrt;

std::vector<Real> series_coefficients(const Real& gamma, const Real& b,
                                      const Real& W, int count) {
    if (count < 0) throw std::invalid_argument("count must be non-negative");
    const Real alpha = 2 * gamma + 1;
    const Real g = W - 2 * gamma - 2;
    std::vector<Real> a(static_cast<size_t>(count) + 1);
    a[0] = 1;
    if (count >= 1) a[1] = -b / alpha;
    for (int m = 0; m + 2 <= count; ++m) {
        a[static_cast<size_t>(m) + 2] =
            (-b * a[static_cast<size_t>(m) + 1] + (2 * m - g) * a[static_cast<size_t>(m)]) /
            ((m + 2) * (m + alpha + 1));
    }
    return a;
}

// ---------------------------------------------------------------------------
// Exact polynomial arithmetic over the rationals (dense, ascending powers)
// ---------------------------------------------------------------------------

namespace {

using RPoly = std::vector<Rational>;

void trim(RPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const RPoly& p) { return static_cast<int>(p.size()) - 1; }

Rational eval(const RPoly& p, const Rational& x) {
    Rational v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

RPoly derivative(const RPoly& p) {
    RPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(Rational(i) * p[i]);
    return d;
}

// Remainder of u divided by v (v non-zero).
RPoly poly_rem(RPoly u, const RPoly& v) {
    trim(u);
    const int dv = degree(v);
    while (degree(u) >= dv && !u.empty()) {
        const Rational q = u.back() / v.back();
        const int shift = degree(u) - dv;
        for (int i = 0; i <= dv; ++i)
            u[static_cast<size_t>(i + shift)] -= q * v[static_cast<size_t>(i)];
        trim(u);
    }
    return u;
}

RPoly poly_gcd(RPoly a, RPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        RPoly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

RPoly poly_div_exact(RPoly u, const RPoly& v) {
    trim(u);
    const int dv = degree(v);
    RPoly q(u.size() > v.size() ? u.size() - v.size() + 1 : 1, Rational(0));
    while (degree(u) >= dv && !u.empty()) {
        const Rational c = u.back() / v.back();
        const int shift = degree(u) - dv;
        q[static_cast<size_t>(shift)] = c;
        for (int i = 0; i <= dv; ++i)
            u[static_cast<size_t>(i + shift)] -= c * v[static_cast<size_t>(i)];
        trim(u);
    }
    trim(q);
    return q;
}

// Sturm sequence of a squarefree polynomial.
std::vector<RPoly> sturm_chain(const RPoly& p) {
    std::vector<RPoly> chain;
    chain.push_back(p);
    chain.push_back(derivative(p));
    trim(chain.back());
    while (!chain.back().empty() && degree(chain.back()) > 0) {
        RPoly r = poly_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        trim(r);
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_of(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

int sign_variations(const std::vector<RPoly>& chain, const Rational& x) {
    int count = 0, prev = 0;
    for (const auto& p : chain) {
        if (p.empty()) continue;
        const int s = sign_of(eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

struct Interval {
    Rational lo, hi;  // half-open (lo, hi], contains exactly one root
};

// Isolate all roots of the squarefree polynomial p inside (lo, hi].
std::vector<Interval> isolate_roots(const RPoly& p, Rational lo, Rational hi) {
    std::vector<Interval> found;
    const auto chain = sturm_chain(p);
    struct Item {
        Rational lo, hi;
        int vlo, vhi;
    };
    std::vector<Item> stack{{lo, hi, sign_variations(chain, lo),
                             sign_variations(chain, hi)}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const int nroots = it.vlo - it.vhi;
        if (nroots <= 0) continue;
        if (nroots == 1) {
            found.push_back({it.lo, it.hi});
            continue;
        }
        const Rational mid = (it.lo + it.hi) / 2;
        const int vmid = sign_variations(chain, mid);
        stack.push_back({it.lo, mid, it.vlo, vmid});
        stack.push_back({mid, it.hi, vmid, it.vhi});
    }
    std::sort(found.begin(), found.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return found;
}

// Shrink a single-root interval of squarefree p by sign bisection until its
// relative width is below 2^-bits.
Interval shrink_interval(const RPoly& p, Interval iv, int bits) {
    int slo = sign_of(eval(p, iv.lo));
    if (slo == 0) {
        // Exact hit at the open end: nudge inward so signs are defined.
        iv.lo = (iv.lo * 3 + iv.hi) / 4;
        slo = sign_of(eval(p, iv.lo));
    }
    for (int i = 0; i < bits; ++i) {
        const Rational mid = (iv.lo + iv.hi) / 2;
        const int sm = sign_of(eval(p, mid));
        if (sm == 0) {
            iv.lo = mid;
            iv.hi = mid;
            return iv;
        }
        if (sm == slo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

bool is_perfect_square(const mpz_int& x, mpz_int& root) {
    if (x < 0) return false;
    root = sqrt(x);
    return root * root == x;
}

// Try to express a non-negative rational as the square of a rational.
bool rational_square_root(const Rational& q, Rational& root) {
    mpz_int rn, rd;
    if (!is_perfect_square(numerator(q), rn)) return false;
    if (!is_perfect_square(denominator(q), rd)) return false;
    root = Rational(rn, rd);
    return true;
}

}  // namespace

BPolynomial truncation_polynomial(int n, const Rational& gamma) {
    if (n < 0) throw std::invalid_argument("n must be non-negative");
    if (gamma < 0) throw std::invalid_argument("gamma must be non-negative");
    const Rational alpha = 2 * gamma + 1;
    const Rational g = 2 * n;

    // a_m as exact polynomials in b.
    std::vector<RPoly> a(static_cast<size_t>(n) + 2);
    a[0] = {Rational(1)};
    a[1] = {Rational(0), Rational(-1) / alpha};
    for (int m = 0; m + 2 <= n + 1; ++m) {
        const Rational denom = (m + 2) * (m + alpha + 1);
        RPoly next(a[static_cast<size_t>(m) + 1].size() + 1, Rational(0));
        // -b * a_{m+1}
        for (size_t i = 0; i < a[static_cast<size_t>(m) + 1].size(); ++i)
            next[i + 1] -= a[static_cast<size_t>(m) + 1][i];
        // (2m - g) * a_m
        const Rational c = Rational(2 * m) - g;
        for (size_t i = 0; i < a[static_cast<size_t>(m)].size(); ++i)
            next[i] += c * a[static_cast<size_t>(m)][i];
        for (auto& v : next) v /= denom;
        a[static_cast<size_t>(m) + 2] = std::move(next);
    }

    BPolynomial out;
    out.degree = n + 1;
    out.rational_coefficients = a[static_cast<size_t>(n) + 1];
    out.rational_coefficients.resize(static_cast<size_t>(n) + 2, Rational(0));
    return out;
}

std::vector<TruncationSolution> solve_truncation(int n, const Rational& gamma,
                                                 int digits) {
    const BPolynomial P = truncation_polynomial(n, gamma);
    const int r = (n + 1) % 2;

    // Even part: P(b) = b^r Q(b^2).
    RPoly Q;
    for (size_t i = static_cast<size_t>(r); i < P.rational_coefficients.size();
         i += 2)
        Q.push_back(P.rational_coefficients[i]);
    trim(Q);

    struct TRoot {
        bool exact = false;
        Rational exact_value;
        Interval bracket;  // used when not exact
    };
    std::vector<TRoot> troots;

    if (!Q.empty() && degree(Q) >= 1) {
        // Exact rational roots are decidable outright for degrees one and
        // two; higher degrees fall back to Sturm isolation below.
        std::vector<Rational> exact_found;
        if (degree(Q) == 1) {
            const Rational t = -Q[0] / Q[1];
            if (t > 0) exact_found.push_back(t);
        } else if (degree(Q) == 2) {
            const Rational disc = Q[1] * Q[1] - 4 * Q[0] * Q[2];
            Rational sq;
            if (disc >= 0 && rational_square_root(disc, sq)) {
                const Rational t_plus = Rational((-Q[1] + sq) / (2 * Q[2]));
                const Rational t_minus =
                    Rational((-Q[1] - sq) / (2 * Q[2]));
                if (t_plus > 0) exact_found.push_back(t_plus);
                if (t_minus > 0) exact_found.push_back(t_minus);
            }
        }

        // Squarefree part for isolation.
        RPoly Qs = Q;
        RPoly g1 = poly_gcd(Q, derivative(Q));
        if (degree(g1) >= 1) Qs = poly_div_exact(Q, g1);

        // Cauchy bound on root magnitude.
        Rational bound = 0;
        for (size_t i = 0; i + 1 < Qs.size(); ++i)
            bound = std::max(bound, Rational(abs(Qs[i] / Qs.back())));
        bound += 1;

        auto intervals = isolate_roots(Qs, Rational(0), bound);
        for (auto& iv : intervals) {
            TRoot tr;
            for (const Rational& t : exact_found)
                if (t > iv.lo && t <= iv.hi) {
                    tr.exact = true;
                    tr.exact_value = t;
                }
            if (!tr.exact) tr.bracket = shrink_interval(Qs, iv, 140);
            troots.push_back(std::move(tr));
        }
    }

    // Polish and assemble.
    const int polish_digits = std::max(digits, 40);
    PrecisionGuard guard(polish_digits + 15);

    std::vector<Real> preal;
    preal.reserve(P.rational_coefficients.size());
    for (const auto& c : P.rational_coefficients) preal.push_back(to_real(c));
    auto p_eval = [&](const Real& x) {
        Real v = 0;
        for (size_t i = preal.size(); i-- > 0;) v = v * x + preal[i];
        return v;
    };
    RPoly Pd_rat;
    for (size_t i = 1; i < P.rational_coefficients.size(); ++i)
        Pd_rat.push_back(Rational(i) * P.rational_coefficients[i]);
    std::vector<Real> pdreal;
    for (const auto& c : Pd_rat) pdreal.push_back(to_real(c));
    auto pd_eval = [&](const Real& x) {
        Real v = 0;
        for (size_t i = pdreal.size(); i-- > 0;) v = v * x + pdreal[i];
        return v;
    };

    const Real newton_tol = pow10_neg(polish_digits + 5);
    auto polish = [&](Real x) {
        for (int it = 0; it < 200; ++it) {
            const Real deriv = pd_eval(x);
            if (deriv == 0) break;
            const Real step = p_eval(x) / deriv;
            x -= step;
            if (abs(step) <= abs(x) * newton_tol) break;
        }
        return x;
    };

    std::vector<Real> positive_roots;
    std::vector<const TRoot*> positive_src;
    for (const auto& tr : troots) {
        Real t0 = tr.exact ? to_real(tr.exact_value)
                           : to_real((tr.bracket.lo + tr.bracket.hi) / 2);
        if (t0 <= 0) continue;
        positive_roots.push_back(polish(sqrt(t0)));
        positive_src.push_back(&tr);
    }

    const Rational W = 2 * gamma + 2 * n + 2;
    const Real gamma_r = to_real(gamma);
    const Real W_r = to_real(W);

    std::vector<TruncationSolution> out;
    auto add = [&](const Real& b_root, bool exact, const Rational& bsq) {
        TruncationSolution s;
        s.n = n;
        s.gamma = gamma;
        s.b_root = b_root;
        s.b_squared_exact = exact;
        s.b_squared = bsq;
        s.W = W;
        s.coefficients = series_coefficients(gamma_r, b_root, W_r, n);
        out.push_back(std::move(s));
    };

    if (r == 1) add(Real(0), true, Rational(0));
    for (size_t i = 0; i < positive_roots.size(); ++i) {
        const bool exact = positive_src[i]->exact;
        const Rational bsq = exact ? positive_src[i]->exact_value : Rational(0);
        add(positive_roots[i], exact, bsq);
        add(-positive_roots[i], exact, bsq);
    }
    std::sort(out.begin(), out.end(),
              [](const TruncationSolution& a, const TruncationSolution& b) {
                  return a.b_root < b.b_root;
              });
    return out;
}

Real verify_polynomial_solution(const TruncationSolution& sol, int digits) {
    PrecisionGuard guard(digits);
    const Real gamma = to_real(sol.gamma);
    const Real W = to_real(sol.W);
    const Real b = sol.b_root;

    // Recompute the coefficients at the working precision; the polynomial
    // factor has exact degree n.
    const auto a = series_coefficients(gamma, b, W, sol.n);
    auto horner = [&](const std::vector<Real>& c, const Real& x) {
        Real v = 0;
        for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    std::vector<Real> ad, add2;
    for (size_t i = 1; i < a.size(); ++i) ad.push_back(Real(i) * a[i]);
    for (size_t i = 1; i < ad.size(); ++i) add2.push_back(Real(i) * ad[i]);

    using boost::multiprecision::exp;
    using boost::multiprecision::pow;

    Real worst = 0;
    for (int k = 1; k <= 12; ++k) {
        const Real z = Real(k) / 3;
        const Real p = horner(a, z);
        const Real p1 = ad.empty() ? Real(0) : horner(ad, z);
        const Real p2 = add2.empty() ? Real(0) : horner(add2, z);
        // Substituting R = zeta^gamma exp(-zeta^2/2) p into the radial
        // equation leaves the bracket below times the same prefactor.
        const Real bracket =
            p2 + ((2 * gamma + 1) / z - 2 * z) * p1 +
            (b / z + W - 2 * gamma - 2) * p;
        const Real residual =
            pow(z, gamma) * exp(-z * z / 2) * bracket;
        worst = std::max(worst, abs(residual));
    }
    return worst;
}

}  // namespace heunspec
