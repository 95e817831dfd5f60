#include "heunspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "heunspec/model.hpp"

namespace heunspec {

namespace {

// Generic radial equation in double precision:
//
//   R'' + R'/rho - (gamma^2/rho^2) R - harm rho^2 R - (coul/rho) R + U R = 0.
//
// The dimensionless problem is harm = 1, coul = -b, U = W; the physical
// planar equation (times 2m) is harm = 2 m Omega^2 k^2, coul = 2 m f with
// U = 2 m E + 2 Omega k gamma_s - (k + s Omega/2)^2.
struct RadialEq {
    double gamma = 0.0;
    double harm = 1.0;
    double coul = 0.0;
};

struct MatchState {
    double R = 0.0;
    double P = 0.0;  // R'
    int nodes = 0;
};

struct Shot {
    double theta = 0.0;     // normalised Wronskian of the two sweeps
    double mismatch = 0.0;  // log-derivative difference
    int nodes = 0;
};

double rhs_P(const RadialEq& eq, double U, double rho, double R, double P) {
    const double inv = 1.0 / rho;
    return -P * inv +
           (eq.gamma * eq.gamma * inv * inv + eq.harm * rho * rho +
            eq.coul * inv - U) *
               R;
}

void rk4_step(const RadialEq& eq, double U, double& rho, double& R, double& P,
              double hstep) {
    const double k1R = P;
    const double k1P = rhs_P(eq, U, rho, R, P);
    const double k2R = P + 0.5 * hstep * k1P;
    const double k2P = rhs_P(eq, U, rho + 0.5 * hstep, R + 0.5 * hstep * k1R,
                             P + 0.5 * hstep * k1P);
    const double k3R = P + 0.5 * hstep * k2P;
    const double k3P = rhs_P(eq, U, rho + 0.5 * hstep, R + 0.5 * hstep * k2R,
                             P + 0.5 * hstep * k2P);
    const double k4R = P + hstep * k3P;
    const double k4P =
        rhs_P(eq, U, rho + hstep, R + hstep * k3R, P + hstep * k3P);
    R += hstep / 6.0 * (k1R + 2.0 * k2R + 2.0 * k3R + k4R);
    P += hstep / 6.0 * (k1P + 2.0 * k2P + 2.0 * k3P + k4P);
    rho += hstep;
}

void guard_magnitude(double& R, double& P) {
    if (!std::isfinite(R) || !std::isfinite(P))
        throw OverflowGuard("radial integration left the representable range");
    const double m = std::max(std::fabs(R), std::fabs(P));
    if (m > 1e120) {
        R /= m;
        P /= m;
    }
}

// Power-series coefficients a_0..a_K of the regular solution
// R = rho^gamma sum a_j rho^j:  a_j = [coul a_{j-1} - U a_{j-2}
// + harm a_{j-4}] / (j (j + 2 gamma)).
std::vector<double> regular_series(const RadialEq& eq, double U, int K) {
    std::vector<double> a(static_cast<size_t>(K) + 1, 0.0);
    a[0] = 1.0;
    for (int j = 1; j <= K; ++j) {
        double num = eq.coul * a[static_cast<size_t>(j - 1)];
        if (j >= 2) num -= U * a[static_cast<size_t>(j - 2)];
        if (j >= 4) num += eq.harm * a[static_cast<size_t>(j - 4)];
        a[static_cast<size_t>(j)] = num / (j * (j + 2.0 * eq.gamma));
    }
    return a;
}

// Largest start radius <= limit at which the truncated series is both
// converged and cancellation-free.
double pick_series_radius(const std::vector<double>& a, double limit) {
    double rho = limit;
    for (int halvings = 0; halvings < 60; ++halvings) {
        double term = 1.0, sum = 0.0, peak = 0.0;
        for (size_t j = 0; j < a.size(); ++j) {
            const double t = a[j] * term;
            sum += t;
            peak = std::max(peak, std::fabs(t));
            term *= rho;
        }
        double tail = std::fabs(a.back()) * std::pow(rho, double(a.size() - 1));
        if (sum != 0.0 && tail <= 1e-19 * std::fabs(sum) &&
            peak <= 1e8 * std::fabs(sum))
            return rho;
        rho /= 2.0;
    }
    return rho;
}

// Polynomial part and its derivative at rho (prefactor rho^gamma handled by
// the caller).
void series_eval(const std::vector<double>& a, double gamma, double rho,
                 double& R, double& P) {
    double poly = 0.0, dpoly = 0.0;
    for (size_t j = a.size(); j-- > 0;) {
        dpoly = dpoly * rho + poly;
        poly = poly * rho + a[j];
    }
    const double pref = std::pow(rho, gamma);
    R = pref * poly;
    P = pref * (dpoly + (gamma / rho) * poly);
}

Shot shoot(const RadialEq& eq, double U, const ShootingConfig& cfg) {
    // Domain scaled so the decay region sits inside it in every regime.
    double domain;
    if (eq.harm > 0.0) {
        domain = cfg.zeta_max / std::pow(eq.harm, 0.25);
    } else {
        const double kappa = std::sqrt(std::max(1e-300, -U));
        const double q = -eq.coul / (2.0 * kappa) - 0.5;
        domain = std::max(cfg.zeta_max, (std::max(q, 0.0) + 35.0) / kappa);
    }
    const double scale = domain / cfg.zeta_max;
    const double match = cfg.match_point * scale;
    const double h0 = cfg.step * scale;

    // Outward sweep: series seed, then RK4 to the match point.
    const auto a = regular_series(eq, U, 36);
    const double rho_s =
        std::max(pick_series_radius(a, match / 2.0), 1e-8 * scale);

    MatchState out;
    {
        // Nodes inside the series region (the polynomial factor carries the
        // sign; the rho^gamma prefactor is positive).
        int nodes = 0;
        double prev = 0.0;
        const int probes = 400;
        for (int i = 1; i <= probes; ++i) {
            const double rho = rho_s * i / probes;
            double poly = 0.0;
            for (size_t j = a.size(); j-- > 0;) poly = poly * rho + a[j];
            if (prev != 0.0 && poly * prev < 0.0) ++nodes;
            if (poly != 0.0) prev = poly;
        }

        double rho = rho_s, R, P;
        series_eval(a, eq.gamma, rho_s, R, P);
        const int steps = std::max(1, static_cast<int>(
                                          std::ceil((match - rho_s) / h0)));
        const double hstep = (match - rho_s) / steps;
        for (int i = 0; i < steps; ++i) {
            const double Rprev = R;
            rk4_step(eq, U, rho, R, P, hstep);
            if (Rprev != 0.0 && R * Rprev < 0.0) ++nodes;
            if ((i & 511) == 0) guard_magnitude(R, P);
        }
        guard_magnitude(R, P);
        out = {R, P, nodes};
    }

    // Inward sweep from the asymptotic decay.
    MatchState in;
    {
        double rho = domain;
        double R = 1.0, P;
        if (eq.harm > 0.0) {
            const double root = std::sqrt(eq.harm);
            const double p = U / (2.0 * root) - 1.0;
            P = (p / rho - root * rho) * R;
        } else {
            const double kappa = std::sqrt(std::max(1e-300, -U));
            const double q = -eq.coul / (2.0 * kappa) - 0.5;
            P = (-kappa + q / rho) * R;
        }
        int nodes = 0;
        const int steps = std::max(1, static_cast<int>(
                                          std::ceil((domain - match) / h0)));
        const double hstep = -(domain - match) / steps;
        for (int i = 0; i < steps; ++i) {
            const double Rprev = R;
            rk4_step(eq, U, rho, R, P, hstep);
            if (Rprev != 0.0 && R * Rprev < 0.0) ++nodes;
            if ((i & 511) == 0) guard_magnitude(R, P);
        }
        guard_magnitude(R, P);
        in = {R, P, nodes};
    }

    Shot s;
    const double norm_out = std::hypot(out.R, out.P);
    const double norm_in = std::hypot(in.R, in.P);
    s.theta = (out.P * in.R - out.R * in.P) / (norm_out * norm_in);
    s.mismatch = out.P / out.R - in.P / in.R;
    s.nodes = out.nodes + in.nodes;
    return s;
}

// Bisect a bracketed sign change of theta(U).
double bisect_theta(const RadialEq& eq, double lo, double hi, double theta_lo,
                    const ShootingConfig& cfg) {
    for (int i = 0; i < 70 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double t = shoot(eq, mid, cfg).theta;
        if (t == 0.0) return mid;
        if ((t > 0.0) == (theta_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Scan [lo, hi] for Wronskian zeros and label them by node count.
std::map<int, double> scan_eigen(const RadialEq& eq, double lo, double hi,
                                 double coarse_step,
                                 const ShootingConfig& cfg) {
    std::map<int, double> found;
    const int cells =
        std::max(8, static_cast<int>(std::ceil((hi - lo) / coarse_step)));
    double prev_U = lo;
    double prev_theta = shoot(eq, lo, cfg).theta;
    for (int k = 1; k <= cells; ++k) {
        const double U = lo + (hi - lo) * k / cells;
        const double theta = shoot(eq, U, cfg).theta;
        if (prev_theta == 0.0) {
            const Shot s = shoot(eq, prev_U, cfg);
            found.emplace(s.nodes, prev_U);
        } else if (theta != 0.0 && (theta > 0.0) != (prev_theta > 0.0)) {
            const double root = bisect_theta(eq, prev_U, U, prev_theta, cfg);
            const Shot s = shoot(eq, root, cfg);
            found.emplace(s.nodes, root);
        }
        prev_U = U;
        prev_theta = theta;
    }
    return found;
}

// Re-locate a known root with a modified configuration.
double relocate(const RadialEq& eq, double U0, double width,
                const ShootingConfig& cfg) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        const double lo = U0 - width, hi = U0 + width;
        const double tlo = shoot(eq, lo, cfg).theta;
        const double thi = shoot(eq, hi, cfg).theta;
        if (tlo != 0.0 && thi != 0.0 && (tlo > 0.0) != (thi > 0.0))
            return bisect_theta(eq, lo, hi, tlo, cfg);
        width *= 4.0;
    }
    throw BracketNotFound(
        "failed to re-bracket an eigenvalue during step refinement");
}

struct Refined {
    double value = 0.0;  // best estimate (halved step)
    double gauge = 0.0;  // |change| under step halving
};

Refined refine_eigen(const RadialEq& eq, double U0, const ShootingConfig& cfg) {
    ShootingConfig fine = cfg;
    fine.step = cfg.step / 2.0;
    const double U1 = relocate(eq, U0, 1e-4 * (1.0 + std::fabs(U0)), fine);
    return {U1, std::fabs(U1 - U0)};
}

// Default scan window for the dimensionless problem.
void canonical_window(const DimensionlessProblem& pr, int n_states,
                      double& lo, double& hi) {
    const double alpha = 2.0 * pr.gamma + 1.0;
    lo = pr.b > 0.0 ? -1.05 * pr.b * pr.b / (alpha * alpha) - 2.0 : 0.0;
    hi = 4.0 * n_states + 2.0 * pr.gamma + 8.0;
}

void validate_problem(const DimensionlessProblem& pr) {
    if (pr.gamma < 0)
        throw std::invalid_argument("gamma must be non-negative");
}

}  // namespace

ShotResult integrate_radial(const DimensionlessProblem& problem, double W,
                            const ShootingConfig& cfg) {
    validate_problem(problem);
    const RadialEq eq{problem.gamma, 1.0, -problem.b};
    const Shot s = shoot(eq, W, cfg);
    return {s.mismatch, s.nodes};
}

std::vector<EigenvalueEstimate> oracle_spectrum(
    const DimensionlessProblem& problem, int n_states,
    const ShootingConfig& cfg) {
    validate_problem(problem);
    if (n_states < 1) throw std::invalid_argument("n_states must be positive");
    const RadialEq eq{problem.gamma, 1.0, -problem.b};
    double lo, hi;
    canonical_window(problem, n_states, lo, hi);
    const auto found = scan_eigen(eq, lo, hi, 0.25, cfg);

    std::vector<EigenvalueEstimate> out;
    for (int j = 0; j < n_states; ++j) {
        const auto it = found.find(j);
        if (it == found.end()) {
            std::ostringstream msg;
            msg << "no Wronskian bracket with " << j
                << " nodes inside the scan window (" << lo << ", " << hi
                << ")";
            throw BracketNotFound(msg.str());
        }
        const Refined r = refine_eigen(eq, it->second, cfg);
        EigenvalueEstimate e;
        e.index = j;
        e.W = r.value;
        e.method = Method::Oracle;
        e.order = 2;
        e.error_gauge = r.gauge;
        out.push_back(e);
    }
    return out;
}

EigenvalueEstimate oracle_eigenvalue(const DimensionlessProblem& problem,
                                     int state_index,
                                     const ShootingConfig& cfg) {
    if (state_index < 0)
        throw std::invalid_argument("state_index must be non-negative");
    return oracle_spectrum(problem, state_index + 1, cfg)
        .at(static_cast<size_t>(state_index));
}

double physical_oracle(const PhysicalParams& params, const QuantumNumbers& q,
                       int state_index, const ShootingConfig& cfg) {
    if (state_index < 0)
        throw std::invalid_argument("state_index must be non-negative");
    if (!(params.mass > 0.0))
        throw std::invalid_argument("mass must be positive");
    const double gs = gamma_of(q);
    const double gamma = std::fabs(gs);
    const double ok = params.omega * params.k;
    const double axial = params.k + q.spin * params.omega / 2.0;
    // U = 2 m E + 2 Omega k gamma_s - axial^2.
    const double shift = 2.0 * ok * gs - axial * axial;

    RadialEq eq;
    eq.gamma = gamma;
    eq.coul = 2.0 * params.mass * params.f;

    double lo, hi, coarse;
    if (ok != 0.0) {
        eq.harm = 2.0 * params.mass * ok * ok;
        // Windows carried over from the dimensionless problem via U = W
        // lambda^2.
        const double lam2 = std::sqrt(eq.harm);
        const double b_eq = -eq.coul / std::pow(eq.harm, 0.25);
        DimensionlessProblem pr{gamma, b_eq};
        canonical_window(pr, state_index + 1, lo, hi);
        lo *= lam2;
        hi *= lam2;
        coarse = 0.25 * lam2;
    } else {
        if (!(params.f < 0.0))
            throw NoBoundState(
                "without confinement (Omega k == 0) planar bound states "
                "require an attractive coupling f < 0");
        eq.harm = 0.0;
        // Hydrogen-like ladder U_n = -coul^2/(2n + 2 gamma + 1)^2 guides the
        // window; the eigenvalues themselves come from the shooting scan.
        const double c2 = eq.coul * eq.coul;
        const double u0 = -c2 / std::pow(2.0 * gamma + 1.0, 2);
        const double uj =
            -c2 / std::pow(2.0 * (state_index + gamma) + 1.0, 2);
        lo = 1.05 * u0 - 0.1;
        hi = 0.3 * uj;
        coarse = (hi - lo) / 400.0;
    }

    const auto found = scan_eigen(eq, lo, hi, coarse, cfg);
    const auto it = found.find(state_index);
    if (it == found.end()) {
        std::ostringstream msg;
        msg << "no Wronskian bracket with " << state_index
            << " nodes inside the physical scan window";
        throw BracketNotFound(msg.str());
    }
    const Refined r = refine_eigen(eq, it->second, cfg);
    return (r.value - shift) / (2.0 * params.mass);
}

double quadrature_moment(double p) {
    if (p <= -1.0)
        throw DivergentMoment(
            "moment integral of zeta^p exp(-zeta^2) diverges for p <= -1");

    // tanh-sinh transform mapping t in R to x in (0, 8); the integrand decays
    // double-exponentially in t at both ends.
    const double half_pi = 1.5707963267948966;
    auto sample = [&](double t) {
        const double u = half_pi * std::sinh(t);
        double x, dxdt;
        const double du = half_pi * std::cosh(t);
        if (u >= 0.0) {
            const double e = std::exp(-2.0 * u);
            x = 8.0 / (1.0 + e);
            dxdt = 16.0 * du * e / ((1.0 + e) * (1.0 + e));
        } else {
            const double e = std::exp(2.0 * u);
            x = 8.0 * e / (1.0 + e);
            dxdt = 16.0 * du * e / ((1.0 + e) * (1.0 + e));
        }
        if (x <= 0.0 || dxdt <= 0.0) return 0.0;
        const double fx = std::pow(x, p) * std::exp(-x * x);
        const double g = fx * dxdt;
        return std::isfinite(g) ? g : 0.0;
    };

    const double t_max = 4.0;
    double h = 1.0;
    double total = sample(0.0);
    for (double t = h; t <= t_max; t += h) total += sample(t) + sample(-t);
    double estimate = h * total;

    for (int level = 1; level <= 12; ++level) {
        h /= 2.0;
        double extra = 0.0;
        for (double t = h; t <= t_max; t += 2.0 * h)
            extra += sample(t) + sample(-t);
        total += extra;
        const double next = h * total;
        if (level >= 4 && std::fabs(next - estimate) <=
                              1e-15 * std::max(1.0, std::fabs(next)) + 1e-18) {
            return next;
        }
        estimate = next;
    }
    return estimate;
}

}  // namespace heunspec
