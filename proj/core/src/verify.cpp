#include "heunspec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "heunspec/frobenius.hpp"
#include "heunspec/model.hpp"
#include "heunspec/oracle.hpp"
#include "heunspec/precision.hpp"
#include "heunspec/rpm.hpp"
#include "heunspec/types.hpp"
#include "heunspec/variational.hpp"

namespace heunspec::verify {
namespace {

class Stopwatch {
  public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}


// Runs `body` with exception capture; any escaping exception fails the
// criterion and lands in the detail string.
template <typename Body>
CriterionResult run_criterion(int id, const char* name, bool expected_fail,
                              Body&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.expected_fail = expected_fail;
    Stopwatch sw;
    try {
        body(r, sw);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = sw.elapsed();
    return r;
}

const double kSqrt6 = std::sqrt(6.0);

// Smallest distance from x to any entry of v (infinity when v is empty).
double min_distance(double x, const std::vector<double>& v) {
    double best = std::numeric_limits<double>::infinity();
    for (double y : v) best = std::min(best, std::fabs(x - y));
    return best;
}

// --- 1. Reference eigenvalue reproduction -------------------------------
//
// gamma = 1, b = sqrt(6): the three lowest eigenvalues are
// 1.600357154, 6, 10.21072810.  The variational bound (N = 25) must hit
// each within 1e-8.  The Riccati-Pade determinants are even in b, so their
// stable-root set is the union of the b = +sqrt(6) and b = -sqrt(6)
// spectra; the three reference values must each appear in that set within
// 1e-8 (the mirror state 9.8058 legitimately sits between 6 and 10.2107).
// Wall-clock budget for the whole criterion: 60 s.
CriterionResult criterion_reference_eigenvalues(int digits) {
    return run_criterion(
        1, "reference-eigenvalues", false,
        [digits](CriterionResult& r, const Stopwatch& sw) {
            const double refs[3] = {1.600357154, 6.000000000, 10.21072810};
            const DimensionlessProblem problem{1.0, kSqrt6};

            auto var = variational_spectrum(problem, 25, digits, 3);
            double var_dev = 0.0;
            for (int j = 0; j < 3; ++j)
                var_dev = std::max(
                    var_dev, std::fabs(to_double(var.values[j]) - refs[j]));

            // Four lowest stable roots: {1.6003, 6, 9.8058 (mirror),
            // 10.2107}.  Drift of the slowest chain is ~1e-8 at D_max = 12,
            // hence the 1e-7 stability tolerance.
            auto rpm = rpm_spectrum(problem, 12, 0, 4, {}, digits, 1e-7);
            std::vector<double> roots;
            for (const auto& root : rpm) roots.push_back(root.W);
            double rpm_dev = 0.0;
            for (double ref : refs)
                rpm_dev = std::max(rpm_dev, min_distance(ref, roots));

            const double seconds = sw.elapsed();
            const bool in_budget = seconds < 60.0;
            r.passed = var_dev < 1e-8 && rpm_dev < 1e-8 && in_budget;
            r.detail = "max|variational-ref| = " + fmt(var_dev) +
                       ", max|rpm-ref| = " + fmt(rpm_dev) + ", " +
                       fmt(seconds) + " s of 60 s budget";
        });
}

// --- 2. Exact truncation -------------------------------------------------
//
// n = 1, gamma = 1 must give exactly b^2 = 6 (as a rational), W = 6, and a
// polynomial-solution residual below 1e-40 at 50 digits.
CriterionResult criterion_exact_truncation(int digits) {
    return run_criterion(
        2, "exact-truncation", false,
        [digits](CriterionResult& r, const Stopwatch&) {
            auto sols = solve_truncation(1, Rational(1), digits);
            bool structure = sols.size() == 2;
            double b_dev = 0.0;
            double worst_residual = 0.0;
            for (const auto& sol : sols) {
                structure = structure && sol.b_squared_exact &&
                            sol.b_squared == Rational(6) &&
                            sol.W == Rational(6);
                b_dev = std::max(
                    b_dev, std::fabs(to_double(sol.b_root * sol.b_root) - 6.0));
                worst_residual = std::max(
                    worst_residual,
                    to_double(verify_polynomial_solution(sol, digits)));
            }
            r.passed = structure && worst_residual < 1e-40;
            r.detail = std::string("roots = ") + std::to_string(sols.size()) +
                       " (b = -sqrt(6), +sqrt(6)), exact b^2 = 6: " +
                       (structure ? "yes" : "no") +
                       ", max residual = " + fmt(worst_residual);
        });
}

// --- 3. Conditional solvability ------------------------------------------
//
// At b = sqrt(6) the truncation construction produces only W = 6, while the
// true spectrum also contains 1.600357154 and 10.21072810; each missed
// state is more than 1 away from the truncation set.
CriterionResult criterion_conditional_solvability(int digits) {
    return run_criterion(
        3, "conditional-solvability", false,
        [digits](CriterionResult& r, const Stopwatch&) {
            auto sols = solve_truncation(1, Rational(1), digits);
            std::vector<double> truncation_set;
            for (const auto& sol : sols) {
                double w = to_double(to_real(sol.W));
                if (min_distance(w, truncation_set) > 1e-12)
                    truncation_set.push_back(w);
            }
            const bool single = truncation_set.size() == 1 &&
                                std::fabs(truncation_set[0] - 6.0) < 1e-12;

            auto var = variational_spectrum(DimensionlessProblem{1.0, kSqrt6},
                                            25, digits, 3);
            std::vector<double> spectrum;
            for (const auto& w : var.values)
                spectrum.push_back(to_double(w));
            const double hit0 = min_distance(1.600357154, spectrum);
            const double hit2 = min_distance(10.21072810, spectrum);

            double min_missed_gap = std::numeric_limits<double>::infinity();
            for (double w : spectrum) {
                double gap = min_distance(w, truncation_set);
                if (gap > 1e-6)  // state missed by truncation
                    min_missed_gap = std::min(min_missed_gap, gap);
            }

            r.passed = single && hit0 < 1e-6 && hit2 < 1e-6 &&
                       min_missed_gap > 1.0;
            r.detail = "truncation set = {6}: " + std::string(single ? "yes" : "no") +
                       ", |spectrum-1.600357154| = " + fmt(hit0) +
                       ", |spectrum-10.21072810| = " + fmt(hit2) +
                       ", min gap of missed states = " + fmt(min_missed_gap);
        });
}

// --- 4. Parity symmetry (expected failure) --------------------------------
//
// Asserts W_j(-b) = W_j(b).  The RPM clause holds identically because the
// Hankel determinants are even in b.  The variational clause compares the
// actual spectra, which differ at O(1) because dW/db = -<1/zeta> < 0; it is
// the documented expected failure.
CriterionResult criterion_parity_symmetry(int digits) {
    return run_criterion(
        4, "parity-symmetry", true,
        [digits](CriterionResult& r, const Stopwatch&) {
            const DimensionlessProblem plus{1.0, kSqrt6};
            const DimensionlessProblem minus{1.0, -kSqrt6};

            // Seeds pin a common scan window for both signs; the default
            // windows depend on sign(b) through the rigorous ground-state
            // floor, which would mask the determinant parity being tested.
            const std::vector<double> window{1.6, 6.0, 9.8};
            auto rpm_plus =
                rpm_spectrum(plus, 12, 0, 3, window, digits, 1e-7);
            auto rpm_minus =
                rpm_spectrum(minus, 12, 0, 3, window, digits, 1e-7);
            double rpm_dev = 0.0;
            for (std::size_t j = 0; j < rpm_plus.size(); ++j)
                rpm_dev = std::max(
                    rpm_dev, std::fabs(rpm_plus[j].W - rpm_minus[j].W));

            auto var_plus = variational_spectrum(plus, 25, digits, 3);
            auto var_minus = variational_spectrum(minus, 25, digits, 3);
            double var_dev = 0.0;
            for (int j = 0; j < 3; ++j)
                var_dev = std::max(var_dev,
                                   std::fabs(to_double(var_plus.values[j]) -
                                             to_double(var_minus.values[j])));

            r.passed = rpm_dev < 1e-10 && var_dev < 1e-8;
            r.detail = "rpm set deviation = " + fmt(rpm_dev) +
                       " (determinants even in b), variational deviation = " +
                       fmt(var_dev) +
                       " (true spectrum is asymmetric: dW/db < 0)";
        });
}

// --- 5. Upper-bound monotonicity ------------------------------------------
//
// Hylleraas-Undheim: enlarging the basis can only lower each bound.  For
// gamma = 1, b = sqrt(6), states j = 0..2, basis sizes N = 5..25:
// W_j^(N+1) <= W_j^(N) + 1e-12.
CriterionResult criterion_monotonicity(int digits) {
    return run_criterion(
        5, "variational-monotonicity", false,
        [digits](CriterionResult& r, const Stopwatch&) {
            const DimensionlessProblem problem{1.0, kSqrt6};
            double worst = -std::numeric_limits<double>::infinity();
            std::vector<double> prev;
            for (int N = 5; N <= 26; ++N) {
                auto var = variational_spectrum(problem, N, digits, 3);
                std::vector<double> cur;
                for (const auto& w : var.values) cur.push_back(to_double(w));
                if (!prev.empty())
                    for (int j = 0; j < 3; ++j)
                        worst = std::max(worst, cur[j] - prev[j]);
                prev = cur;
            }
            r.passed = worst <= 1e-12;
            r.detail =
                "max increase W_j^(N+1) - W_j^(N) over N=5..25, j=0..2: " +
                fmt(worst);
        });
}

// --- 6. Oscillator closed form ---------------------------------------------
//
// gamma = 1, b = 0: W_j = 4j + 4, so all three methods must give (4, 8, 12)
// within 1e-6 of the exact values and of each other.
CriterionResult criterion_oscillator(int digits) {
    return run_criterion(
        6, "oscillator-closed-form", false,
        [digits](CriterionResult& r, const Stopwatch&) {
            const DimensionlessProblem osc{1.0, 0.0};
            const double exact[3] = {4.0, 8.0, 12.0};

            auto var = variational_spectrum(osc, 20, digits, 3);
            auto rpm = rpm_spectrum(osc, 12, 0, 3, {}, digits, 1e-10);
            auto orc = oracle_spectrum(osc, 3);

            double dev = 0.0;
            for (int j = 0; j < 3; ++j) {
                const double w[3] = {to_double(var.values[j]), rpm[j].W,
                                     orc[j].W};
                for (double wj : w)
                    dev = std::max(dev, std::fabs(wj - exact[j]));
            }
            r.passed = dev < 1e-6;
            r.detail = "max deviation from (4, 8, 12) across "
                       "variational/rpm/oracle = " +
                       fmt(dev);
        });
}

// --- 7. Oracle equivalence ---------------------------------------------------
//
// Independent brute force: for b in {-3, -sqrt(6), 0, 0.5, sqrt(6), 4} and
// gamma in {0, 1}, the three lowest shooting eigenvalues agree with the
// variational bounds (N = 30) within 1e-5.
CriterionResult criterion_oracle_equivalence(int digits) {
    return run_criterion(
        7, "oracle-equivalence", false,
        [digits](CriterionResult& r, const Stopwatch&) {
            const double bs[6] = {-3.0, -kSqrt6, 0.0, 0.5, kSqrt6, 4.0};
            const double gammas[2] = {0.0, 1.0};
            double dev = 0.0;
            double worst_gamma = 0.0, worst_b = 0.0;
            int worst_j = -1;
            for (double g : gammas) {
                for (double b : bs) {
                    const DimensionlessProblem problem{g, b};
                    auto var = variational_spectrum(problem, 30, digits, 3);
                    auto orc = oracle_spectrum(problem, 3);
                    for (int j = 0; j < 3; ++j) {
                        double d = std::fabs(orc[j].W -
                                             to_double(var.values[j]));
                        if (d > dev) {
                            dev = d;
                            worst_gamma = g;
                            worst_b = b;
                            worst_j = j;
                        }
                    }
                }
            }
            r.passed = dev < 1e-5;
            r.detail = "max|oracle-variational| = " + fmt(dev) +
                       " at gamma=" + fmt(worst_gamma) + ", b=" +
                       fmt(worst_b) + ", j=" + std::to_string(worst_j) +
                       " (12 parameter pairs, 3 states each)";
        });
}

// --- 8. Reduction validation -----------------------------------------------
//
// Three physical parameter sets with Omega k != 0: mapping the variational
// W back through energy_from_W must match direct physical shooting within
// 1e-6 relative.
CriterionResult criterion_reduction_validation(int digits) {
    return run_criterion(
        8, "reduction-validation", false,
        [digits](CriterionResult& r, const Stopwatch&) {
            struct Case {
                PhysicalParams p;
                QuantumNumbers q;
            };
            const Case cases[3] = {
                {{0.5, 1.0, 1.0, -1.0}, {1, +1}},   // gamma=1, b=+1
                {{1.0, 2.0, 3.0, 1.0}, {0, -1}},    // gamma=1, b~-0.6866
                {{0.75, 1.5, -2.0, 0.5}, {-2, -1}}, // gamma=1, b~-0.3913
            };
            double rel = 0.0;
            int worst_case = -1, worst_j = -1;
            for (int c = 0; c < 3; ++c) {
                auto reduction = reduce(cases[c].p, cases[c].q);
                auto var =
                    variational_spectrum(reduction.problem, 25, digits, 2);
                for (int j = 0; j < 2; ++j) {
                    const double e_var =
                        energy_from_W(to_double(var.values[j]), reduction,
                                      cases[c].p, cases[c].q);
                    const double e_orc =
                        physical_oracle(cases[c].p, cases[c].q, j);
                    const double d =
                        std::fabs(e_var - e_orc) / std::fabs(e_orc);
                    if (d > rel) {
                        rel = d;
                        worst_case = c;
                        worst_j = j;
                    }
                }
            }
            r.passed = rel < 1e-6;
            r.detail = "max relative |energy_from_W(variational) - "
                       "physical shooting| = " +
                       fmt(rel) + " (case " + std::to_string(worst_case) +
                       ", j = " + std::to_string(worst_j) + ")";
        });
}

// --- 9. Coulomb limit ---------------------------------------------------------
//
// k = 0, f < 0: the closed-form Coulomb spectrum matches physical shooting
// within 1e-6 for three states, for three parameter sets.
CriterionResult criterion_coulomb_limit(int) {
    return run_criterion(
        9, "coulomb-limit", false, [](CriterionResult& r, const Stopwatch&) {
            struct Case {
                PhysicalParams p;
                QuantumNumbers q;
            };
            const Case cases[3] = {
                {{1.0, 0.0, 0.0, -1.0}, {0, +1}},  // gamma=0
                {{1.0, 1.0, 0.0, -2.0}, {1, +1}},  // gamma=1
                {{0.5, 2.0, 0.0, -1.0}, {0, -1}},  // gamma=1
            };
            double dev = 0.0;
            int worst_case = -1, worst_n = -1;
            for (int c = 0; c < 3; ++c) {
                auto closed =
                    coulomb_limit_spectrum(cases[c].p, cases[c].q, 2);
                for (int n = 0; n < 3; ++n) {
                    const double e_orc =
                        physical_oracle(cases[c].p, cases[c].q, n);
                    const double d = std::fabs(closed[n] - e_orc);
                    if (d > dev) {
                        dev = d;
                        worst_case = c;
                        worst_n = n;
                    }
                }
            }
            r.passed = dev < 1e-6;
            r.detail = "max|closed form - shooting| = " + fmt(dev) +
                       " (case " + std::to_string(worst_case) + ", n = " +
                       std::to_string(worst_n) + ")";
        });
}

// --- 10. Diagnosis -------------------------------------------------------------
//
// Every tested parameter set (both signs of k and f, Omega k zero and
// nonzero) must report that the 3D problem has no bound states: the motion
// along the symmetry axis is free, so the z-integral of any would-be bound
// state diverges.
CriterionResult criterion_diagnosis(int) {
    return run_criterion(
        10, "diagnosis-no-3d-bound-states", false,
        [](CriterionResult& r, const Stopwatch&) {
            const double masses[2] = {0.5, 1.0};
            const double omegas[3] = {-1.0, 0.0, 1.0};
            const double ks[3] = {-1.0, 0.0, 2.0};
            const double fs[3] = {-1.0, 0.0, 1.0};
            int tested = 0, wrong = 0;
            for (double m : masses)
                for (double omega : omegas)
                    for (double k : ks)
                        for (double f : fs) {
                            PhysicalParams p{m, omega, k, f};
                            Diagnosis d = diagnose(p);
                            ++tested;
                            if (d.three_d_bound_states || d.message.empty())
                                ++wrong;
                        }
            r.passed = wrong == 0;
            r.detail = std::to_string(tested) +
                       " parameter sets tested, " + std::to_string(wrong) +
                       " reported 3D bound states";
        });
}

void log_line(std::ostream& log, const CriterionResult& c) {
    const char* status = nullptr;
    if (c.passed)
        status = c.expected_fail ? "XPASS" : "PASS ";
    else
        status = c.expected_fail ? "XFAIL" : "FAIL ";
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(5) << c.seconds;
    log << "[" << std::setw(2) << c.id << "] " << std::left << std::setw(30)
        << c.name << std::right << "  " << status << "  " << std::setw(9)
        << secs.str() << " s  " << c.detail << "\n";
}

}  // namespace

bool SuiteResult::ok() const {
    for (const auto& c : criteria) {
        const bool as_documented = c.expected_fail ? !c.passed : c.passed;
        if (!as_documented) return false;
    }
    return true;
}

SuiteResult run_acceptance(std::ostream& log, int digits) {
    SuiteResult suite;
    auto push = [&](CriterionResult c) {
        log_line(log, c);
        log.flush();
        suite.criteria.push_back(std::move(c));
    };
    push(criterion_reference_eigenvalues(digits));
    push(criterion_exact_truncation(digits));
    push(criterion_conditional_solvability(digits));
    push(criterion_parity_symmetry(digits));
    push(criterion_monotonicity(digits));
    push(criterion_oscillator(digits));
    push(criterion_oracle_equivalence(digits));
    push(criterion_reduction_validation(digits));
    push(criterion_coulomb_limit(digits));
    push(criterion_diagnosis(digits));
    return suite;
}

}  // namespace heunspec::verify
