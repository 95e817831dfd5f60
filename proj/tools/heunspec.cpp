// heunspec: command-line front end for the radial oscillator-plus-Coulomb
// eigenvalue toolkit.
//
// Subcommands:
//   spectrum  - eigenvalues of the dimensionless problem by the selected
//               methods (variational / rpm / oracle) with cross-checks
//   truncate  - exact polynomial (truncation) solutions for a given degree,
//               each compared against the full variational spectrum
//   reduce    - physical -> dimensionless reduction, bound-state diagnosis,
//               and the closed-form Coulomb-limit spectrum where it applies
//   sweep     - variational eigenvalue curves W_j(b) over a b-grid (CSV/JSON),
//               optionally with the exact truncation loci
//   verify    - built-in verification battery
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 method disagreement beyond 1e-6, 4 method (solver) error.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heunspec/frobenius.hpp"
#include "heunspec/model.hpp"
#include "heunspec/oracle.hpp"
#include "heunspec/precision.hpp"
#include "heunspec/rpm.hpp"
#include "heunspec/types.hpp"
#include "heunspec/variational.hpp"
#include "heunspec/verify.hpp"

namespace {

using heunspec::BracketNotFound;
using heunspec::DimensionlessProblem;
using heunspec::DivergentMoment;
using heunspec::EigenvalueEstimate;
using heunspec::IllConditionedBasis;
using heunspec::InsufficientStableRoots;
using heunspec::Method;
using heunspec::NoBoundState;
using heunspec::NotCoulombRegime;
using heunspec::OverflowGuard;
using heunspec::PhysicalParams;
using heunspec::PlanarBoundStates;
using heunspec::PrecisionGuard;
using heunspec::QuantumNumbers;
using heunspec::Rational;
using heunspec::RpmRoot;
using heunspec::SeriesTooShort;
using heunspec::ZeroHarmonicTerm;

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDisagreement = 3;
constexpr int kExitMethodError = 4;

constexpr double kAgreementTol = 1e-6;
// Roots must repeat across Hankel orders within this tolerance to count as
// converged; chosen equal to the cross-method agreement tolerance so that a
// "stable" root is automatically accurate enough for the agreement check.
constexpr double kCliStabilityTol = 1e-6;

// --- formatting -----------------------------------------------------------

// 15 significant digits; shared by CSV fields and (via round15) JSON numbers.
std::string sig15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

// Round-trips x through its 15-significant-digit decimal form so that the
// serialized JSON numbers carry exactly the precision the CSV carries.
double round15(double x) { return std::strtod(sig15(x).c_str(), nullptr); }

std::string sig3(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// --- output sink ------------------------------------------------------------

class Sink {
  public:
    // Empty path selects standard output.
    bool open(const std::string& path) {
        if (path.empty()) return true;
        file_.open(path, std::ios::out | std::ios::trunc);
        if (!file_) {
            std::cerr << "error: cannot open output file '" << path << "'\n";
            return false;
        }
        os_ = &file_;
        return true;
    }
    std::ostream& out() { return *os_; }

  private:
    std::ofstream file_;
    std::ostream* os_ = &std::cout;
};

// --- rational parsing ---------------------------------------------------------

// Accepts integers ("2"), fractions ("3/2"), and finite decimals ("0.5").
Rational parse_rational(const std::string& text) {
    const std::string what = "not a rational number: '" + text + "'";
    if (text.empty()) throw std::invalid_argument(what);
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty()) throw std::invalid_argument(what);
        try {
            Rational r(num + "/" + den);
            return r;
        } catch (const std::exception&) {
            throw std::invalid_argument(what);
        }
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        try {
            return Rational(text);
        } catch (const std::exception&) {
            throw std::invalid_argument(what);
        }
    }
    // Finite decimal: shift the point away and divide by the matching power
    // of ten.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || frac_len == 0) throw std::invalid_argument(what);
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const char c = digits[i];
        const bool sign_ok = i == 0 && (c == '+' || c == '-');
        if (!sign_ok && std::isdigit(static_cast<unsigned char>(c)) == 0)
            throw std::invalid_argument(what);
    }
    try {
        Rational numerator(digits);
        Rational denominator(1);
        for (std::size_t i = 0; i < frac_len; ++i) denominator *= 10;
        return numerator / denominator;
    } catch (const std::exception&) {
        throw std::invalid_argument(what);
    }
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// --- method-error boundary ------------------------------------------------

int report_method_error(const char* name, const std::exception& e) {
    std::cerr << "error: " << name << ": " << e.what() << "\n";
    return kExitMethodError;
}

// Runs a command body, translating solver exceptions into exit code 4 with
// the originating error name.
template <typename Fn>
int with_method_errors(Fn&& fn) {
    try {
        return fn();
    } catch (const ZeroHarmonicTerm& e) {
        return report_method_error("ZeroHarmonicTerm", e);
    } catch (const NotCoulombRegime& e) {
        return report_method_error("NotCoulombRegime", e);
    } catch (const DivergentMoment& e) {
        return report_method_error("DivergentMoment", e);
    } catch (const SeriesTooShort& e) {
        return report_method_error("SeriesTooShort", e);
    } catch (const NoBoundState& e) {
        return report_method_error("NoBoundState", e);
    } catch (const IllConditionedBasis& e) {
        return report_method_error("IllConditionedBasis", e);
    } catch (const InsufficientStableRoots& e) {
        return report_method_error("InsufficientStableRoots", e);
    } catch (const BracketNotFound& e) {
        return report_method_error("BracketNotFound", e);
    } catch (const OverflowGuard& e) {
        return report_method_error("OverflowGuard", e);
    } catch (const std::exception& e) {
        return report_method_error("InternalError", e);
    }
}

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kExitUsage;
}

// --- spectrum ----------------------------------------------------------------

struct SpectrumOptions {
    double gamma = 0.0;
    double b = 0.0;
    std::string b_squared;  // optional exact rational; sign selects the root
    std::string methods = "variational,rpm";
    int states = 3;
    int digits = 50;
    int basis_size = 20;
    int hankel_dmax = 10;
    int hankel_offset = 0;
    std::string format = "table";
    std::string output;
};

struct MethodRun {
    Method method = Method::Variational;
    int order = 0;
    std::vector<EigenvalueEstimate> states;
};

// Aligns the (possibly larger, sign-blind) RPM stable-root set with the
// anchor method's values: for each anchor state, the nearest unused root.
// Without an anchor the lowest n_states roots are reported as-is.
std::vector<EigenvalueEstimate> align_rpm_states(
    const std::vector<RpmRoot>& roots,
    const std::vector<EigenvalueEstimate>* anchor, int n_states) {
    std::vector<EigenvalueEstimate> out;
    std::vector<bool> used(roots.size(), false);
    for (int j = 0; j < n_states; ++j) {
        std::size_t pick = 0;
        if (anchor != nullptr) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < roots.size(); ++r) {
                if (used[r]) continue;
                const double d = std::fabs(roots[r].W - (*anchor)[j].W);
                if (d < best) {
                    best = d;
                    pick = r;
                }
            }
        } else {
            while (pick < roots.size() && used[pick]) ++pick;
        }
        if (pick >= roots.size()) break;
        used[pick] = true;
        EigenvalueEstimate e;
        e.index = j;
        e.W = roots[pick].W;
        e.method = Method::RPM;
        e.order = roots[pick].D;
        e.error_gauge = roots[pick].drift;
        out.push_back(e);
    }
    return out;
}

void emit_spectrum_table(std::ostream& os, const SpectrumOptions& opt,
                         double b,
                         const std::vector<MethodRun>& runs,
                         const std::vector<std::string>& pair_lines,
                         double agreement) {
    os << "problem: gamma = " << sig15(opt.gamma) << ", b = " << sig15(b)
       << "\n";
    os << "settings: digits = " << opt.digits << ", basis N = "
       << opt.basis_size << ", Hankel D_max = " << opt.hankel_dmax
       << ", offset d = " << opt.hankel_offset << "\n\n";
    os << std::left << std::setw(13) << "method" << std::setw(7) << "order"
       << std::setw(7) << "index" << std::setw(24) << "W"
       << "error_gauge" << "\n";
    for (const auto& run : runs) {
        for (const auto& e : run.states) {
            os << std::left << std::setw(13) << method_name(run.method)
               << std::setw(7) << e.order << std::setw(7) << e.index
               << std::setw(24) << sig15(e.W) << sig3(e.error_gauge) << "\n";
        }
    }
    os << "\n";
    for (const auto& line : pair_lines) os << line << "\n";
    os << "agreement: max pairwise deviation = " << sig3(agreement)
       << (agreement <= kAgreementTol ? "  (ok)" : "  (DISAGREEMENT)")
       << "\n";
}

void emit_spectrum_csv(std::ostream& os, const std::vector<MethodRun>& runs) {
    os << "index,W,error_gauge,method,order\n";
    for (const auto& run : runs) {
        for (const auto& e : run.states) {
            os << e.index << "," << sig15(e.W) << "," << sig15(e.error_gauge)
               << "," << method_name(run.method) << "," << e.order << "\n";
        }
    }
}

ordered_json spectrum_results_json(const std::vector<MethodRun>& runs) {
    ordered_json results = ordered_json::array();
    for (const auto& run : runs) {
        ordered_json states = ordered_json::array();
        for (const auto& e : run.states) {
            states.push_back(ordered_json{{"index", e.index},
                                          {"W", round15(e.W)},
                                          {"error_gauge",
                                           round15(e.error_gauge)}});
        }
        results.push_back(ordered_json{{"method", method_name(run.method)},
                                       {"order", run.order},
                                       {"states", std::move(states)}});
    }
    return results;
}

int cmd_spectrum(const SpectrumOptions& opt) {
    // ---- validation (exit 2) ----
    if (opt.gamma < 0) return usage_error("--gamma must be non-negative");
    if (opt.states < 1) return usage_error("--states must be at least 1");
    if (opt.digits < 16 || opt.digits > 500)
        return usage_error("--digits must lie in [16, 500]");
    if (opt.basis_size < opt.states + 2)
        return usage_error("--basis-size must be at least states + 2");
    if (opt.hankel_dmax < 3)
        return usage_error("--hankel-dmax must be at least 3");
    if (opt.hankel_offset < 0)
        return usage_error("--hankel-offset must be non-negative");

    double b = opt.b;
    if (!opt.b_squared.empty()) {
        Rational b2;
        try {
            b2 = parse_rational(opt.b_squared);
        } catch (const std::invalid_argument& e) {
            return usage_error(e.what());
        }
        // The sign of the argument selects the sign of the root:
        // --b-squared 6 means b = +sqrt(6), --b-squared -6 means -sqrt(6).
        const double mag = std::fabs(heunspec::to_double(heunspec::to_real(b2)));
        b = (b2 < 0 ? -1.0 : 1.0) * std::sqrt(mag);
    }

    std::vector<Method> methods;
    {
        std::stringstream ss(opt.methods);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "variational")
                methods.push_back(Method::Variational);
            else if (item == "rpm")
                methods.push_back(Method::RPM);
            else if (item == "oracle")
                methods.push_back(Method::Oracle);
            else if (!item.empty())
                return usage_error("unknown method '" + item +
                                   "' (expected variational, rpm, oracle)");
        }
        std::sort(methods.begin(), methods.end());
        methods.erase(std::unique(methods.begin(), methods.end()),
                      methods.end());
        if (methods.empty())
            return usage_error("--methods must select at least one of "
                               "variational, rpm, oracle");
    }

    Sink sink;
    if (!sink.open(opt.output)) return kExitUsage;

    return with_method_errors([&]() -> int {
        PrecisionGuard guard(opt.digits);
        const DimensionlessProblem problem{opt.gamma, b};

        const bool want_var =
            std::count(methods.begin(), methods.end(), Method::Variational) >
            0;
        const bool want_rpm =
            std::count(methods.begin(), methods.end(), Method::RPM) > 0;
        const bool want_oracle =
            std::count(methods.begin(), methods.end(), Method::Oracle) > 0;

        std::vector<MethodRun> runs;
        std::vector<EigenvalueEstimate> anchor_states;
        bool have_anchor = false;

        if (want_var) {
            auto vs = heunspec::variational_spectrum(problem, opt.basis_size,
                                                     opt.digits, opt.states);
            runs.push_back({Method::Variational, opt.basis_size,
                            std::move(vs.estimates)});
            anchor_states = runs.front().states;
            have_anchor = true;
        }
        std::vector<EigenvalueEstimate> oracle_states;
        if (want_oracle) {
            oracle_states = heunspec::oracle_spectrum(problem, opt.states);
            if (!have_anchor) {
                anchor_states = oracle_states;
                have_anchor = true;
            }
        }

        if (want_rpm) {
            // The Hankel determinants are even in b, so the stable-root set
            // is the union of the spectra at +|b| and -|b|.  Request a few
            // extra roots so the anchor's states are all present, then align
            // by value.
            std::vector<RpmRoot> roots;
            for (int extra : {4, 2, 1, 0}) {
                try {
                    roots = heunspec::rpm_spectrum(
                        problem, opt.hankel_dmax, opt.hankel_offset,
                        opt.states + extra, {}, opt.digits, kCliStabilityTol);
                    break;
                } catch (const InsufficientStableRoots&) {
                    if (extra == 0) throw;
                }
            }
            runs.push_back({Method::RPM, opt.hankel_dmax,
                            align_rpm_states(
                                roots, have_anchor ? &anchor_states : nullptr,
                                opt.states)});
        }
        if (want_oracle)
            runs.push_back({Method::Oracle, 2, std::move(oracle_states)});

        // ---- pairwise agreement ----
        double agreement = 0.0;
        std::vector<std::string> pair_lines;
        for (std::size_t a = 0; a < runs.size(); ++a) {
            for (std::size_t c = a + 1; c < runs.size(); ++c) {
                double dev = 0.0;
                const std::size_t n =
                    std::min(runs[a].states.size(), runs[c].states.size());
                for (std::size_t j = 0; j < n; ++j)
                    dev = std::max(dev, std::fabs(runs[a].states[j].W -
                                                  runs[c].states[j].W));
                agreement = std::max(agreement, dev);
                pair_lines.push_back(
                    std::string(method_name(runs[a].method)) + " vs " +
                    method_name(runs[c].method) + ": max deviation " +
                    sig3(dev));
            }
        }

        if (opt.format == "table") {
            emit_spectrum_table(sink.out(), opt, b, runs, pair_lines,
                                agreement);
        } else if (opt.format == "csv") {
            emit_spectrum_csv(sink.out(), runs);
        } else {
            ordered_json methods_json = ordered_json::array();
            for (Method m : methods) methods_json.push_back(method_name(m));
            ordered_json doc;
            doc["command"] = "spectrum";
            doc["inputs"] = ordered_json{
                {"gamma", round15(opt.gamma)},
                {"b", round15(b)},
                {"states", opt.states},
                {"digits", opt.digits},
                {"basis_size", opt.basis_size},
                {"hankel_dmax", opt.hankel_dmax},
                {"hankel_offset", opt.hankel_offset},
                {"methods", std::move(methods_json)}};
            doc["results"] = spectrum_results_json(runs);
            doc["agreement"] = round15(agreement);
            sink.out() << doc.dump(2) << "\n";
        }
        return agreement <= kAgreementTol ? kExitOk : kExitDisagreement;
    });
}

// --- truncate -----------------------------------------------------------------

struct TruncateOptions {
    int n = 0;
    std::string gamma = "0";
    int digits = 50;
    int basis_size = 20;
    std::string format = "table";
    std::string output;
};

int cmd_truncate(const TruncateOptions& opt) {
    if (opt.n < 0) return usage_error("--n must be non-negative");
    if (opt.digits < 16 || opt.digits > 500)
        return usage_error("--digits must lie in [16, 500]");
    if (opt.basis_size < 5)
        return usage_error("--basis-size must be at least 5");
    Rational gamma;
    try {
        gamma = parse_rational(opt.gamma);
    } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
    }
    if (gamma < 0) return usage_error("--gamma must be non-negative");

    Sink sink;
    if (!sink.open(opt.output)) return kExitUsage;

    return with_method_errors([&]() -> int {
        PrecisionGuard guard(opt.digits);
        auto solutions = heunspec::solve_truncation(opt.n, gamma, opt.digits);
        const double gamma_d = heunspec::to_double(heunspec::to_real(gamma));

        struct Companion {
            std::vector<EigenvalueEstimate> states;
            int captured = -1;
            double capture_gap = 0.0;
        };
        std::vector<double> residuals;
        std::vector<Companion> companions;
        for (const auto& sol : solutions) {
            residuals.push_back(heunspec::to_double(
                heunspec::verify_polynomial_solution(sol, opt.digits)));
            Companion comp;
            const DimensionlessProblem problem{
                gamma_d, heunspec::to_double(sol.b_root)};
            auto vs = heunspec::variational_spectrum(problem, opt.basis_size,
                                                     opt.digits, 3);
            comp.states = vs.estimates;
            const double w_exact =
                heunspec::to_double(heunspec::to_real(sol.W));
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < comp.states.size(); ++j) {
                const double d = std::fabs(comp.states[j].W - w_exact);
                if (d < best) {
                    best = d;
                    comp.captured = static_cast<int>(j);
                }
            }
            comp.capture_gap = best;
            companions.push_back(std::move(comp));
        }

        if (opt.format == "table") {
            auto& os = sink.out();
            const Rational w_exact = 2 * gamma + Rational(2 * opt.n + 2);
            os << "truncation degree n = " << opt.n << ", gamma = "
               << rational_to_string(gamma) << "\n";
            os << "eigenvalue W = 2*gamma + 2*n + 2 = "
               << rational_to_string(w_exact) << "\n";
            os << solutions.size() << " real root(s) of the truncation "
               << "polynomial\n";
            for (std::size_t i = 0; i < solutions.size(); ++i) {
                const auto& sol = solutions[i];
                os << "\n[" << i << "] b = "
                   << sig15(heunspec::to_double(sol.b_root));
                if (sol.b_squared_exact)
                    os << "   (b^2 = " << rational_to_string(sol.b_squared)
                       << " exactly)";
                os << "\n";
                os << "    residual of the polynomial solution: "
                   << sig3(residuals[i]) << "\n";
                os << "    series a_0..a_" << opt.n << ":";
                for (int j = 0; j <= opt.n &&
                                j < static_cast<int>(sol.coefficients.size());
                     ++j)
                    os << " "
                       << sig15(heunspec::to_double(sol.coefficients[j]));
                os << "\n";
                os << "    variational spectrum at this b (N = "
                   << opt.basis_size << "):\n";
                for (const auto& e : companions[i].states) {
                    os << "      j = " << e.index << "   W = " << std::left
                       << std::setw(22) << sig15(e.W) << std::right;
                    if (e.index == companions[i].captured)
                        os << "<- captured by truncation (|dW| = "
                           << sig3(companions[i].capture_gap) << ")";
                    else
                        os << "   missed";
                    os << "\n";
                }
            }
            if (!solutions.empty())
                os << "\nthe truncation condition pins a single state per "
                      "root; every other state above is missed\n";
        } else if (opt.format == "csv") {
            auto& os = sink.out();
            os << "index,W,error_gauge,method,order\n";
            for (std::size_t i = 0; i < solutions.size(); ++i) {
                os << i << ","
                   << sig15(heunspec::to_double(
                          heunspec::to_real(solutions[i].W)))
                   << "," << sig15(residuals[i]) << ",truncation," << opt.n
                   << "\n";
            }
        } else {
            ordered_json sol_array = ordered_json::array();
            for (std::size_t i = 0; i < solutions.size(); ++i) {
                const auto& sol = solutions[i];
                ordered_json coeffs = ordered_json::array();
                for (const auto& c : sol.coefficients)
                    coeffs.push_back(round15(heunspec::to_double(c)));
                ordered_json comp_states = ordered_json::array();
                for (const auto& e : companions[i].states) {
                    comp_states.push_back(ordered_json{
                        {"index", e.index},
                        {"W", round15(e.W)},
                        {"error_gauge", round15(e.error_gauge)},
                        {"captured", e.index == companions[i].captured}});
                }
                sol_array.push_back(ordered_json{
                    {"b", round15(heunspec::to_double(sol.b_root))},
                    {"b_squared_exact", sol.b_squared_exact},
                    {"b_squared", sol.b_squared_exact
                                      ? ordered_json(rational_to_string(
                                            sol.b_squared))
                                      : ordered_json(nullptr)},
                    {"W", rational_to_string(sol.W)},
                    {"residual", round15(residuals[i])},
                    {"coefficients", std::move(coeffs)},
                    {"companion",
                     ordered_json{{"basis_size", opt.basis_size},
                                  {"states", std::move(comp_states)}}}});
            }
            ordered_json states = ordered_json::array();
            for (std::size_t i = 0; i < solutions.size(); ++i) {
                states.push_back(ordered_json{
                    {"index", static_cast<int>(i)},
                    {"W", round15(heunspec::to_double(
                              heunspec::to_real(solutions[i].W)))},
                    {"error_gauge", round15(residuals[i])}});
            }
            ordered_json doc;
            doc["command"] = "truncate";
            doc["inputs"] = ordered_json{{"n", opt.n},
                                         {"gamma", rational_to_string(gamma)},
                                         {"digits", opt.digits},
                                         {"basis_size", opt.basis_size}};
            doc["results"] = ordered_json::array(
                {ordered_json{{"method", "truncation"},
                              {"order", opt.n},
                              {"states", std::move(states)}}});
            doc["agreement"] = 0.0;
            doc["solutions"] = std::move(sol_array);
            sink.out() << doc.dump(2) << "\n";
        }
        return kExitOk;
    });
}

// --- reduce -------------------------------------------------------------------

struct ReduceOptions {
    double mass = 1.0;
    double omega = 0.0;
    double k = 0.0;
    double f = 0.0;
    int l = 0;
    int spin = 1;
    int states = 3;
    std::string format = "table";
    std::string output;
};

int cmd_reduce(const ReduceOptions& opt) {
    if (opt.mass <= 0) return usage_error("--mass must be positive");
    if (opt.spin != 1 && opt.spin != -1)
        return usage_error("--spin must be +1 or -1");
    if (opt.states < 1) return usage_error("--states must be at least 1");

    Sink sink;
    if (!sink.open(opt.output)) return kExitUsage;

    return with_method_errors([&]() -> int {
        const PhysicalParams p{opt.mass, opt.omega, opt.k, opt.f};
        const QuantumNumbers q{opt.l, opt.spin};
        const auto diagnosis = heunspec::diagnose(p);
        const bool has_reduction = p.omega * p.k != 0.0;
        const bool has_coulomb = p.k == 0.0 && p.f < 0.0;

        heunspec::ReductionResult reduction;
        if (has_reduction) reduction = heunspec::reduce(p, q);
        std::vector<double> coulomb;
        if (has_coulomb)
            coulomb = heunspec::coulomb_limit_spectrum(p, q, opt.states - 1);

        const char* planar =
            diagnosis.planar_bound_states == PlanarBoundStates::AllParameters
                ? "all-parameters"
                : "only-attractive-f";

        if (opt.format == "table") {
            auto& os = sink.out();
            os << "inputs: m = " << sig15(p.mass) << ", Omega = "
               << sig15(p.omega) << ", k = " << sig15(p.k) << ", f = "
               << sig15(p.f) << ", l = " << q.l << ", s = "
               << (q.spin > 0 ? "+1" : "-1") << "\n\n";
            os << "diagnosis:\n";
            os << "  3D bound states: "
               << (diagnosis.three_d_bound_states ? "yes" : "none") << "\n";
            os << "  planar bound states: "
               << (diagnosis.planar_bound_states ==
                           PlanarBoundStates::AllParameters
                       ? "for every f (harmonic confinement, Omega k != 0)"
                       : "only for attractive f < 0 (pure Coulomb, k = 0)")
               << "\n";
            os << "  " << diagnosis.message << "\n";
            if (has_reduction) {
                os << "\nreduction to the dimensionless problem:\n";
                os << "  gamma = " << sig15(reduction.problem.gamma) << "\n";
                os << "  b = " << sig15(reduction.problem.b) << "\n";
                os << "  lambda = " << sig15(reduction.lambda) << "\n";
                os << "  E = energy_scale * W - energy_offset, energy_scale "
                      "= "
                   << sig15(reduction.energy_scale) << ", energy_offset = "
                   << sig15(reduction.energy_offset) << "\n";
            }
            if (has_coulomb) {
                os << "\nCoulomb-limit spectrum (k = 0, f < 0):\n";
                for (std::size_t n = 0; n < coulomb.size(); ++n)
                    os << "  E_" << n << " = " << sig15(coulomb[n]) << "\n";
            }
        } else if (opt.format == "csv") {
            auto& os = sink.out();
            os << "index,W,error_gauge,method,order\n";
            for (std::size_t n = 0; n < coulomb.size(); ++n)
                os << n << "," << sig15(coulomb[n]) << ",0,coulomb-limit,0\n";
        } else {
            ordered_json doc;
            doc["command"] = "reduce";
            doc["inputs"] = ordered_json{
                {"mass", round15(p.mass)}, {"omega", round15(p.omega)},
                {"k", round15(p.k)},       {"f", round15(p.f)},
                {"l", q.l},                {"spin", q.spin}};
            ordered_json results = ordered_json::array();
            if (has_coulomb) {
                ordered_json states = ordered_json::array();
                for (std::size_t n = 0; n < coulomb.size(); ++n)
                    states.push_back(
                        ordered_json{{"index", static_cast<int>(n)},
                                     {"W", round15(coulomb[n])},
                                     {"error_gauge", 0.0}});
                results.push_back(ordered_json{{"method", "coulomb-limit"},
                                               {"order", 0},
                                               {"states", std::move(states)}});
            }
            doc["results"] = std::move(results);
            doc["agreement"] = 0.0;
            doc["diagnosis"] =
                ordered_json{{"three_d_bound_states",
                              diagnosis.three_d_bound_states},
                             {"planar_bound_states", planar},
                             {"message", diagnosis.message}};
            if (has_reduction) {
                doc["reduction"] = ordered_json{
                    {"gamma", round15(reduction.problem.gamma)},
                    {"b", round15(reduction.problem.b)},
                    {"lambda", round15(reduction.lambda)},
                    {"energy_scale", round15(reduction.energy_scale)},
                    {"energy_offset", round15(reduction.energy_offset)}};
            } else {
                doc["reduction"] = nullptr;
            }
            sink.out() << doc.dump(2) << "\n";
        }
        return kExitOk;
    });
}

// --- sweep --------------------------------------------------------------------

struct SweepOptions {
    std::string gamma = "0";
    double b_min = 0.0;
    double b_max = 0.0;
    int points = 0;
    int states = 3;
    int digits = 50;
    int basis_size = 20;
    int truncation_max_n = -1;  // -1 disables the loci
    int jobs = 0;               // 0 = auto
    std::string format = "csv";
    std::string output;
};

struct SweepRecord {
    double b = 0.0;
    int state_index = 0;
    double W = 0.0;
    std::string method;
};

int cmd_sweep(const SweepOptions& opt) {
    if (!(opt.b_min < opt.b_max))
        return usage_error("--b-min must be strictly below --b-max");
    if (opt.points < 2) return usage_error("--points must be at least 2");
    if (opt.states < 1) return usage_error("--states must be at least 1");
    if (opt.digits < 16 || opt.digits > 500)
        return usage_error("--digits must lie in [16, 500]");
    if (opt.basis_size < opt.states + 2)
        return usage_error("--basis-size must be at least states + 2");
    if (opt.jobs < 0) return usage_error("--jobs must be non-negative");
    Rational gamma;
    try {
        gamma = parse_rational(opt.gamma);
    } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
    }
    if (gamma < 0) return usage_error("--gamma must be non-negative");

    Sink sink;
    if (!sink.open(opt.output)) return kExitUsage;

    return with_method_errors([&]() -> int {
        PrecisionGuard guard(opt.digits);
        const double gamma_d = heunspec::to_double(heunspec::to_real(gamma));

        std::vector<double> grid(opt.points);
        for (int i = 0; i < opt.points; ++i)
            grid[i] = opt.b_min + (opt.b_max - opt.b_min) * i /
                                      (opt.points - 1);

        // Bounded worker pool.  Every task runs at the same precision, so
        // the workers' precision guards all write the same global value and
        // the shared mpfr default stays consistent.
        std::vector<std::vector<double>> curves(grid.size());
        std::vector<std::exception_ptr> failures(grid.size());
        std::atomic<std::size_t> cursor{0};
        auto work = [&]() {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= grid.size()) return;
                try {
                    PrecisionGuard task_guard(opt.digits);
                    auto vs = heunspec::variational_spectrum(
                        DimensionlessProblem{gamma_d, grid[i]},
                        opt.basis_size, opt.digits, opt.states);
                    std::vector<double> column;
                    for (const auto& w : vs.values)
                        column.push_back(heunspec::to_double(w));
                    curves[i] = std::move(column);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        };
        unsigned pool = opt.jobs > 0
                            ? static_cast<unsigned>(opt.jobs)
                            : std::max(1u, std::min(
                                               std::thread::
                                                   hardware_concurrency(),
                                               8u));
        pool = std::min<unsigned>(pool, static_cast<unsigned>(grid.size()));
        std::vector<std::thread> threads;
        for (unsigned t = 1; t < pool; ++t) threads.emplace_back(work);
        work();
        for (auto& t : threads) t.join();
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (failures[i]) std::rethrow_exception(failures[i]);

        std::vector<SweepRecord> records;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (int j = 0; j < opt.states; ++j)
                records.push_back(
                    {grid[i], j, curves[i][j], "variational"});

        // Exact truncation loci (b_root, captured state index, W).
        for (int n = 0; n <= opt.truncation_max_n; ++n) {
            auto solutions = heunspec::solve_truncation(n, gamma, opt.digits);
            for (const auto& sol : solutions) {
                const double b = heunspec::to_double(sol.b_root);
                if (b < opt.b_min - 1e-12 || b > opt.b_max + 1e-12) continue;
                const double w =
                    heunspec::to_double(heunspec::to_real(sol.W));
                auto vs = heunspec::variational_spectrum(
                    DimensionlessProblem{gamma_d, b}, opt.basis_size,
                    opt.digits, opt.states);
                int captured = 0;
                double best = std::numeric_limits<double>::infinity();
                for (int j = 0; j < opt.states; ++j) {
                    const double d =
                        std::fabs(heunspec::to_double(vs.values[j]) - w);
                    if (d < best) {
                        best = d;
                        captured = j;
                    }
                }
                records.push_back({b, captured, w, "truncation"});
            }
        }

        std::sort(records.begin(), records.end(),
                  [](const SweepRecord& a, const SweepRecord& b) {
                      if (a.b != b.b) return a.b < b.b;
                      if (a.state_index != b.state_index)
                          return a.state_index < b.state_index;
                      return a.method < b.method;
                  });

        if (opt.format == "json") {
            ordered_json recs = ordered_json::array();
            for (const auto& rec : records)
                recs.push_back(ordered_json{{"b", round15(rec.b)},
                                            {"state_index", rec.state_index},
                                            {"W", round15(rec.W)},
                                            {"method", rec.method}});
            ordered_json doc;
            doc["command"] = "sweep";
            doc["inputs"] = ordered_json{
                {"gamma", rational_to_string(gamma)},
                {"b_min", round15(opt.b_min)},
                {"b_max", round15(opt.b_max)},
                {"points", opt.points},
                {"states", opt.states},
                {"digits", opt.digits},
                {"basis_size", opt.basis_size},
                {"truncation_max_n", opt.truncation_max_n}};
            doc["results"] = ordered_json::array();
            doc["agreement"] = 0.0;
            doc["records"] = std::move(recs);
            sink.out() << doc.dump(2) << "\n";
        } else if (opt.format == "table") {
            auto& os = sink.out();
            os << std::left << std::setw(24) << "b" << std::setw(13)
               << "state_index" << std::setw(24) << "W" << "method" << "\n";
            for (const auto& rec : records)
                os << std::left << std::setw(24) << sig15(rec.b)
                   << std::setw(13) << rec.state_index << std::setw(24)
                   << sig15(rec.W) << rec.method << "\n";
        } else {
            auto& os = sink.out();
            os << "b,state_index,W,method\n";
            for (const auto& rec : records)
                os << sig15(rec.b) << "," << rec.state_index << ","
                   << sig15(rec.W) << "," << rec.method << "\n";
        }
        return kExitOk;
    });
}

// --- verify -------------------------------------------------------------------

struct VerifyOptions {
    int digits = 50;
    std::string output;
};

int cmd_verify(const VerifyOptions& opt) {
    if (opt.digits < 16 || opt.digits > 500)
        return usage_error("--digits must lie in [16, 500]");
    Sink sink;
    if (!sink.open(opt.output)) return kExitUsage;

    auto& os = sink.out();
    os << "verification battery (digits = " << opt.digits << ")\n";
    auto suite = heunspec::verify::run_acceptance(os, opt.digits);

    int passed = 0, expected_failures = 0, unexpected = 0;
    for (const auto& c : suite.criteria) {
        if (c.passed && !c.expected_fail)
            ++passed;
        else if (!c.passed && c.expected_fail)
            ++expected_failures;
        else
            ++unexpected;
    }
    os << "\nsummary: " << passed << " passed, " << expected_failures
       << " expected failure(s), " << unexpected
       << " unexpected outcome(s) -> "
       << (suite.ok() ? "SUITE OK" : "SUITE FAILED") << "\n";
    return suite.ok() ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "heunspec: eigenvalues of the radial oscillator-plus-Coulomb "
        "problem\n"
        "R'' + R'/z - (gamma^2/z^2) R + (b/z) R - z^2 R + W R = 0\n"
        "by exact polynomial truncation, Rayleigh-Ritz bounds, Hankel\n"
        "determinants of the Riccati series, and a shooting oracle."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "heunspec 1.0.0");

    auto add_format = [](CLI::App* cmd, std::string& fmt) {
        cmd->add_option("--format", fmt,
                        "output format: table, csv, or json")
            ->check(CLI::IsMember({"table", "csv", "json"}))
            ->capture_default_str();
    };

    SpectrumOptions spectrum_opt;
    {
        auto* cmd = app.add_subcommand(
            "spectrum", "eigenvalues of the dimensionless problem");
        cmd->add_option("--gamma", spectrum_opt.gamma,
                        "centrifugal parameter gamma >= 0")
            ->required();
        auto* b_opt = cmd->add_option("--b", spectrum_opt.b,
                                      "Coulomb coefficient b (decimal)");
        cmd->add_option("--b-squared", spectrum_opt.b_squared,
                        "exact rational b^2; a negative value selects the "
                        "negative root b = -sqrt(|value|)")
            ->excludes(b_opt);
        cmd->add_option("--methods", spectrum_opt.methods,
                        "comma-separated subset of variational,rpm,oracle")
            ->capture_default_str();
        cmd->add_option("--states", spectrum_opt.states,
                        "number of lowest states")
            ->capture_default_str();
        cmd->add_option("--digits", spectrum_opt.digits,
                        "working precision in decimal digits")
            ->envname("HEUN_SPECTRA_DIGITS")
            ->capture_default_str();
        cmd->add_option("--basis-size", spectrum_opt.basis_size,
                        "variational basis size N")
            ->capture_default_str();
        cmd->add_option("--hankel-dmax", spectrum_opt.hankel_dmax,
                        "largest Hankel determinant dimension")
            ->capture_default_str();
        cmd->add_option("--hankel-offset", spectrum_opt.hankel_offset,
                        "Hankel determinant family offset d")
            ->capture_default_str();
        add_format(cmd, spectrum_opt.format);
        cmd->add_option("--output", spectrum_opt.output,
                        "write to this file instead of standard output");
    }

    TruncateOptions truncate_opt;
    {
        auto* cmd = app.add_subcommand(
            "truncate",
            "exact polynomial solutions from the series truncation");
        cmd->add_option("--n", truncate_opt.n, "polynomial degree n >= 0")
            ->required();
        cmd->add_option("--gamma", truncate_opt.gamma,
                        "gamma as an exact rational (e.g. 1, 3/2, 0.5)")
            ->required();
        cmd->add_option("--digits", truncate_opt.digits,
                        "working precision in decimal digits")
            ->envname("HEUN_SPECTRA_DIGITS")
            ->capture_default_str();
        cmd->add_option("--basis-size", truncate_opt.basis_size,
                        "basis size of the companion variational spectrum")
            ->capture_default_str();
        add_format(cmd, truncate_opt.format);
        cmd->add_option("--output", truncate_opt.output,
                        "write to this file instead of standard output");
    }

    ReduceOptions reduce_opt;
    {
        auto* cmd = app.add_subcommand(
            "reduce",
            "physical -> dimensionless reduction and bound-state diagnosis");
        cmd->add_option("--mass", reduce_opt.mass, "particle mass m > 0")
            ->capture_default_str();
        cmd->add_option("--omega", reduce_opt.omega, "rotation frequency")
            ->capture_default_str();
        cmd->add_option("--k", reduce_opt.k, "confinement wave number")
            ->capture_default_str();
        cmd->add_option("--f", reduce_opt.f, "Coulomb-like coupling")
            ->capture_default_str();
        cmd->add_option("--l", reduce_opt.l, "orbital quantum number l")
            ->capture_default_str();
        cmd->add_option("--spin", reduce_opt.spin, "spin projection +1 or -1")
            ->capture_default_str();
        cmd->add_option("--states", reduce_opt.states,
                        "states of the Coulomb-limit spectrum")
            ->capture_default_str();
        add_format(cmd, reduce_opt.format);
        cmd->add_option("--output", reduce_opt.output,
                        "write to this file instead of standard output");
    }

    SweepOptions sweep_opt;
    {
        auto* cmd = app.add_subcommand(
            "sweep", "variational eigenvalue curves over a grid in b");
        cmd->add_option("--gamma", sweep_opt.gamma,
                        "gamma as an exact rational (e.g. 1, 3/2, 0.5)")
            ->required();
        cmd->add_option("--b-min", sweep_opt.b_min, "lower end of the b grid")
            ->required();
        cmd->add_option("--b-max", sweep_opt.b_max, "upper end of the b grid")
            ->required();
        cmd->add_option("--points", sweep_opt.points, "grid points (>= 2)")
            ->required();
        cmd->add_option("--states", sweep_opt.states,
                        "number of lowest states")
            ->capture_default_str();
        cmd->add_option("--digits", sweep_opt.digits,
                        "working precision in decimal digits")
            ->envname("HEUN_SPECTRA_DIGITS")
            ->capture_default_str();
        cmd->add_option("--basis-size", sweep_opt.basis_size,
                        "variational basis size N")
            ->capture_default_str();
        cmd->add_option("--truncation-loci", sweep_opt.truncation_max_n,
                        "append exact truncation loci for degrees 0..N as "
                        "method=truncation records (-1 disables)")
            ->capture_default_str();
        cmd->add_option("--jobs", sweep_opt.jobs,
                        "worker threads (0 = automatic)")
            ->capture_default_str();
        add_format(cmd, sweep_opt.format);
        cmd->add_option("--output", sweep_opt.output,
                        "write to this file instead of standard output");
    }

    VerifyOptions verify_opt;
    {
        auto* cmd = app.add_subcommand(
            "verify", "run the built-in verification battery");
        cmd->add_option("--digits", verify_opt.digits,
                        "working precision in decimal digits")
            ->envname("HEUN_SPECTRA_DIGITS")
            ->capture_default_str();
        cmd->add_option("--output", verify_opt.output,
                        "write to this file instead of standard output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (app.got_subcommand("spectrum")) return cmd_spectrum(spectrum_opt);
    if (app.got_subcommand("truncate")) return cmd_truncate(truncate_opt);
    if (app.got_subcommand("reduce")) return cmd_reduce(reduce_opt);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_opt);
    if (app.got_subcommand("verify")) return cmd_verify(verify_opt);
    return kExitUsage;
}
