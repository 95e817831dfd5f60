#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace heunspec {

// Variable-precision real backed by MPFR. Expression templates are disabled
// so values have plain copy semantics; the working precision is the
// process-wide default at the time a value is created (see PrecisionGuard).
// The default is an atomic global, not thread-local: concurrent workers must
// all run at the same precision (the sweep pool does).
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

// Exact rational arithmetic (GMP mpq) for the symbolic truncation path.
using Rational = boost::multiprecision::mpq_rational;

// RAII scope setting the default working precision in decimal digits.
// A fixed number of guard digits is added so results round correctly at the
// precision the caller asked for.
class PrecisionGuard {
public:
    static constexpr int kGuardDigits = 10;

    explicit PrecisionGuard(int digits)
        : saved_(Real::default_precision()) {
        if (digits < 1) digits = 1;
        Real::default_precision(static_cast<unsigned>(digits + kGuardDigits));
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }

    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline Real to_real(const Rational& q) {
    return Real(boost::multiprecision::numerator(q)) /
           Real(boost::multiprecision::denominator(q));
}

// 10^(-e) at the current working precision.
inline Real pow10_neg(int e) {
    return boost::multiprecision::pow(Real(10), -e);
}

}  // namespace heunspec
