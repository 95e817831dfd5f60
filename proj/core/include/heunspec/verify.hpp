#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heunspec::verify {

// Outcome of one verification criterion.  `expected_fail` marks the
// documented exception: a criterion that asserts a property the model does
// not actually possess (see run_acceptance below).  Such a criterion is
// implemented faithfully and reported honestly; the suite treats its failure
// as the anticipated outcome and an unexpected pass as a regression of the
// bookkeeping.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    bool expected_fail = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;

    // True when every criterion behaves as documented: ordinary criteria
    // pass and expected-fail criteria keep failing.
    bool ok() const;
};

// Runs the ten-point verification battery at the given working precision,
// streaming one status line per criterion to `log`.
//
// Criterion 4 asserts the spectrum is symmetric under b -> -b.  That is
// false: the Hellmann-Feynman relation dW/db = -<1/zeta> < 0 makes every
// eigenvalue strictly decreasing in b, so the attractive (b > 0) and
// repulsive (b < 0) spectra differ at O(1).  The Hankel determinants of the
// Riccati-Pade method are even functions of b and therefore satisfy the
// symmetry clause identically, which is exactly why the method reports the
// union of both sign sectors.  The variational clause fails by this O(1)
// asymmetry, not by numerical error, and is recorded as an expected failure.
SuiteResult run_acceptance(std::ostream& log, int digits = 50);

}  // namespace heunspec::verify
