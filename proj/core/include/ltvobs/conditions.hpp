#pragma once

#include <complex>

#include "ltvobs/gramian.hpp"

namespace ltvobs {

enum class ConditionId { C1, C2 };

/// Outcome of a sufficient-condition check for uniform observability.
///
/// For C1 `attained` is the window average of |det(M'M)|; for C2 it is the
/// smallest eigenvalue of the window average of M'M. The C2 structural
/// clauses (constant A, real spectrum) are reported separately so the
/// integral clause can be inspected on its own.
struct ConditionReport {
    ConditionId id = ConditionId::C1;
    double t = 0.0;
    double delta = 0.0;
    double attained = 0.0;
    bool pass = false;

    // C2 diagnostics; trivially true for C1.
    bool a_constant = true;
    bool spectrum_real = true;
    bool integral_pass = false;
    double max_imag = 0.0;
    Eigen::VectorXcd a_eigenvalues;
};

/// C1: average of |det(M'(s)M(s))| over [t, t+delta] reaches the floor.
ConditionReport check_C1(const MatrixFn& M, double t, double delta,
                         int nodes = 201);

/// C2: A constant with real spectrum, and the window average of M'M is
/// positive definite down to the floor. The window length delta_bar is
/// independent of any Gramian window.
ConditionReport check_C2(const LtvSystem& sys, const MatrixFn& M, double t,
                         double delta_bar, int nodes = 201);

}  // namespace ltvobs
