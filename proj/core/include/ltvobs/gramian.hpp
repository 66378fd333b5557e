#pragma once

#include <vector>

#include "ltvobs/integrate.hpp"
#include "ltvobs/ltv_system.hpp"

namespace ltvobs {

/// Observability verdict floor shared across the toolkit: a window counts as
/// observable when the Gramian's smallest eigenvalue reaches this value.
inline constexpr double kMuTol = 1e-6;

/// Windowed observability Gramian with its eigen-decomposition.
///
/// W is symmetrized on construction. Eigenvalues in [-1e-8, 0) are clamped
/// to zero in `eigenvalues`; `eigenvalues_raw` keeps the unclamped values.
struct GramianReport {
    double t = 0.0;            // window start
    double delta = 0.0;        // window length
    Matrix W;                  // n x n, symmetric PSD up to quadrature noise
    Vector eigenvalues;        // ascending, clamped
    Vector eigenvalues_raw;    // ascending, as computed
    Vector weakest_direction;  // unit eigenvector of the smallest eigenvalue
    int nodes = 0;             // quadrature node count

    double min_eigenvalue() const { return eigenvalues(0); }
    double max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// One entry of a weakest-direction scan.
struct ScanEntry {
    double t = 0.0;
    double min_eigenvalue = 0.0;
    Vector direction;  // unit
};

/// Phi(t+s, t) by fixed-step RK4 on dPhi/ds = A(t+s) Phi, Phi(t, t) = I.
TransitionMatrix transition_matrix(const LtvSystem& sys, double t, double s,
                                   double dt = kDefaultStep);

/// Observability Gramian W(t, t+delta) = (1/delta) * int Phi' C' C Phi ds by
/// composite Simpson; Phi is propagated once across the window and cached at
/// the quadrature nodes.
GramianReport gramian(const LtvSystem& sys, double t, double delta,
                      int nodes = 201, double dt = kDefaultStep);

/// Extended Gramian: the output map C is replaced by an arbitrary M with
/// matching column count (typically a stack of N_k chain rows).
GramianReport extended_gramian(const LtvSystem& sys, const MatrixFn& M,
                               double t, double delta, int nodes = 201,
                               double dt = kDefaultStep);

/// Smallest Gramian eigenvalue and its eigenvector at each grid time.
/// Output preserves grid order. `jobs` > 1 evaluates windows in parallel.
std::vector<ScanEntry> weakest_direction_scan(const LtvSystem& sys,
                                              const std::vector<double>& t_grid,
                                              double delta, int nodes = 201,
                                              double dt = kDefaultStep,
                                              int jobs = 1);

/// Assemble a GramianReport (symmetrize, eigen-decompose, pick the witness)
/// from a raw quadrature result. Exposed for oracle cross-checks.
GramianReport make_gramian_report(double t, double delta, const Matrix& w_raw,
                                  int nodes);

}  // namespace ltvobs
