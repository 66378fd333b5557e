#pragma once

#include <utility>
#include <vector>

#include "ltvobs/ltv_system.hpp"

namespace ltvobs {

/// The observability chain N_0 = C, N_{k+1} = N_k A + dN_k/dt.
///
/// Each level is exposed as an m x n MatrixFn with a first derivative
/// attached, so levels can feed extended-Gramian and condition checks.
/// `analytic[k]` records whether level k was built purely from analytic
/// derivatives of A and C; false means a finite-difference fallback was
/// involved somewhere in its recursion.
struct NkChain {
    int order = 0;                  // K
    std::vector<MatrixFn> levels;   // N_0 .. N_K
    std::vector<bool> analytic;     // provenance per level

    /// All levels stacked into one ((K+1)*m) x n matrix function.
    MatrixFn stacked() const;

    /// Explicit row selection: (level index, row index within that level).
    MatrixFn stacked(const std::vector<std::pair<int, int>>& rows) const;
};

/// Build the chain up to the given order.
///
/// Missing analytic derivatives of A or C are replaced by 4th-order central
/// differences (step 1e-4) when `allow_fd_fallback` is set; otherwise a
/// SmoothnessError is thrown.
NkChain build_chain(const LtvSystem& sys, int order,
                    bool allow_fd_fallback = true);

}  // namespace ltvobs
