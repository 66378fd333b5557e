#pragma once

#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "ltvobs/gramian.hpp"

namespace ltvobs {

/// The rotation/projector system showing that positivity of the averaged
/// M'M integral does not imply uniform observability:
///   A = [[0, 1], [-1, 0]],
///   C(t) = [[sin^2 t, 0.5 sin 2t], [0.5 sin 2t, cos^2 t]],
/// the projector onto the plane orthogonal to y(t) = (cos t, -sin t).
/// First and second analytic derivatives of C are attached.
LtvSystem build_counterexample();

/// Per-window record of the counterexample reproduction.
struct CounterexampleEntry {
    double delta = 0.0;
    double gramian_min_eig = 0.0;    // min eig of W(0, delta), expected ~ 0
    double m_integral_min_eig = 0.0; // min eig of (1/delta) int C'C, > 0 for delta >= pi
    Vector witness;                  // weakest direction of W(0, delta)
};

std::vector<CounterexampleEntry> counterexample_report(
    const std::vector<double>& deltas, int nodes = 201,
    double dt = kDefaultStep);

nlohmann::json to_json(const std::vector<CounterexampleEntry>& entries);

}  // namespace ltvobs
