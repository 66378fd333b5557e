#pragma once

#include "ltvobs/ltv_system.hpp"
#include "ltvobs/scenario.hpp"

namespace ltvobs {

/// Reference output y_0 = 0.5 |x|^2 - sum alpha_i z_i' x.
double y0_of(const BeaconConfig& beacons, const Vector& x_pos);

/// Lifted state from physical quantities.
/// With bias: X = [x_pos, a, y_0, a'x_pos, |a|^2] (dim 2n+3);
/// without (empty bias): X = [x_pos, y_0] (dim n+1).
Vector lift_state(const BeaconConfig& beacons, const Vector& x_pos,
                  const Vector& bias);

/// Same, taking the true bias from the scenario.
Vector lift_state(const Scenario& sc, const Vector& x_pos);

/// Position / bias blocks of a lifted state (bias block empty when disabled).
Vector position_of(const Scenario& sc, const Vector& lifted);
Vector bias_of(const Scenario& sc, const Vector& lifted);

/// The lifted LTV system whose output map is linear in the lifted state.
/// A(t) carries analytic first and second derivatives (via u_dot, u_ddot);
/// B is the identity; C is constant.
LtvSystem build_lifted_system(const Scenario& sc);

/// Known input U(t) of the lifted dynamics.
/// With bias: [u, 0_n, -sum alpha_i z_i'u, 0, 0]; without: [u, -sum alpha_i z_i'u].
Vector lifted_input(const Scenario& sc, double t);

/// Raw squared-range outputs y_i = 0.5 |x_pos - z_i|^2, i = 1..l.
Vector raw_ranges(const BeaconConfig& beacons, const Vector& x_pos);

/// Output vector Y = [y_0, y_1 - y_0 - 0.5|z_1|^2, ...] from raw ranges;
/// y_0 is recovered as sum alpha_i y_i - 0.5 sum alpha_i |z_i|^2, so the
/// whole vector is range-derived.
Vector measure_from_ranges(const BeaconConfig& beacons, const Vector& ranges);

/// Convenience: measure at the true position (noiseless).
Vector measure(const Scenario& sc, double t, const Vector& x_pos);

/// Closed-form transition matrix of the lifted system, with the displacement
/// row a(t+s,t) = int_t^{t+s} u'(tau) dtau evaluated by Simpson quadrature
/// on the scenario grid (`nodes` < 0 picks a node count from sc.dt).
TransitionMatrix closed_form_phi(const Scenario& sc, double t, double s,
                                 int nodes = -1);

/// Closed-form stacked chain matrix M(t) = [N_0; N_1; N_2].
/// With bias it is the (2l+3) x (2n+3) block form; without bias the
/// analogous (2l+2) x (n+1) stack. A first derivative is attached.
MatrixFn build_M(const Scenario& sc);

}  // namespace ltvobs
