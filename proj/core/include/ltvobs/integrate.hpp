#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "ltvobs/errors.hpp"
#include "ltvobs/matrix_fn.hpp"

namespace ltvobs {

inline constexpr double kDefaultStep = 1e-3;

/// Classical fixed-step RK4 for a matrix-valued ODE dY/dt = f(t, Y) from t0
/// to t1. The final partial step is shortened to land exactly on t1.
/// `on_node`, when set, is called after every accepted step with (t, Y);
/// it is also called once with the initial condition.
template <typename Rhs>
Matrix rk4_integrate(const Rhs& rhs, double t0, double t1, Matrix y, double dt,
                     const std::function<void(double, const Matrix&)>& on_node = {}) {
    if (dt <= 0.0) {
        throw ConfigError("rk4_integrate: step must be positive");
    }
    if (on_node) on_node(t0, y);
    double t = t0;
    while (t < t1) {
        double h = std::min(dt, t1 - t);
        Matrix k1 = rhs(t, y);
        Matrix k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
        Matrix k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
        Matrix k4 = rhs(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        if (!y.allFinite()) {
            throw IntegrationError(
                "rk4_integrate: non-finite entries at t=" + std::to_string(t), t);
        }
        if (on_node) on_node(t, y);
    }
    return y;
}

/// Composite Simpson weight for node j of an odd `nodes`-point rule.
/// The quadrature is sum_j w_j f(x_j) * h / 3 with h the node spacing.
inline double simpson_weight(int j, int nodes) {
    if (j == 0 || j == nodes - 1) return 1.0;
    return (j % 2 == 1) ? 4.0 : 2.0;
}

inline void require_simpson_nodes(int nodes) {
    if (nodes < 3 || nodes % 2 == 0) {
        throw ConfigError("Simpson quadrature requires an odd node count >= 3");
    }
}

/// Composite Simpson integral of a matrix-valued function over [a, b].
template <typename Fn>
Matrix simpson_integrate(const Fn& f, double a, double b, int nodes) {
    require_simpson_nodes(nodes);
    const double h = (b - a) / (nodes - 1);
    Matrix acc;
    for (int j = 0; j < nodes; ++j) {
        Matrix fj = f(a + j * h);
        if (j == 0) {
            acc = simpson_weight(j, nodes) * fj;
        } else {
            acc += simpson_weight(j, nodes) * fj;
        }
    }
    return acc * (h / 3.0);
}

}  // namespace ltvobs
