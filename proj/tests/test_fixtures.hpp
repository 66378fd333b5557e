#pragma once

#include <numbers>
#include <random>

#include "ltvobs/integrate.hpp"
#include "ltvobs/lifted.hpp"

namespace fixtures {

using ltvobs::Matrix;
using ltvobs::Vector;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Vector vec2(double a, double b) {
    return (Vector(2) << a, b).finished();
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols,
                            double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
    }
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = dist(rng);
    return v;
}

/// Three non-collinear beacons, circular velocity, bias (0.1, -0.05).
inline ltvobs::Scenario three_beacons() {
    ltvobs::Scenario sc;
    sc.beacons = ltvobs::BeaconConfig::make(
        {vec2(0, 0), vec2(1, 0), vec2(0, 1)});
    sc.trajectory = ltvobs::Trajectory::circular(2, 1.0, 1.0);
    sc.x0 = vec2(1, 1);
    sc.bias = vec2(0.1, -0.05);
    sc.horizon = 30.0;
    sc.dt = 1e-3;
    sc.delta = kTwoPi;
    return sc;
}

/// One beacon, circular velocity: PE holds through the acceleration term.
inline ltvobs::Scenario single_beacon_circular() {
    ltvobs::Scenario sc = three_beacons();
    sc.beacons = ltvobs::BeaconConfig::make({vec2(0, 0)});
    return sc;
}

/// One beacon, constant velocity: PE fails (no geometry, no acceleration).
inline ltvobs::Scenario single_beacon_constant() {
    ltvobs::Scenario sc = single_beacon_circular();
    sc.trajectory = ltvobs::Trajectory::constant(vec2(1, 0));
    return sc;
}

inline ltvobs::Scenario two_beacons_collinear() {
    ltvobs::Scenario sc = three_beacons();
    sc.beacons = ltvobs::BeaconConfig::make({vec2(0, 0), vec2(1, 0)});
    sc.trajectory = ltvobs::Trajectory::constant(vec2(1, 0));
    return sc;
}

inline ltvobs::Scenario lemma41_no_bias() {
    ltvobs::Scenario sc = three_beacons();
    sc.bias = Vector();
    return sc;
}

inline std::vector<double> window_grid(const ltvobs::Scenario& sc, int count) {
    std::vector<double> grid;
    const double span = std::max(0.0, sc.horizon - sc.delta);
    for (int i = 0; i < count; ++i) {
        grid.push_back(count > 1 ? span * i / (count - 1) : 0.0);
    }
    return grid;
}

/// Independent trapezoid-rule Gramian used as an oracle against the Simpson
/// implementation; propagates Phi with its own small-step RK4.
inline Matrix trapezoid_gramian(const ltvobs::LtvSystem& sys,
                                const ltvobs::MatrixFn& output, double t,
                                double delta, int nodes, double dt = 5e-4) {
    const Eigen::Index n = sys.state_dim();
    const double h = delta / (nodes - 1);
    Matrix w = Matrix::Zero(n, n);
    Matrix phi = Matrix::Identity(n, n);
    for (int j = 0; j < nodes; ++j) {
        const double s = t + j * h;
        if (j > 0) {
            phi = ltvobs::rk4_integrate(
                [&sys](double tau, const Matrix& p) -> Matrix {
                    return sys.A(tau) * p;
                },
                t + (j - 1) * h, s, std::move(phi), dt);
        }
        Matrix mp = output(s) * phi;
        const double weight = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
        w += weight * (mp.transpose() * mp);
    }
    return w * (h / delta);
}

}  // namespace fixtures
