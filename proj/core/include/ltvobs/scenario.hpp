#pragma once

#include <filesystem>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "ltvobs/beacons.hpp"

namespace ltvobs {

/// Analytic velocity profile u(t) with its derivative.
struct Trajectory {
    std::string kind;
    std::string params_json;  // parameters as compact JSON, for round-trips
    std::function<Vector(double)> u;
    std::function<Vector(double)> u_dot;
    std::function<Vector(double)> u_ddot;

    static Trajectory constant(const Vector& value);
    /// u(t) = amplitude * (sin(w t + phase), cos(w t + phase) [, 0]).
    static Trajectory circular(int dim, double amplitude, double omega,
                               double phase = 0.0);
    /// u(t) = amplitude * (sin(w t), sin(2 w t) [, 0]).
    static Trajectory figure_eight(int dim, double amplitude, double omega);
    /// u_i(t) = sum_j coeffs[j](i) * t^j.
    static Trajectory polynomial(const std::vector<Vector>& coeffs);
};

/// A complete range-localization experiment description.
struct Scenario {
    BeaconConfig beacons;
    Trajectory trajectory;
    Vector x0;        // true initial position
    Vector bias;      // empty => bias disabled (bias-free lifting)
    double horizon = 30.0;
    double dt = 1e-3;
    double delta = 1.0;  // PE / Gramian window length

    bool bias_enabled() const { return bias.size() > 0; }

    int dim() const { return beacons.dim; }

    /// Lifted state dimension: 2n+3 with bias, n+1 without.
    int lifted_dim() const {
        return bias_enabled() ? 2 * dim() + 3 : dim() + 1;
    }

    static Scenario from_json(const nlohmann::json& j);
    static Scenario load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

}  // namespace ltvobs
