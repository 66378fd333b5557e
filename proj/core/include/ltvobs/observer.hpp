#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <ostream>
#include <vector>

#include "ltvobs/lifted.hpp"

namespace ltvobs {

/// Weights and initial conditions of the continuous Riccati observer
///   dXhat/dt = A Xhat + B U + K (Y - C Xhat),   K = P C' Q,
///   dP/dt    = A P + P A' - P C' Q C P + V.
struct ObserverConfig {
    Matrix Q;           // (l+1) x (l+1), symmetric PD
    Matrix V;           // N x N, symmetric PSD
    Matrix P0;          // N x N, symmetric PD
    Vector xhat0;       // N
    Vector noise_std;   // per range channel (l), zeros => noiseless
    double dt = 1e-3;
    bool store_covariance = false;  // keep P and K snapshots in the trace

    /// Q = I, V = 0.01 I, P0 = I, exact-truth initial estimate, no noise.
    static ObserverConfig defaults(const Scenario& sc);
    static ObserverConfig from_json(const nlohmann::json& j, const Scenario& sc);
};

struct TracePoint {
    double t = 0.0;
    Vector x_true;   // lifted truth
    Vector x_hat;
    double err_norm = 0.0;
    double pos_err = 0.0;
    double bias_err = 0.0;
    double p_min_eig = 0.0;
    double p_max_eig = 0.0;
};

struct ObserverTrace {
    int lifted_dim = 0;
    int spatial_dim = 0;
    std::vector<TracePoint> points;
    // Populated only with store_covariance; one entry per trace point.
    std::vector<Matrix> covariances;
    std::vector<Matrix> gains;
};

/// Simulate truth and observer over [0, horizon]. Deterministic given seed.
ObserverTrace run_observer(const Scenario& sc, const ObserverConfig& cfg,
                           uint64_t seed);

struct ConvergenceSummary {
    double decay_rate = 0.0;  // fitted exponential rate of the error norm
    double final_err_norm = 0.0;
    double final_pos_err = 0.0;
    double final_bias_err = 0.0;
    double p_cond_peak = 0.0;
};

/// Least-squares exponential fit of log error norm over the second half of
/// the horizon; a zero error yields an infinite rate.
ConvergenceSummary convergence_metrics(const ObserverTrace& trace);

/// CSV with header t, x1..xN, xhat1..xhatN, err_norm, pos_err, bias_err,
/// p_min_eig, p_max_eig; values printed with 17 significant digits.
void write_trace_csv(std::ostream& out, const ObserverTrace& trace);

nlohmann::json to_json(const ConvergenceSummary& summary);

}  // namespace ltvobs
