#include "ltvobs/observer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

namespace ltvobs {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_symmetric_floor(const Matrix& m, double floor, const char* name) {
    if (m.rows() != m.cols() ||
        ((m - m.transpose()).cwiseAbs()).maxCoeff() > 1e-9) {
        throw ConfigError(std::string("ObserverConfig: ") + name +
                          " must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.eigenvalues()(0) < floor) {
        throw ConfigError(std::string("ObserverConfig: ") + name +
                          " violates its eigenvalue floor");
    }
}

Vector json_to_vector(const nlohmann::json& j) {
    Vector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

}  // namespace

ObserverConfig ObserverConfig::defaults(const Scenario& sc) {
    const int N = sc.lifted_dim();
    const int l = sc.beacons.count();
    ObserverConfig cfg;
    cfg.Q = Matrix::Identity(l + 1, l + 1);
    cfg.V = 0.01 * Matrix::Identity(N, N);
    cfg.P0 = Matrix::Identity(N, N);
    cfg.xhat0 = lift_state(sc, sc.x0);
    cfg.noise_std = Vector::Zero(l);
    cfg.dt = sc.dt;
    return cfg;
}

ObserverConfig ObserverConfig::from_json(const nlohmann::json& j,
                                         const Scenario& sc) {
    ObserverConfig cfg = defaults(sc);
    const int N = sc.lifted_dim();
    const int l = sc.beacons.count();
    if (j.contains("q_scale")) {
        cfg.Q = j["q_scale"].get<double>() * Matrix::Identity(l + 1, l + 1);
    }
    if (j.contains("v_scale")) {
        cfg.V = j["v_scale"].get<double>() * Matrix::Identity(N, N);
    }
    if (j.contains("p0_scale")) {
        cfg.P0 = j["p0_scale"].get<double>() * Matrix::Identity(N, N);
    }
    if (j.contains("xhat0")) {
        cfg.xhat0 = json_to_vector(j["xhat0"]);
        if (cfg.xhat0.size() != N) {
            throw ConfigError("ObserverConfig: xhat0 dimension mismatch");
        }
    } else if (j.contains("pos_offset") || j.contains("bias_offset")) {
        Vector pos = sc.x0;
        Vector bias = sc.bias;
        if (j.contains("pos_offset")) pos += json_to_vector(j["pos_offset"]);
        if (j.contains("bias_offset")) {
            if (!sc.bias_enabled()) {
                throw ConfigError("ObserverConfig: bias_offset on a bias-free scenario");
            }
            bias += json_to_vector(j["bias_offset"]);
        }
        cfg.xhat0 = lift_state(sc.beacons, pos, bias);
    }
    if (j.contains("noise_std")) {
        if (j["noise_std"].is_number()) {
            cfg.noise_std = Vector::Constant(l, j["noise_std"].get<double>());
        } else {
            cfg.noise_std = json_to_vector(j["noise_std"]);
            if (cfg.noise_std.size() != l) {
                throw ConfigError("ObserverConfig: noise_std length mismatch");
            }
        }
    }
    if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
    if (j.contains("store_covariance")) {
        cfg.store_covariance = j["store_covariance"].get<bool>();
    }
    return cfg;
}

ObserverTrace run_observer(const Scenario& sc, const ObserverConfig& cfg,
                           uint64_t seed) {
    const int n = sc.dim();
    const int N = sc.lifted_dim();
    const int l = sc.beacons.count();
    if (cfg.xhat0.size() != N) {
        throw ConfigError("run_observer: xhat0 dimension mismatch");
    }
    if (cfg.Q.rows() != l + 1 || cfg.V.rows() != N || cfg.P0.rows() != N) {
        throw ConfigError("run_observer: weight matrix dimensions mismatch");
    }
    require_symmetric_floor(cfg.Q, 1e-9, "Q");
    require_symmetric_floor(cfg.P0, 1e-9, "P0");
    require_symmetric_floor(cfg.V, 0.0, "V");
    if (cfg.dt <= 0.0) {
        throw ConfigError("run_observer: dt must be positive");
    }

    const LtvSystem sys = build_lifted_system(sc);
    const Matrix C = sys.C(0.0);  // constant output map
    const Vector a_true =
        sc.bias_enabled() ? sc.bias : Vector(Vector::Zero(n));
    const bool noisy = cfg.noise_std.size() > 0 && cfg.noise_std.maxCoeff() > 0.0;

    std::vector<std::mt19937_64> channel_rng;
    if (noisy) {
        channel_rng.reserve(static_cast<size_t>(l));
        for (int ch = 0; ch < l; ++ch) {
            channel_rng.emplace_back(
                splitmix64(seed ^ splitmix64(static_cast<uint64_t>(ch) + 1)));
        }
    }

    // Flat integration state: [x_pos, xhat, vec(P)].
    const int flat_dim = n + N + N * N;
    Vector state(flat_dim);
    state.head(n) = sc.x0;
    state.segment(n, N) = cfg.xhat0;
    Eigen::Map<Matrix>(state.data() + n + N, N, N) = cfg.P0;

    Vector eps = Vector::Zero(l);  // per-step measurement noise, held across stages
    auto rhs = [&](double t, const Vector& y) -> Vector {
        const Vector x_pos = y.head(n);
        const Vector xhat = y.segment(n, N);
        const Eigen::Map<const Matrix> P(y.data() + n + N, N, N);

        const Matrix A = sys.A(t);
        const Vector U = lifted_input(sc, t);
        Vector ranges = raw_ranges(sc.beacons, x_pos);
        if (noisy) ranges += eps;
        const Vector Y = measure_from_ranges(sc.beacons, ranges);

        const Matrix K = P * C.transpose() * cfg.Q;

        Vector dy(flat_dim);
        dy.head(n) = sc.trajectory.u(t) + a_true;
        dy.segment(n, N) = A * xhat + U + K * (Y - C * xhat);
        Eigen::Map<Matrix>(dy.data() + n + N, N, N) =
            A * P + P * A.transpose() - K * (C * P) + cfg.V;
        return dy;
    };

    ObserverTrace trace;
    trace.lifted_dim = N;
    trace.spatial_dim = n;

    auto record = [&](double t) {
        const Vector x_pos = state.head(n);
        const Vector xhat = state.segment(n, N);
        const Matrix P = Eigen::Map<const Matrix>(state.data() + n + N, N, N);
        const Vector x_true = lift_state(sc, x_pos);

        Eigen::SelfAdjointEigenSolver<Matrix> es(P);
        const double p_min = es.eigenvalues()(0);
        const double p_max = es.eigenvalues()(N - 1);
        if (p_min < 1e-12) {
            throw CovarianceError(
                "run_observer: covariance lost positive definiteness at t=" +
                    std::to_string(t),
                t);
        }

        TracePoint pt;
        pt.t = t;
        pt.x_true = x_true;
        pt.x_hat = xhat;
        pt.err_norm = (xhat - x_true).norm();
        pt.pos_err = (xhat.head(n) - x_pos).norm();
        pt.bias_err =
            sc.bias_enabled() ? (xhat.segment(n, n) - sc.bias).norm() : 0.0;
        pt.p_min_eig = p_min;
        pt.p_max_eig = p_max;
        trace.points.push_back(std::move(pt));
        if (cfg.store_covariance) {
            trace.covariances.push_back(P);
            trace.gains.push_back(P * C.transpose() * cfg.Q);
        }
    };

    double t = 0.0;
    record(t);
    while (t < sc.horizon) {
        const double h = std::min(cfg.dt, sc.horizon - t);
        if (noisy) {
            for (int ch = 0; ch < l; ++ch) {
                std::normal_distribution<double> dist(0.0, cfg.noise_std(ch));
                eps(ch) = dist(channel_rng[static_cast<size_t>(ch)]);
            }
        }
        const Vector k1 = rhs(t, state);
        const Vector k2 = rhs(t + 0.5 * h, state + (0.5 * h) * k1);
        const Vector k3 = rhs(t + 0.5 * h, state + (0.5 * h) * k2);
        const Vector k4 = rhs(t + h, state + h * k3);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;

        if (!state.allFinite()) {
            throw IntegrationError(
                "run_observer: estimate diverged at t=" + std::to_string(t), t);
        }
        // Riccati drift control: keep P exactly symmetric.
        Eigen::Map<Matrix> P(state.data() + n + N, N, N);
        P = 0.5 * (P + Matrix(P.transpose()));
        record(t);
    }
    return trace;
}

ConvergenceSummary convergence_metrics(const ObserverTrace& trace) {
    if (trace.points.empty()) {
        throw ConfigError("convergence_metrics: empty trace");
    }
    ConvergenceSummary s;
    const auto& pts = trace.points;
    s.final_err_norm = pts.back().err_norm;
    s.final_pos_err = pts.back().pos_err;
    s.final_bias_err = pts.back().bias_err;

    s.p_cond_peak = 0.0;
    for (const auto& p : pts) {
        s.p_cond_peak = std::max(s.p_cond_peak, p.p_max_eig / p.p_min_eig);
    }

    // Fit log err = c - rate * t over the second half of the horizon.
    const size_t begin = pts.size() / 2;
    double sum_t = 0, sum_y = 0, sum_tt = 0, sum_ty = 0;
    size_t count = 0;
    for (size_t i = begin; i < pts.size(); ++i) {
        if (pts[i].err_norm <= 0.0) {
            s.decay_rate = std::numeric_limits<double>::infinity();
            return s;
        }
        const double y = std::log(pts[i].err_norm);
        sum_t += pts[i].t;
        sum_y += y;
        sum_tt += pts[i].t * pts[i].t;
        sum_ty += pts[i].t * y;
        ++count;
    }
    if (count < 2) {
        throw ConfigError("convergence_metrics: trace too short for a rate fit");
    }
    const double denom = count * sum_tt - sum_t * sum_t;
    const double slope = (count * sum_ty - sum_t * sum_y) / denom;
    s.decay_rate = -slope;
    return s;
}

void write_trace_csv(std::ostream& out, const ObserverTrace& trace) {
    const int N = trace.lifted_dim;
    out << "t";
    for (int i = 1; i <= N; ++i) out << ",x" << i;
    for (int i = 1; i <= N; ++i) out << ",xhat" << i;
    out << ",err_norm,pos_err,bias_err,p_min_eig,p_max_eig\n";

    char buf[32];
    auto put = [&out, &buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << ',' << buf;
    };
    for (const auto& p : trace.points) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.t);
        out << buf;
        for (int i = 0; i < N; ++i) put(p.x_true(i));
        for (int i = 0; i < N; ++i) put(p.x_hat(i));
        put(p.err_norm);
        put(p.pos_err);
        put(p.bias_err);
        put(p.p_min_eig);
        put(p.p_max_eig);
        out << '\n';
    }
}

nlohmann::json to_json(const ConvergenceSummary& summary) {
    nlohmann::json j{{"final_pos_err", summary.final_pos_err},
                     {"final_bias_err", summary.final_bias_err},
                     {"final_err_norm", summary.final_err_norm},
                     {"p_cond_peak", summary.p_cond_peak}};
    if (std::isinf(summary.decay_rate)) {
        j["decay_rate"] = "inf";
    } else {
        j["decay_rate"] = summary.decay_rate;
    }
    return j;
}

}  // namespace ltvobs
