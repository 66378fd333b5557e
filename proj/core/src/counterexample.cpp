#include "ltvobs/counterexample.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "ltvobs/integrate.hpp"

namespace ltvobs {

LtvSystem build_counterexample() {
    Matrix a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;

    auto c = [](double t) {
        Matrix m(2, 2);
        const double st = std::sin(t), ct = std::cos(t);
        m << st * st, 0.5 * std::sin(2.0 * t), 0.5 * std::sin(2.0 * t), ct * ct;
        return m;
    };
    auto c_dot = [](double t) {
        Matrix m(2, 2);
        m << std::sin(2.0 * t), std::cos(2.0 * t), std::cos(2.0 * t),
            -std::sin(2.0 * t);
        return m;
    };
    auto c_ddot = [](double t) {
        Matrix m(2, 2);
        m << 2.0 * std::cos(2.0 * t), -2.0 * std::sin(2.0 * t),
            -2.0 * std::sin(2.0 * t), -2.0 * std::cos(2.0 * t);
        return m;
    };

    return LtvSystem(MatrixFn::constant(a), MatrixFn::zero(2, 1),
                     MatrixFn(2, 2, c, {c_dot, c_ddot}));
}

std::vector<CounterexampleEntry> counterexample_report(
    const std::vector<double>& deltas, int nodes, double dt) {
    for (double d : deltas) {
        if (d <= 0.0) {
            throw ConfigError("counterexample_report: deltas must be positive");
        }
    }
    const LtvSystem sys = build_counterexample();
    std::vector<CounterexampleEntry> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        CounterexampleEntry e;
        e.delta = d;
        GramianReport g = gramian(sys, 0.0, d, nodes, dt);
        e.gramian_min_eig = g.min_eigenvalue();
        e.witness = g.weakest_direction;

        // M = C is its own Gram matrix here (C is a symmetric projector).
        auto integrand = [&sys](double s) -> Matrix {
            Matrix c = sys.C(s);
            return c.transpose() * c;
        };
        Matrix avg = simpson_integrate(integrand, 0.0, d, nodes) / d;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (avg + avg.transpose()));
        e.m_integral_min_eig = es.eigenvalues()(0);
        out.push_back(std::move(e));
    }
    return out;
}

nlohmann::json to_json(const std::vector<CounterexampleEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        arr.push_back({{"delta", e.delta},
                       {"gramian_min_eig", e.gramian_min_eig},
                       {"m_integral_min_eig", e.m_integral_min_eig},
                       {"witness", {e.witness(0), e.witness(1)}}});
    }
    return arr;
}

}  // namespace ltvobs
