#include "ltvobs/pe.hpp"

#include <nlohmann/json.hpp>
#include <thread>

#include "ltvobs/integrate.hpp"
#include "ltvobs/lifted.hpp"

namespace ltvobs {

namespace {

nlohmann::json vector_json(const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename Fn>
void parallel_over(size_t count, int jobs, const Fn& body) {
    if (jobs <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const size_t nthreads = std::min<size_t>(static_cast<size_t>(jobs), count);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t k = 0; k < nthreads; ++k) {
        pool.emplace_back([&, k] {
            for (size_t i = k; i < count; i += nthreads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

PeReport pe_check(const Scenario& sc, const std::vector<double>& t_grid,
                  int nodes, int jobs) {
    if (t_grid.empty()) {
        throw ConfigError("pe_check: empty time grid");
    }
    require_simpson_nodes(nodes);
    const Matrix geometry = sc.beacons.pe_geometry();
    const double delta = sc.delta;

    PeReport rep;
    rep.delta = delta;
    rep.windows.resize(t_grid.size());
    parallel_over(t_grid.size(), jobs, [&](size_t i) {
        const double t = t_grid[i];
        Matrix accel = simpson_integrate(
            [&sc](double s) -> Matrix {
                Vector ud = sc.trajectory.u_dot(s);
                return ud * ud.transpose();
            },
            t, t + delta, nodes);
        Matrix e = geometry + accel / delta;
        e = 0.5 * (e + e.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(e);
        rep.windows[i] = PeWindow{t, std::move(e), es.eigenvalues()(0)};
    });

    rep.mu = rep.windows.front().min_eig;
    for (const auto& w : rep.windows) rep.mu = std::min(rep.mu, w.min_eig);
    rep.pass = rep.mu >= kMuTol;
    return rep;
}

UoVerdict uo_verdict(const Scenario& sc, const std::vector<double>& t_grid,
                     int nodes, double dt, int jobs) {
    UoVerdict v;
    v.pe = pe_check(sc, t_grid, nodes, jobs);
    v.pe_pass = v.pe.pass;

    const LtvSystem sys = build_lifted_system(sc);
    const MatrixFn m = build_M(sc);

    v.windows.resize(t_grid.size());
    std::vector<GramianReport> extended(t_grid.size());
    parallel_over(t_grid.size(), jobs, [&](size_t i) {
        const double t = t_grid[i];
        GramianReport plain = gramian(sys, t, sc.delta, nodes, dt);
        extended[i] = extended_gramian(sys, m, t, sc.delta, nodes, dt);
        v.windows[i] = UoWindow{t, v.pe.windows[i].min_eig,
                                plain.min_eigenvalue(),
                                extended[i].min_eigenvalue()};
    });

    size_t worst = 0;
    v.min_gramian = v.windows.front().gramian_min_eig;
    v.min_extended = v.windows.front().extended_min_eig;
    for (size_t i = 0; i < v.windows.size(); ++i) {
        v.min_gramian = std::min(v.min_gramian, v.windows[i].gramian_min_eig);
        if (v.windows[i].extended_min_eig < v.min_extended) {
            v.min_extended = v.windows[i].extended_min_eig;
            worst = i;
        }
    }
    v.gramian_pass = v.min_extended >= kMuTol;
    v.implication_holds = !v.pe_pass || v.gramian_pass;
    v.weakest_direction = extended[worst].weakest_direction;
    return v;
}

nlohmann::json to_json(const PeReport& report) {
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& w : report.windows) {
        windows.push_back({{"t", w.t},
                           {"min_eig", w.min_eig},
                           {"excitation", matrix_json(w.excitation)}});
    }
    return {{"delta", report.delta},
            {"mu", report.mu},
            {"pass", report.pass},
            {"windows", std::move(windows)}};
}

nlohmann::json to_json(const UoVerdict& verdict) {
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& w : verdict.windows) {
        windows.push_back({{"t", w.t},
                           {"pe_min_eig", w.pe_min_eig},
                           {"gramian_min_eig", w.gramian_min_eig},
                           {"extended_min_eig", w.extended_min_eig}});
    }
    return {{"pe", to_json(verdict.pe)},
            {"windows", std::move(windows)},
            {"min_gramian", verdict.min_gramian},
            {"min_extended", verdict.min_extended},
            {"pe_pass", verdict.pe_pass},
            {"gramian_pass", verdict.gramian_pass},
            {"implication_holds", verdict.implication_holds},
            {"weakest_direction", vector_json(verdict.weakest_direction)}};
}

nlohmann::json to_json(const GramianReport& report) {
    return {{"t", report.t},
            {"delta", report.delta},
            {"nodes", report.nodes},
            {"W", matrix_json(report.W)},
            {"eigenvalues", vector_json(report.eigenvalues)},
            {"eigenvalues_raw", vector_json(report.eigenvalues_raw)},
            {"min_eig", report.min_eigenvalue()},
            {"weakest_direction", vector_json(report.weakest_direction)}};
}

}  // namespace ltvobs
