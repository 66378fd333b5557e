#include "ltvobs/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ltvobs/integrate.hpp"

namespace ltvobs {

TransitionMatrix transition_matrix(const LtvSystem& sys, double t, double s,
                                   double dt) {
    if (s < 0.0) {
        throw ConfigError("transition_matrix: offset must be non-negative");
    }
    const Eigen::Index n = sys.state_dim();
    auto rhs = [&sys](double tau, const Matrix& phi) -> Matrix {
        return sys.A(tau) * phi;
    };
    Matrix phi = rk4_integrate(rhs, t, t + s, Matrix::Identity(n, n), dt);
    return TransitionMatrix{t, s, std::move(phi)};
}

GramianReport make_gramian_report(double t, double delta, const Matrix& w_raw,
                                  int nodes) {
    Matrix w = 0.5 * (w_raw + w_raw.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(w);
    if (es.info() != Eigen::Success) {
        throw NumericError("gramian: symmetric eigen-solver failed");
    }
    GramianReport rep;
    rep.t = t;
    rep.delta = delta;
    rep.W = std::move(w);
    rep.eigenvalues_raw = es.eigenvalues();
    rep.eigenvalues = rep.eigenvalues_raw;
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
        if (rep.eigenvalues(i) >= -1e-8 && rep.eigenvalues(i) < 0.0) {
            rep.eigenvalues(i) = 0.0;
        }
    }
    Vector dir = es.eigenvectors().col(0);
    // Deterministic witness: first component above noise is positive.
    for (Eigen::Index i = 0; i < dir.size(); ++i) {
        if (std::abs(dir(i)) > 1e-12) {
            if (dir(i) < 0.0) dir = -dir;
            break;
        }
    }
    rep.weakest_direction = dir.normalized();
    rep.nodes = nodes;
    return rep;
}

namespace {

GramianReport windowed_gramian(const LtvSystem& sys, const MatrixFn& output,
                               double t, double delta, int nodes, double dt) {
    if (delta <= 0.0) {
        throw ConfigError("gramian: window length must be positive");
    }
    require_simpson_nodes(nodes);
    if (output.cols() != sys.state_dim()) {
        throw DimensionError("gramian: output map column count must equal state dim");
    }

    const Eigen::Index n = sys.state_dim();
    const double h = delta / (nodes - 1);
    auto rhs = [&sys](double tau, const Matrix& phi) -> Matrix {
        return sys.A(tau) * phi;
    };

    // One pass across the window; accumulate the Simpson sum at each node.
    Matrix w = Matrix::Zero(n, n);
    Matrix phi = Matrix::Identity(n, n);
    for (int j = 0; j < nodes; ++j) {
        const double s = t + j * h;
        if (j > 0) {
            phi = rk4_integrate(rhs, t + (j - 1) * h, s, std::move(phi), dt);
        }
        Matrix mp = output(s) * phi;
        w += simpson_weight(j, nodes) * (mp.transpose() * mp);
    }
    w *= h / (3.0 * delta);
    return make_gramian_report(t, delta, w, nodes);
}

}  // namespace

GramianReport gramian(const LtvSystem& sys, double t, double delta, int nodes,
                      double dt) {
    return windowed_gramian(sys, sys.C, t, delta, nodes, dt);
}

GramianReport extended_gramian(const LtvSystem& sys, const MatrixFn& M,
                               double t, double delta, int nodes, double dt) {
    return windowed_gramian(sys, M, t, delta, nodes, dt);
}

std::vector<ScanEntry> weakest_direction_scan(const LtvSystem& sys,
                                              const std::vector<double>& t_grid,
                                              double delta, int nodes,
                                              double dt, int jobs) {
    if (t_grid.empty()) {
        throw ConfigError("weakest_direction_scan: empty time grid");
    }
    std::vector<ScanEntry> out(t_grid.size());
    auto work = [&](size_t begin, size_t stride) {
        for (size_t i = begin; i < t_grid.size(); i += stride) {
            GramianReport rep = gramian(sys, t_grid[i], delta, nodes, dt);
            out[i] = ScanEntry{t_grid[i], rep.min_eigenvalue(),
                               rep.weakest_direction};
        }
    };
    if (jobs <= 1 || t_grid.size() == 1) {
        work(0, 1);
    } else {
        const size_t nthreads = std::min<size_t>(jobs, t_grid.size());
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (size_t k = 0; k < nthreads; ++k) {
            pool.emplace_back(work, k, nthreads);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace ltvobs
