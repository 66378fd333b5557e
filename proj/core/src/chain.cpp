#include "ltvobs/chain.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace ltvobs {

namespace {

constexpr double kFdStep = 1e-4;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// 4th-order central difference of a matrix-valued function.
template <typename Fn>
Matrix fd_derivative(const Fn& f, double t, double h = kFdStep) {
    return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) /
           (12.0 * h);
}

struct ChainBuilder {
    MatrixFn A;
    MatrixFn C;
    bool fallback;

    // d-th derivative of A, finite differences past the analytic supply.
    Matrix a_deriv(int d, double t) const {
        if (d == 0) return A(t);
        if (A.has_derivative(d)) return A.derivative(t, d);
        if (!fallback) {
            throw SmoothnessError("build_chain: A derivative of order " +
                                  std::to_string(d) + " unavailable");
        }
        return fd_derivative([this, d](double tau) { return a_deriv(d - 1, tau); }, t);
    }

    // d-th derivative of N_k via the Leibniz rule on N_{k+1} = N_k A + dN_k.
    Matrix nk(int k, int d, double t) const {
        if (k == 0) {
            if (d == 0) return C(t);
            if (C.has_derivative(d)) return C.derivative(t, d);
            if (!fallback) {
                throw SmoothnessError("build_chain: C derivative of order " +
                                      std::to_string(d) + " unavailable");
            }
            return fd_derivative([this, d](double tau) { return nk(0, d - 1, tau); }, t);
        }
        Matrix acc = nk(k - 1, d + 1, t);
        for (int j = 0; j <= d; ++j) {
            acc += binom(d, j) * (nk(k - 1, j, t) * a_deriv(d - j, t));
        }
        return acc;
    }

    bool analytic(int k, int d) const {
        if (k == 0) return d == 0 || C.has_derivative(d);
        if (!analytic(k - 1, d + 1)) return false;
        for (int j = 0; j <= d; ++j) {
            if (!analytic(k - 1, j)) return false;
            if (d - j > 0 && !A.has_derivative(d - j)) return false;
        }
        return true;
    }
};

}  // namespace

NkChain build_chain(const LtvSystem& sys, int order, bool allow_fd_fallback) {
    if (order < 0) {
        throw ConfigError("build_chain: order must be non-negative");
    }
    auto builder = std::make_shared<ChainBuilder>(
        ChainBuilder{sys.A, sys.C, allow_fd_fallback});

    NkChain chain;
    chain.order = order;
    const Eigen::Index m = sys.output_dim();
    const Eigen::Index n = sys.state_dim();
    for (int k = 0; k <= order; ++k) {
        if (!allow_fd_fallback && !builder->analytic(k, 1)) {
            // Probe once so the error surfaces at build time, not on first use.
            builder->nk(k, 1, 0.0);
        }
        chain.levels.emplace_back(
            m, n, [builder, k](double t) { return builder->nk(k, 0, t); },
            std::vector<MatrixFn::Evaluator>{
                [builder, k](double t) { return builder->nk(k, 1, t); }});
        chain.analytic.push_back(builder->analytic(k, 0) && builder->analytic(k, 1));
    }
    return chain;
}

MatrixFn NkChain::stacked() const {
    std::vector<std::pair<int, int>> rows;
    for (int k = 0; k < static_cast<int>(levels.size()); ++k) {
        for (int r = 0; r < levels[k].rows(); ++r) rows.emplace_back(k, r);
    }
    return stacked(rows);
}

MatrixFn NkChain::stacked(const std::vector<std::pair<int, int>>& rows) const {
    if (rows.empty()) {
        throw ConfigError("NkChain::stacked: empty row selection");
    }
    for (const auto& [k, r] : rows) {
        if (k < 0 || k >= static_cast<int>(levels.size()) || r < 0 ||
            r >= levels[static_cast<size_t>(k)].rows()) {
            throw ConfigError("NkChain::stacked: row selection out of range");
        }
    }
    const Eigen::Index n = levels.front().cols();
    auto lv = levels;  // keep levels alive inside the closure
    return MatrixFn(
        static_cast<Eigen::Index>(rows.size()), n,
        [lv, rows, n](double t) {
            Matrix out(static_cast<Eigen::Index>(rows.size()), n);
            // Cache one evaluation per referenced level.
            std::vector<Matrix> cache(lv.size());
            std::vector<bool> have(lv.size(), false);
            for (size_t i = 0; i < rows.size(); ++i) {
                const auto [k, r] = rows[i];
                if (!have[static_cast<size_t>(k)]) {
                    cache[static_cast<size_t>(k)] = lv[static_cast<size_t>(k)](t);
                    have[static_cast<size_t>(k)] = true;
                }
                out.row(static_cast<Eigen::Index>(i)) =
                    cache[static_cast<size_t>(k)].row(r);
            }
            return out;
        });
}

}  // namespace ltvobs
