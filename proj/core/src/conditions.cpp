#include "ltvobs/conditions.hpp"

#include <cmath>

#include "ltvobs/integrate.hpp"

namespace ltvobs {

namespace {

constexpr int kConstancySamples = 32;
constexpr double kConstancyTol = 1e-10;
constexpr double kRealSpectrumTol = 1e-8;

}  // namespace

ConditionReport check_C1(const MatrixFn& M, double t, double delta, int nodes) {
    if (delta <= 0.0) {
        throw ConfigError("check_C1: window length must be positive");
    }
    auto integrand = [&M](double s) -> Matrix {
        Matrix m = M(s);
        Matrix g = m.transpose() * m;
        return Matrix::Constant(1, 1, std::abs(g.determinant()));
    };
    ConditionReport rep;
    rep.id = ConditionId::C1;
    rep.t = t;
    rep.delta = delta;
    rep.attained = simpson_integrate(integrand, t, t + delta, nodes)(0, 0) / delta;
    rep.integral_pass = rep.attained >= kMuTol;
    rep.pass = rep.integral_pass;
    return rep;
}

ConditionReport check_C2(const LtvSystem& sys, const MatrixFn& M, double t,
                         double delta_bar, int nodes) {
    if (delta_bar <= 0.0) {
        throw ConfigError("check_C2: window length must be positive");
    }
    if (M.cols() != sys.state_dim()) {
        throw DimensionError("check_C2: M column count must equal state dim");
    }

    ConditionReport rep;
    rep.id = ConditionId::C2;
    rep.t = t;
    rep.delta = delta_bar;

    // (a) A constant over the scan window, by sampling.
    const Matrix a0 = sys.A(t);
    rep.a_constant = true;
    for (int i = 0; i < kConstancySamples; ++i) {
        const double s = t + delta_bar * i / (kConstancySamples - 1);
        if (((sys.A(s) - a0).cwiseAbs()).maxCoeff() > kConstancyTol) {
            rep.a_constant = false;
            break;
        }
    }

    // (b) Real spectrum; dense solvers leave imaginary dust on real spectra.
    Eigen::EigenSolver<Matrix> es(a0);
    if (es.info() != Eigen::Success) {
        throw NumericError("check_C2: eigen-solver failed on A");
    }
    rep.a_eigenvalues = es.eigenvalues();
    rep.max_imag = rep.a_eigenvalues.imag().cwiseAbs().maxCoeff();
    rep.spectrum_real = rep.max_imag <= kRealSpectrumTol;

    // (c) window average of M'M positive definite down to the floor.
    auto integrand = [&M](double s) -> Matrix {
        Matrix m = M(s);
        return m.transpose() * m;
    };
    Matrix avg = simpson_integrate(integrand, t, t + delta_bar, nodes) / delta_bar;
    Eigen::SelfAdjointEigenSolver<Matrix> ses(0.5 * (avg + avg.transpose()));
    if (ses.info() != Eigen::Success) {
        throw NumericError("check_C2: eigen-solver failed on the M'M average");
    }
    rep.attained = ses.eigenvalues()(0);
    rep.integral_pass = rep.attained >= kMuTol;

    rep.pass = rep.a_constant && rep.spectrum_real && rep.integral_pass;
    return rep;
}

}  // namespace ltvobs
