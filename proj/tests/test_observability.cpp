#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "ltvobs/chain.hpp"
#include "ltvobs/conditions.hpp"
#include "ltvobs/counterexample.hpp"
#include "test_fixtures.hpp"

using namespace ltvobs;
using fixtures::kTwoPi;
using fixtures::vec2;

TEST_CASE("chain on constant systems equals C A^k exactly") {
    std::mt19937_64 rng(3);
    const Matrix a = fixtures::random_matrix(rng, 3, 3);
    const Matrix c = fixtures::random_matrix(rng, 2, 3);
    LtvSystem sys(MatrixFn::constant(a), MatrixFn::zero(3, 1),
                  MatrixFn::constant(c));
    auto chain = build_chain(sys, 3);
    Matrix expected = c;
    for (int k = 0; k <= 3; ++k) {
        CHECK((chain.levels[k](1.7) - expected).cwiseAbs().maxCoeff() == 0.0);
        CHECK(chain.analytic[k]);
        expected = expected * a;
    }
}

TEST_CASE("chain recurrence residual against finite differences") {
    const LtvSystem sys = build_counterexample();
    auto chain = build_chain(sys, 2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> times(0.0, 10.0);
    const double h = 1e-4;
    for (int i = 0; i < 20; ++i) {
        const double t = times(rng);
        for (int k = 0; k + 1 <= 2; ++k) {
            Matrix ndot = (chain.levels[k](t - 2 * h) -
                           8.0 * chain.levels[k](t - h) +
                           8.0 * chain.levels[k](t + h) -
                           chain.levels[k](t + 2 * h)) /
                          (12.0 * h);
            Matrix residual =
                chain.levels[k + 1](t) - chain.levels[k](t) * sys.A(t) - ndot;
            CHECK(residual.cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("chain level zero is C and counterexample N_1 matches trig oracle") {
    const LtvSystem sys = build_counterexample();
    auto chain = build_chain(sys, 1);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> times(0.0, 8.0);
    for (int i = 0; i < 20; ++i) {
        const double t = times(rng);
        CHECK((chain.levels[0](t) - sys.C(t)).cwiseAbs().maxCoeff() == 0.0);
        // Hand-derived: N_1 = C A + dC = [[0.5 sin 2t, cos^2 t],
        //                                 [-sin^2 t, -0.5 sin 2t]].
        Matrix oracle(2, 2);
        const double st = std::sin(t), ct = std::cos(t);
        oracle << 0.5 * std::sin(2 * t), ct * ct, -st * st,
            -0.5 * std::sin(2 * t);
        CHECK((chain.levels[1](t) - oracle).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("chain falls back to finite differences and flags provenance") {
    // C has no analytic derivative attached.
    MatrixFn c(1, 2, [](double t) {
        Matrix m(1, 2);
        m << std::cos(t), std::sin(t);
        return m;
    });
    Matrix a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    LtvSystem sys(MatrixFn::constant(a), MatrixFn::zero(2, 1), std::move(c));

    CHECK_THROWS_AS(build_chain(sys, 1, /*allow_fd_fallback=*/false),
                    SmoothnessError);

    auto chain = build_chain(sys, 1);
    CHECK_FALSE(chain.analytic[1]);
    Matrix oracle(1, 2);  // N_1 = C A + dC = [-2 sin t, 2 cos t]
    oracle << -2.0 * std::sin(0.4), 2.0 * std::cos(0.4);
    CHECK((chain.levels[1](0.4) - oracle).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("stacked row selection") {
    const LtvSystem sys = build_counterexample();
    auto chain = build_chain(sys, 1);
    auto m = chain.stacked({{0, 1}, {1, 0}});
    Matrix at = m(0.9);
    CHECK((at.row(0) - sys.C(0.9).row(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((at.row(1) - chain.levels[1](0.9).row(0)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK_THROWS_AS(chain.stacked({{2, 0}}), ConfigError);
}

TEST_CASE("C1: identity output map attains 1") {
    auto rep = check_C1(MatrixFn::identity(2), 0.0, 3.0, 51);
    CHECK(rep.attained == doctest::Approx(1.0));
    CHECK(rep.pass);
}

TEST_CASE("C1: counterexample projector has zero determinant mass") {
    const LtvSystem sys = build_counterexample();
    auto rep = check_C1(sys.C, 0.0, kTwoPi);
    CHECK(rep.attained <= 1e-10);  // det(C'C) = det(C)^2 = 0, rank-1 projector
    CHECK_FALSE(rep.pass);
}

TEST_CASE("C1: diagonal sine map attains the half average") {
    MatrixFn m(2, 2, [](double t) {
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = 1.0;
        d(1, 1) = std::sin(t);
        return d;
    });
    auto rep = check_C1(m, 0.0, kTwoPi, 401);
    CHECK(rep.attained == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.pass);
}

TEST_CASE("C2: counterexample rejected by the real-spectrum premise") {
    const LtvSystem sys = build_counterexample();
    auto rep = check_C2(sys, sys.C, 0.0, kTwoPi);
    CHECK(rep.a_constant);
    CHECK_FALSE(rep.spectrum_real);  // eigenvalues are +-i
    CHECK(rep.max_imag == doctest::Approx(1.0).epsilon(1e-8));
    // ... while the integral clause alone is comfortably satisfied:
    CHECK(rep.attained == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.integral_pass);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("C2: nilpotent constant A with identity M passes") {
    Matrix a(2, 2);
    a << 0.0, 1.0, 0.0, 0.0;
    LtvSystem sys(MatrixFn::constant(a), MatrixFn::zero(2, 1),
                  MatrixFn::identity(2));
    auto rep = check_C2(sys, MatrixFn::identity(2), 0.0, 1.0, 51);
    CHECK(rep.a_constant);
    CHECK(rep.spectrum_real);
    CHECK(rep.integral_pass);
    CHECK(rep.pass);
}

TEST_CASE("C2: time-varying A fails the constancy clause") {
    MatrixFn a(2, 2, [](double t) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 1) = t;
        return m;
    });
    LtvSystem sys(std::move(a), MatrixFn::zero(2, 1), MatrixFn::identity(2));
    auto rep = check_C2(sys, MatrixFn::identity(2), 0.0, 1.0, 51);
    CHECK_FALSE(rep.a_constant);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("condition checks are invariant under row permutations of M") {
    std::mt19937_64 rng(13);
    const Matrix m0 = fixtures::random_matrix(rng, 3, 3);
    Matrix m1(3, 3);
    m1 << m0.row(2), m0.row(0), m0.row(1);
    const Matrix draw = fixtures::random_matrix(rng, 3, 3);
    const Matrix a = 0.5 * (draw + draw.transpose());  // real spectrum
    LtvSystem sys(MatrixFn::constant(a), MatrixFn::zero(3, 1),
                  MatrixFn::constant(m0));
    auto c1_base = check_C1(MatrixFn::constant(m0), 0.0, 1.0, 51);
    auto c1_perm = check_C1(MatrixFn::constant(m1), 0.0, 1.0, 51);
    // M'M is exactly invariant; floating-point summation order is not.
    CHECK(c1_base.attained ==
          doctest::Approx(c1_perm.attained).epsilon(1e-14));
    auto c2_base = check_C2(sys, MatrixFn::constant(m0), 0.0, 1.0, 51);
    auto c2_perm = check_C2(sys, MatrixFn::constant(m1), 0.0, 1.0, 51);
    CHECK(c2_base.attained == doctest::Approx(c2_perm.attained).epsilon(1e-14));
}

TEST_CASE("C1 pass implies extended-Gramian floor on random constant fixtures") {
    std::mt19937_64 rng(17);
    int tested = 0;
    while (tested < 10) {
        const Matrix a = fixtures::random_matrix(rng, 3, 3, 0.5);
        const Matrix m = fixtures::random_matrix(rng, 3, 3);
        MatrixFn mf = MatrixFn::constant(m);
        auto rep = check_C1(mf, 0.0, 1.0, 51);
        if (!rep.pass || rep.attained < 1e-2) continue;  // near-singular draw
        LtvSystem sys(MatrixFn::constant(a), MatrixFn::zero(3, 1), mf);
        auto w = extended_gramian(sys, mf, 0.0, 1.0, 101);
        CHECK(w.min_eigenvalue() >= kMuTol);
        ++tested;
    }
}

TEST_CASE("C2 pass implies extended-Gramian floor across window starts") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix draw = fixtures::random_matrix(rng, 3, 3, 0.5);
        const Matrix a = 0.5 * (draw + draw.transpose());
        const Matrix m = fixtures::random_matrix(rng, 3, 3) +
                         2.0 * Matrix::Identity(3, 3);
        MatrixFn mf = MatrixFn::constant(m);
        LtvSystem sys(MatrixFn::constant(a), MatrixFn::zero(3, 1), mf);
        auto rep = check_C2(sys, mf, 0.0, 1.0, 51);
        REQUIRE(rep.pass);
        if (rep.attained < 0.05) continue;  // near-singular draw
        for (int i = 0; i < 10; ++i) {
            auto w = extended_gramian(sys, mf, 0.3 * i, 1.0, 101);
            CHECK(w.min_eigenvalue() >= kMuTol);
        }
    }
}

TEST_CASE("counterexample fixture structure") {
    const LtvSystem sys = build_counterexample();
    Matrix c0(2, 2);
    c0 << 0.0, 0.0, 0.0, 1.0;
    CHECK((sys.C(0.0) - c0).cwiseAbs().maxCoeff() < 1e-15);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> times(0.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double t = times(rng);
        const Vector y = vec2(std::cos(t), -std::sin(t));
        CHECK((sys.C(t) * y).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (int i = 0; i < 50; ++i) {
        const double s = times(rng);
        Matrix phi = transition_matrix(sys, 0.0, s).phi;
        const Vector y = vec2(std::cos(s), -std::sin(s));
        CHECK((phi * vec2(1, 0) - y).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("counterexample report separates the two integrals") {
    auto entries = counterexample_report({kTwoPi, std::numbers::pi / 4.0, 10.0},
                                         401);
    REQUIRE(entries.size() == 3);

    CHECK(entries[0].gramian_min_eig <= 1e-8);
    CHECK(entries[0].m_integral_min_eig == doctest::Approx(0.5).epsilon(2e-6));

    CHECK(entries[1].gramian_min_eig <= 1e-8);

    CHECK(entries[2].gramian_min_eig <= 1e-8);
    const double angle = std::acos(std::min(
        1.0, std::abs(entries[2].witness.dot(vec2(1, 0)))));
    CHECK(angle < 1e-3);

    // the averaged M'M integral stays positive while the Gramian is singular
    for (const auto& e : entries) {
        if (e.delta >= std::numbers::pi) {
            CHECK(e.m_integral_min_eig > 0.1);
        }
    }

    auto j = to_json(entries);
    CHECK(j.is_array());
    CHECK(j[0].contains("delta"));
    CHECK(j[0].contains("gramian_min_eig"));
    CHECK(j[0].contains("m_integral_min_eig"));
    CHECK(j[0]["witness"].size() == 2);

    CHECK_THROWS_AS(counterexample_report({-1.0}), ConfigError);
}
