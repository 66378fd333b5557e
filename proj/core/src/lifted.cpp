#include "ltvobs/lifted.hpp"

#include <cmath>

#include "ltvobs/integrate.hpp"

namespace ltvobs {

double y0_of(const BeaconConfig& beacons, const Vector& x_pos) {
    return 0.5 * x_pos.squaredNorm() - beacons.weighted_center().dot(x_pos);
}

Vector lift_state(const BeaconConfig& beacons, const Vector& x_pos,
                  const Vector& bias) {
    const int n = beacons.dim;
    if (x_pos.size() != n) {
        throw DimensionError("lift_state: position dimension mismatch");
    }
    if (bias.size() == 0) {
        Vector x(n + 1);
        x.head(n) = x_pos;
        x(n) = y0_of(beacons, x_pos);
        return x;
    }
    if (bias.size() != n) {
        throw DimensionError("lift_state: bias dimension mismatch");
    }
    Vector x(2 * n + 3);
    x.head(n) = x_pos;
    x.segment(n, n) = bias;
    x(2 * n) = y0_of(beacons, x_pos);
    x(2 * n + 1) = bias.dot(x_pos);
    x(2 * n + 2) = bias.squaredNorm();
    return x;
}

Vector lift_state(const Scenario& sc, const Vector& x_pos) {
    return lift_state(sc.beacons, x_pos, sc.bias);
}

Vector position_of(const Scenario& sc, const Vector& lifted) {
    return lifted.head(sc.dim());
}

Vector bias_of(const Scenario& sc, const Vector& lifted) {
    if (!sc.bias_enabled()) return Vector();
    return lifted.segment(sc.dim(), sc.dim());
}

namespace {

// A(t) of the biased lifting; `deriv` = 0, 1, 2 selects u, u_dot or u_ddot
// in the velocity slots (all constant blocks vanish for deriv > 0).
Matrix lifted_a(const Scenario& sc, double t, int deriv) {
    const int n = sc.dim();
    const Vector u = deriv == 0   ? sc.trajectory.u(t)
                     : deriv == 1 ? sc.trajectory.u_dot(t)
                                  : sc.trajectory.u_ddot(t);
    if (sc.bias_enabled()) {
        const int N = 2 * n + 3;
        Matrix a = Matrix::Zero(N, N);
        a.block(2 * n, 0, 1, n) = u.transpose();
        a.block(2 * n + 1, n, 1, n) = u.transpose();
        if (deriv == 0) {
            a.block(0, n, n, n) = Matrix::Identity(n, n);
            a.block(2 * n, n, 1, n) = -sc.beacons.weighted_center().transpose();
            a(2 * n, 2 * n + 1) = 1.0;
            a(2 * n + 1, 2 * n + 2) = 1.0;
        }
        return a;
    }
    Matrix a = Matrix::Zero(n + 1, n + 1);
    a.block(n, 0, 1, n) = u.transpose();
    return a;
}

Matrix lifted_c(const Scenario& sc) {
    const int n = sc.dim();
    const int l = sc.beacons.count();
    const Matrix dz = sc.beacons.D() * sc.beacons.Z.transpose();  // l x n
    const int N = sc.lifted_dim();
    Matrix c = Matrix::Zero(l + 1, N);
    c(0, sc.bias_enabled() ? 2 * n : n) = 1.0;  // y_0 slot
    c.block(1, 0, l, n) = dz;
    return c;
}

}  // namespace

LtvSystem build_lifted_system(const Scenario& sc) {
    const int N = sc.lifted_dim();
    MatrixFn a(
        N, N, [sc](double t) { return lifted_a(sc, t, 0); },
        {[sc](double t) { return lifted_a(sc, t, 1); },
         [sc](double t) { return lifted_a(sc, t, 2); }});
    return LtvSystem(std::move(a), MatrixFn::identity(N),
                     MatrixFn::constant(lifted_c(sc), 3));
}

Vector lifted_input(const Scenario& sc, double t) {
    const int n = sc.dim();
    const Vector u = sc.trajectory.u(t);
    const double mix = -sc.beacons.weighted_center().dot(u);
    if (!sc.bias_enabled()) {
        Vector v = Vector::Zero(n + 1);
        v.head(n) = u;
        v(n) = mix;
        return v;
    }
    Vector v = Vector::Zero(2 * n + 3);
    v.head(n) = u;
    v(2 * n) = mix;
    return v;
}

Vector raw_ranges(const BeaconConfig& beacons, const Vector& x_pos) {
    const int l = beacons.count();
    Vector y(l);
    for (int i = 0; i < l; ++i) {
        y(i) = 0.5 * (x_pos - beacons.beacon(i)).squaredNorm();
    }
    return y;
}

Vector measure_from_ranges(const BeaconConfig& beacons, const Vector& ranges) {
    const int l = beacons.count();
    if (ranges.size() != l) {
        throw DimensionError("measure_from_ranges: range count mismatch");
    }
    double y0 = 0.0;
    for (int i = 0; i < l; ++i) {
        y0 += beacons.alpha(i) * (ranges(i) - 0.5 * beacons.beacon(i).squaredNorm());
    }
    Vector y(l + 1);
    y(0) = y0;
    for (int i = 0; i < l; ++i) {
        y(i + 1) = ranges(i) - y0 - 0.5 * beacons.beacon(i).squaredNorm();
    }
    return y;
}

Vector measure(const Scenario& sc, double /*t*/, const Vector& x_pos) {
    return measure_from_ranges(sc.beacons, raw_ranges(sc.beacons, x_pos));
}

namespace {

int auto_nodes(double s, double dt) {
    if (s <= 0.0) return 3;
    int half = static_cast<int>(std::ceil(s / (2.0 * dt)));
    return 2 * std::max(half, 1) + 1;
}

}  // namespace

TransitionMatrix closed_form_phi(const Scenario& sc, double t, double s,
                                 int nodes) {
    if (s < 0.0) {
        throw ConfigError("closed_form_phi: offset must be non-negative");
    }
    const int n = sc.dim();
    if (nodes < 0) nodes = auto_nodes(s, sc.dt);
    require_simpson_nodes(nodes);

    // a(t+s, t) = int_t^{t+s} u'(tau) dtau, as a row vector.
    Eigen::RowVectorXd a_row = Eigen::RowVectorXd::Zero(n);
    if (s > 0.0) {
        Matrix integral = simpson_integrate(
            [&sc](double tau) -> Matrix { return sc.trajectory.u(tau); }, t,
            t + s, nodes);
        a_row = integral.transpose();
    }

    if (!sc.bias_enabled()) {
        Matrix phi = Matrix::Identity(n + 1, n + 1);
        phi.block(n, 0, 1, n) = a_row;
        return TransitionMatrix{t, s, std::move(phi)};
    }

    const Eigen::RowVectorXd d_row =
        s * (a_row - sc.beacons.weighted_center().transpose());
    const int N = 2 * n + 3;
    Matrix phi = Matrix::Identity(N, N);
    phi.block(0, n, n, n) = s * Matrix::Identity(n, n);
    phi.block(2 * n, 0, 1, n) = a_row;
    phi.block(2 * n, n, 1, n) = d_row;
    phi(2 * n, 2 * n + 1) = s;
    phi(2 * n, 2 * n + 2) = 0.5 * s * s;
    phi.block(2 * n + 1, n, 1, n) = a_row;
    phi(2 * n + 1, 2 * n + 2) = s;
    return TransitionMatrix{t, s, std::move(phi)};
}

MatrixFn build_M(const Scenario& sc) {
    const int n = sc.dim();
    const int l = sc.beacons.count();
    const Matrix dz = sc.beacons.D() * sc.beacons.Z.transpose();  // l x n
    const Eigen::RowVectorXd zw = sc.beacons.weighted_center().transpose();

    if (!sc.bias_enabled()) {
        // [C; C A(t)]: the derivative chain of the bias-free lifting.
        const int rows = 2 * l + 2, cols = n + 1;
        auto traj = sc.trajectory;
        auto assemble = [rows, cols, n, l, dz](const Vector& u_slot,
                                               bool with_const) {
            Matrix m = Matrix::Zero(rows, cols);
            if (with_const) {
                m(0, n) = 1.0;
                m.block(1, 0, l, n) = dz;
            }
            m.block(l + 1, 0, 1, n) = u_slot.transpose();
            return m;
        };
        return MatrixFn(
            rows, cols,
            [assemble, traj](double t) { return assemble(traj.u(t), true); },
            {[assemble, traj](double t) {
                return assemble(traj.u_dot(t), false);
            }});
    }

    const int rows = 2 * l + 3, cols = 2 * n + 3;
    auto traj = sc.trajectory;
    auto assemble = [rows, cols, n, l, dz, zw](const Vector& u_slot,
                                               const Vector& udot_slot,
                                               bool with_const) {
        Matrix m = Matrix::Zero(rows, cols);
        if (with_const) {
            m(0, 2 * n) = 1.0;                 // y_0 row
            m.block(1, 0, l, n) = dz;          // N_0 position rows
            m.block(l + 1, n, 1, n) = -zw;     // N_1 scalar row
            m(l + 1, 2 * n + 1) = 1.0;
            m.block(l + 2, n, l, n) = dz;      // N_1 bias rows
            m(2 * l + 2, 2 * n + 2) = 1.0;     // N_2 scalar row
        }
        m.block(l + 1, 0, 1, n) = u_slot.transpose();
        m.block(2 * l + 2, 0, 1, n) = udot_slot.transpose();
        m.block(2 * l + 2, n, 1, n) = 2.0 * u_slot.transpose();
        return m;
    };
    return MatrixFn(
        rows, cols,
        [assemble, traj](double t) {
            return assemble(traj.u(t), traj.u_dot(t), true);
        },
        {[assemble, traj](double t) {
            return assemble(traj.u_dot(t), traj.u_ddot(t), false);
        }});
}

}  // namespace ltvobs
