#pragma once

#include <vector>

#include "ltvobs/matrix_fn.hpp"

namespace ltvobs {

/// Known source points z_i with mixing weights alpha (sum alpha_i = 1).
///
/// Derived algebra: Z = [z_1 ... z_l] (n x l), xi = ones(l),
/// D(alpha) = xi alpha' - I (l x l, rank l-1, D xi = 0).
struct BeaconConfig {
    int dim = 2;   // n, 2 or 3
    Matrix Z;      // n x l
    Vector alpha;  // l

    static BeaconConfig make(const std::vector<Vector>& beacons,
                             const Vector& alpha = Vector());

    int count() const { return static_cast<int>(Z.cols()); }

    Vector beacon(int i) const { return Z.col(i); }

    Matrix D() const {
        const Eigen::Index l = Z.cols();
        return Vector::Ones(l) * alpha.transpose() - Matrix::Identity(l, l);
    }

    /// Z alpha = weighted combination sum alpha_i z_i.
    Vector weighted_center() const { return Z * alpha; }

    /// Geometry term of the persistent-excitation condition: Z D' D Z'.
    Matrix pe_geometry() const {
        Matrix d = D();
        return Z * d.transpose() * d * Z.transpose();
    }
};

}  // namespace ltvobs
