#pragma once

#include "ltvobs/matrix_fn.hpp"

namespace ltvobs {

/// Linear time-varying system  dX/dt = A(t) X + B(t) U,  Y = C(t) X.
struct LtvSystem {
    MatrixFn A;  // n x n
    MatrixFn B;  // n x s
    MatrixFn C;  // m x n

    LtvSystem(MatrixFn a, MatrixFn b, MatrixFn c)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
        if (A.rows() != A.cols()) {
            throw DimensionError("LtvSystem: A must be square");
        }
        if (B.rows() != A.rows()) {
            throw DimensionError("LtvSystem: B row count must equal state dim");
        }
        if (C.cols() != A.rows()) {
            throw DimensionError("LtvSystem: C column count must equal state dim");
        }
    }

    Eigen::Index state_dim() const { return A.rows(); }
    Eigen::Index input_dim() const { return B.cols(); }
    Eigen::Index output_dim() const { return C.rows(); }
};

/// Transition matrix Phi(t+s, t) of dX/dt = A(t) X.
struct TransitionMatrix {
    double t = 0.0;   // anchor time
    double s = 0.0;   // offset
    Matrix phi;       // n x n, maps state at t to state at t+s
};

}  // namespace ltvobs
