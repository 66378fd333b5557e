#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "ltvobs/errors.hpp"

namespace ltvobs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A matrix-valued function of time with optional analytic time-derivatives.
///
/// Evaluations are dimension-checked against the declared shape. Derivative
/// evaluators, when attached, are ordered: derivatives_[k] is the (k+1)-th
/// time-derivative.
class MatrixFn {
public:
    using Evaluator = std::function<Matrix(double)>;

    MatrixFn() = default;

    MatrixFn(Eigen::Index rows, Eigen::Index cols, Evaluator eval,
             std::vector<Evaluator> derivatives = {})
        : rows_(rows),
          cols_(cols),
          eval_(std::move(eval)),
          derivatives_(std::move(derivatives)) {}

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }

    /// Number of analytic derivatives attached (smoothness order K).
    int smoothness() const { return static_cast<int>(derivatives_.size()); }

    bool has_derivative(int order) const {
        return order >= 1 && order <= smoothness();
    }

    Matrix operator()(double t) const {
        Matrix m = eval_(t);
        check_dims(m, "MatrixFn evaluation");
        return m;
    }

    /// Analytic derivative of the given order (1-based).
    Matrix derivative(double t, int order = 1) const {
        if (!has_derivative(order)) {
            throw SmoothnessError("MatrixFn: derivative of order " +
                                  std::to_string(order) + " not available");
        }
        Matrix m = derivatives_[static_cast<size_t>(order - 1)](t);
        check_dims(m, "MatrixFn derivative");
        return m;
    }

    /// Constant matrix; derivatives up to `smoothness` orders are zero.
    static MatrixFn constant(const Matrix& value, int smoothness = 4) {
        Matrix zero = Matrix::Zero(value.rows(), value.cols());
        std::vector<Evaluator> derivs(static_cast<size_t>(smoothness),
                                      [zero](double) { return zero; });
        return MatrixFn(value.rows(), value.cols(),
                        [value](double) { return value; }, std::move(derivs));
    }

    static MatrixFn zero(Eigen::Index rows, Eigen::Index cols) {
        return constant(Matrix::Zero(rows, cols));
    }

    static MatrixFn identity(Eigen::Index n) {
        return constant(Matrix::Identity(n, n));
    }

private:
    void check_dims(const Matrix& m, const char* what) const {
        if (m.rows() != rows_ || m.cols() != cols_) {
            throw DimensionError(
                std::string(what) + ": got " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()) + ", declared " +
                std::to_string(rows_) + "x" + std::to_string(cols_));
        }
    }

    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    Evaluator eval_;
    std::vector<Evaluator> derivatives_;
};

}  // namespace ltvobs
