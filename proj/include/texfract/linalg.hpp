#pragma once

#include <vector>

#include "texfract/error.hpp"

namespace texfract {

/// Dense row-major double matrix; small, value-semantic.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
double trace(const Matrix& m);

/// Lower-triangular L with A = L*L^T; fails when A is not positive definite.
Matrix cholesky(const Matrix& a);

/// Solve L*X = B (L lower triangular), column by column.
Matrix forward_solve(const Matrix& l, const Matrix& b);

/// Solve L^T*X = B.
Matrix backward_solve_transposed(const Matrix& l, const Matrix& b);

struct EigenSym {
    std::vector<double> values; // descending
    Matrix vectors;             // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
EigenSym jacobi_eigen(const Matrix& a);

} // namespace texfract
