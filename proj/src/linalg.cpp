#include "texfract/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace texfract {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        fail(ErrorCode::DimensionMismatch, "matmul: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j)
                out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            out.at(j, i) = m.at(i, j);
    return out;
}

double trace(const Matrix& m) {
    double t = 0.0;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i)
        t += m.at(i, i);
    return t;
}

Matrix cholesky(const Matrix& a) {
    if (a.rows != a.cols)
        fail(ErrorCode::InvalidArgument, "cholesky: matrix must be square");
    const int n = a.rows;
    Matrix l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a.at(i, j);
            for (int k = 0; k < j; ++k)
                sum -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (sum <= 0.0)
                    fail(ErrorCode::NumericFailure, "cholesky: matrix not positive definite");
                l.at(i, i) = std::sqrt(sum);
            } else {
                l.at(i, j) = sum / l.at(j, j);
            }
        }
    }
    return l;
}

Matrix forward_solve(const Matrix& l, const Matrix& b) {
    if (l.rows != l.cols || l.rows != b.rows)
        fail(ErrorCode::DimensionMismatch, "forward_solve: shape mismatch");
    const int n = l.rows;
    Matrix x(n, b.cols);
    for (int c = 0; c < b.cols; ++c)
        for (int i = 0; i < n; ++i) {
            double sum = b.at(i, c);
            for (int k = 0; k < i; ++k)
                sum -= l.at(i, k) * x.at(k, c);
            x.at(i, c) = sum / l.at(i, i);
        }
    return x;
}

Matrix backward_solve_transposed(const Matrix& l, const Matrix& b) {
    if (l.rows != l.cols || l.rows != b.rows)
        fail(ErrorCode::DimensionMismatch, "backward_solve: shape mismatch");
    const int n = l.rows;
    Matrix x(n, b.cols);
    for (int c = 0; c < b.cols; ++c)
        for (int i = n - 1; i >= 0; --i) {
            double sum = b.at(i, c);
            for (int k = i + 1; k < n; ++k)
                sum -= l.at(k, i) * x.at(k, c);
            x.at(i, c) = sum / l.at(i, i);
        }
    return x;
}

EigenSym jacobi_eigen(const Matrix& input) {
    if (input.rows != input.cols)
        fail(ErrorCode::InvalidArgument, "jacobi_eigen: matrix must be square");
    const int n = input.rows;
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    double frob = 0.0;
    for (double x : a.data) frob += x * x;
    frob = std::sqrt(frob);
    const double tol = 1e-14 * std::max(frob, 1.0);

    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += 2.0 * a.at(p, q) * a.at(p, q);
        if (std::sqrt(off) <= tol) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::abs(apq) <= tol / n) continue;

                const double tau = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a.at(k, p);
                    const double akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a.at(p, k);
                    const double aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v.at(k, p);
                    const double vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a.at(i, i) > a.at(j, j); });

    EigenSym out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a.at(order[k], order[k]);
        for (int r = 0; r < n; ++r)
            out.vectors.at(r, k) = v.at(r, order[k]);
    }
    return out;
}

} // namespace texfract
