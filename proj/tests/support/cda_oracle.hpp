#pragma once

// Reference CDA fit: explicitly invert the ridged within-class scatter, then
// run a dense (nonsymmetric) eigendecomposition of the product matrix. Uses
// Eigen so the route shares no code with the library's Cholesky+Jacobi path.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "texfract/cda.hpp"

namespace oracle {

struct CdaResult {
    std::vector<double> eigenvalues;
    texfract::Matrix components; // rows, unit norm, first nonzero entry positive
};

inline CdaResult cda_by_inversion(const texfract::Matrix& x, const std::vector<int>& y,
                                  const texfract::CdaOptions& opts) {
    const texfract::ScatterSet s = texfract::scatter_matrices(x, y);
    const int p = x.cols;

    Eigen::MatrixXd intra(p, p), inter(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            intra(i, j) = s.s_intra.at(i, j);
            inter(i, j) = s.s_inter.at(i, j);
        }

    const double tr = intra.trace();
    const double eps = tr > 0.0 ? opts.ridge_scale * tr / p : 1e-12;
    intra += eps * Eigen::MatrixXd::Identity(p, p);

    const Eigen::MatrixXd product = intra.inverse() * inter;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(product);

    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return solver.eigenvalues()[a].real() > solver.eigenvalues()[b].real();
    });

    int present = 0;
    for (int c : s.class_counts)
        if (c > 0) ++present;
    int keep = std::min(opts.n_components, p);
    if (opts.cap_components) keep = std::min(keep, present - 1);
    keep = std::max(keep, 1);

    CdaResult out;
    out.components = texfract::Matrix(keep, p);
    for (int k = 0; k < keep; ++k) {
        out.eigenvalues.push_back(solver.eigenvalues()[order[k]].real());
        Eigen::VectorXd v = solver.eigenvectors().col(order[k]).real();
        v.normalize();
        for (int i = 0; i < p; ++i)
            if (std::abs(v[i]) > 1e-12) {
                if (v[i] < 0.0) v = -v;
                break;
            }
        for (int i = 0; i < p; ++i)
            out.components.at(k, i) = v[i];
    }
    return out;
}

} // namespace oracle
