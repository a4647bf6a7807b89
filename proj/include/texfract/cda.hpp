#pragma once

#include <iosfwd>
#include <vector>

#include "texfract/linalg.hpp"

namespace texfract {

/// Within/between/total scatter decomposition; S_total = S_intra + S_inter.
struct ScatterSet {
    Matrix s_intra;
    Matrix s_inter;
    Matrix s_total;
    std::vector<double> global_mean;
    Matrix class_means; // one row per class label; empty classes left zero
    std::vector<int> class_counts;
};

struct CdaOptions {
    int n_components = 10;
    double ridge_scale = 1e-6;
    bool cap_components = true; // cap at min(p, classes - 1)
};

/// Fitted linear map onto canonical variables, rows sorted by descending
/// eigenvalue; each row unit-norm with its first nonzero entry positive.
struct CdaProjection {
    Matrix components; // n_components x p
    std::vector<double> eigenvalues;
    double ridge = 0.0;

    int component_count() const { return components.rows; }
    int feature_count() const { return components.cols; }
};

ScatterSet scatter_matrices(const Matrix& x, const std::vector<int>& y);

/// Ridge S_intra by ridge_scale*trace/p, then solve the generalized symmetric
/// eigenproblem S_inter v = lambda (S_intra + eps I) v via Cholesky reduction.
CdaProjection fit_cda(const Matrix& x, const std::vector<int>& y,
                      const CdaOptions& opts = {});

/// Z = X * components^T.
Matrix project(const CdaProjection& proj, const Matrix& x);

void save_projection(const CdaProjection& proj, std::ostream& out);
CdaProjection load_projection(std::istream& in);

} // namespace texfract
