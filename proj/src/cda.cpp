#include "texfract/cda.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "texfract/text_io.hpp"

namespace texfract {

namespace {

int checked_class_count(const Matrix& x, const std::vector<int>& y) {
    if (x.rows < 1 || x.cols < 1)
        fail(ErrorCode::InvalidArgument, "cda: empty sample matrix");
    if (static_cast<size_t>(x.rows) != y.size())
        fail(ErrorCode::DimensionMismatch, "cda: label count does not match rows");
    for (double v : x.data)
        if (!std::isfinite(v))
            fail(ErrorCode::NumericFailure, "cda: non-finite feature value");
    int max_label = 0;
    for (int label : y) {
        if (label < 0)
            fail(ErrorCode::InvalidArgument, "cda: negative class label");
        max_label = std::max(max_label, label);
    }
    return max_label + 1;
}

} // namespace

ScatterSet scatter_matrices(const Matrix& x, const std::vector<int>& y) {
    const int n_classes = checked_class_count(x, y);
    const int n = x.rows;
    const int p = x.cols;

    ScatterSet s;
    s.class_counts.assign(n_classes, 0);
    s.class_means = Matrix(n_classes, p);
    s.global_mean.assign(p, 0.0);

    for (int i = 0; i < n; ++i) {
        ++s.class_counts[y[i]];
        for (int j = 0; j < p; ++j) {
            s.class_means.at(y[i], j) += x.at(i, j);
            s.global_mean[j] += x.at(i, j);
        }
    }
    int present = 0;
    for (int c = 0; c < n_classes; ++c) {
        if (s.class_counts[c] == 0) continue;
        ++present;
        for (int j = 0; j < p; ++j)
            s.class_means.at(c, j) /= s.class_counts[c];
    }
    if (present < 2)
        fail(ErrorCode::InvalidArgument, "cda: need at least 2 classes with samples");
    for (int j = 0; j < p; ++j)
        s.global_mean[j] /= n;

    s.s_intra = Matrix(p, p);
    s.s_inter = Matrix(p, p);
    s.s_total = Matrix(p, p);

    std::vector<double> diff(p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j)
            diff[j] = x.at(i, j) - s.class_means.at(y[i], j);
        for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b)
                s.s_intra.at(a, b) += diff[a] * diff[b];

        for (int j = 0; j < p; ++j)
            diff[j] = x.at(i, j) - s.global_mean[j];
        for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b)
                s.s_total.at(a, b) += diff[a] * diff[b];
    }
    for (int c = 0; c < n_classes; ++c) {
        if (s.class_counts[c] == 0) continue;
        for (int j = 0; j < p; ++j)
            diff[j] = s.class_means.at(c, j) - s.global_mean[j];
        for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b)
                s.s_inter.at(a, b) += s.class_counts[c] * diff[a] * diff[b];
    }
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < a; ++b) {
            s.s_intra.at(a, b) = s.s_intra.at(b, a);
            s.s_inter.at(a, b) = s.s_inter.at(b, a);
            s.s_total.at(a, b) = s.s_total.at(b, a);
        }
    return s;
}

CdaProjection fit_cda(const Matrix& x, const std::vector<int>& y, const CdaOptions& opts) {
    if (opts.n_components < 1)
        fail(ErrorCode::InvalidArgument, "fit_cda: n_components must be >= 1");

    const ScatterSet s = scatter_matrices(x, y);
    const int p = x.cols;
    int present = 0;
    for (int c : s.class_counts)
        if (c > 0) ++present;

    const double tr = trace(s.s_intra);
    const double eps = tr > 0.0 ? opts.ridge_scale * tr / p : 1e-12;

    Matrix ridged = s.s_intra;
    for (int i = 0; i < p; ++i)
        ridged.at(i, i) += eps;

    const Matrix l = cholesky(ridged);
    // B = L^-1 * S_inter * L^-T, reduced to two triangular solves.
    const Matrix half = forward_solve(l, s.s_inter);
    Matrix b = forward_solve(l, transpose(half));
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            const double v = 0.5 * (b.at(i, j) + b.at(j, i));
            b.at(i, j) = v;
            b.at(j, i) = v;
        }

    const EigenSym eig = jacobi_eigen(b);

    int keep = std::min(opts.n_components, p);
    if (opts.cap_components)
        keep = std::min(keep, present - 1);
    keep = std::max(keep, 1);

    Matrix top(p, keep);
    for (int k = 0; k < keep; ++k)
        for (int r = 0; r < p; ++r)
            top.at(r, k) = eig.vectors.at(r, k);
    const Matrix raw = backward_solve_transposed(l, top);

    CdaProjection proj;
    proj.ridge = eps;
    proj.eigenvalues.assign(eig.values.begin(), eig.values.begin() + keep);
    // Both scatters are PSD, so negative eigenvalues are rounding residue.
    for (double& v : proj.eigenvalues)
        if (v < 0.0) v = 0.0;
    proj.components = Matrix(keep, p);
    for (int k = 0; k < keep; ++k) {
        double norm = 0.0;
        for (int r = 0; r < p; ++r)
            norm += raw.at(r, k) * raw.at(r, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) norm = 1.0;

        double sign = 1.0;
        for (int r = 0; r < p; ++r) {
            const double v = raw.at(r, k) / norm;
            if (std::abs(v) > 1e-12) {
                sign = v > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int r = 0; r < p; ++r)
            proj.components.at(k, r) = sign * raw.at(r, k) / norm;
    }
    return proj;
}

Matrix project(const CdaProjection& proj, const Matrix& x) {
    if (x.cols != proj.feature_count())
        fail(ErrorCode::DimensionMismatch, "project: feature dimension mismatch");
    return matmul(x, transpose(proj.components));
}

void save_projection(const CdaProjection& proj, std::ostream& out) {
    out << "cda_projection,1\n";
    out << "ridge," << fmt_double(proj.ridge) << "\n";
    out << "shape," << proj.component_count() << "," << proj.feature_count() << "\n";
    out << "eigenvalues";
    for (double v : proj.eigenvalues)
        out << "," << fmt_double(v);
    out << "\n";
    for (int k = 0; k < proj.component_count(); ++k) {
        out << "component";
        for (int j = 0; j < proj.feature_count(); ++j)
            out << "," << fmt_double(proj.components.at(k, j));
        out << "\n";
    }
}

CdaProjection load_projection(std::istream& in) {
    auto next_line = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line))
            fail(ErrorCode::CorruptData, std::string("projection file: missing ") + what);
        return split_csv(line);
    };

    auto header = next_line("header");
    if (header.size() != 2 || header[0] != "cda_projection" || header[1] != "1")
        fail(ErrorCode::UnsupportedFormat, "projection file: bad header");

    auto ridge_row = next_line("ridge");
    if (ridge_row.size() != 2 || ridge_row[0] != "ridge")
        fail(ErrorCode::CorruptData, "projection file: bad ridge row");

    auto shape_row = next_line("shape");
    if (shape_row.size() != 3 || shape_row[0] != "shape")
        fail(ErrorCode::CorruptData, "projection file: bad shape row");
    const int k = std::stoi(shape_row[1]);
    const int p = std::stoi(shape_row[2]);
    if (k < 1 || p < 1)
        fail(ErrorCode::CorruptData, "projection file: bad shape");

    CdaProjection proj;
    proj.ridge = std::stod(ridge_row[1]);

    auto eig_row = next_line("eigenvalues");
    if (eig_row.size() != static_cast<size_t>(k) + 1 || eig_row[0] != "eigenvalues")
        fail(ErrorCode::CorruptData, "projection file: bad eigenvalue row");
    for (int i = 0; i < k; ++i)
        proj.eigenvalues.push_back(std::stod(eig_row[i + 1]));

    proj.components = Matrix(k, p);
    for (int r = 0; r < k; ++r) {
        auto row = next_line("component");
        if (row.size() != static_cast<size_t>(p) + 1 || row[0] != "component")
            fail(ErrorCode::CorruptData, "projection file: bad component row");
        for (int j = 0; j < p; ++j)
            proj.components.at(r, j) = std::stod(row[j + 1]);
    }
    return proj;
}

} // namespace texfract
