#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support/cda_oracle.hpp"
#include "texfract/cda.hpp"

using namespace texfract;

namespace {

// k well-separated Gaussian blobs; means spread so the discriminant directions
// carry large eigenvalues.
struct Instance {
    Matrix x;
    std::vector<int> y;
};

Instance random_instance(std::mt19937_64& rng, int classes, int features, int per_class,
                         double separation = 6.0) {
    auto gauss = [&rng] {
        // Box-Muller on fixed-width draws keeps the instance reproducible.
        const double u1 = (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0;
        const double u2 = (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };

    Instance inst;
    inst.x = Matrix(classes * per_class, features);
    std::vector<std::vector<double>> centers(classes, std::vector<double>(features));
    for (auto& c : centers)
        for (auto& v : c)
            v = separation * gauss();

    int row = 0;
    for (int c = 0; c < classes; ++c)
        for (int i = 0; i < per_class; ++i, ++row) {
            inst.y.push_back(c);
            for (int j = 0; j < features; ++j)
                inst.x.at(row, j) = centers[c][j] + gauss();
        }
    return inst;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

} // namespace

TEST_CASE("hand-computed 1-D scatters") {
    Matrix x(4, 1);
    x.at(0, 0) = 0.0;
    x.at(1, 0) = 0.0;
    x.at(2, 0) = 2.0;
    x.at(3, 0) = 2.0;
    const std::vector<int> y = {0, 0, 1, 1};

    const ScatterSet s = scatter_matrices(x, y);
    CHECK(s.s_intra.at(0, 0) == doctest::Approx(0.0));
    CHECK(s.s_inter.at(0, 0) == doctest::Approx(4.0));
    CHECK(s.s_total.at(0, 0) == doctest::Approx(4.0));
    CHECK(s.global_mean[0] == doctest::Approx(1.0));
}

TEST_CASE("identical samples give zero scatter") {
    Matrix x(4, 3);
    for (auto& v : x.data) v = 5.5;
    const ScatterSet s = scatter_matrices(x, {0, 0, 1, 1});
    for (double v : s.s_intra.data) CHECK(v == doctest::Approx(0.0));
    for (double v : s.s_inter.data) CHECK(v == doctest::Approx(0.0));
    for (double v : s.s_total.data) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("scatter additivity on random data") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Instance inst = random_instance(rng, 3, 5, 8);
        const ScatterSet s = scatter_matrices(inst.x, inst.y);

        double norm = 0.0;
        for (double v : s.s_total.data) norm = std::max(norm, std::abs(v));
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                CHECK(std::abs(s.s_intra.at(i, j) + s.s_inter.at(i, j) -
                               s.s_total.at(i, j)) <= 1e-8 * norm);
                CHECK(s.s_intra.at(i, j) == doctest::Approx(s.s_intra.at(j, i)));
                CHECK(s.s_inter.at(i, j) == doctest::Approx(s.s_inter.at(j, i)));
            }
    }
}

TEST_CASE("a single class is rejected") {
    Matrix x(3, 2);
    CHECK_THROWS_AS(scatter_matrices(x, {0, 0, 0}), Error);
    CHECK_THROWS_AS(fit_cda(x, {0, 0, 0}), Error);
}

TEST_CASE("non-finite input is rejected") {
    Matrix x(4, 2);
    x.at(2, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_cda(x, {0, 0, 1, 1}), Error);
}

TEST_CASE("separation along (1,1) dominates the leading component") {
    std::mt19937_64 rng(2);
    const int n = 2000; // large sample keeps the within-class scatter isotropic
    Matrix x(n, 2);
    std::vector<int> y;
    for (int i = 0; i < n; ++i) {
        const int c = i < n / 2 ? 0 : 1;
        y.push_back(c);
        const double noise_a = (static_cast<double>(rng() % 2000) - 1000.0) / 4000.0;
        const double noise_b = (static_cast<double>(rng() % 2000) - 1000.0) / 4000.0;
        x.at(i, 0) = c * 5.0 + noise_a;
        x.at(i, 1) = c * 5.0 + noise_b;
    }
    const CdaProjection proj = fit_cda(x, y);
    REQUIRE(proj.component_count() == 1); // capped at classes - 1
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(proj.components.at(0, 0) - inv_sqrt2) < 0.02);
    CHECK(std::abs(proj.components.at(0, 1) - inv_sqrt2) < 0.02);
}

TEST_CASE("classes differing only in feature 1 project onto the first axis") {
    Matrix x(60, 3);
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) {
        const int c = i < 30 ? 0 : 1;
        y.push_back(c);
        x.at(i, 0) = c * 10.0 + (i % 3) * 0.1;
        x.at(i, 1) = 4.0; // constant
        x.at(i, 2) = -1.0;
    }
    const CdaProjection proj = fit_cda(x, y);
    CHECK(std::abs(proj.components.at(0, 0)) > 1.0 - 1e-8);
}

TEST_CASE("eigenvalue rank is bounded by classes minus one") {
    std::mt19937_64 rng(4);
    const Instance inst = random_instance(rng, 3, 5, 20);
    CdaOptions opts;
    opts.n_components = 5;
    opts.cap_components = false;
    const CdaProjection proj = fit_cda(inst.x, inst.y, opts);
    REQUIRE(proj.component_count() == 5);
    for (int k = 2; k < 5; ++k)
        CHECK(std::abs(proj.eigenvalues[k]) < 1e-8 * proj.eigenvalues[0]);
}

TEST_CASE("fit matches the inversion + dense eigendecomposition oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int classes = 2 + static_cast<int>(rng() % 4);
        const int features = 2 + static_cast<int>(rng() % 7);
        const Instance inst = random_instance(rng, classes, features, 24);

        const CdaProjection mine = fit_cda(inst.x, inst.y);
        const oracle::CdaResult ref = oracle::cda_by_inversion(inst.x, inst.y, CdaOptions{});

        REQUIRE(mine.component_count() == ref.components.rows);
        for (int k = 0; k < mine.component_count(); ++k)
            CHECK(mine.eigenvalues[k] ==
                  doctest::Approx(ref.eigenvalues[k]).epsilon(1e-6).scale(1.0));
        CHECK(max_abs_diff(mine.components, ref.components) < 1e-6);
    }
}

TEST_CASE("canonical variables are pairwise uncorrelated on training data") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 5; ++trial) {
        const Instance inst = random_instance(rng, 4, 6, 30);
        const CdaProjection proj = fit_cda(inst.x, inst.y);
        const Matrix z = project(proj, inst.x);

        std::vector<double> mean(z.cols, 0.0);
        for (int i = 0; i < z.rows; ++i)
            for (int j = 0; j < z.cols; ++j)
                mean[j] += z.at(i, j);
        for (double& m : mean)
            m /= z.rows;

        for (int a = 0; a < z.cols; ++a)
            for (int b = a + 1; b < z.cols; ++b) {
                double caa = 0.0, cbb = 0.0, cab = 0.0;
                for (int i = 0; i < z.rows; ++i) {
                    const double da = z.at(i, a) - mean[a];
                    const double db = z.at(i, b) - mean[b];
                    caa += da * da;
                    cbb += db * db;
                    cab += da * db;
                }
                CHECK(std::abs(cab) / std::sqrt(caa * cbb) < 1e-6);
            }
    }
}

TEST_CASE("positive feature rescaling preserves eigenvalue ranking") {
    std::mt19937_64 rng(7);
    const Instance inst = random_instance(rng, 3, 4, 25);
    const CdaProjection base = fit_cda(inst.x, inst.y);

    Matrix scaled = inst.x;
    for (double& v : scaled.data) v *= 37.5;
    const CdaProjection after = fit_cda(scaled, inst.y);

    REQUIRE(base.component_count() == after.component_count());
    for (int k = 0; k < base.component_count(); ++k)
        CHECK(base.eigenvalues[k] ==
              doctest::Approx(after.eigenvalues[k]).epsilon(1e-9));
    CHECK(max_abs_diff(base.components, after.components) < 1e-9);
}

TEST_CASE("degenerate constant features exercise the ridge path") {
    Matrix x(6, 3);
    for (int i = 0; i < 6; ++i) {
        x.at(i, 0) = 1.0;          // constant
        x.at(i, 1) = i < 3 ? 0.0 : 4.0;
        x.at(i, 2) = 2.0;          // constant
    }
    const CdaProjection proj = fit_cda(x, {0, 0, 0, 1, 1, 1});
    CHECK(proj.ridge > 0.0);
    CHECK(proj.component_count() == 1);
    for (double v : proj.components.data)
        CHECK(std::isfinite(v));
}

TEST_CASE("projection applies components as rows") {
    CdaProjection proj;
    proj.components = Matrix(1, 3);
    proj.components.at(0, 0) = 1.0;
    proj.eigenvalues = {1.0};

    Matrix x(2, 3);
    x.at(0, 0) = 3.0;
    x.at(0, 1) = 9.0;
    x.at(1, 0) = -2.0;
    const Matrix z = project(proj, x);
    CHECK(z.rows == 2);
    CHECK(z.cols == 1);
    CHECK(z.at(0, 0) == doctest::Approx(3.0));
    CHECK(z.at(1, 0) == doctest::Approx(-2.0));

    Matrix zero(4, 3);
    const Matrix zz = project(proj, zero);
    for (double v : zz.data)
        CHECK(v == 0.0);

    Matrix wrong(2, 5);
    CHECK_THROWS_AS(project(proj, wrong), Error);
}

TEST_CASE("projection text format round-trips exactly") {
    std::mt19937_64 rng(8);
    const Instance inst = random_instance(rng, 3, 5, 12);
    const CdaProjection proj = fit_cda(inst.x, inst.y);

    std::stringstream buf;
    save_projection(proj, buf);
    const CdaProjection back = load_projection(buf);

    CHECK(back.ridge == proj.ridge);
    CHECK(back.eigenvalues == proj.eigenvalues);
    CHECK(back.components.data == proj.components.data);
}
