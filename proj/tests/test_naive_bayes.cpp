#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "texfract/naive_bayes.hpp"

using namespace texfract;

namespace {

double gauss(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

} // namespace

TEST_CASE("balanced classes get equal priors") {
    Matrix x(4, 1);
    x.at(0, 0) = 0.0;
    x.at(1, 0) = 1.0;
    x.at(2, 0) = 10.0;
    x.at(3, 0) = 11.0;
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"a", "b"});
    CHECK(m.priors[0] == doctest::Approx(0.5));
    CHECK(m.priors[1] == doctest::Approx(0.5));
}

TEST_CASE("unbiased variance from two samples") {
    Matrix x(4, 1);
    x.at(0, 0) = 0.0;
    x.at(1, 0) = 2.0;
    x.at(2, 0) = 8.0;
    x.at(3, 0) = 8.0;
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"a", "b"});
    CHECK(m.means.at(0, 0) == doctest::Approx(1.0));
    CHECK(m.variances.at(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("constant features hit the variance floor and stay finite") {
    Matrix x(4, 2);
    for (int i = 0; i < 4; ++i) {
        x.at(i, 0) = 7.0; // constant everywhere
        x.at(i, 1) = i < 2 ? 0.0 : 5.0;
    }
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"a", "b"});
    CHECK(m.variances.at(0, 0) > 0.0);
    const Prediction p = predict(m, std::vector<double>{7.0, 1.0});
    for (double lp : p.log_posteriors)
        CHECK(std::isfinite(lp));
}

TEST_CASE("a one-sample class is rejected by name") {
    Matrix x(3, 1);
    CHECK_THROWS_WITH_AS(fit_nb(x, {0, 0, 1}, {"big", "lonely"}),
                         doctest::Contains("lonely"), Error);
}

TEST_CASE("two-Gaussian closed-form log-posterior gap") {
    const double a = 1.0 / std::sqrt(2.0); // {-a, a} has unbiased variance 1
    Matrix x(4, 1);
    x.at(0, 0) = -a;
    x.at(1, 0) = a;
    x.at(2, 0) = 10.0 - a;
    x.at(3, 0) = 10.0 + a;
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"near", "far"});

    const Prediction p = predict(m, std::vector<double>{2.0});
    CHECK(p.label == 0);
    // (8^2 - 2^2) / 2 = 30
    CHECK(p.log_posteriors[0] - p.log_posteriors[1] == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("ties resolve to the first class in name order") {
    // Exact parameters so x = 5 is a true tie between the two classes.
    NaiveBayesModel m;
    m.class_names = {"alpha", "beta"};
    m.priors = {0.5, 0.5};
    m.means = Matrix(2, 1);
    m.means.at(0, 0) = 0.0;
    m.means.at(1, 0) = 10.0;
    m.variances = Matrix(2, 1);
    m.variances.at(0, 0) = 1.0;
    m.variances.at(1, 0) = 1.0;

    const Prediction p = predict(m, std::vector<double>{5.0});
    CHECK(p.log_posteriors[0] == p.log_posteriors[1]);
    CHECK(p.label == 0);
}

TEST_CASE("priors dominate identical likelihoods") {
    // 18 samples of class a, 2 of class b, same feature distribution.
    Matrix x(20, 1);
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        x.at(i, 0) = i % 2 == 0 ? -1.0 : 1.0;
        y.push_back(i < 18 ? 0 : 1);
    }
    const NaiveBayesModel m = fit_nb(x, y, {"common", "rare"});
    const Prediction p = predict(m, std::vector<double>{0.0});
    CHECK(p.label == 0);
}

TEST_CASE("dimension mismatches are rejected") {
    Matrix x(4, 2);
    x.at(2, 0) = 1.0;
    x.at(3, 0) = 2.0;
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"a", "b"});
    CHECK_THROWS_AS(predict(m, std::vector<double>{1.0}), Error);
}

TEST_CASE("evaluation on perfect and constant predictors") {
    Matrix x(8, 1);
    std::vector<int> y;
    for (int i = 0; i < 8; ++i) {
        x.at(i, 0) = (i / 2) * 100.0 + (i % 2);
        y.push_back(i / 2);
    }
    const NaiveBayesModel m =
        fit_nb(x, y, {"c0", "c1", "c2", "c3"});

    const Evaluation perfect = evaluate(m, x, y);
    CHECK(perfect.accuracy == doctest::Approx(1.0));
    int off_diagonal = 0, total = 0;
    for (size_t r = 0; r < perfect.confusion.size(); ++r)
        for (size_t c = 0; c < perfect.confusion[r].size(); ++c) {
            total += perfect.confusion[r][c];
            if (r != c) off_diagonal += perfect.confusion[r][c];
        }
    CHECK(off_diagonal == 0);
    CHECK(total == 8);

    // Score everything far into class 0's region: balanced 4-class data -> 0.25.
    Matrix skewed = x;
    for (double& v : skewed.data) v = 0.5;
    const Evaluation quarter = evaluate(m, skewed, y);
    CHECK(quarter.accuracy == doctest::Approx(0.25));
}

TEST_CASE("empty test sets are rejected") {
    Matrix x(4, 1);
    x.at(2, 0) = 5.0;
    x.at(3, 0) = 5.0;
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"a", "b"});
    Matrix empty;
    CHECK_THROWS_AS(evaluate(m, empty, {}), Error);
}

TEST_CASE("positive rescaling never changes the argmax") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int classes = 2 + static_cast<int>(rng() % 3);
        const int features = 1 + static_cast<int>(rng() % 4);
        const int per_class = 5;
        const double scale = std::exp(6.0 * (static_cast<double>(rng() % 1000) / 1000.0 - 0.5));

        Matrix x(classes * per_class, features);
        std::vector<int> y;
        std::vector<std::string> names;
        for (int c = 0; c < classes; ++c)
            names.push_back("k" + std::to_string(c));
        int row = 0;
        for (int c = 0; c < classes; ++c)
            for (int i = 0; i < per_class; ++i, ++row) {
                y.push_back(c);
                for (int j = 0; j < features; ++j)
                    x.at(row, j) = 3.0 * c + gauss(rng);
            }

        Matrix x_test(8, features);
        for (auto& v : x_test.data)
            v = 3.0 * (static_cast<double>(rng() % 1000) / 1000.0) * classes + gauss(rng);

        Matrix xs = x;
        Matrix xs_test = x_test;
        for (double& v : xs.data) v *= scale;
        for (double& v : xs_test.data) v *= scale;

        const NaiveBayesModel base = fit_nb(x, y, names);
        const NaiveBayesModel scaled = fit_nb(xs, y, names);
        for (int i = 0; i < x_test.rows; ++i) {
            const std::span<const double> row_base(
                x_test.data.data() + static_cast<size_t>(i) * features,
                static_cast<size_t>(features));
            const std::span<const double> row_scaled(
                xs_test.data.data() + static_cast<size_t>(i) * features,
                static_cast<size_t>(features));
            CHECK(predict(base, row_base).label == predict(scaled, row_scaled).label);
        }
    }
}

TEST_CASE("accuracy approaches the Bayes rate on synthetic Gaussians") {
    std::mt19937_64 rng(123);
    const int n = 10'000;
    Matrix x(n, 1), x_test(n, 1);
    std::vector<int> y, y_test;
    for (int i = 0; i < n; ++i) {
        const int c = static_cast<int>(rng() % 2);
        y.push_back(c);
        x.at(i, 0) = (c == 0 ? -1.0 : 1.0) + gauss(rng);
        const int ct = static_cast<int>(rng() % 2);
        y_test.push_back(ct);
        x_test.at(i, 0) = (ct == 0 ? -1.0 : 1.0) + gauss(rng);
    }
    const NaiveBayesModel m = fit_nb(x, y, {"neg", "pos"});
    const Evaluation ev = evaluate(m, x_test, y_test);
    // Bayes rate for unit Gaussians at +-1 is Phi(1) ~ 0.8413.
    CHECK(std::abs(ev.accuracy - 0.8413) <= 0.03);
}

TEST_CASE("model text format round-trips exactly") {
    Matrix x(4, 2);
    x.at(0, 0) = 0.25;
    x.at(1, 0) = 0.5;
    x.at(2, 1) = 1.0 / 3.0;
    x.at(3, 1) = 2.0 / 7.0;
    const NaiveBayesModel m = fit_nb(x, {0, 0, 1, 1}, {"a", "b"});

    std::stringstream buf;
    save_nb(m, buf);
    const NaiveBayesModel back = load_nb(buf);
    CHECK(back.class_names == m.class_names);
    CHECK(back.priors == m.priors);
    CHECK(back.means.data == m.means.data);
    CHECK(back.variances.data == m.variances.data);
}
