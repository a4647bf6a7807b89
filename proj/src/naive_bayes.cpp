#include "texfract/naive_bayes.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "texfract/text_io.hpp"

namespace texfract {

NaiveBayesModel fit_nb(const Matrix& x, const std::vector<int>& y,
                       const std::vector<std::string>& class_names) {
    const int n = x.rows;
    const int p = x.cols;
    const int n_classes = static_cast<int>(class_names.size());
    if (n_classes < 2)
        fail(ErrorCode::InvalidArgument, "fit_nb: need at least 2 classes");
    if (static_cast<size_t>(n) != y.size())
        fail(ErrorCode::DimensionMismatch, "fit_nb: label count does not match rows");

    std::vector<int> counts(n_classes, 0);
    for (int label : y) {
        if (label < 0 || label >= n_classes)
            fail(ErrorCode::InvalidArgument, "fit_nb: label out of range");
        ++counts[label];
    }
    for (int c = 0; c < n_classes; ++c)
        if (counts[c] < 2)
            fail(ErrorCode::InvalidArgument,
                 "fit_nb: class needs at least 2 samples: " + class_names[c]);

    NaiveBayesModel model;
    model.class_names = class_names;
    model.priors.resize(n_classes);
    model.means = Matrix(n_classes, p);
    model.variances = Matrix(n_classes, p);

    for (int c = 0; c < n_classes; ++c)
        model.priors[c] = static_cast<double>(counts[c]) / n;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j)
            model.means.at(y[i], j) += x.at(i, j);
    for (int c = 0; c < n_classes; ++c)
        for (int j = 0; j < p; ++j)
            model.means.at(c, j) /= counts[c];

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            const double d = x.at(i, j) - model.means.at(y[i], j);
            model.variances.at(y[i], j) += d * d;
        }
    for (int c = 0; c < n_classes; ++c)
        for (int j = 0; j < p; ++j)
            model.variances.at(c, j) /= counts[c] - 1;

    // Floor follows the overall spread of each feature so constant features
    // still yield finite log densities.
    for (int j = 0; j < p; ++j) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i)
            mean += x.at(i, j);
        mean /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = x.at(i, j) - mean;
            var += d * d;
        }
        var /= n - 1;
        const double floor = 1e-9 * (var + 1e-12);
        for (int c = 0; c < n_classes; ++c)
            if (model.variances.at(c, j) < floor)
                model.variances.at(c, j) = floor;
    }
    return model;
}

Prediction predict(const NaiveBayesModel& model, std::span<const double> features) {
    const int p = model.feature_count();
    if (static_cast<int>(features.size()) != p)
        fail(ErrorCode::DimensionMismatch, "predict: feature length mismatch");

    constexpr double kLog2Pi = 1.8378770664093453; // ln(2*pi)
    Prediction out;
    out.log_posteriors.resize(model.class_count());
    for (int c = 0; c < model.class_count(); ++c) {
        double lp = std::log(model.priors[c]);
        for (int j = 0; j < p; ++j) {
            const double var = model.variances.at(c, j);
            const double d = features[j] - model.means.at(c, j);
            lp += -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
        }
        out.log_posteriors[c] = lp;
    }
    out.label = 0;
    for (int c = 1; c < model.class_count(); ++c)
        if (out.log_posteriors[c] > out.log_posteriors[out.label])
            out.label = c;
    return out;
}

Evaluation evaluate(const NaiveBayesModel& model, const Matrix& x_test,
                    const std::vector<int>& y_test) {
    if (x_test.rows < 1)
        fail(ErrorCode::InvalidArgument, "evaluate: empty test set");
    if (static_cast<size_t>(x_test.rows) != y_test.size())
        fail(ErrorCode::DimensionMismatch, "evaluate: label count does not match rows");

    Evaluation ev;
    ev.confusion.assign(model.class_count(), std::vector<int>(model.class_count(), 0));
    int correct = 0;
    for (int i = 0; i < x_test.rows; ++i) {
        const std::span<const double> row(x_test.data.data() +
                                              static_cast<size_t>(i) * x_test.cols,
                                          static_cast<size_t>(x_test.cols));
        const Prediction pred = predict(model, row);
        ++ev.confusion[y_test[i]][pred.label];
        if (pred.label == y_test[i])
            ++correct;
    }
    ev.accuracy = static_cast<double>(correct) / x_test.rows;
    return ev;
}

void save_nb(const NaiveBayesModel& model, std::ostream& out) {
    out << "naive_bayes,1\n";
    out << "shape," << model.class_count() << "," << model.feature_count() << "\n";
    out << "classes";
    for (const auto& name : model.class_names)
        out << "," << name;
    out << "\n";
    out << "priors";
    for (double v : model.priors)
        out << "," << fmt_double(v);
    out << "\n";
    for (int c = 0; c < model.class_count(); ++c) {
        out << "mean";
        for (int j = 0; j < model.feature_count(); ++j)
            out << "," << fmt_double(model.means.at(c, j));
        out << "\n";
        out << "variance";
        for (int j = 0; j < model.feature_count(); ++j)
            out << "," << fmt_double(model.variances.at(c, j));
        out << "\n";
    }
}

NaiveBayesModel load_nb(std::istream& in) {
    auto next_line = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line))
            fail(ErrorCode::CorruptData, std::string("nb file: missing ") + what);
        return split_csv(line);
    };

    auto header = next_line("header");
    if (header.size() != 2 || header[0] != "naive_bayes" || header[1] != "1")
        fail(ErrorCode::UnsupportedFormat, "nb file: bad header");

    auto shape = next_line("shape");
    if (shape.size() != 3 || shape[0] != "shape")
        fail(ErrorCode::CorruptData, "nb file: bad shape row");
    const int n_classes = std::stoi(shape[1]);
    const int p = std::stoi(shape[2]);
    if (n_classes < 2 || p < 1)
        fail(ErrorCode::CorruptData, "nb file: bad shape");

    NaiveBayesModel model;
    auto classes = next_line("classes");
    if (classes.size() != static_cast<size_t>(n_classes) + 1 || classes[0] != "classes")
        fail(ErrorCode::CorruptData, "nb file: bad class row");
    model.class_names.assign(classes.begin() + 1, classes.end());

    auto priors = next_line("priors");
    if (priors.size() != static_cast<size_t>(n_classes) + 1 || priors[0] != "priors")
        fail(ErrorCode::CorruptData, "nb file: bad prior row");
    for (int c = 0; c < n_classes; ++c)
        model.priors.push_back(std::stod(priors[c + 1]));

    model.means = Matrix(n_classes, p);
    model.variances = Matrix(n_classes, p);
    for (int c = 0; c < n_classes; ++c) {
        auto mean_row = next_line("mean");
        auto var_row = next_line("variance");
        if (mean_row.size() != static_cast<size_t>(p) + 1 || mean_row[0] != "mean" ||
            var_row.size() != static_cast<size_t>(p) + 1 || var_row[0] != "variance")
            fail(ErrorCode::CorruptData, "nb file: bad class parameter rows");
        for (int j = 0; j < p; ++j) {
            model.means.at(c, j) = std::stod(mean_row[j + 1]);
            model.variances.at(c, j) = std::stod(var_row[j + 1]);
        }
    }
    return model;
}

} // namespace texfract
